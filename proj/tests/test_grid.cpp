#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "tentlab/grid.hpp"

using namespace tentlab;

TEST_CASE("grid construction and invariants") {
  Grid g(1, 64);
  CHECK(g.size() == 64);
  CHECK(g.h() == doctest::Approx(1.0 / 64).epsilon(1e-15));
  CHECK(g.cell_measure() == doctest::Approx(1.0 / 64).epsilon(1e-15));

  Grid g2(2, 16);
  CHECK(g2.size() == 256);
  CHECK(g2.cell_measure() == doctest::Approx(1.0 / 256).epsilon(1e-15));

  CHECK_THROWS_AS(Grid(3, 16), std::invalid_argument);
  CHECK_THROWS_AS(Grid(1, 4), std::invalid_argument);
  CHECK_THROWS_AS(Grid(2, 128), std::invalid_argument);  // 16384 dof
}

TEST_CASE("indexing wraps periodically") {
  Grid g(2, 8);
  CHECK(g.index(0, 0) == 0);
  CHECK(g.index(8, 0) == 0);
  CHECK(g.index(-1, 0) == g.index(7, 0));
  CHECK(g.index(3, -2) == g.index(3, 6));
  const auto c = g.coords(g.index(5, 2));
  CHECK(c[0] == 5);
  CHECK(c[1] == 2);
}

TEST_CASE("torus distance") {
  Grid g(1, 8);
  // cells 0 and 7 are adjacent across the seam
  CHECK(g.torus_dist_cells(0, 7) == doctest::Approx(g.h()).epsilon(1e-14));
  CHECK(g.torus_dist_cells(0, 4) == doctest::Approx(0.5).epsilon(1e-14));

  Grid g2(2, 8);
  CHECK(g2.torus_dist_cells(g2.index(0, 0), g2.index(7, 7)) ==
        doctest::Approx(std::sqrt(2.0) * g2.h()).epsilon(1e-13));
}

TEST_CASE("balls on the torus") {
  Grid g(1, 64);
  Ball b{{0.5, 0.0}, 0.1};
  const auto cells = cells_in_ball(g, b);
  // strict inequality: centers within (0.4, 0.6)
  for (int i : cells) {
    const double x = g.center(i)[0];
    CHECK(std::abs(x - 0.5) < 0.1);
  }
  CHECK(ball_measure(g, b) == doctest::Approx(cells.size() * g.h()).epsilon(1e-14));
  // radius 0.1 on h = 1/64 grid: about 12-13 cells
  CHECK(cells.size() >= 11);
  CHECK(cells.size() <= 14);

  // ball centered across the seam still collects both sides
  Ball seam{{0.0, 0.0}, 0.05};
  CHECK(cells_in_ball(g, seam).size() >= 5);

  Ball tiny{{0.5, 0.0}, 1e-6};
  CHECK(ball_measure(g, tiny) == 0.0);
}

TEST_CASE("distance to a cell set") {
  Grid g(1, 32);
  CellMask m(g.size(), 0);
  m[0] = 1;
  CHECK(dist_to_set(g, 0, m) == 0.0);
  CHECK(dist_to_set(g, 16, m) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(std::isinf(dist_to_set(g, 3, CellMask(g.size(), 0))));
  CHECK(mask_count(m) == 1);

  CHECK(min_set_distance(g, {0, 1}, {4, 5}) ==
        doctest::Approx(3 * g.h()).epsilon(1e-13));
}
