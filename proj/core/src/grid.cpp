#include "tentlab/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace tentlab {

Grid::Grid(int dim_, int n_, double length_)
    : dim(dim_), n_per_axis(n_), length(length_) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("dim must be 1 or 2");
  if (n_per_axis < 8) throw std::invalid_argument("need N >= 8");
  if (size() > 8192) throw std::invalid_argument("N^dim exceeds 8192");
  if (length <= 0.0) throw std::invalid_argument("length must be positive");
}

double Grid::cell_measure() const {
  double m = h();
  return dim == 1 ? m : m * m;
}

std::array<int, 2> Grid::coords(int idx) const {
  if (dim == 1) return {idx, 0};
  return {idx / n_per_axis, idx % n_per_axis};
}

int Grid::index(int ix, int iy) const {
  auto wrap = [this](int v) {
    v %= n_per_axis;
    return v < 0 ? v + n_per_axis : v;
  };
  if (dim == 1) return wrap(ix);
  return wrap(ix) * n_per_axis + wrap(iy);
}

std::array<double, 2> Grid::center(int idx) const {
  const auto c = coords(idx);
  return {(c[0] + 0.5) * h(), dim == 2 ? (c[1] + 0.5) * h() : 0.0};
}

double Grid::wrap_delta(double d) const {
  d = std::fmod(d, length);
  if (d > 0.5 * length) d -= length;
  if (d < -0.5 * length) d += length;
  return d;
}

double Grid::torus_dist(const std::array<double, 2>& a,
                        const std::array<double, 2>& b) const {
  const double dx = wrap_delta(a[0] - b[0]);
  if (dim == 1) return std::abs(dx);
  const double dy = wrap_delta(a[1] - b[1]);
  return std::hypot(dx, dy);
}

double Grid::torus_dist_cells(int i, int j) const {
  return torus_dist(center(i), center(j));
}

std::vector<int> cells_in_ball(const Grid& g, const Ball& b) {
  std::vector<int> out;
  for (int i = 0; i < g.size(); ++i)
    if (g.torus_dist(g.center(i), b.center) < b.radius) out.push_back(i);
  return out;
}

CellMask ball_mask(const Grid& g, const Ball& b) {
  CellMask m(g.size(), 0);
  for (int i : cells_in_ball(g, b)) m[i] = 1;
  return m;
}

double ball_measure(const Grid& g, const Ball& b) {
  return static_cast<double>(cells_in_ball(g, b).size()) * g.cell_measure();
}

double dist_to_set(const Grid& g, int idx, const CellMask& mask) {
  double best = std::numeric_limits<double>::infinity();
  const auto c = g.center(idx);
  for (int j = 0; j < g.size(); ++j)
    if (mask[j]) best = std::min(best, g.torus_dist(c, g.center(j)));
  return best;
}

double min_set_distance(const Grid& g, const std::vector<int>& a,
                        const std::vector<int>& b) {
  double best = std::numeric_limits<double>::infinity();
  for (int i : a)
    for (int j : b) best = std::min(best, g.torus_dist_cells(i, j));
  return best;
}

int mask_count(const CellMask& m) {
  int c = 0;
  for (auto v : m) c += (v != 0);
  return c;
}

}  // namespace tentlab
