#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "tentlab/tent.hpp"

using namespace tentlab;

namespace {

TentField random_tent_field(const Grid& g, const TimeGrid& tg,
                            std::uint64_t seed, double sparsity = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  TentField F(g, tg);
  for (int j = 0; j < F.levels(); ++j)
    for (int i = 0; i < g.size(); ++i)
      if (u(rng) < sparsity) F.at(j, i) = Cplx(gauss(rng), gauss(rng));
  return F;
}

}  // namespace

TEST_CASE("time grid construction") {
  Grid g(1, 32);
  auto tg = TimeGrid::log_uniform(g, 16);
  CHECK(tg.size() == 16);
  CHECK(tg.t_min == doctest::Approx(g.h() / 4).epsilon(1e-14));
  CHECK(tg.t_max == doctest::Approx(1.0).epsilon(1e-14));
  for (int j = 0; j + 1 < tg.size(); ++j) {
    CHECK(tg.levels[j] < tg.levels[j + 1]);
    CHECK(tg.levels[j + 1] / tg.levels[j] ==
          doctest::Approx(std::exp(tg.dlog)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(TimeGrid::log_uniform(g, 8), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::log_uniform(g, 16, g.h() / 8), std::invalid_argument);
  CHECK_THROWS_AS(TimeGrid::log_uniform(g, 16, -1.0, 2.0), std::invalid_argument);
}

TEST_CASE("area function basics") {
  Grid g(1, 32);
  auto tg = TimeGrid::log_uniform(g, 16);

  TentField zero(g, tg);
  CHECK(area_function(zero, 1.0).maxCoeff() == 0.0);

  // single occupied cell: A is the weight on the ball |x - y0| < t_j
  const int j = 10, y0 = 7;
  const double v = 2.3;
  TentField F(g, tg);
  F.at(j, y0) = Cplx(v, 0.0);
  const Eigen::VectorXd A = area_function(F, 1.0);
  const double wj = g.cell_measure() * tg.dlog / tg.levels[j];
  for (int x = 0; x < g.size(); ++x) {
    if (g.torus_dist_cells(x, y0) < tg.levels[j])
      CHECK(A(x) == doctest::Approx(v * std::sqrt(wj)).epsilon(1e-12));
    else
      CHECK(A(x) == 0.0);
  }

  // homogeneity
  TentField F2 = F;
  F2 *= Cplx(2.0, 0.0);
  const Eigen::VectorXd A2 = area_function(F2, 1.0);
  for (int x = 0; x < g.size(); ++x)
    CHECK(A2(x) == doctest::Approx(2.0 * A(x)).epsilon(1e-13));
}

TEST_CASE("area function is monotone in aperture and additive on disjoint supports") {
  Grid g(2, 8);
  auto tg = TimeGrid::log_uniform(g, 16);
  const TentField F = random_tent_field(g, tg, 3);
  const Eigen::VectorXd A1 = area_function(F, 0.7);
  const Eigen::VectorXd A2 = area_function(F, 1.4);
  for (int x = 0; x < g.size(); ++x) CHECK(A1(x) <= A2(x) + 1e-14);

  // split F into even / odd cells: disjoint supports
  TentField Fe(g, tg), Fo(g, tg);
  for (int j = 0; j < F.levels(); ++j)
    for (int i = 0; i < g.size(); ++i)
      (i % 2 ? Fo : Fe).at(j, i) = F.at(j, i);
  const Eigen::VectorXd Ae = area_function(Fe, 1.0);
  const Eigen::VectorXd Ao = area_function(Fo, 1.0);
  const Eigen::VectorXd A = area_function(F, 1.0);
  for (int x = 0; x < g.size(); ++x)
    CHECK(A(x) * A(x) ==
          doctest::Approx(Ae(x) * Ae(x) + Ao(x) * Ao(x)).epsilon(1e-12));
}

TEST_CASE("tent norms") {
  Grid g(1, 32);
  auto tg = TimeGrid::log_uniform(g, 20);

  TentField zero(g, tg);
  CHECK(t2p_norm(zero, 1.5) == 0.0);
  CHECK(t_omega_norm(zero, OrliczFunction::power(0.8)) == 0.0);

  const TentField F = random_tent_field(g, tg, 8);
  TentField Fs = F;
  Fs *= Cplx(0.0, 3.0);  // modulus scaling by 3
  CHECK(t2p_norm(Fs, 1.3) == doctest::Approx(3.0 * t2p_norm(F, 1.3)).epsilon(1e-10));

  // single-cell closed form
  TentField S(g, tg);
  S.at(5, 2) = Cplx(1.7, 0.0);
  const double wj = g.cell_measure() * tg.dlog / tg.levels[5];
  int count = 0;
  for (int x = 0; x < g.size(); ++x)
    if (g.torus_dist_cells(x, 2) < tg.levels[5]) ++count;
  const double expect = 1.7 * std::sqrt(wj) * std::pow(count * g.h(), 1.0 / 1.2);
  CHECK(t2p_norm(S, 1.2) == doctest::Approx(expect).epsilon(1e-10));

  // Orlicz norm with power omega collapses to the T_2^p norm
  for (double p : {0.6, 1.0}) {
    CHECK(t_omega_norm(F, OrliczFunction::power(p)) ==
          doctest::Approx(t2p_norm(F, p)).epsilon(1e-9));
  }

  // power-log omega: compare against an independent scalar bisection
  const auto w = OrliczFunction::power_log(0.5, 1.0, 54.598150033144236);
  const Eigen::VectorXd A = area_function(F, 1.0);
  auto phi = [&](double lam) {
    double s = 0.0;
    for (int i = 0; i < A.size(); ++i)
      if (A(i) > 0.0) s += g.cell_measure() * w.eval(A(i) / lam);
    return s;
  };
  double lo = 1e-9, hi = 1e9;
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    (phi(mid) <= 1.0 ? hi : lo) = mid;
  }
  CHECK(t_omega_norm(F, w) == doctest::Approx(hi).epsilon(1e-9));
}

TEST_CASE("gamma density set") {
  Grid g(1, 64);
  CellMask all(g.size(), 1);
  CHECK(gamma_density_set(g, all, 0.75) == all);

  CellMask empty(g.size(), 0);
  CHECK(mask_count(gamma_density_set(g, empty, 0.5)) == 0);

  // tiny gamma keeps every cell of the mask
  CellMask half(g.size(), 0);
  for (int i = 0; i < 32; ++i) half[i] = 1;
  const auto keep = gamma_density_set(g, half, 1e-3);
  CHECK(keep == half);

  // gamma = 0.9 erodes the half-interval from both ends; subset of the mask
  const auto eroded = gamma_density_set(g, half, 0.9);
  CHECK(mask_count(eroded) > 0);
  CHECK(mask_count(eroded) < mask_count(half));
  for (int i = 0; i < g.size(); ++i)
    if (eroded[i]) CHECK(half[i]);

  // brute-force oracle over the same radius ladder (r = k*h, k <= N/4)
  CellMask oracle(g.size(), 0);
  for (int x = 0; x < g.size(); ++x) {
    if (!half[x]) continue;
    double worst = 1.0;
    for (int k = 1; k <= 16; ++k) {
      int in_ball = 0, in_mask = 0;
      for (int y = 0; y < g.size(); ++y)
        if (g.torus_dist_cells(x, y) < k * g.h()) {
          ++in_ball;
          in_mask += half[y];
        }
      worst = std::min(worst, static_cast<double>(in_mask) / in_ball);
    }
    oracle[x] = worst >= 0.9;
  }
  CHECK(eroded == oracle);

  // dilation contains the set
  CellMask spot(g.size(), 0);
  spot[10] = spot[11] = 1;
  const auto grown = expanded_set(g, spot, 0.75);
  CHECK(grown[10]);
  CHECK(grown[11]);
  CHECK(mask_count(grown) >= 2);
}

TEST_CASE("aperture ratio probe") {
  Grid g(1, 32);
  auto tg = TimeGrid::log_uniform(g, 16);
  const auto w = OrliczFunction::power(0.7);

  TentField zero(g, tg);
  auto z = aperture_ratio_probe(zero, 0.5, 1.0, w);
  CHECK(z.integral_eta == 0.0);
  CHECK(z.integral_nu == 0.0);
  CHECK(z.ratio == 1.0);

  const TentField F = random_tent_field(g, tg, 15);
  auto same = aperture_ratio_probe(F, 1.0, 1.0, w);
  CHECK(same.ratio == doctest::Approx(1.0).epsilon(1e-12));

  auto wide = aperture_ratio_probe(F, 1.0, 2.0, w);
  CHECK(wide.ratio <= 1.0 + 1e-12);  // pointwise cone nesting
  CHECK(wide.ratio > 0.0);
}

TEST_CASE("tents over open sets") {
  Grid g(1, 32);
  auto tg = TimeGrid::log_uniform(g, 16);

  // tent over the full grid is everything
  const auto full = tent_masks(g, tg, CellMask(g.size(), 1));
  for (const auto& m : full) CHECK(mask_count(m) == g.size());

  // tent over a ball shrinks as t grows and vanishes for t > radius
  Ball b{{0.5, 0.0}, 0.2};
  const auto masks = tent_masks(g, tg, b);
  for (int j = 0; j + 1 < tg.size(); ++j)
    CHECK(mask_count(masks[j + 1]) <= mask_count(masks[j]));
  CHECK(mask_count(masks.back()) == 0);  // t_max = 1 > radius

  // supp F inside the tent forces supp A inside the ball
  const TentField R = random_tent_field(g, tg, 99);
  const TentField F = restrict_to(R, masks);
  CHECK(supported_in(F, masks));
  const Eigen::VectorXd A = area_function(F, 1.0);
  const auto bm = ball_mask(g, b);
  for (int x = 0; x < g.size(); ++x)
    if (!bm[x]) CHECK(A(x) == 0.0);
}
