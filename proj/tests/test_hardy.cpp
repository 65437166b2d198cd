#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "tentlab/hardy.hpp"

using namespace tentlab;

namespace {

Vec random_mean_zero(const EllipticOperator& op, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Vec f(op.size());
  for (int i = 0; i < op.size(); ++i) f(i) = Cplx(gauss(rng), gauss(rng));
  return op.project_out_kernel(f);
}

Vec fourier_mode(const Grid& g, int k) {
  Vec f(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double ph = 2.0 * std::numbers::pi * k * (i + 0.5) / g.n_per_axis;
    f(i) = Cplx(std::cos(ph), std::sin(ph));
  }
  return f;
}

}  // namespace

TEST_CASE("hardy norm basics") {
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  auto tg = TimeGrid::log_uniform(g, 16);
  const auto w = OrliczFunction::power(0.8);

  CHECK(hardy_norm(op, tg, Vec::Zero(g.size()), w) == 0.0);

  const Vec f = random_mean_zero(op, 6);
  CHECK(hardy_norm(op, tg, Vec(Cplx(2.0, 0.0) * f), w) ==
        doctest::Approx(2.0 * hardy_norm(op, tg, f, w)).epsilon(1e-9));

  // omega(t) = t: the norm is the L1 norm of the cone square function
  const Eigen::VectorXd s =
      apply_functional(op, tg, f, FunctionalKind::heat_square());
  double l1 = 0.0;
  for (int x = 0; x < g.size(); ++x) l1 += s(x) * g.cell_measure();
  CHECK(hardy_norm(op, tg, f, OrliczFunction::power(1.0)) ==
        doctest::Approx(l1).epsilon(1e-9));

  // quasi-triangle inequality with exponent p on random pairs
  const double p = 0.8;
  const auto wp = OrliczFunction::power(p);
  for (std::uint64_t seed : {10ull, 20ull, 30ull}) {
    const Vec a = random_mean_zero(op, seed);
    const Vec b = random_mean_zero(op, seed + 1);
    const double nab = hardy_norm(op, tg, Vec(a + b), wp);
    const double na = hardy_norm(op, tg, a, wp);
    const double nb = hardy_norm(op, tg, b, wp);
    CHECK(std::pow(nab, p) <= (std::pow(na, p) + std::pow(nb, p)) * (1 + 1e-9));
  }
}

TEST_CASE("heat normalizer closed form matches quadrature") {
  CHECK(heat_normalizer(1) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(heat_normalizer(2) == doctest::Approx(32.0 / 6.0).epsilon(1e-14));
  CHECK_THROWS_AS(heat_normalizer(0), std::invalid_argument);

  // scalar oracle: c_M * int t^{2(M+2)} e^{-2t^2} dt/t = 1 on a fine ladder
  for (int M : {1, 2, 3, 4}) {
    const int K = 1 << 16;
    const double lo = std::log(1e-5), hi = std::log(20.0);
    const double dl = (hi - lo) / K;
    double acc = 0.0;
    for (int i = 0; i < K; ++i) {
      const double t = std::exp(lo + (i + 0.5) * dl);
      acc += std::pow(t, 2 * (M + 2)) * std::exp(-2.0 * t * t) * dl;
    }
    CHECK(heat_normalizer(M) * acc == doctest::Approx(1.0).epsilon(1e-8));
  }
}

TEST_CASE("synthesis operator") {
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  auto tg = TimeGrid::log_uniform(g, 64);

  CHECK(synthesis_apply(op, TentField(g, tg), 1).norm() == 0.0);

  // linearity
  std::mt19937_64 rng(3);
  std::normal_distribution<double> gauss;
  TentField F(g, tg), G(g, tg);
  for (int j = 0; j < tg.size(); ++j)
    for (int i = 0; i < g.size(); ++i) {
      F.at(j, i) = Cplx(gauss(rng), gauss(rng));
      G.at(j, i) = Cplx(gauss(rng), gauss(rng));
    }
  TentField H = F;
  H *= Cplx(2.0, 1.0);
  H += G;
  const Vec lhs = synthesis_apply(op, H, 2);
  const Vec rhs =
      Cplx(2.0, 1.0) * synthesis_apply(op, F, 2) + synthesis_apply(op, G, 2);
  CHECK((lhs - rhs).norm() <= 1e-10 * rhs.norm());

  // slices of t^2 L e^{-t^2 L} f synthesize back to f (reproducing identity)
  const Vec f = random_mean_zero(op, 7);
  const TentField S = functional_field(op, tg, f, FunctionalKind::heat_square());
  const Vec rec = synthesis_apply(op, S, 1);
  // broadband data keeps a ~7e-3 floor: modes near the grid cutoff lose the
  // part of the reproducing integral below t_min = h/4
  CHECK((f - rec).norm() / f.norm() <= 2e-2);
}

TEST_CASE("reproducing identity residual") {
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  const Vec f = fourier_mode(g, 4);

  // mid-spectrum eigenmode at a fine ladder
  auto tg128 = TimeGrid::log_uniform(g, 128);
  CHECK(calderon_residual(op, tg128, f, 1) <= 1e-3);
  CHECK(calderon_residual(op, tg128, f, 2) <= 1e-3);

  // widening the ladder cannot hurt
  auto tg16 = TimeGrid::log_uniform(g, 16);
  CHECK(calderon_residual(op, tg128, f, 2) <=
        calderon_residual(op, tg16, f, 2) + 1e-12);

  // kernel component is not reproduced
  const Vec ones = Vec::Constant(g.size(), Cplx(1.0, 0.0));
  CHECK(calderon_residual(op, tg128, ones, 1) >= 0.99);

  CHECK(calderon_residual(op, tg128, Vec::Zero(g.size()), 1) == 0.0);
}

TEST_CASE("molecular decomposition pipeline") {
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  auto tg = TimeGrid::log_uniform(g, 16);
  const auto w = OrliczFunction::power(0.7);

  auto empty = molecular_decompose(op, tg, Vec::Zero(g.size()), w);
  CHECK(empty.molecules.empty());
  CHECK(empty.lambda_value == 0.0);

  // admissibility thresholds
  CHECK_THROWS_AS(molecular_decompose(op, tg, Vec::Zero(g.size()), w, 0),
                  std::invalid_argument);
  CHECK_THROWS_AS(
      molecular_decompose(op, tg, Vec::Zero(g.size()),
                          OrliczFunction::power_log(0.5, 1.0, 54.598150033144236),
                          2, 0.0),
      std::invalid_argument);

  for (std::uint64_t seed : {2ull, 19ull}) {
    const Vec f = random_mean_zero(op, seed);
    auto dec = molecular_decompose(op, tg, f, w);
    REQUIRE(!dec.molecules.empty());

    // size-functional carry-over is exact; individual coefficients only
    // grow, by the certificate ratio absorbed out of each molecule
    const TentField F =
        functional_field(op, tg, f, FunctionalKind::heat_square());
    auto D = atomic_decompose(F, w);
    CHECK(dec.lambda_value == D.lambda_value);
    REQUIRE(dec.lambdas.size() == D.atoms.size());
    for (size_t i = 0; i < D.atoms.size(); ++i) {
      CHECK(dec.lambdas[i] >= D.atoms[i].lambda);
      CHECK(dec.lambdas[i] <= 4.0 * D.atoms[i].lambda);
    }

    // reconstruction within the combined quadrature budget (frozen: worst
    // observed 9e-3 in 1D at J=16)
    CHECK(dec.l2_residual <= 0.02);
    for (auto [p, r] : dec.lp_residuals) CHECK(r <= 0.05);

    // tails are nonincreasing and end at the quadrature floor
    REQUIRE(dec.tails.size() >= 2);
    for (size_t i = 0; i + 1 < dec.tails.size(); ++i) {
      CHECK(dec.tails[i + 1].hardy_tail <= dec.tails[i].hardy_tail + 1e-9);
      CHECK(dec.tails[i + 1].l2_tail <= dec.tails[i].l2_tail + 1e-9);
    }
    CHECK(dec.tails.back().hardy_tail <= 0.02);
  }
}

TEST_CASE("produced molecules pass their certificates") {
  // the construction absorbs the worst (q = 2, 4) certificate ratio into
  // the coefficient, so the bounds hold with room to spare
  const double slack = 0.1;
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  auto tg = TimeGrid::log_uniform(g, 16);
  for (const auto& w : {OrliczFunction::power(0.7),
                        OrliczFunction::power_log(0.5, 1.0, 54.598150033144236)}) {
    const Vec f = random_mean_zero(op, 19);
    auto dec = molecular_decompose(op, tg, f, w);
    REQUIRE(!dec.molecules.empty());
    for (size_t i = 0; i < dec.molecules.size(); ++i) {
      auto cert = verify_molecule(op, dec.molecules[i], dec.balls[i], w,
                                  {2.0, 4.0}, dec.M, dec.eps, slack);
      CHECK(cert.pass());
      CHECK(cert.worst_ratio <= 1.0 + 1e-12);
      // row table covers the full (k, j, q) range
      CHECK(static_cast<int>(cert.rows.size()) ==
            (dec.M + 1) * (cert.j_max + 1) * 2);
    }
  }
}

TEST_CASE("certificate mechanics") {
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  const auto w = OrliczFunction::power(0.8);
  const Ball B{{0.25, 0.0}, 0.1};

  // an oversized bump fails
  Vec bump = Vec::Zero(g.size());
  bump(8) = Cplx(1e4, 0.0);
  auto bad = verify_molecule(op, bump, B, w, {2.0}, 1, 1.5);
  CHECK_FALSE(bad.pass());

  // the j=0 rows integrate over the ball itself
  Vec v = Vec::Zero(g.size());
  v(8) = Cplx(3.0, 0.0);  // cell center 0.265625, inside B
  auto cert = verify_molecule(op, v, B, w, {2.0}, 0, 1.5);
  const auto& r0 = cert.rows.front();
  CHECK(r0.j == 0);
  CHECK(r0.k == 0);
  CHECK(r0.norm == doctest::Approx(3.0 * std::sqrt(g.h())).epsilon(1e-12));

  // data supported outside every annulus yields vacuous or zero rows only
  Vec far = Vec::Zero(g.size());
  auto cert2 = verify_molecule(op, far, B, w, {1.0, 2.0}, 1, 1.5);
  CHECK(cert2.worst_ratio == 0.0);
  CHECK(cert2.pass());
}

TEST_CASE("molecule norm bound probe") {
  Grid g(1, 32);
  EllipticOperator op = assemble(g, CoefficientField::identity(g));
  auto tg = TimeGrid::log_uniform(g, 16);
  const auto w = OrliczFunction::power(0.7);
  const Vec f = random_mean_zero(op, 2);
  auto dec = molecular_decompose(op, tg, f, w);
  REQUIRE(!dec.molecules.empty());

  double worst = 0.0;
  for (size_t i = 0; i < dec.molecules.size(); ++i) {
    const double r = molecule_norm_bound_probe(op, tg, dec.molecules[i],
                                               dec.balls[i], dec.lambdas[i], w);
    worst = std::max(worst, r);
    // power omega: the ratio is independent of the coefficient
    const double r2 = molecule_norm_bound_probe(
        op, tg, dec.molecules[i], dec.balls[i], 1e-3 * dec.lambdas[i], w);
    CHECK(r2 == doctest::Approx(r).epsilon(1e-9));
  }
  // frozen corpus band (max observed 1.162)
  CHECK(worst <= 1.5);
}
