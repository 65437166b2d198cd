#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "tentlab/orlicz.hpp"

using namespace tentlab;

namespace {
const double kE4 = 54.598150033144236;  // e^4, log shift of the standard fixture

OrliczFunction standard_power_log() {
  return OrliczFunction::power_log(0.5, 1.0, kE4);
}
}  // namespace

TEST_CASE("power family evaluation") {
  CHECK(OrliczFunction::power(1.0).eval(3.0) == doctest::Approx(3.0).epsilon(1e-14));
  // frozen oracle: 2^{0.7} by high-precision exponentiation
  CHECK(OrliczFunction::power(0.7).eval(2.0) ==
        doctest::Approx(1.6245047927124710).epsilon(1e-13));
  CHECK(OrliczFunction::power(0.5).eval(1e-12) < 1e-5);
  CHECK_THROWS_AS(OrliczFunction::power(0.5).eval(0.0), std::domain_error);
  CHECK_THROWS_AS(OrliczFunction::power(1.5), std::invalid_argument);
}

TEST_CASE("power_log tends to zero at the origin") {
  auto w = standard_power_log();
  CHECK(w.eval(1e-14) < 1e-5);
  CHECK(w.eval(1.0) == doctest::Approx(std::log(kE4 + 1.0)).epsilon(1e-13));
}

TEST_CASE("inverse by monotone bisection") {
  CHECK(OrliczFunction::power(1.0).inverse(8.0) == doctest::Approx(8.0).epsilon(1e-12));
  CHECK(OrliczFunction::power(0.5).inverse(2.0) == doctest::Approx(4.0).epsilon(1e-12));
  // frozen oracle: unique root of sqrt(t) ln(e^4 + t) = 1
  auto w = standard_power_log();
  CHECK(w.inverse(1.0) == doctest::Approx(0.062464283462026197).epsilon(1e-10));
  CHECK_THROWS_AS(w.inverse(1e200), std::range_error);
}

TEST_CASE("companion function rho") {
  // omega = t^p gives rho(t) = t^{1/p - 1}
  for (double p : {0.4, 0.7, 1.0}) {
    auto w = OrliczFunction::power(p);
    for (double t : {0.1, 1.0, 4.0, 37.0})
      CHECK(rho(w, t) == doctest::Approx(std::pow(t, 1.0 / p - 1.0)).epsilon(1e-10));
  }
  CHECK(rho(OrliczFunction::power(0.5), 4.0) == doctest::Approx(4.0).epsilon(1e-10));
  // defining identity rho(t) * omega^{-1}(1/t) * t = 1
  auto w = standard_power_log();
  for (double t : {0.02, 0.5, 1.0, 9.0, 400.0})
    CHECK(rho(w, t) * w.inverse(1.0 / t) * t == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("type index estimation") {
  auto rep = estimate_type_indices(OrliczFunction::power(0.6));
  CHECK(rep.p_strict_lower == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(rep.p_plus == doctest::Approx(0.6).epsilon(1e-6));
  CHECK(rep.consistent);

  auto rep1 = estimate_type_indices(OrliczFunction::power(1.0));
  CHECK(rep1.p_strict_lower == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep1.p_minus == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(rep1.p_plus == doctest::Approx(1.0).epsilon(1e-6));

  auto repl = estimate_type_indices(standard_power_log());
  CHECK(std::abs(repl.p_strict_lower - 0.5) < 0.02);
  CHECK(std::abs(repl.p_plus - 0.5) < 0.02);
}

TEST_CASE("index duality between omega and rho") {
  // rho inherits type (1/p - 1, 1/p - 1) from omega = t^p
  for (double p : {0.5, 0.8}) {
    auto w = OrliczFunction::power(p);
    auto rep = estimate_type_indices([&](double t) { return rho(w, t); },
                                     SampleSpec{1e-5, 1e5, 48});
    CHECK(std::abs(rep.p_minus - (1.0 / p - 1.0)) < 0.05);
    CHECK(std::abs(rep.p_plus - (1.0 / p - 1.0)) < 0.05);
  }
}

TEST_CASE("luxemburg norm") {
  auto w = OrliczFunction::power(0.7);
  std::vector<double> zeros(5, 0.0), wt(5, 0.2);
  CHECK(luxemburg_norm(zeros, wt, w) == 0.0);

  // power family: closed form (sum w v^p)^{1/p}
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> vals(40), wts(40, 1.0 / 40);
  for (auto& v : vals) v = u(rng);
  double lp = 0.0;
  for (size_t i = 0; i < vals.size(); ++i) lp += wts[i] * std::pow(vals[i], 0.7);
  lp = std::pow(lp, 1.0 / 0.7);
  CHECK(luxemburg_norm(vals, wts, w) == doctest::Approx(lp).epsilon(1e-12));

  // homogeneity and monotonicity
  std::vector<double> scaled(vals);
  for (auto& v : scaled) v *= 3.5;
  CHECK(luxemburg_norm(scaled, wts, w) ==
        doctest::Approx(3.5 * luxemburg_norm(vals, wts, w)).epsilon(1e-10));
  std::vector<double> dominated(vals);
  for (auto& v : dominated) v *= 0.9;
  CHECK(luxemburg_norm(dominated, wts, w) <= luxemburg_norm(vals, wts, w));

  // frozen oracle: single cell value 3, weight 1/2, power_log fixture
  std::vector<double> v1{3.0}, m1{0.5};
  CHECK(luxemburg_norm(v1, m1, standard_power_log()) ==
        doctest::Approx(12.027364110788687).epsilon(1e-9));
}

TEST_CASE("concavity and type certificate") {
  CHECK(verify_assumption_a(OrliczFunction::power(0.5)).pass());
  CHECK(verify_assumption_a(OrliczFunction::power(1.0)).pass());
  CHECK(verify_assumption_a(standard_power_log()).pass());

  // omega(t) = t^2 realized through its inverse sqrt: concavity must fail
  auto sq = OrliczFunction::inverse_of(
      [](double t) { return std::sqrt(t); }, 2.0, 2.0);
  CHECK(sq.eval(3.0) == doctest::Approx(9.0).epsilon(1e-10));
  auto rep = verify_assumption_a(sq, SampleSpec{1e-4, 1e4, 48});
  CHECK_FALSE(rep.concave.pass);
}

TEST_CASE("index-shift transform") {
  // power source maps to the pure power of the target index
  auto out = assumption_b_transform(OrliczFunction::power(0.5), 0.8);
  CHECK(out.omega_tilde.family() == OmegaFamily::power);
  CHECK(out.omega_tilde.p() == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(out.predicted_pw == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(out.predicted_pw_plus == doctest::Approx(0.8).epsilon(1e-12));

  // q = p: identity transform
  auto idt = assumption_b_transform(OrliczFunction::power(0.6), 0.6);
  for (double t : {0.3, 1.0, 7.0})
    CHECK(idt.omega_tilde.eval(t) == doctest::Approx(std::pow(t, 0.6)).epsilon(1e-12));

  // omega = t^{1/2}, q = 1: v(t) = t, so the transform is the identity map
  auto lin = assumption_b_transform(OrliczFunction::power(0.5), 1.0);
  for (double t : {0.25, 1.0, 16.0})
    CHECK(lin.omega_tilde.eval(t) == doctest::Approx(t).epsilon(1e-10));

  // the generic numerically-inverted path agrees with the closed form
  auto w = OrliczFunction::power(0.5);
  auto v = [&](double t) { return w.inverse(t) * std::pow(t, 1.0 / 0.8 - 2.0); };
  auto wt = OrliczFunction::inverse_of(v, 0.8, 0.8);
  for (double t : {0.2, 1.0, 5.0, 120.0})
    CHECK(wt.eval(t) == doctest::Approx(std::pow(t, 0.8)).epsilon(1e-8));

  CHECK_THROWS_AS(assumption_b_transform(OrliczFunction::power(0.5), 0.3),
                  std::invalid_argument);
  CHECK_THROWS_AS(assumption_b_transform(OrliczFunction::power(0.5), 1.2),
                  std::invalid_argument);

  // companion of the transform: rho_tilde(t) = rho(t) t^{-1/p + 1/q}
  for (double t : {0.5, 2.0, 50.0})
    CHECK(rho_tilde(w, 0.8, t) ==
          doctest::Approx(rho(w, t) * std::pow(t, -2.0 + 1.25)).epsilon(1e-10));
}
