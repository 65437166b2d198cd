#include "tentlab/bmo.hpp"

#include <cmath>
#include <stdexcept>

namespace tentlab {

std::vector<double> dyadic_radius_ladder(const Grid& g) {
  std::vector<double> radii;
  for (double r = 2.0 * g.h(); r <= 0.5 * g.length + 1e-12; r *= 2.0)
    radii.push_back(r);
  return radii;
}

namespace {

BmoReport oscillation_sup(const EllipticOperator& op, const Vec& f,
                          const OrliczFunction& w, double q, int M,
                          std::vector<double> radii, BmoVariant variant) {
  if (q <= 0.0) throw std::invalid_argument("bmo norm needs q > 0");
  if (M < 1) throw std::invalid_argument("bmo norm needs M >= 1");
  const Grid& g = op.grid();
  if (radii.empty()) radii = dyadic_radius_ladder(g);

  BmoReport rep;
  rep.variant = variant;
  rep.q = q;
  rep.M = M;
  for (double r : radii) {
    const double r2 = r * r;
    const Vec osc = op.apply_function(
        [&](Cplx mu) {
          const Cplx factor = variant == BmoVariant::semigroup
                                  ? 1.0 - std::exp(-r2 * mu)
                                  : 1.0 - 1.0 / (1.0 + r2 * mu);
          return std::pow(factor, M);
        },
        f);
    // radius is shared, so one ball stencil serves every center
    const auto cells = cells_in_ball(g, {g.center(0), r});
    const double measure = cells.size() * g.cell_measure();
    const double rho_m = rho(w, measure);
    const auto c0 = g.coords(0);
    for (int c = 0; c < g.size(); ++c) {
      const auto cc = g.coords(c);
      double s = 0.0;
      for (int cell : cells) {
        const auto d = g.coords(cell);
        s += std::pow(
            std::abs(osc(g.index(cc[0] + d[0] - c0[0], cc[1] + d[1] - c0[1]))),
            q);
      }
      const double value =
          std::pow(s * g.cell_measure() / measure, 1.0 / q) / rho_m;
      rep.rows.push_back({c, r, value});
      rep.norm = std::max(rep.norm, value);
    }
  }
  return rep;
}

}  // namespace

BmoReport bmo_norm(const EllipticOperator& op, const Vec& f,
                   const OrliczFunction& w, double q, int M,
                   const std::vector<double>& radii) {
  return oscillation_sup(op, f, w, q, M, radii, BmoVariant::semigroup);
}

BmoReport bmo_resolvent_norm(const EllipticOperator& op, const Vec& f,
                             const OrliczFunction& w, double q, int M,
                             const std::vector<double>& radii) {
  return oscillation_sup(op, f, w, q, M, radii, BmoVariant::resolvent);
}

CarlesonReport carleson_norm(const EllipticOperator& op, const TimeGrid& tg,
                             const Vec& f, const OrliczFunction& w, int M,
                             const std::vector<double>& radii_in) {
  if (M < 1) throw std::invalid_argument("carleson norm needs M >= 1");
  const Grid& g = op.grid();
  std::vector<double> radii = radii_in;
  if (radii.empty()) radii = dyadic_radius_ladder(g);

  // square-function density |(t^2 L)^M e^{-t^2 L} f|^2, one slice per level
  Eigen::MatrixXd density(tg.size(), g.size());
  for (int j = 0; j < tg.size(); ++j) {
    const Vec u = op.heat_power_apply(tg.levels[j], M, f);
    for (int i = 0; i < g.size(); ++i) density(j, i) = std::norm(u(i));
  }

  CarlesonReport rep;
  rep.M = M;
  for (double r : radii) {
    // tent over a radius-r ball: level j keeps cells with dist to the ball
    // complement at least t_j; same stencil for every center
    const Ball ref{g.center(0), r};
    const auto masks = tent_masks(g, tg, ref);
    const auto c0 = g.coords(0);
    const double measure = ball_measure(g, ref);
    const double denom = measure * std::pow(rho(w, measure), 2);
    for (int c = 0; c < g.size(); ++c) {
      const auto cc = g.coords(c);
      double energy = 0.0;
      for (int j = 0; j < tg.size(); ++j)
        for (int i = 0; i < g.size(); ++i)
          if (masks[j][i]) {
            const auto d = g.coords(i);
            energy += density(j, g.index(cc[0] + d[0] - c0[0],
                                         cc[1] + d[1] - c0[1])) *
                      g.cell_measure() * tg.dlog;
          }
      const double value = energy / denom;
      rep.rows.push_back({c, r, energy, value});
      rep.norm = std::max(rep.norm, value);
    }
  }
  return rep;
}

double pairing_normalizer(int M) {
  if (M < 1) throw std::invalid_argument("pairing normalizer needs M >= 1");
  double fact = 1.0;
  for (int i = 2; i <= M; ++i) fact *= i;
  return std::ldexp(1.0, M + 2) / fact;
}

PairingResult duality_pairing(const EllipticOperator& op, const TimeGrid& tg,
                              const Vec& f_bmo, const Vec& g, int M) {
  const Grid& grid = op.grid();
  const EllipticOperator& star = op.adjoint();
  PairingResult out;
  for (int j = 0; j < tg.size(); ++j) {
    const double t = tg.levels[j];
    const Vec uf = star.heat_power_apply(t, M, f_bmo);
    const Vec ug = op.heat_power_apply(t, 1, g);
    Cplx acc = 0.0;
    for (int i = 0; i < grid.size(); ++i) acc += uf(i) * std::conj(ug(i));
    out.quadrature += acc * grid.cell_measure() * tg.dlog;
  }
  out.quadrature *= pairing_normalizer(M);
  for (int i = 0; i < grid.size(); ++i)
    out.direct += f_bmo(i) * std::conj(g(i)) * grid.cell_measure();
  return out;
}

JohnNirenbergReport john_nirenberg_probe(const EllipticOperator& op,
                                         const Vec& f, const OrliczFunction& w,
                                         int M,
                                         const std::vector<double>& q_list) {
  JohnNirenbergReport rep;
  double nmax = 0.0;
  for (double q : q_list) {
    rep.norms.emplace_back(q, bmo_norm(op, f, w, q, M).norm);
    nmax = std::max(nmax, rep.norms.back().second);
  }
  // roundoff-level norms (e.g. constants) report ratio 1 by convention
  const double floor = 1e-12 * std::max(1.0, f.cwiseAbs().maxCoeff());
  if (nmax <= floor) return rep;
  for (const auto& [qa, na] : rep.norms)
    for (const auto& [qb, nb] : rep.norms)
      if (nb > 0.0) rep.max_ratio = std::max(rep.max_ratio, na / nb);
  return rep;
}

}  // namespace tentlab
