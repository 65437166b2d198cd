#include "tentlab/applications.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include <fmt/core.h>

namespace tentlab {

OperatorHandle identity_handle() {
  return [](const Vec& f) { return Eigen::VectorXd(f.cwiseAbs()); };
}

OperatorHandle riesz_handle(const EllipticOperator& op) {
  return [&op](const Vec& f) {
    const auto comps = op.riesz_apply(f, true);
    Eigen::VectorXd out = Eigen::VectorXd::Zero(f.size());
    for (const auto& c : comps) out += c.cwiseAbs2().real();
    return Eigen::VectorXd(out.array().sqrt());
  };
}

OperatorHandle g_function_handle(const EllipticOperator& op,
                                 const TimeGrid& tg) {
  return [&op, tg](const Vec& f) {
    return apply_functional(op, tg, f, FunctionalKind::vertical());
  };
}

OperatorHandle frac_neg_handle(const EllipticOperator& op, double gamma) {
  return [&op, gamma](const Vec& f) {
    return Eigen::VectorXd(op.frac_neg_power(gamma, f, true).cwiseAbs());
  };
}

namespace {

double lp_norm_on(const Grid& g, const Eigen::VectorXd& v,
                  const std::vector<int>& cells, double p) {
  double s = 0.0;
  for (int c : cells) s += std::pow(v(c), p);
  return std::pow(s * g.cell_measure(), 1.0 / p);
}

double lp_norm_on(const Grid& g, const Vec& v, const std::vector<int>& cells,
                  double p) {
  return lp_norm_on(g, Eigen::VectorXd(v.cwiseAbs()), cells, p);
}

}  // namespace

OperatorConditionReport offdiagonal_condition_probe(
    const EllipticOperator& op, const OperatorHandle& T, double p, int M,
    const std::vector<int>& E, const std::vector<int>& F,
    const std::vector<double>& t_list, std::uint64_t seed) {
  const Grid& g = op.grid();
  const double d = min_set_distance(g, E, F);
  if (!(d > 0.0)) throw std::invalid_argument("probe sets must be separated");

  // probe pool: cell deltas on E plus seeded random data on E
  std::vector<Vec> probes;
  for (int c : E) {
    Vec f = Vec::Zero(g.size());
    f(c) = Cplx(1.0, 0.0);
    probes.push_back(std::move(f));
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  for (int r = 0; r < 3; ++r) {
    Vec f = Vec::Zero(g.size());
    for (int c : E) f(c) = Cplx(gauss(rng), gauss(rng));
    probes.push_back(std::move(f));
  }
  for (Vec& f : probes) f /= lp_norm_on(g, f, E, p);

  OperatorConditionReport rep;
  rep.dist = d;
  for (double t : t_list) {
    double worst = 0.0;
    for (const Vec& f : probes) {
      const Vec y = op.apply_function(
          [&](Cplx mu) { return std::pow(1.0 - std::exp(-t * mu), M); }, f);
      worst = std::max(worst, lp_norm_on(g, T(y), F, p));
    }
    rep.rows.push_back({t, t / (d * d), worst});
  }

  // least-squares fit of log norm against log(t/d^2)
  std::vector<double> xs, ys;
  for (const auto& row : rep.rows)
    if (row.norm > 1e-14) {
      xs.push_back(std::log(row.ratio));
      ys.push_back(std::log(row.norm));
    }
  if (xs.size() < 2 || M == 0) {
    rep.degenerate = true;
    return rep;
  }
  const auto n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
    syy += ys[i] * ys[i];
  }
  const double vxx = sxx - sx * sx / n;
  const double vyy = syy - sy * sy / n;
  const double vxy = sxy - sx * sy / n;
  if (vxx <= 0.0 || vyy <= 1e-20) {
    rep.degenerate = true;
    return rep;
  }
  rep.fitted_exponent = vxy / vxx;
  rep.r_squared = vxy * vxy / (vxx * vyy);
  return rep;
}

std::vector<RieszRatioRow> riesz_hardy_probe(const EllipticOperator& op,
                                             const TimeGrid& tg,
                                             const std::vector<Vec>& fixtures,
                                             const OrliczFunction& w) {
  const Grid& g = op.grid();
  const auto R = riesz_handle(op);
  std::vector<RieszRatioRow> rows;
  for (const Vec& f : fixtures) {
    RieszRatioRow row;
    if (f.norm() == 0.0) {
      row.skipped = true;
      rows.push_back(row);
      continue;
    }
    const Eigen::VectorXd rf = R(f);
    std::vector<double> vals, wts;
    for (int i = 0; i < g.size(); ++i)
      if (rf(i) > 0.0) {
        vals.push_back(rf(i));
        wts.push_back(g.cell_measure());
      }
    row.target = luxemburg_norm(vals, wts, w);
    row.source = hardy_norm(op, tg, f, w);
    row.ratio = row.source > 0.0 ? row.target / row.source : 0.0;
    rows.push_back(row);
  }
  return rows;
}

FracIntegralReport frac_integral_probe(const EllipticOperator& op,
                                       const TimeGrid& tg, const Vec& f,
                                       const OrliczFunction& w, double gamma,
                                       double q) {
  const int n = op.grid().dim;
  const double residual = n * (1.0 / w.declared_pw() - 1.0 / q) - 2.0 * gamma;
  if (std::abs(residual) > 1e-10)
    throw std::invalid_argument(fmt::format(
        "index relation violated: n(1/p - 1/q) - 2 gamma = {}", residual));

  FracIntegralReport rep;
  rep.omega_tilde = assumption_b_transform(w, q).omega_tilde;
  const Vec target = gamma == 0.0 ? f : op.frac_neg_power(gamma, f, true);
  rep.target_norm = hardy_norm(op, tg, target, rep.omega_tilde);
  rep.source_norm = hardy_norm(op, tg, f, w);
  rep.ratio = rep.source_norm > 0.0 ? rep.target_norm / rep.source_norm : 0.0;
  return rep;
}

ClassicalAtomCert verify_classical_atom(const Grid& g, const Vec& b,
                                        const Ball& B, const OrliczFunction& w,
                                        double slack) {
  ClassicalAtomCert cert;
  cert.slack = slack;
  const CellMask inside = ball_mask(g, B);
  cert.support = true;
  Cplx mean = 0.0;
  double l22 = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (b(i) != Cplx(0.0) && !inside[i]) cert.support = false;
    mean += b(i) * g.cell_measure();
    l22 += std::norm(b(i)) * g.cell_measure();
  }
  cert.l2_norm = std::sqrt(l22);
  cert.mean_abs = std::abs(mean);
  const double m = ball_measure(g, B);
  cert.bound = 1.0 / (std::sqrt(m) * rho(w, m));
  cert.margin = (cert.bound * (1.0 + slack) - cert.l2_norm) / cert.bound;
  cert.mean_ok = cert.mean_abs <= 1e-8 * cert.l2_norm * std::sqrt(m);
  cert.degenerate = cert.l2_norm == 0.0;
  if (cert.degenerate) cert.mean_ok = true;
  return cert;
}

ClassicalDecomposition classical_atom_construct(const Grid& g, const Vec& v,
                                                const Ball& B,
                                                const OrliczFunction& w) {
  const double vl2 = lp_norm(g, v, 2.0);
  Cplx total = 0.0;
  for (int i = 0; i < g.size(); ++i) total += v(i) * g.cell_measure();
  ClassicalDecomposition out;
  out.total_mean_abs = std::abs(total);
  if (out.total_mean_abs > 1e-8 * vl2)
    throw std::invalid_argument(
        "total mean does not vanish: the coarse corrections cannot telescope");

  const double half_diam =
      0.5 * g.length * std::sqrt(static_cast<double>(g.dim));
  int K = 0;
  while (std::ldexp(B.radius, K) < half_diam && K < 60) ++K;
  // nested ball masks; the last one absorbs the whole grid so the annuli
  // partition it exactly
  std::vector<CellMask> bm(K + 1);
  std::vector<Ball> balls(K + 1);
  for (int k = 0; k <= K; ++k) {
    balls[k] = k == K ? Ball{B.center, g.length}
                      : Ball{B.center, std::ldexp(B.radius, k)};
    bm[k] = k == K ? CellMask(g.size(), 1) : ball_mask(g, balls[k]);
  }

  std::vector<Cplx> mk(K + 1, 0.0);
  std::vector<double> inv_measure(K + 1, 0.0);
  for (int k = 0; k <= K; ++k) {
    double count = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      const bool in_annulus = bm[k][i] && (k == 0 || !bm[k - 1][i]);
      if (in_annulus) mk[k] += v(i) * g.cell_measure();
      if (bm[k][i]) count += 1.0;
    }
    inv_measure[k] = 1.0 / (count * g.cell_measure());
  }

  auto piece_constant = [&](const Vec& piece, const Ball& ball) {
    const double m = ball_measure(g, ball);
    return lp_norm(g, piece, 2.0) * std::sqrt(m) * rho(w, m);
  };

  Vec sum = Vec::Zero(g.size());
  for (int k = 0; k <= K; ++k) {
    Vec piece = Vec::Zero(g.size());
    for (int i = 0; i < g.size(); ++i) {
      const bool in_annulus = bm[k][i] && (k == 0 || !bm[k - 1][i]);
      if (in_annulus) piece(i) += v(i);
      if (bm[k][i]) piece(i) -= mk[k] * inv_measure[k];
    }
    sum += piece;
    out.pieces.push_back(
        {piece, balls[k], k, false, piece_constant(piece, balls[k])});
  }
  // coarse-mean corrections N_j (chibar_j - chibar_{j-1}), N_j = sum_{k>=j} m_k
  Cplx Nj = 0.0;
  for (int j = K; j >= 1; --j) {
    Nj += mk[j];
    Vec piece = Vec::Zero(g.size());
    for (int i = 0; i < g.size(); ++i) {
      if (bm[j][i]) piece(i) += Nj * inv_measure[j];
      if (bm[j - 1][i]) piece(i) -= Nj * inv_measure[j - 1];
    }
    sum += piece;
    out.pieces.push_back(
        {piece, balls[j], j, true, piece_constant(piece, balls[j])});
  }
  out.residual = vl2 > 0.0 ? lp_norm(g, Vec(v - sum), 2.0) / vl2 : 0.0;
  return out;
}

double classical_hardy_value(
    const std::vector<std::pair<double, double>>& l2_and_measure,
    const OrliczFunction& w, double tol) {
  if (l2_and_measure.empty()) return 0.0;
  for (const auto& [l2, m] : l2_and_measure)
    if (!(m > 0.0)) throw std::invalid_argument("piece with zero measure");
  const auto phi = [&](double lam) {
    double acc = 0.0;
    for (const auto& [l2, m] : l2_and_measure) {
      const double arg = l2 / (lam * std::sqrt(m));
      if (arg > 0.0) acc += m * w.eval(arg);
    }
    return acc;
  };
  double hi = 1.0;
  int guard = 0;
  while (phi(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 4000)
      throw std::runtime_error("classical hardy value: no bracket");
  }
  double lo = hi;
  guard = 0;
  while (phi(lo) <= 1.0 && lo > 1e-300) {
    lo *= 0.5;
    if (++guard > 4000) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (phi(mid) <= 1.0 ? hi : lo) = mid;
    if (hi - lo <= tol * hi) break;
  }
  return hi;
}

double classical_hardy_value(const Grid& g,
                             const std::vector<ClassicalPiece>& pieces,
                             const OrliczFunction& w, double tol) {
  std::vector<std::pair<double, double>> rows;
  for (const auto& p : pieces) {
    const double l2 = lp_norm(g, p.values, 2.0);
    if (l2 > 0.0) rows.emplace_back(l2, ball_measure(g, p.ball));
  }
  return classical_hardy_value(rows, w, tol);
}

EmbeddingReport embedding_probe(const EllipticOperator& op, const TimeGrid& tg,
                                const Vec& f, const OrliczFunction& w) {
  const Grid& g = op.grid();
  const double n = g.dim;
  if (!(w.declared_pw() > n / (n + 1.0)))
    throw std::invalid_argument(
        fmt::format("embedding probe needs p > {}", n / (n + 1.0)));

  const auto dec = molecular_decompose(op, tg, f, w);
  EmbeddingReport rep;
  std::vector<std::pair<double, double>> rows;
  for (size_t i = 0; i < dec.molecules.size(); ++i) {
    Cplx mean = 0.0;
    for (int c = 0; c < g.size(); ++c)
      mean += dec.molecules[i](c) * g.cell_measure();
    rep.molecule_mean_abs.push_back(std::abs(mean));
    const double l2 =
        std::abs(dec.lambdas[i]) * lp_norm(g, dec.molecules[i], 2.0);
    if (l2 > 0.0) rows.emplace_back(l2, ball_measure(g, dec.balls[i]));
  }
  rep.classical_value = classical_hardy_value(rows, w);
  rep.hardy = hardy_norm(op, tg, f, w);
  rep.ratio = rep.hardy > 0.0 ? rep.classical_value / rep.hardy : 0.0;
  return rep;
}

}  // namespace tentlab
