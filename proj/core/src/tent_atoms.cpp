#include "tentlab/tent_atoms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace tentlab {

std::vector<int> DyadicCube::cells(const Grid& g) const {
  std::vector<int> out;
  const int s = side_cells();
  if (g.dim == 1) {
    for (int i = 0; i < s; ++i) out.push_back(g.index(anchor[0] + i));
  } else {
    for (int i = 0; i < s; ++i)
      for (int j = 0; j < s; ++j) out.push_back(g.index(anchor[0] + i, anchor[1] + j));
  }
  return out;
}

CellMask DyadicCube::mask(const Grid& g) const {
  CellMask m(g.size(), 0);
  for (int c : cells(g)) m[c] = 1;
  return m;
}

std::array<double, 2> DyadicCube::center(const Grid& g) const {
  const double s = 0.5 * side_cells();
  return {(anchor[0] + s) * g.h(), g.dim == 2 ? (anchor[1] + s) * g.h() : 0.0};
}

WhitneyCover whitney_decompose(const Grid& g, const CellMask& O) {
  WhitneyCover cover;
  if (mask_count(O) == 0) return cover;

  int max_level = 0;
  while ((2 << max_level) <= g.n_per_axis && g.n_per_axis % (2 << max_level) == 0)
    ++max_level;

  if (mask_count(O) == g.size()) {
    // no complement: tile with coarsest-level cubes, reported with the flag
    const int s = 1 << max_level;
    const int blocks = g.n_per_axis / s;
    for (int bi = 0; bi < blocks; ++bi)
      for (int bj = 0; bj < (g.dim == 2 ? blocks : 1); ++bj) {
        cover.cubes.push_back(DyadicCube{max_level, {bi * s, bj * s}});
        cover.flagged.push_back(1);
      }
    cover.full_grid = true;
    return cover;
  }

  CellMask comp(g.size(), 0);
  for (int i = 0; i < g.size(); ++i) comp[i] = O[i] ? 0 : 1;
  const double sqn = std::sqrt(static_cast<double>(g.dim));

  CellMask covered(g.size(), 0);
  for (int lvl = max_level; lvl >= 0; --lvl) {
    const int s = 1 << lvl;
    if (s > g.n_per_axis || g.n_per_axis % s != 0) continue;
    const int blocks = g.n_per_axis / s;
    for (int bi = 0; bi < blocks; ++bi) {
      for (int bj = 0; bj < (g.dim == 2 ? blocks : 1); ++bj) {
        DyadicCube q{lvl, {bi * s, bj * s}};
        const auto cs = q.cells(g);
        bool ok = true;
        for (int c : cs)
          if (!O[c] || covered[c]) { ok = false; break; }
        if (!ok) continue;
        double d = std::numeric_limits<double>::infinity();
        for (int c : cs) d = std::min(d, dist_to_set(g, c, comp));
        const double ell = q.side_length(g);
        const bool lower = d >= sqn * ell - 1e-12;
        const bool upper = d <= 4.0 * sqn * ell + 1e-12;
        // the lower bound decides acceptance (cube not too large for its
        // depth); the finest level accepts everything left so the cover is
        // exact, flagging cubes whose band cannot be met
        if (lvl > 0 && !lower) continue;
        cover.cubes.push_back(q);
        cover.flagged.push_back((lower && upper) ? 0 : 1);
        for (int c : cs) covered[c] = 1;
      }
    }
  }
  return cover;
}

LevelSets level_sets(const TentField& F) {
  const Grid& g = F.grid();
  const Eigen::VectorXd A = area_function(F, 1.0);
  LevelSets out;
  double amax = 0.0, amin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < A.size(); ++i)
    if (A(i) > 0.0) {
      amax = std::max(amax, A(i));
      amin = std::min(amin, A(i));
    }
  if (amax == 0.0) return out;
  // tiny tolerance in the floors so roundoff at exact powers of two does
  // not shift a generation
  int k_max = static_cast<int>(std::floor(std::log2(amax) + 1e-9));
  if (std::ldexp(1.0, k_max) >= amax) --k_max;
  int k_min = static_cast<int>(std::floor(std::log2(amin) + 1e-9)) - 1;
  k_min = std::min(k_min, k_max);
  out.k_min = k_min;
  out.k_max = k_max;
  for (int k = k_min; k <= k_max; ++k) {
    CellMask m(g.size(), 0);
    const double thr = std::ldexp(1.0, k);
    for (int i = 0; i < A.size(); ++i)
      m[i] = (k == k_min ? A(i) > 0.0 : A(i) > thr) ? 1 : 0;
    out.masks.push_back(std::move(m));
  }
  return out;
}

AtomicDecomposition atomic_decompose(const TentField& F, const OrliczFunction& w,
                                     double gamma) {
  const Grid& g = F.grid();
  const TimeGrid& tg = F.timegrid();
  AtomicDecomposition D;

  const LevelSets ls = level_sets(F);
  D.k_min = ls.k_min;
  D.k_max = ls.k_max;
  if (ls.k_max < ls.k_min) {
    // record any stray support (A vanished but F did not: cannot happen
    // since every sample sits in its own cone) as uncovered
    for (int j = 0; j < F.levels(); ++j)
      for (int i = 0; i < g.size(); ++i)
        if (F.at(j, i) != Cplx(0.0)) {
          D.uncovered.emplace_back(j, i);
          D.uncovered_mass += std::norm(F.at(j, i));
        }
    D.uncovered_mass = std::sqrt(D.uncovered_mass);
    return D;
  }

  // expanded level sets and their tents, k = k_min..k_max (+1 sentinel empty)
  const int K = ls.k_max - ls.k_min + 1;
  std::vector<CellMask> stars(K);
  std::vector<std::vector<CellMask>> tents(K + 1);
  for (int q = 0; q < K; ++q) {
    stars[q] = mask_count(ls.masks[q]) == g.size()
                   ? ls.masks[q]
                   : expanded_set(g, ls.masks[q], gamma);
    if (mask_count(stars[q]) == g.size()) D.full_grid_generation = true;
    tents[q] = tent_masks(g, tg, stars[q]);
  }
  tents[K].assign(tg.size(), CellMask(g.size(), 0));  // empty top sentinel

  std::vector<std::vector<std::uint8_t>> covered(
      tg.size(), std::vector<std::uint8_t>(g.size(), 0));

  for (int q = 0; q < K; ++q) {
    const int k = ls.k_min + q;
    const WhitneyCover cover = whitney_decompose(g, stars[q]);
    for (const DyadicCube& cube : cover.cubes) {
      const auto cc = cube.center(g);
      const double radius =
          5.5 * std::sqrt(static_cast<double>(g.dim)) * cube.side_length(g);
      const Ball ball{cc, radius};
      const auto tentB = tent_masks(g, tg, ball);
      const CellMask qmask = cube.mask(g);

      TentField a(g, tg);
      bool nonempty = false;
      for (int j = 0; j < tg.size(); ++j)
        for (int i = 0; i < g.size(); ++i) {
          if (F.at(j, i) == Cplx(0.0)) continue;
          if (!qmask[i] || !tents[q][j][i] || tents[q + 1][j][i] || !tentB[j][i])
            continue;
          a.at(j, i) = F.at(j, i);
          covered[j][i] = 1;
          nonempty = true;
        }
      if (!nonempty) continue;

      const double measure = ball_measure(g, ball);
      double lambda = std::ldexp(1.0, k) * measure * rho(w, measure);
      a *= Cplx(1.0 / lambda, 0.0);

      // the slab construction guarantees the atom size bounds only up to a
      // factor <= 2 (the area is bounded by 2^{k+1} on the slab, not 2^k);
      // atoms must satisfy their bounds exactly, so the overshoot moves
      // into the coefficient
      double c = t_omega_norm(a, w);
      for (double p : {1.0, 2.0})
        c = std::max(c, t2p_norm(a, p) * std::pow(measure, 1.0 - 1.0 / p) *
                            rho(w, measure));
      if (c > 1.0) {
        a *= Cplx(1.0 / c, 0.0);
        lambda *= c;
      }

      TentAtom atom{std::move(a), ball, measure, k, cube, lambda};
      D.atoms.push_back(std::move(atom));
    }
  }

  for (int j = 0; j < tg.size(); ++j)
    for (int i = 0; i < g.size(); ++i)
      if (F.at(j, i) != Cplx(0.0) && !covered[j][i]) {
        D.uncovered.emplace_back(j, i);
        D.uncovered_mass += std::norm(F.at(j, i));
      }
  D.uncovered_mass = std::sqrt(D.uncovered_mass);

  std::vector<std::pair<double, double>> pairs;
  for (const auto& at : D.atoms) pairs.emplace_back(at.lambda, at.ball_measure);
  D.lambda_value = lambda_functional(pairs, w);
  return D;
}

bool AtomCertificate::pass() const {
  if (!tent_support) return false;
  for (const auto& b : p_bounds)
    if (b.margin < 0.0) return false;
  return t_omega <= 1.0 + slack;
}

AtomCertificate verify_atom(const TentAtom& atom, const OrliczFunction& w,
                            const std::vector<double>& p_list, double slack) {
  AtomCertificate cert;
  cert.slack = slack;
  const auto tentB = tent_masks(atom.values.grid(), atom.values.timegrid(), atom.ball);
  cert.tent_support = supported_in(atom.values, tentB);
  const double m = atom.ball_measure;
  for (double p : p_list) {
    AtomCertificate::PBound b;
    b.p = p;
    b.norm = t2p_norm(atom.values, p);
    b.bound = std::pow(m, 1.0 / p - 1.0) / rho(w, m);
    b.margin = (b.bound * (1.0 + slack) - b.norm) / b.bound;
    cert.p_bounds.push_back(b);
  }
  cert.t_omega = t_omega_norm(atom.values, w);
  return cert;
}

double lambda_functional(const std::vector<std::pair<double, double>>& pairs,
                         const OrliczFunction& w, double tol) {
  if (pairs.empty()) return 0.0;
  for (const auto& [lam, m] : pairs)
    if (!(m > 0.0)) throw std::invalid_argument("ball with zero measure");
  const auto phi = [&](double s) {
    double acc = 0.0;
    for (const auto& [lam, m] : pairs) {
      const double arg = std::abs(lam) / (s * m * rho(w, m));
      if (arg > 0.0) acc += m * w.eval(arg);
    }
    return acc;
  };
  double hi = 1.0;
  int guard = 0;
  while (phi(hi) > 1.0) {
    hi *= 2.0;
    if (++guard > 4000) throw std::runtime_error("lambda functional: no bracket");
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

ReconstructionResidual reconstruction_residual(const TentField& F,
                                               const AtomicDecomposition& D) {
  TentField sum(F.grid(), F.timegrid());
  for (const auto& atom : D.atoms) {
    TentField term = atom.values;
    term *= Cplx(atom.lambda, 0.0);
    sum += term;
  }
  TentField diff = F;
  diff -= sum;
  ReconstructionResidual r;
  r.sup = diff.max_abs();
  r.t22 = t2p_norm(diff, 2.0);
  return r;
}

std::vector<TruncationRow> truncation_convergence(const TentField& F,
                                                  const AtomicDecomposition& D,
                                                  double p,
                                                  const OrliczFunction& w) {
  std::vector<int> ladder{0};
  for (int n = 1; n < static_cast<int>(D.atoms.size()); n *= 2) ladder.push_back(n);
  ladder.push_back(static_cast<int>(D.atoms.size()));

  std::vector<TruncationRow> rows;
  for (int n : ladder) {
    TentField partial(F.grid(), F.timegrid());
    for (int j = 0; j < n; ++j) {
      TentField term = D.atoms[j].values;
      term *= Cplx(D.atoms[j].lambda, 0.0);
      partial += term;
    }
    TentField diff = F;
    diff -= partial;
    rows.push_back({n, t2p_norm(diff, p), t_omega_norm(diff, w)});
  }
  return rows;
}

}  // namespace tentlab
