#include "tentlab/elliptic.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>
#include <stdexcept>

namespace tentlab {

namespace {

constexpr double kOverflowGuard = 700.0;

// Matrix function of an upper-triangular factor by the Parlett recurrence.
Mat parlett(const std::function<Cplx(Cplx)>& fn, const Mat& T) {
  const int m = static_cast<int>(T.rows());
  Mat F = Mat::Zero(m, m);
  for (int i = 0; i < m; ++i) F(i, i) = fn(T(i, i));
  const double scale = T.norm() + 1.0;
  for (int d = 1; d < m; ++d) {
    for (int i = 0; i + d < m; ++i) {
      const int j = i + d;
      Cplx num = T(i, j) * (F(i, i) - F(j, j));
      for (int k = i + 1; k < j; ++k)
        num += F(i, k) * T(k, j) - T(i, k) * F(k, j);
      Cplx den = T(i, i) - T(j, j);
      if (std::abs(den) < 1e-13 * scale)
        den = Cplx(1e-13 * scale, 0.0);  // clustered eigenvalues: perturb
      F(i, j) = num / den;
    }
  }
  return F;
}

}  // namespace

CoefficientField::CoefficientField(Grid grid, std::vector<Eigen::Matrix2cd> cells)
    : grid_(grid), cells_(std::move(cells)) {
  if (static_cast<int>(cells_.size()) != grid_.size())
    throw std::invalid_argument("coefficient field size mismatch");
}

CoefficientField CoefficientField::identity(const Grid& g) {
  return scalar(g, Cplx(1.0, 0.0));
}

CoefficientField CoefficientField::scalar(const Grid& g, Cplx c) {
  std::vector<Eigen::Matrix2cd> cells(g.size(), c * Eigen::Matrix2cd::Identity());
  return CoefficientField(g, std::move(cells));
}

CoefficientField CoefficientField::diag_plus_antisym(const Grid& g, double d0,
                                                     double d1, double b) {
  Eigen::Matrix2cd m;
  m << Cplx(d0, 0.0), Cplx(0.0, b), Cplx(0.0, -b), Cplx(d1, 0.0);
  std::vector<Eigen::Matrix2cd> cells(g.size(), m);
  return CoefficientField(g, std::move(cells));
}

CoefficientField CoefficientField::oscillating(const Grid& g, double base,
                                               double amp) {
  std::vector<Eigen::Matrix2cd> cells(g.size());
  for (int i = 0; i < g.size(); ++i) {
    const double a =
        base + amp * std::sin(2.0 * M_PI * g.center(i)[0] / g.length);
    cells[i] = a * Eigen::Matrix2cd::Identity();
  }
  return CoefficientField(g, std::move(cells));
}

EllipticityConstants ellipticity_constants(const CoefficientField& A) {
  const Grid& g = A.grid();
  EllipticityConstants out;
  out.lambda = std::numeric_limits<double>::infinity();
  out.Lambda = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    if (g.dim == 1) {
      out.lambda = std::min(out.lambda, A.entry(i, 0, 0).real());
      out.Lambda = std::max(out.Lambda, std::abs(A.entry(i, 0, 0)));
    } else {
      const Eigen::Matrix2cd& m = A.at(i);
      const Eigen::Matrix2cd herm = 0.5 * (m + m.adjoint());
      Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(herm);
      out.lambda = std::min(out.lambda, es.eigenvalues().minCoeff());
      Eigen::JacobiSVD<Eigen::Matrix2cd> svd(m);
      out.Lambda = std::max(out.Lambda, svd.singularValues()(0));
    }
  }
  if (!(out.lambda > 0.0))
    throw std::invalid_argument("coefficient field is not elliptic");
  return out;
}

struct EllipticOperator::Cache {
  bool schur = false;
  Vec evals;
  Mat V, Vinv;   // spectral path
  Mat T, U;      // Schur path
  double cond = 0.0;
  double max_abs = 0.0;
  double min_pos = 0.0;
  double ktol = 0.0;
};

EllipticOperator::EllipticOperator(const Grid& grid, const CoefficientField& A)
    : grid_(grid) {
  ellipticity_constants(A);  // validates
  const int M = grid.size();
  const double h2 = grid.h() * grid.h();
  L_ = Mat::Zero(M, M);

  if (grid.dim == 1) {
    for (int i = 0; i < M; ++i) {
      const Cplx aR = 0.5 * (A.entry(i, 0, 0) + A.entry(grid.index(i + 1), 0, 0));
      const Cplx aL = 0.5 * (A.entry(grid.index(i - 1), 0, 0) + A.entry(i, 0, 0));
      L_(i, i) += (aL + aR) / h2;
      L_(i, grid.index(i + 1)) -= aR / h2;
      L_(i, grid.index(i - 1)) -= aL / h2;
    }
  } else {
    for (int i = 0; i < M; ++i) {
      const auto c = grid.coords(i);
      const int xp = grid.index(c[0] + 1, c[1]), xm = grid.index(c[0] - 1, c[1]);
      const int yp = grid.index(c[0], c[1] + 1), ym = grid.index(c[0], c[1] - 1);
      // axis-aligned flux stencils with face-averaged coefficients
      const Cplx axR = 0.5 * (A.entry(i, 0, 0) + A.entry(xp, 0, 0));
      const Cplx axL = 0.5 * (A.entry(xm, 0, 0) + A.entry(i, 0, 0));
      const Cplx ayR = 0.5 * (A.entry(i, 1, 1) + A.entry(yp, 1, 1));
      const Cplx ayL = 0.5 * (A.entry(ym, 1, 1) + A.entry(i, 1, 1));
      L_(i, i) += (axL + axR + ayL + ayR) / h2;
      L_(i, xp) -= axR / h2;
      L_(i, xm) -= axL / h2;
      L_(i, yp) -= ayR / h2;
      L_(i, ym) -= ayL / h2;
      // mixed terms, centered differences on both factors
      const double q = 1.0 / (4.0 * h2);
      const Cplx a12p = A.entry(xp, 0, 1), a12m = A.entry(xm, 0, 1);
      L_(i, grid.index(c[0] + 1, c[1] + 1)) -= q * a12p;
      L_(i, grid.index(c[0] + 1, c[1] - 1)) += q * a12p;
      L_(i, grid.index(c[0] - 1, c[1] + 1)) += q * a12m;
      L_(i, grid.index(c[0] - 1, c[1] - 1)) -= q * a12m;
      const Cplx a21p = A.entry(yp, 1, 0), a21m = A.entry(ym, 1, 0);
      L_(i, grid.index(c[0] + 1, c[1] + 1)) -= q * a21p;
      L_(i, grid.index(c[0] - 1, c[1] + 1)) += q * a21p;
      L_(i, grid.index(c[0] + 1, c[1] - 1)) += q * a21m;
      L_(i, grid.index(c[0] - 1, c[1] - 1)) -= q * a21m;
    }
  }
}

EllipticOperator assemble(const Grid& grid, const CoefficientField& A) {
  return EllipticOperator(grid, A);
}

const EllipticOperator::Cache& EllipticOperator::cache() const {
  if (cache_) return *cache_;
  auto c = std::make_shared<Cache>();
  Eigen::ComplexEigenSolver<Mat> es(L_);
  c->evals = es.eigenvalues();
  c->V = es.eigenvectors();
  Eigen::FullPivLU<Mat> lu(c->V);
  if (lu.isInvertible()) {
    c->Vinv = lu.inverse();
    c->cond = c->V.cwiseAbs().colwise().sum().maxCoeff() *
              c->Vinv.cwiseAbs().colwise().sum().maxCoeff();
  } else {
    c->cond = std::numeric_limits<double>::infinity();
  }
  if (!(c->cond < 1e8)) {
    c->schur = true;  // ill-conditioned eigenbasis: fall back to Schur form
    Eigen::ComplexSchur<Mat> schur(L_);
    c->T = schur.matrixT();
    c->U = schur.matrixU();
    c->evals = c->T.diagonal();
  }
  c->max_abs = c->evals.cwiseAbs().maxCoeff();
  c->ktol = 1e-10 * c->max_abs;
  c->min_pos = std::numeric_limits<double>::infinity();
  for (int i = 0; i < c->evals.size(); ++i) {
    const double a = std::abs(c->evals(i));
    if (a > c->ktol)
      c->min_pos = std::min(c->min_pos, a);
    else if (!c->schur)
      c->evals(i) = Cplx(0.0);  // snap the kernel so fn(0) is exact
  }
  cache_ = std::move(c);
  return *cache_;
}

Vec EllipticOperator::apply_function(const std::function<Cplx(Cplx)>& fn,
                                     const Vec& f) const {
  const Cache& c = cache();
  if (!c.schur) {
    Vec coeff = c.Vinv * f;
    for (int i = 0; i < coeff.size(); ++i) coeff(i) *= fn(c.evals(i));
    return c.V * coeff;
  }
  const Mat F = parlett(fn, c.T);
  return c.U * (F * (c.U.adjoint() * f));
}

Mat EllipticOperator::function_matrix(const std::function<Cplx(Cplx)>& fn) const {
  const Cache& c = cache();
  if (!c.schur) {
    Mat D = Mat::Zero(c.evals.size(), c.evals.size());
    for (int i = 0; i < c.evals.size(); ++i) D(i, i) = fn(c.evals(i));
    return c.V * D * c.Vinv;
  }
  return c.U * parlett(fn, c.T) * c.U.adjoint();
}

Vec EllipticOperator::heat_apply(double s, const Vec& f) const {
  if (!(s > 0.0)) throw std::invalid_argument("heat_apply: s must be positive");
  return apply_function(
      [s](Cplx mu) {
        const Cplx z = s * mu;
        return z.real() > kOverflowGuard ? Cplx(0.0) : std::exp(-z);
      },
      f);
}

Vec EllipticOperator::heat_power_apply(double t, int k, const Vec& f) const {
  if (!(t > 0.0) || k < 0)
    throw std::invalid_argument("heat_power_apply: need t > 0, k >= 0");
  return apply_function(
      [t, k](Cplx mu) {
        const Cplx z = t * t * mu;
        if (z.real() > kOverflowGuard) return Cplx(0.0);
        Cplx zk(1.0, 0.0);
        for (int j = 0; j < k; ++j) zk *= z;
        return zk * std::exp(-z);
      },
      f);
}

Vec EllipticOperator::resolvent_apply(double t, const Vec& f) const {
  if (!(t > 0.0)) throw std::invalid_argument("resolvent_apply: t must be positive");
  const Mat A = Mat::Identity(size(), size()) + t * L_;
  Eigen::PartialPivLU<Mat> lu(A);
  const Vec u = lu.solve(f);
  const double resid = (A * u - f).norm();
  if (!(resid <= 1e-8 * (f.norm() + 1e-300))) {
    const double cond_est = A.cwiseAbs().rowwise().sum().maxCoeff() *
                            lu.inverse().cwiseAbs().rowwise().sum().maxCoeff();
    throw std::runtime_error("resolvent solve failed, condition estimate " +
                             std::to_string(cond_est));
  }
  return u;
}

Vec EllipticOperator::poisson_apply(double t, const Vec& f) const {
  if (!(t > 0.0)) throw std::invalid_argument("poisson_apply: t must be positive");
  return apply_function(
      [t](Cplx mu) {
        const Cplx z = t * std::sqrt(mu);
        return z.real() > kOverflowGuard ? Cplx(0.0) : std::exp(-z);
      },
      f);
}

Vec EllipticOperator::poisson_apply_subordination(double t, const Vec& f,
                                                  int quad_points) const {
  if (!(t > 0.0)) throw std::invalid_argument("poisson subordination: t > 0");
  // e^{-t sqrt(L)} = int_0^inf t e^{-t^2/(4u)} / (2 sqrt(pi) u^{3/2}) e^{-uL} du,
  // midpoint rule in log u; the integrand vanishes double-exponentially at
  // both ends of the chosen window.
  return apply_function(
      [&](Cplx mu) {
        if (mu == Cplx(0.0)) return Cplx(1.0);  // density integrates to one
        const double u_lo = t * t / (4.0 * kOverflowGuard);
        const double u_hi = kOverflowGuard / std::abs(mu);
        if (u_hi <= u_lo) return Cplx(0.0);
        const double dl = std::log(u_hi / u_lo) / quad_points;
        Cplx acc(0.0);
        for (int j = 0; j < quad_points; ++j) {
          const double u = u_lo * std::exp((j + 0.5) * dl);
          const Cplx z = u * mu + t * t / (4.0 * u);
          if (z.real() > kOverflowGuard) continue;
          acc += dl * t / (2.0 * std::sqrt(M_PI * u)) * std::exp(-z);
        }
        return acc;
      },
      f);
}

double EllipticOperator::kernel_mass(const Vec& f) const {
  const Cache& c = cache();
  const double fn = f.norm();
  if (fn == 0.0) return 0.0;
  if (!c.schur) {
    Vec coeff = c.Vinv * f;
    for (int i = 0; i < coeff.size(); ++i)
      if (std::abs(c.evals(i)) > c.ktol) coeff(i) = Cplx(0.0);
    return (c.V * coeff).norm() / fn;
  }
  // Schur fallback: the kernel of the periodic flux stencil is the constants.
  const Vec g = Vec::Constant(f.size(), f.mean());
  return g.norm() / fn;
}

Vec EllipticOperator::project_out_kernel(const Vec& f) const {
  const Cache& c = cache();
  if (!c.schur) {
    Vec coeff = c.Vinv * f;
    for (int i = 0; i < coeff.size(); ++i)
      if (std::abs(c.evals(i)) <= c.ktol) coeff(i) = Cplx(0.0);
    return c.V * coeff;
  }
  return f - Vec::Constant(f.size(), f.mean());
}

Vec EllipticOperator::frac_neg_power(double gamma, const Vec& f,
                                     bool project_kernel) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("frac_neg_power: gamma > 0");
  if (!project_kernel && kernel_mass(f) > 1e-8)
    throw std::invalid_argument(
        "frac_neg_power: input has kernel component; project it out first");
  const double ktol = cache().ktol;
  return apply_function(
      [gamma, ktol](Cplx mu) {
        if (std::abs(mu) <= ktol) return Cplx(0.0);
        return std::pow(mu, Cplx(-gamma, 0.0));
      },
      f);
}

Vec EllipticOperator::frac_pos_power(double gamma, const Vec& f) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("frac_pos_power: gamma > 0");
  const double ktol = cache().ktol;
  return apply_function(
      [gamma, ktol](Cplx mu) {
        if (std::abs(mu) <= ktol) return Cplx(0.0);
        return std::pow(mu, Cplx(gamma, 0.0));
      },
      f);
}

Vec EllipticOperator::frac_neg_power_quadrature(double gamma, const Vec& f,
                                                int quad_points,
                                                bool project_kernel) const {
  if (!(gamma > 0.0)) throw std::invalid_argument("frac quadrature: gamma > 0");
  if (!project_kernel && kernel_mass(f) > 1e-8)
    throw std::invalid_argument(
        "frac quadrature: input has kernel component; project it out first");
  const Cache& c = cache();
  const double t_lo = 1e-6 / c.max_abs;
  const double t_hi = 1e3 / c.min_pos;
  const double dl = std::log(t_hi / t_lo) / quad_points;
  const double ktol = c.ktol;
  const double g0 = std::tgamma(gamma);
  // midpoint rule in log t, plus the analytic lower tail of
  // int_0^{t_lo} t^{gamma} e^{-t mu} dt/t expanded in powers of t_lo*mu
  return apply_function(
      [&](Cplx mu) {
        if (std::abs(mu) <= ktol) return Cplx(0.0);
        Cplx acc = std::pow(t_lo, gamma) *
                   (1.0 / gamma - mu * t_lo / (gamma + 1.0) +
                    mu * mu * t_lo * t_lo / (2.0 * (gamma + 2.0)));
        for (int j = 0; j < quad_points; ++j) {
          const double tj = t_lo * std::exp((j + 0.5) * dl);
          const Cplx z = tj * mu;
          if (z.real() > kOverflowGuard) continue;
          acc += dl * std::pow(tj, gamma) * std::exp(-z);
        }
        return acc / g0;
      },
      f);
}

std::vector<Vec> EllipticOperator::gradient(const Vec& f) const {
  const double inv2h = 1.0 / (2.0 * grid_.h());
  std::vector<Vec> out(grid_.dim, Vec::Zero(f.size()));
  for (int i = 0; i < grid_.size(); ++i) {
    const auto c = grid_.coords(i);
    out[0](i) = (f(grid_.index(c[0] + 1, c[1])) - f(grid_.index(c[0] - 1, c[1]))) * inv2h;
    if (grid_.dim == 2)
      out[1](i) = (f(grid_.index(c[0], c[1] + 1)) - f(grid_.index(c[0], c[1] - 1))) * inv2h;
  }
  return out;
}

std::vector<Vec> EllipticOperator::riesz_apply(const Vec& f,
                                               bool project_kernel) const {
  return gradient(frac_neg_power(0.5, f, project_kernel));
}

const EllipticOperator& EllipticOperator::adjoint() const {
  if (!adjoint_) {
    auto adj = std::shared_ptr<EllipticOperator>(new EllipticOperator(*this));
    adj->L_ = L_.adjoint();
    adj->cache_.reset();
    adj->adjoint_.reset();
    adjoint_ = std::move(adj);
  }
  return *adjoint_;
}

const Vec& EllipticOperator::eigenvalues() const { return cache().evals; }
double EllipticOperator::max_abs_eigenvalue() const { return cache().max_abs; }
double EllipticOperator::min_positive_eigenvalue() const { return cache().min_pos; }
double EllipticOperator::kernel_tolerance() const { return cache().ktol; }
bool EllipticOperator::uses_schur_fallback() const { return cache().schur; }
double EllipticOperator::eigenbasis_condition() const { return cache().cond; }

GaffneyReport gaffney_probe(const EllipticOperator& op, const std::vector<int>& E,
                            const std::vector<int>& F, SemigroupFamily family,
                            const std::vector<double>& t_list) {
  GaffneyReport rep;
  rep.dist = min_set_distance(op.grid(), E, F);
  if (!(rep.dist > 0.0))
    throw std::invalid_argument("gaffney_probe: sets must be separated");

  for (double t : t_list) {
    std::function<Cplx(Cplx)> fn;
    switch (family) {
      case SemigroupFamily::heat:
        fn = [t](Cplx mu) {
          const Cplx z = t * mu;
          return z.real() > kOverflowGuard ? Cplx(0.0) : std::exp(-z);
        };
        break;
      case SemigroupFamily::theat:
        fn = [t](Cplx mu) {
          const Cplx z = t * mu;
          return z.real() > kOverflowGuard ? Cplx(0.0) : z * std::exp(-z);
        };
        break;
      case SemigroupFamily::resolvent:
        fn = [t](Cplx mu) { return 1.0 / (1.0 + t * mu); };
        break;
    }
    const Mat K = op.function_matrix(fn);
    Mat sub(F.size(), E.size());
    for (size_t r = 0; r < F.size(); ++r)
      for (size_t c = 0; c < E.size(); ++c) sub(r, c) = K(F[r], E[c]);
    Eigen::JacobiSVD<Mat> svd(sub);
    rep.rows.push_back({t, svd.singularValues()(0), false});
  }

  // fit -log(norm) = (d^2/(c t))^beta as a line in log-log coordinates
  std::vector<double> xs, zs;
  bool any_above_floor = false;
  for (auto& row : rep.rows) {
    if (row.norm > 1e-14) any_above_floor = true;
    if (row.norm <= 1e-14 || row.norm >= 0.999) continue;
    row.used_in_fit = true;
    xs.push_back(std::log(rep.dist * rep.dist / row.t));
    zs.push_back(std::log(-std::log(row.norm)));
  }
  rep.below_floor = !any_above_floor;
  if (xs.size() < 2) {
    rep.note = rep.below_floor ? "below floor" : "too few points in decay regime";
    return rep;
  }
  const int m = static_cast<int>(xs.size());
  double sx = 0, sz = 0, sxx = 0, sxz = 0, szz = 0;
  for (int i = 0; i < m; ++i) {
    sx += xs[i]; sz += zs[i];
    sxx += xs[i] * xs[i]; sxz += xs[i] * zs[i]; szz += zs[i] * zs[i];
  }
  const double den = m * sxx - sx * sx;
  rep.fitted_beta = (m * sxz - sx * sz) / den;
  const double intercept = (sz - rep.fitted_beta * sx) / m;
  rep.fitted_c = std::abs(rep.fitted_beta) > 1e-12
                     ? std::exp(-intercept / rep.fitted_beta)
                     : 0.0;
  double ss_res = 0.0;
  const double zbar = sz / m;
  double ss_tot = 0.0;
  for (int i = 0; i < m; ++i) {
    const double pred = rep.fitted_beta * xs[i] + intercept;
    ss_res += (zs[i] - pred) * (zs[i] - pred);
    ss_tot += (zs[i] - zbar) * (zs[i] - zbar);
  }
  rep.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 0.0;
  return rep;
}

double lp_norm(const Grid& g, const Vec& f, double p) {
  if (std::isinf(p)) return f.cwiseAbs().maxCoeff();
  double s = 0.0;
  for (int i = 0; i < f.size(); ++i) s += std::pow(std::abs(f(i)), p);
  return std::pow(s * g.cell_measure(), 1.0 / p);
}

std::vector<LpProbeRow> lp_boundedness_probe(const EllipticOperator& op,
                                             const std::vector<double>& p_list,
                                             const std::vector<double>& t_list,
                                             std::uint64_t seed) {
  const int M = op.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);

  // probe vectors shared across (p, t)
  std::vector<Vec> probes;
  for (int i = 0; i < M; ++i) {
    Vec d = Vec::Zero(M);
    d(i) = Cplx(1.0);
    probes.push_back(d);
  }
  probes.push_back(Vec::Constant(M, Cplx(1.0)));
  for (int k = 1; k <= std::min(8, M / 2); ++k) {
    Vec m(M);
    for (int i = 0; i < M; ++i) {
      const double x = op.grid().center(i)[0] / op.grid().length;
      m(i) = std::exp(Cplx(0.0, 2.0 * M_PI * k * x));
    }
    probes.push_back(m);
  }
  for (int r = 0; r < 24; ++r) {
    Vec v(M);
    for (int i = 0; i < M; ++i)
      v(i) = r % 2 ? Cplx(gauss(rng) < 0 ? -1.0 : 1.0) : Cplx(gauss(rng), gauss(rng));
    probes.push_back(v);
  }

  std::vector<LpProbeRow> out;
  for (double p : p_list) {
    LpProbeRow row;
    row.p = p;
    for (double t : t_list) {
      const Mat K = op.function_matrix([t](Cplx mu) {
        const Cplx z = t * mu;
        return z.real() > kOverflowGuard ? Cplx(0.0) : std::exp(-z);
      });
      double nrm;
      if (p == 1.0) {
        nrm = K.cwiseAbs().colwise().sum().maxCoeff();
      } else if (std::isinf(p)) {
        nrm = K.cwiseAbs().rowwise().sum().maxCoeff();
      } else if (p == 2.0) {
        Eigen::JacobiSVD<Mat> svd(K);
        nrm = svd.singularValues()(0);
      } else {
        nrm = 0.0;
        for (const Vec& f : probes) {
          const double fp = lp_norm(op.grid(), f, p);
          if (fp == 0.0) continue;
          nrm = std::max(nrm, lp_norm(op.grid(), K * f, p) / fp);
        }
      }
      row.per_t.push_back(nrm);
      row.sup_norm = std::max(row.sup_norm, nrm);
    }
    out.push_back(std::move(row));
  }
  return out;
}

}  // namespace tentlab
