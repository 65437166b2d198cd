#ifndef TENTLAB_ELLIPTIC_HPP
#define TENTLAB_ELLIPTIC_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tentlab/grid.hpp"

namespace tentlab {

using Cplx = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

/// Per-cell coefficient matrix A(x); dim 1 uses only the (0,0) entry.
class CoefficientField {
 public:
  CoefficientField(Grid grid, std::vector<Eigen::Matrix2cd> cells);

  static CoefficientField identity(const Grid& g);
  static CoefficientField scalar(const Grid& g, Cplx c);
  /// diag(d0, d1) + ib * antisymmetric off-diagonal part, per cell.
  static CoefficientField diag_plus_antisym(const Grid& g, double d0, double d1,
                                            double b);
  /// Smoothly varying real scalar a(x) = base + amp*sin(2 pi x / L) (axis 0).
  static CoefficientField oscillating(const Grid& g, double base, double amp);

  const Grid& grid() const { return grid_; }
  const Eigen::Matrix2cd& at(int idx) const { return cells_[idx]; }
  Cplx entry(int idx, int r, int c) const { return cells_[idx](r, c); }

 private:
  Grid grid_;
  std::vector<Eigen::Matrix2cd> cells_;
};

struct EllipticityConstants {
  double lambda = 0.0;  // min over cells of smallest eigenvalue of Re part
  double Lambda = 0.0;  // max over cells of operator norm
};

/// Throws std::invalid_argument when lambda <= 0.
EllipticityConstants ellipticity_constants(const CoefficientField& A);

/// Discrete L = -div(A grad) on the periodic grid, with spectral functional
/// calculus (dense eigendecomposition; Schur-based fallback when the
/// eigenbasis is too ill-conditioned).
class EllipticOperator {
 public:
  EllipticOperator(const Grid& grid, const CoefficientField& A);

  const Grid& grid() const { return grid_; }
  const Mat& matrix() const { return L_; }
  int size() const { return static_cast<int>(L_.rows()); }

  /// Apply fn(L) by spectral calculus; fn must be analytic on the spectrum.
  Vec apply_function(const std::function<Cplx(Cplx)>& fn, const Vec& f) const;

  Vec heat_apply(double s, const Vec& f) const;              // e^{-sL} f
  Vec heat_power_apply(double t, int k, const Vec& f) const; // (t^2 L)^k e^{-t^2 L} f
  Vec resolvent_apply(double t, const Vec& f) const;         // (I + tL)^{-1} f
  Vec poisson_apply(double t, const Vec& f) const;           // e^{-t sqrt(L)} f
  /// Subordination quadrature route for the Poisson semigroup; serves as an
  /// internal cross-check of poisson_apply.
  Vec poisson_apply_subordination(double t, const Vec& f,
                                  int quad_points = 64) const;

  /// L^{-gamma} f, kernel modes mapped to zero. Throws if the relative kernel
  /// mass of f exceeds 1e-8 and project_kernel is false.
  Vec frac_neg_power(double gamma, const Vec& f,
                     bool project_kernel = false) const;
  Vec frac_neg_power_quadrature(double gamma, const Vec& f,
                                int quad_points = 200,
                                bool project_kernel = false) const;
  Vec frac_pos_power(double gamma, const Vec& f) const;  // L^{gamma} f

  /// Centered-difference gradient, one component per dimension.
  std::vector<Vec> gradient(const Vec& f) const;
  /// Riesz transform grad L^{-1/2} f.
  std::vector<Vec> riesz_apply(const Vec& f, bool project_kernel = false) const;

  const EllipticOperator& adjoint() const;

  const Vec& eigenvalues() const;
  double max_abs_eigenvalue() const;
  double min_positive_eigenvalue() const;
  double kernel_tolerance() const;
  /// Relative l2 mass of f on the (near-)kernel eigenmodes.
  double kernel_mass(const Vec& f) const;
  Vec project_out_kernel(const Vec& f) const;

  bool uses_schur_fallback() const;
  double eigenbasis_condition() const;

  /// Dense matrix of fn(L); convenient for operator-norm probes.
  Mat function_matrix(const std::function<Cplx(Cplx)>& fn) const;

 private:
  struct Cache;
  const Cache& cache() const;

  Grid grid_;
  Mat L_;
  mutable std::shared_ptr<Cache> cache_;
  mutable std::shared_ptr<EllipticOperator> adjoint_;
};

EllipticOperator assemble(const Grid& grid, const CoefficientField& A);

enum class SemigroupFamily { heat, theat, resolvent };

struct GaffneyReport {
  struct Row {
    double t = 0.0;
    double norm = 0.0;
    bool used_in_fit = false;
  };
  std::vector<Row> rows;
  double dist = 0.0;
  double fitted_c = 0.0;
  double fitted_beta = 0.0;
  double r_squared = 0.0;
  bool below_floor = false;  // every measured norm under the 1e-14 floor
  std::string note;
};

/// Measures sup over unit-norm f supported on cells E of the L2(F) norm of
/// family(t) f, then fits -log(norm) = (dist^2/(c t_eff))^beta in log-log
/// coordinates. t_eff is t for heat/theat and the resolvent parameter for
/// resolvent.
GaffneyReport gaffney_probe(const EllipticOperator& op,
                            const std::vector<int>& E,
                            const std::vector<int>& F, SemigroupFamily family,
                            const std::vector<double>& t_list);

struct LpProbeRow {
  double p = 0.0;
  double sup_norm = 0.0;
  std::vector<double> per_t;
};

/// Estimates ||e^{-tL}||_{p->p} per (p, t). Exact for p = 1 and p = inf
/// (matrix column/row sums); probe maximization otherwise.
std::vector<LpProbeRow> lp_boundedness_probe(const EllipticOperator& op,
                                             const std::vector<double>& p_list,
                                             const std::vector<double>& t_list,
                                             std::uint64_t seed = 7);

double lp_norm(const Grid& g, const Vec& f, double p);

}  // namespace tentlab

#endif  // TENTLAB_ELLIPTIC_HPP
