#ifndef TENTLAB_TENT_HPP
#define TENTLAB_TENT_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "tentlab/grid.hpp"
#include "tentlab/orlicz.hpp"

namespace tentlab {

using Cplx = std::complex<double>;

/// Log-uniform time levels with midpoint weights for dt/t.
struct TimeGrid {
  std::vector<double> levels;  // midpoints of the log-uniform partition
  double dlog = 0.0;           // per-level weight for dt/t
  double t_min = 0.0;
  double t_max = 0.0;

  int size() const { return static_cast<int>(levels.size()); }

  /// Defaults: t_min = h/4, t_max = domain length. Throws if J < 16 or the
  /// requested window violates t_min >= h/4 or t_max <= length.
  static TimeGrid log_uniform(const Grid& g, int J, double t_min = -1.0,
                              double t_max = -1.0);
};

/// Sampled function on the discrete upper half-space: values F(x, t_j).
class TentField {
 public:
  TentField(Grid grid, TimeGrid tg);

  const Grid& grid() const { return grid_; }
  const TimeGrid& timegrid() const { return tg_; }
  int levels() const { return tg_.size(); }

  Cplx at(int level, int cell) const { return vals_(level, cell); }
  Cplx& at(int level, int cell) { return vals_(level, cell); }
  const Eigen::MatrixXcd& values() const { return vals_; }
  Eigen::MatrixXcd& values() { return vals_; }

  double max_abs() const;
  int support_size() const;  // number of nonzero (level, cell) samples

  TentField& operator+=(const TentField& o);
  TentField& operator-=(const TentField& o);
  TentField& operator*=(Cplx c);

 private:
  Grid grid_;
  TimeGrid tg_;
  Eigen::MatrixXcd vals_;  // levels x cells
};

/// Cone cell lists per time level for a fixed aperture: coordinate offsets d
/// with |d| < nu * t_j in the torus metric, plus the dy dt/t^{n+1} weight.
struct ConeGeometry {
  double aperture = 1.0;
  // per level: list of coordinate offsets (dx, dy); dy unused in 1D
  std::vector<std::vector<std::array<int, 2>>> offsets;
  std::vector<double> level_weight;  // h^n * dlog / t_j^n
};

ConeGeometry make_cone(const Grid& g, const TimeGrid& tg, double aperture);

/// A_nu(F)(x) = (sum over the cone of |F|^2 dy dt/t^{n+1})^{1/2}.
Eigen::VectorXd area_function(const TentField& F, double aperture = 1.0);
Eigen::VectorXd area_function(const TentField& F, const ConeGeometry& cone);

/// L^p norm of the aperture-1 area function.
double t2p_norm(const TentField& F, double p);

/// Luxemburg norm of the aperture-1 area function.
double t_omega_norm(const TentField& F, const OrliczFunction& w);

/// Cells where every ball on the radius ladder holds at least a gamma
/// fraction of `mask`; always a subset of `mask`.
CellMask gamma_density_set(const Grid& g, const CellMask& mask, double gamma);

/// Dilation O* = {x : some ball around x holds more than (1-gamma) of O};
/// complement of the gamma-density set of the complement. Contains O.
CellMask expanded_set(const Grid& g, const CellMask& open_mask, double gamma);

struct ApertureRatioReport {
  double integral_eta = 0.0;  // sum of omega(A_eta) * h^n
  double integral_nu = 0.0;
  double ratio = 1.0;         // eta-integral over nu-integral; 1 when both 0
};

ApertureRatioReport aperture_ratio_probe(const TentField& F, double eta,
                                         double nu, const OrliczFunction& w);

/// Tent over an open cell set: per-level masks of {y : dist(y, O^c) >= t_j}.
/// For O = full grid every level is full (distance to the empty set is +inf).
std::vector<CellMask> tent_masks(const Grid& g, const TimeGrid& tg,
                                 const CellMask& open_mask);
std::vector<CellMask> tent_masks(const Grid& g, const TimeGrid& tg,
                                 const Ball& b);

/// True when every nonzero sample of F lies inside the per-level masks.
bool supported_in(const TentField& F, const std::vector<CellMask>& masks);

/// Zero out samples outside the per-level masks (returns a copy).
TentField restrict_to(const TentField& F, const std::vector<CellMask>& masks);

}  // namespace tentlab

#endif  // TENTLAB_TENT_HPP
