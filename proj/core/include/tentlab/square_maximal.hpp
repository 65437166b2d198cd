#ifndef TENTLAB_SQUARE_MAXIMAL_HPP
#define TENTLAB_SQUARE_MAXIMAL_HPP

#include "tentlab/elliptic.hpp"
#include "tentlab/tent.hpp"

namespace tentlab {

/// The square / maximal functionals attached to an elliptic operator.
enum class FunctionalType {
  heat_square,      // cone integral of (t^2 L)^k e^{-t^2 L} f
  poisson_grad,     // cone integral of t grad e^{-t sqrt(L)} f
  poisson_time,     // cone integral of t^2 L e^{-t sqrt(L)} f
  heat_grad,        // cone integral of t grad e^{-t^2 L} f
  vertical,         // time-only integral of (t^2 L)^k e^{-t^2 L} f at x
  maximal_heat,     // sup over the cone of ball averages of e^{-t^2 L} f
  maximal_poisson,  // same with e^{-t sqrt(L)} f
  radial_heat,      // sup over t of ball averages at x of (t^2 L)^M e^{-t^2 L} f
  radial_poisson,   // sup over t of ball averages at x of e^{-t sqrt(L)} f
};

bool is_square_kind(FunctionalType t);   // cone-integral kinds incl. vertical
bool is_maximal_kind(FunctionalType t);  // sup-based kinds

struct FunctionalKind {
  FunctionalType type = FunctionalType::heat_square;
  double beta = 1.0;  // cone / ball aperture (ignored by vertical and radial)
  int order = 1;      // k for heat_square / vertical, M for radial_heat

  static FunctionalKind heat_square(int k = 1, double aperture = 1.0);
  static FunctionalKind poisson_grad(double aperture = 1.0);
  static FunctionalKind poisson_time(double aperture = 1.0);
  static FunctionalKind heat_grad(double aperture = 1.0);
  static FunctionalKind vertical(int k = 1);
  static FunctionalKind maximal_heat(double aperture = 1.0);
  static FunctionalKind maximal_poisson(double aperture = 1.0);
  static FunctionalKind radial_heat(int M = 0);
  static FunctionalKind radial_poisson();
};

/// Kernel samples K_{t_j} f as a field on the discrete upper half-space;
/// gradient kinds store the euclidean modulus of the gradient vector.
/// Square kinds only; throws std::invalid_argument otherwise.
TentField functional_field(const EllipticOperator& op, const TimeGrid& tg,
                           const Vec& f, const FunctionalKind& kind);

/// Evaluate the functional at every grid cell. Square kinds reduce the
/// kernel field through the cone (or the vertical ray); maximal kinds take
/// the sup of ball averages, normalized by the continuum ball volume
/// c_n (beta t)^n so that levels with different t are comparable. The sup
/// over t runs over the time ladder only.
Eigen::VectorXd apply_functional(const EllipticOperator& op, const TimeGrid& tg,
                                 const Vec& f, const FunctionalKind& kind);

/// Luxemburg norm (weights h^n) of the functional output; omega(t) = t
/// recovers the plain L^1 norm of the functional.
double functional_norm(const EllipticOperator& op, const TimeGrid& tg,
                       const Vec& f, const FunctionalKind& kind,
                       const OrliczFunction& w);

}  // namespace tentlab

#endif  // TENTLAB_SQUARE_MAXIMAL_HPP
