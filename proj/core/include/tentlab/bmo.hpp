#ifndef TENTLAB_BMO_HPP
#define TENTLAB_BMO_HPP

#include "tentlab/square_maximal.hpp"

namespace tentlab {

/// Dyadic radius ladder {2h, 4h, ..., <= L/2} used to sample the sup over
/// balls; grid-centered balls only (documented sampling bias).
std::vector<double> dyadic_radius_ladder(const Grid& g);

enum class BmoVariant { semigroup, resolvent };

struct BmoReport {
  struct Row {
    int center = 0;
    double radius = 0.0;
    double value = 0.0;  // normalized oscillation on that ball
  };
  std::vector<Row> rows;
  double norm = 0.0;  // sup of the table
  BmoVariant variant = BmoVariant::semigroup;
  double q = 2.0;
  int M = 1;
};

/// sup over sampled balls B of
/// (1/rho(|B|)) [ (1/|B|) sum_B |(I - e^{-r_B^2 L})^M f|^q h^n ]^{1/q};
/// pass the adjoint operator to measure the dual-side norm.
BmoReport bmo_norm(const EllipticOperator& op, const Vec& f,
                   const OrliczFunction& w, double q, int M,
                   const std::vector<double>& radii = {});

/// Same with the resolvent cancellation (I - (I + r_B^2 L)^{-1})^M.
BmoReport bmo_resolvent_norm(const EllipticOperator& op, const Vec& f,
                             const OrliczFunction& w, double q, int M,
                             const std::vector<double>& radii = {});

struct CarlesonReport {
  struct Row {
    int center = 0;
    double radius = 0.0;
    double energy = 0.0;  // tent mass of |(t^2 L)^M e^{-t^2 L} f|^2 dx dt/t
    double value = 0.0;   // energy / (|B| rho(|B|)^2)
  };
  std::vector<Row> rows;
  double norm = 0.0;
  int M = 1;
};

/// rho-weighted Carleson norm of the square-function measure of f.
CarlesonReport carleson_norm(const EllipticOperator& op, const TimeGrid& tg,
                             const Vec& f, const OrliczFunction& w, int M,
                             const std::vector<double>& radii = {});

/// Normalizer with int_0^inf t^{2(M+1)} e^{-2t^2} dt/t = 1 / pairing_normalizer;
/// closed form 2^{M+2} / M!. Throws for M < 1.
double pairing_normalizer(int M);

struct PairingResult {
  Cplx quadrature{0.0, 0.0};  // the half-space bilinear form
  Cplx direct{0.0, 0.0};      // plain inner product sum f conj(g) h^n
};

/// Half-space realization of <f, g>:
/// C~_M sum_j sum_x (t^2 L*)^M e^{-t^2 L*} f(x) conj(t^2 L e^{-t^2 L} g(x))
/// h^n dlog, against the direct inner product.
PairingResult duality_pairing(const EllipticOperator& op, const TimeGrid& tg,
                              const Vec& f_bmo, const Vec& g, int M);

struct JohnNirenbergReport {
  std::vector<std::pair<double, double>> norms;  // (q, bmo norm)
  double max_ratio = 1.0;  // max pairwise ratio; 1 when all norms vanish
};

/// q-independence probe: the same BMO norm across a q ladder.
JohnNirenbergReport john_nirenberg_probe(const EllipticOperator& op,
                                         const Vec& f, const OrliczFunction& w,
                                         int M,
                                         const std::vector<double>& q_list);

}  // namespace tentlab

#endif  // TENTLAB_BMO_HPP
