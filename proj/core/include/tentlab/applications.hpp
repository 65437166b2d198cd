#ifndef TENTLAB_APPLICATIONS_HPP
#define TENTLAB_APPLICATIONS_HPP

#include "tentlab/hardy.hpp"

namespace tentlab {

/// Operator handle for the off-diagonal probes: returns the pointwise
/// modulus |T f| so vector-valued operators (e.g. the Riesz transform)
/// fit the same interface.
using OperatorHandle = std::function<Eigen::VectorXd(const Vec&)>;

OperatorHandle identity_handle();
OperatorHandle riesz_handle(const EllipticOperator& op);
OperatorHandle g_function_handle(const EllipticOperator& op,
                                 const TimeGrid& tg);
OperatorHandle frac_neg_handle(const EllipticOperator& op, double gamma);

struct OperatorConditionReport {
  struct Row {
    double t = 0.0;
    double ratio = 0.0;  // t / dist(E,F)^2
    double norm = 0.0;   // worst L^p(F) norm over unit-L^p(E) probes
  };
  std::vector<Row> rows;
  double dist = 0.0;
  double fitted_exponent = 0.0;  // slope of log norm against log(t/d^2)
  double r_squared = 0.0;
  bool degenerate = false;  // flat response (e.g. M = 0) or zero norms
};

/// Measures ||T (I - e^{-tL})^M f||_{L^p(F)} over probes supported in E
/// (cell deltas plus seeded random data, normalized in L^p(E)) and fits
/// the decay exponent in t / dist(E,F)^2.
OperatorConditionReport offdiagonal_condition_probe(
    const EllipticOperator& op, const OperatorHandle& T, double p, int M,
    const std::vector<int>& E, const std::vector<int>& F,
    const std::vector<double>& t_list, std::uint64_t seed = 11);

struct RieszRatioRow {
  double target = 0.0;  // Luxemburg norm of |grad L^{-1/2} f|
  double source = 0.0;  // Hardy norm of f
  double ratio = 0.0;
  bool skipped = false;  // zero fixture
};

/// Riesz-transform boundedness probe on a fixture list.
std::vector<RieszRatioRow> riesz_hardy_probe(const EllipticOperator& op,
                                             const TimeGrid& tg,
                                             const std::vector<Vec>& fixtures,
                                             const OrliczFunction& w);

struct FracIntegralReport {
  double target_norm = 0.0;  // Hardy norm of L^{-gamma} f under the
                             // index-shifted growth function
  double source_norm = 0.0;
  double ratio = 0.0;
  OrliczFunction omega_tilde;
};

/// Fractional-power mapping probe. Enforces the index relation
/// n (1/p_w - 1/q) = 2 gamma to 1e-10 and runs the growth-function
/// transform for (w, q) before measuring both norms.
FracIntegralReport frac_integral_probe(const EllipticOperator& op,
                                       const TimeGrid& tg, const Vec& f,
                                       const OrliczFunction& w, double gamma,
                                       double q);

struct ClassicalAtomCert {
  bool support = false;
  double l2_norm = 0.0;
  double bound = 0.0;   // |B|^{-1/2} rho(|B|)^{-1}
  double margin = 0.0;  // (bound (1+slack) - l2) / bound
  double mean_abs = 0.0;
  bool mean_ok = false;
  bool degenerate = false;  // zero function: vacuous pass
  double slack = 0.1;
  bool pass() const {
    return degenerate || (support && margin >= 0.0 && mean_ok);
  }
};

/// Support / size / cancellation certificate for one classical atom
/// candidate.
ClassicalAtomCert verify_classical_atom(const Grid& g, const Vec& b,
                                        const Ball& B, const OrliczFunction& w,
                                        double slack = 0.1);

struct ClassicalPiece {
  Vec values;
  Ball ball;
  int k = 0;               // annulus generation (ball radius 2^k r_B)
  bool telescoped = false;  // a coarse-mean correction piece
  double constant = 0.0;    // exact multiple making values/constant an atom
};

struct ClassicalDecomposition {
  std::vector<ClassicalPiece> pieces;
  double residual = 0.0;        // relative l2 defect of the rearrangement
  double total_mean_abs = 0.0;  // |sum v h^n| before construction
};

/// Annulus decomposition of a mean-zero v around the ball B: localized
/// pieces v chi_k - m_k chibar_k plus telescoped coarse-mean corrections,
/// where chibar_k is the L^1-normalized indicator of 2^k B. The
/// rearrangement is exact when the total mean vanishes; a total mean above
/// 1e-8 |v|_2 aborts.
ClassicalDecomposition classical_atom_construct(const Grid& g, const Vec& v,
                                                const Ball& B,
                                                const OrliczFunction& w);

/// Size value of a given (piece, ball) family:
/// inf{ lam > 0 : sum |B_j| omega(|b_j|_2 / (lam |B_j|^{1/2})) <= 1 }.
double classical_hardy_value(
    const std::vector<std::pair<double, double>>& l2_and_measure,
    const OrliczFunction& w, double tol = 1e-12);
double classical_hardy_value(const Grid& g,
                             const std::vector<ClassicalPiece>& pieces,
                             const OrliczFunction& w, double tol = 1e-12);

struct EmbeddingReport {
  std::vector<double> molecule_mean_abs;
  double classical_value = 0.0;  // value of the molecular pieces as a
                                 // classical decomposition
  double hardy = 0.0;
  double ratio = 0.0;
};

/// Compares the classical atomic size of the molecular pieces of f with
/// its operator-adapted Hardy norm. Requires p_w > n/(n+1).
EmbeddingReport embedding_probe(const EllipticOperator& op, const TimeGrid& tg,
                                const Vec& f, const OrliczFunction& w);

}  // namespace tentlab

#endif  // TENTLAB_APPLICATIONS_HPP
