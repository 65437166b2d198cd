#ifndef TENTLAB_HARDY_HPP
#define TENTLAB_HARDY_HPP

#include <optional>

#include "tentlab/square_maximal.hpp"
#include "tentlab/tent_atoms.hpp"

namespace tentlab {

/// Orlicz-Hardy norm: Luxemburg norm of the cone square function of the
/// heat kernel t^2 L e^{-t^2 L} f. omega(t) = t recovers the classical
/// L^1-of-square-function norm.
double hardy_norm(const EllipticOperator& op, const TimeGrid& tg, const Vec& f,
                  const OrliczFunction& w);

/// Normalizer with int_0^inf t^{2(M+2)} e^{-2t^2} dt/t = 1 / heat_normalizer:
/// closed form 2^{M+3} / (M+1)!. Throws for M < 1.
double heat_normalizer(int M);

/// Synthesis operator: C_M * sum_j (t_j^2 L)^{M+1} e^{-t_j^2 L} F(., t_j) dlog.
Vec synthesis_apply(const EllipticOperator& op, const TentField& F, int M);

/// Relative L2 defect of the reproducing identity
/// f ~ C_M int (t^2 L)^{M+2} e^{-2 t^2 L} f dt/t over the time ladder.
/// Kernel modes are not reproduced; feed mean-zero data or expect a large
/// residual.
double calderon_residual(const EllipticOperator& op, const TimeGrid& tg,
                         const Vec& f, int M);

struct MoleculeCertRow {
  int k = 0;       // power of the scaled inverse (r_B^{-2} L^{-1})^k
  int j = 0;       // annulus index; U_0 = B, U_j = 2^j B \ 2^{j-1} B
  double q = 2.0;
  double norm = 0.0;   // measured L^q norm on the annulus
  double bound = 0.0;  // 2^{-j eps} |2^j B|^{1/q - 1} rho(|2^j B|)^{-1}
  double ratio = 0.0;
  bool vacuous = false;  // annulus empty after the torus wrap
};

struct MoleculeCertificate {
  std::vector<MoleculeCertRow> rows;
  int j_max = 0;
  double slack = 0.1;
  double worst_ratio = 0.0;  // over non-vacuous rows
  bool pass() const { return worst_ratio <= 1.0 + slack; }
};

/// Full (k, j, q) certificate table for a candidate molecule. The inverse
/// L^{-1} is the spectral inverse with kernel modes projected out.
MoleculeCertificate verify_molecule(const EllipticOperator& op, const Vec& alpha,
                                    const Ball& B, const OrliczFunction& w,
                                    const std::vector<double>& q_list, int M,
                                    double eps, double slack = 0.1);

struct MolecularDecomposition {
  std::vector<double> lambdas;
  std::vector<Vec> molecules;
  std::vector<Ball> balls;
  double lambda_value = 0.0;  // carried over from the tent decomposition
  int M = 1;
  double eps = 1.0;
  double l2_residual = 0.0;   // |f - sum lambda alpha|_2 / |f|_2
  std::vector<std::pair<double, double>> lp_residuals;  // (p, relative)
  struct TailRow {
    int kept = 0;
    double hardy_tail = 0.0;
    double l2_tail = 0.0;
  };
  std::vector<TailRow> tails;
};

/// Pipeline: tent field of t^2 L e^{-t^2 L} f -> tent-space atomic
/// decomposition -> each atom mapped through the synthesis operator, with
/// the coefficients carried over unchanged. Defaults (overridable):
/// M = floor((n/2)(1/p_w - 1/2)) + 1, eps = n (1/p_w - 1/p_w_plus) + 1;
/// explicit values below the admissibility thresholds are rejected.
MolecularDecomposition molecular_decompose(const EllipticOperator& op,
                                           const TimeGrid& tg, const Vec& f,
                                           const OrliczFunction& w,
                                           std::optional<int> M = {},
                                           std::optional<double> eps = {},
                                           double gamma = 0.75);

/// Ratio of int omega(|lambda| S alpha) dx to |B| omega(|lambda|/(|B| rho(|B|))),
/// the empirical constant of the molecule-to-Hardy-space norm bound.
double molecule_norm_bound_probe(const EllipticOperator& op, const TimeGrid& tg,
                                 const Vec& alpha, const Ball& B, double lambda,
                                 const OrliczFunction& w);

}  // namespace tentlab

#endif  // TENTLAB_HARDY_HPP
