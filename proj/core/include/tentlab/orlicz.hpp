#ifndef TENTLAB_ORLICZ_HPP
#define TENTLAB_ORLICZ_HPP

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace tentlab {

/// Closed-form families of admissible growth functions.
/// power:      omega(t) = t^p,               p in (0,1]
/// power_log:  omega(t) = t^p * ln(shift+t), p in (0,1]
/// The power_log family with shift >= e^2/(something) stays concave for the
/// parameter ranges used here; verify_assumption_a() checks it on samples.
enum class OmegaFamily { power, power_log, tabulated_inverse };

struct TypeIndexReport {
  double p_strict_lower = 0.0;  // empirical strictly-lower-type exponent
  double p_minus = 0.0;         // critical lower type
  double p_plus = 0.0;          // critical upper type
  bool consistent = false;      // estimates within tolerance of declarations
  double tolerance = 0.02;
};

struct SampleSpec {
  double range_lo = 1e-6;
  double range_hi = 1e6;
  int grid_points = 64;  // per axis, log-spaced
};

/// A concave growth function omega with declared type indices.
class OrliczFunction {
 public:
  OrliczFunction() = default;  // omega(t) = t

  static OrliczFunction power(double p);
  static OrliczFunction power_log(double p, double a, double shift);
  /// omega-tilde = v^{-1} for v(s) = source.inverse(s) * s^{1/q - 1/p_source};
  /// used by the index-shift transform below.
  static OrliczFunction inverse_of(std::function<double(double)> v,
                                   double declared_pw, double declared_pw_plus);

  double operator()(double t) const { return eval(t); }
  double eval(double t) const;          // throws std::domain_error if t <= 0
  double inverse(double y, double tol = 1e-12) const;  // monotone bisection

  OmegaFamily family() const { return family_; }
  double p() const { return p_; }
  double log_coeff() const { return a_; }
  double log_shift() const { return shift_; }

  double declared_pw() const { return declared_pw_; }
  double declared_pw_plus() const { return declared_pw_plus_; }
  double declared_pw_tilde() const { return declared_pw_tilde_; }
  void set_declared_pw_tilde(double v) { declared_pw_tilde_ = v; }

  double t_max() const { return t_max_; }

 private:
  OmegaFamily family_ = OmegaFamily::power;
  double p_ = 1.0;
  double a_ = 1.0;      // log coefficient (power_log)
  double shift_ = 0.0;  // log shift (power_log)
  std::function<double(double)> v_;  // tabulated_inverse only
  double declared_pw_ = 1.0;
  double declared_pw_plus_ = 1.0;
  double declared_pw_tilde_ = 1.0;
  double t_max_ = 1e15;
};

double eval_omega(const OrliczFunction& w, double t);
double inverse_omega(const OrliczFunction& w, double y, double tol = 1e-12);

/// rho(t) = t^{-1} / omega^{-1}(t^{-1}), the companion growth function.
double rho(const OrliczFunction& w, double t);

/// Companion function as a reusable evaluator.
class GrowthFunction {
 public:
  explicit GrowthFunction(OrliczFunction source) : source_(std::move(source)) {}
  double operator()(double t) const { return rho(source_, t); }
  const OrliczFunction& source() const { return source_; }

 private:
  OrliczFunction source_;
};

/// Empirical type indices from log-slope scans of an arbitrary positive
/// monotone function; used both for omega and for rho (index duality check).
TypeIndexReport estimate_type_indices(const std::function<double(double)>& f,
                                      const SampleSpec& spec);
TypeIndexReport estimate_type_indices(const OrliczFunction& w,
                                      const SampleSpec& spec = {});

/// Luxemburg norm of a nonnegative sampled field:
/// inf{ lambda > 0 : sum_i weights[i] * omega(values[i]/lambda) <= 1 }.
double luxemburg_norm(std::span<const double> values,
                      std::span<const double> weights, const OrliczFunction& w,
                      double tol = 1e-12);

struct PropertyCheck {
  bool pass = false;
  double worst_margin = 0.0;  // >= 0 means pass; most negative violation else
};

struct AssumptionAReport {
  PropertyCheck monotone;
  PropertyCheck concave;
  PropertyCheck subadditive;
  PropertyCheck lower_type;  // strict lower type p_omega
  PropertyCheck upper_type;  // upper type 1
  bool pass() const {
    return monotone.pass && concave.pass && subadditive.pass &&
           lower_type.pass && upper_type.pass;
  }
};

AssumptionAReport verify_assumption_a(const OrliczFunction& w,
                                      const SampleSpec& spec = {});

struct AssumptionBResult {
  OrliczFunction omega_tilde;
  double predicted_pw;       // = q
  double predicted_pw_plus;  // = 1/(1/pw_plus + 1/q - 1/pw)
  bool v_convex = false;
  std::string diagnostic;
};

/// Index-shift transform: v(t) = omega^{-1}(t) t^{1/q - 1/p_omega},
/// omega-tilde = v^{-1}, rho-tilde(t) = rho(t) t^{-1/p_omega + 1/q}.
/// Throws std::invalid_argument for q outside [p_omega, 1] or non-convex v.
AssumptionBResult assumption_b_transform(const OrliczFunction& w, double q);

double rho_tilde(const OrliczFunction& w, double q, double t);

}  // namespace tentlab

#endif  // TENTLAB_ORLICZ_HPP
