#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

namespace trigene {

/// Parameters of pFq(a; b; x). Denominator parameters may not be zero or a
/// negative integer.
struct HypergeomSpec {
  std::vector<double> a;
  std::vector<double> b;
  double x = 0.0;
};

/// Throws InvalidArgument on non-finite input and PoleInDenominator when a
/// denominator parameter is zero or a negative integer.
void validate(const HypergeomSpec& spec);

enum class Branch { Series, AsymptoticAlgebraic, AsymptoticExponential, BetaIntegral };

std::string_view to_string(Branch branch) noexcept;

struct EvalReport {
  double value = 0.0;
  std::size_t terms_used = 0;
  /// max |term| / |value|; the number of digits lost to cancellation is
  /// roughly log10 of this.
  double cancellation_index = 1.0;
  Branch branch = Branch::Series;
  /// Estimated relative error of `value`.
  double error_estimate = 0.0;
  /// Series was summed in double-double arithmetic.
  bool extended_precision = false;
};

/// ln Γ(x) with the sign of Γ(x). `sign == 0` marks a pole (x a non-positive
/// integer), where 1/Γ(x) == 0.
struct SignedLogGamma {
  double log_abs = 0.0;
  int sign = 1;
};

SignedLogGamma signed_lgamma(double x);

/// ln of the rising factorial (x)_n = Γ(x+n)/Γ(x). Returns -inf for x == 0,
/// n >= 1. Throws DomainError for x < 0.
double pochhammer_log(double x, std::size_t n);

inline constexpr double kDefaultSeriesTol = 1e-17;
inline constexpr std::size_t kDefaultMaxTerms = 200000;

/// Direct power series of pFq with compensated summation. Stops once three
/// consecutive terms fall below rel_tol relative to the partial sum.
/// Throws NoConvergence when max_terms is exhausted or terms overflow.
EvalReport pfq_series(const HypergeomSpec& spec, double rel_tol = kDefaultSeriesTol,
                      std::size_t max_terms = kDefaultMaxTerms);

/// Same series summed in double-double arithmetic (about 32 digits), for
/// arguments where the alternating series cancels badly.
EvalReport pfq_series_extended(const HypergeomSpec& spec, double rel_tol = 1e-33,
                               std::size_t max_terms = kDefaultMaxTerms);

inline constexpr std::size_t kDefaultAsymptoticTerms = 60;

/// Large-|z| expansion of 1F1(a; b; z).
///
/// z < 0: Γ(b)/Γ(b-a) (-z)^-a 2F0(a, a-b+1; ; -1/z), plus the recessive
/// exponential part with its real-axis weight cos(π(a-b)).
/// z > 0: Γ(b)/Γ(a) e^z z^(a-b) 2F0(b-a, 1-a; ; 1/z), plus the recessive
/// algebraic part weighted by cos(πa).
/// Each divergent 2F0 is cut at its smallest term, at most m terms.
EvalReport f11_asymptotic(double a, double b, double z,
                          std::size_t m = kDefaultAsymptoticTerms);

/// Coefficients c_0..c_m of the exponential large-z expansion of 2F2.
std::vector<double> ck_coefficients(double a1, double a2, double b1, double b2, std::size_t m);

/// Large-|z| expansion of 2F2({a1, a2}; {b1, b2}; z), structured like
/// f11_asymptotic: two 3F1-weighted algebraic terms and an exponential term
/// built on ck_coefficients. Throws DegenerateParameters when a1 - a2 is within
/// 1e-6 of an integer (the algebraic terms then have coalescing poles).
EvalReport f22_asymptotic(double a1, double a2, double b1, double b2, double z,
                          std::size_t m = kDefaultAsymptoticTerms);

/// True when some pairing of the parameters has b > a > 0, which is what
/// f22_beta_integral needs.
bool beta_integral_applicable(double a1, double a2, double b1, double b2) noexcept;

inline constexpr std::size_t kDefaultQuadratureIntervals = 400;

/// 2F2 at z < 0 as a Beta average of 1F1:
///   2F2(a1, a2; b1, b2; z) = E[1F1(a1; b1; z T)],  T ~ Beta(a2, b2 - a2),
/// with 1F1 summed after Kummer's transformation and the average taken by
/// adaptive Gauss-Kronrod quadrature (at most `max_intervals` subintervals
/// per half of [0, 1]). Every quantity is positive when b_i > a_i > 0, so
/// this stays accurate where the power series cancels down to e^z.
/// Throws InvalidArgument when z >= 0 or no pairing has b > a > 0.
EvalReport f22_beta_integral(double a1, double a2, double b1, double b2, double z,
                             std::size_t max_intervals = kDefaultQuadratureIntervals);

struct EvalPolicy {
  double series_rel_tol = kDefaultSeriesTol;
  std::size_t max_terms = kDefaultMaxTerms;
  std::size_t asymptotic_terms = kDefaultAsymptoticTerms;
  /// Series is preferred for |z| below max(this, 2 max|parameter|).
  double series_threshold = 50.0;
  /// A double-precision series whose cancellation index exceeds this is
  /// never returned.
  double cancellation_limit = 1e12;
  /// Results whose error estimate meets this are accepted without trying
  /// another route.
  double target_rel_error = 1e-13;
  /// No route reaching this raises EvaluationFailure.
  double max_rel_error = 1e-6;
};

/// Dispatcher for 1F1: series (Kummer-transformed for z < 0) or asymptotic.
EvalReport f11(double a, double b, double z, const EvalPolicy& policy = {});

/// Dispatcher for 2F2. Cancels matching numerator/denominator parameters
/// first, then tries series, asymptotic and (for z < 0) Beta-integral routes
/// in an order set by |z|, keeping the first that meets the target error.
EvalReport f22(double a1, double a2, double b1, double b2, double z,
               const EvalPolicy& policy = {});

}  // namespace trigene
