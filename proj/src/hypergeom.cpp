#include "trigene/hypergeom.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <array>
#include <span>
#include <sstream>

#include "trigene/compensated.hpp"
#include "trigene/error.hpp"
#include "kronrod.hpp"

namespace trigene {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDoubleRoundoff = 0x1p-53;
constexpr double kDoubleDoubleRoundoff = 0x1p-104;
constexpr double kMaxLog = 709.0;
constexpr double kDegenerateGap = 1e-6;

bool is_nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

double to_double(double x) { return x; }
double to_double(DoubleDouble x) { return static_cast<double>(x); }

// cos(πx), exact at integers and half-integers.
double cos_pi(double x) {
  const double r = std::fmod(std::abs(x), 2.0);
  if (r == 0.0) return 1.0;
  if (r == 1.0) return -1.0;
  if (r == 0.5 || r == 1.5) return 0.0;
  return std::cos(M_PI * r);
}

bool near_integer(double x, double gap) { return std::abs(x - std::nearbyint(x)) < gap; }

bool nearly_equal(double x, double y) {
  return std::abs(x - y) <= 1e-13 * std::max({1.0, std::abs(x), std::abs(y)});
}

// sign * exp(log_abs), with sign == 0 for a vanishing factor.
struct LogFactor {
  double log_abs = 0.0;
  int sign = 1;
  // Sum of |pieces| that went into log_abs; exp() turns its absolute
  // roundoff into relative error.
  double magnitude = 0.0;

  LogFactor(double log0, int s) : log_abs(log0), sign(s), magnitude(std::abs(log0)) {}

  LogFactor& mul_gamma(double x) {
    const SignedLogGamma g = signed_lgamma(x);
    if (g.sign == 0) throw Error(Errc::BranchUndefined, "gamma pole in asymptotic prefactor numerator");
    log_abs += g.log_abs;
    magnitude += std::abs(g.log_abs);
    sign *= g.sign;
    return *this;
  }
  LogFactor& div_gamma(double x) {
    const SignedLogGamma g = signed_lgamma(x);
    if (g.sign == 0) {
      sign = 0;
    } else {
      log_abs -= g.log_abs;
      magnitude += std::abs(g.log_abs);
      sign *= g.sign;
    }
    return *this;
  }
  double value() const {
    if (sign == 0) return 0.0;
    if (log_abs > kMaxLog) {
      throw Error(Errc::EvaluationFailure, "asymptotic prefactor overflows double precision");
    }
    return sign * std::exp(log_abs);
  }
};

template <typename T>
EvalReport sum_series(const HypergeomSpec& spec, double rel_tol, std::size_t max_terms,
                      double roundoff) {
  validate(spec);
  if (!(rel_tol > 0.0)) throw Error(Errc::InvalidArgument, "rel_tol must be positive");
  EvalReport report;
  report.branch = Branch::Series;
  report.extended_precision = !std::is_same_v<T, double>;
  if (spec.x == 0.0) {
    report.value = 1.0;
    report.terms_used = 1;
    return report;
  }

  NeumaierSum<T> sum;
  T term(1.0);
  sum += term;
  double max_term = 1.0;
  double weighted = 1.0;  // Σ (k+1)|t_k|, bounds the accumulated rounding
  std::size_t quiet = 0;
  std::size_t k = 0;
  for (; k + 1 < max_terms; ++k) {
    const double dk = static_cast<double>(k);
    T ratio = T(spec.x) / T(dk + 1.0);
    for (double a : spec.a) ratio *= T(a) + T(dk);
    for (double b : spec.b) ratio /= T(b) + T(dk);
    term *= ratio;
    sum += term;
    const double t = std::abs(to_double(term));
    if (!std::isfinite(t)) break;
    max_term = std::max(max_term, t);
    weighted += (dk + 2.0) * t;
    if (t <= rel_tol * std::abs(to_double(sum.value()))) {
      if (++quiet == 3) break;
    } else {
      quiet = 0;
    }
  }
  const double value = to_double(sum.value());
  if (quiet < 3 || !std::isfinite(value)) {
    std::ostringstream msg;
    msg << "pFq series did not converge within " << max_terms << " terms at x = " << spec.x;
    throw Error(Errc::NoConvergence, msg.str());
  }
  report.value = value;
  report.terms_used = k + 2;
  const double mag = std::abs(value);
  report.cancellation_index = mag > 0.0 ? std::max(1.0, max_term / mag) : kInf;
  const double per_term = static_cast<double>(spec.a.size() + spec.b.size() + 2);
  report.error_estimate =
      mag > 0.0 ? roundoff * per_term * weighted / mag + rel_tol : kInf;
  return report;
}

struct TruncatedSum {
  double sum = 0.0;
  double smallest = 0.0;  // magnitude of the first omitted term
  std::size_t terms = 0;
};

// Divergent series cut just before its smallest-magnitude term among t_0..t_m.
// A series that terminates (an exactly zero term) is summed exactly.
TruncatedSum optimally_truncated(const std::vector<double>& terms) {
  TruncatedSum out;
  std::size_t cut = terms.size();
  double smallest = kInf;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (terms[k] == 0.0) {
      cut = k;
      smallest = 0.0;
      break;
    }
    const double mag = std::abs(terms[k]);
    if (k > 0 && mag < smallest) {
      smallest = mag;
      cut = k;
    }
  }
  NeumaierSum<double> acc;
  for (std::size_t k = 0; k < cut; ++k) acc += terms[k];
  out.sum = acc.value();
  out.smallest = smallest == kInf ? 0.0 : smallest;
  out.terms = cut;
  return out;
}

std::vector<double> hypergeometric_terms(std::span<const double> a, std::span<const double> b,
                                         double x, std::size_t m) {
  std::vector<double> terms;
  terms.reserve(m + 1);
  double term = 1.0;
  terms.push_back(term);
  for (std::size_t k = 0; k < m; ++k) {
    const double dk = static_cast<double>(k);
    double ratio = x / (dk + 1.0);
    for (double ai : a) ratio *= ai + dk;
    for (double bj : b) ratio /= bj + dk;
    term *= ratio;
    if (!std::isfinite(term)) break;
    terms.push_back(term);
    if (term == 0.0) break;
  }
  return terms;
}

// One weighted component of an asymptotic expansion: weight * prefactor * series.
struct Component {
  double value = 0.0;
  double error = 0.0;
  std::size_t terms = 0;
};

Component make_component(double weight, const LogFactor& prefactor, const TruncatedSum& series) {
  Component c;
  if (weight == 0.0 || prefactor.sign == 0) return c;
  const double p = weight * prefactor.value();
  c.value = p * series.sum;
  c.error = std::abs(p) * (series.smallest + kDoubleRoundoff * (1.0 + prefactor.magnitude) * std::abs(series.sum));
  c.terms = series.terms;
  return c;
}

EvalReport combine(std::span<const Component> parts, Branch branch) {
  EvalReport r;
  r.branch = branch;
  NeumaierSum<double> acc;
  double largest = 0.0;
  double error = 0.0;
  for (const Component& c : parts) {
    acc += c.value;
    largest = std::max(largest, std::abs(c.value));
    error += c.error;
    r.terms_used = std::max(r.terms_used, c.terms);
  }
  r.value = acc.value();
  if (!std::isfinite(r.value)) throw Error(Errc::BranchUndefined, "asymptotic expansion is not finite");
  r.terms_used = std::max<std::size_t>(r.terms_used, 1);
  const double mag = std::abs(r.value);
  r.cancellation_index = mag > 0.0 ? std::max(1.0, largest / mag) : kInf;
  r.error_estimate = mag > 0.0 ? error / mag + kDoubleRoundoff * r.cancellation_index : kInf;
  return r;
}

void require_nonzero_argument(double z) {
  if (z == 0.0 || !std::isfinite(z)) {
    throw Error(Errc::InvalidArgument, "asymptotic expansion needs a finite nonzero argument");
  }
}

EvalReport failed_route() {
  EvalReport r;
  r.value = std::numeric_limits<double>::quiet_NaN();
  r.error_estimate = kInf;
  r.cancellation_index = kInf;
  return r;
}

EvalReport guarded(const std::function<EvalReport()>& route) {
  try {
    return route();
  } catch (const Error& e) {
    if (is_validation_error(e.code())) throw;
    return failed_route();
  }
}

// Double-precision series, escalated to double-double when cancellation eats
// more digits than the target allows.
EvalReport series_route(const HypergeomSpec& spec, const EvalPolicy& policy) {
  EvalReport r = guarded([&] { return pfq_series(spec, policy.series_rel_tol, policy.max_terms); });
  if (r.error_estimate <= policy.target_rel_error && r.cancellation_index <= policy.cancellation_limit) {
    return r;
  }
  EvalReport ext = guarded([&] { return pfq_series_extended(spec, 1e-33, policy.max_terms); });
  if (r.cancellation_index > policy.cancellation_limit) return ext;
  return ext.error_estimate <= r.error_estimate ? ext : r;
}

using Route = std::function<EvalReport()>;

// Routes run in order until one meets the target; otherwise the best
// estimate wins, provided it is good enough to return at all.
EvalReport pick(std::initializer_list<Route> routes, const EvalPolicy& policy, const char* what, double z) {
  EvalReport best = failed_route();
  for (const Route& route : routes) {
    EvalReport r = route();
    if (!std::isfinite(r.value)) continue;
    if (!(r.error_estimate >= best.error_estimate)) best = r;
    if (best.error_estimate <= policy.target_rel_error) break;
  }
  if (!(best.error_estimate <= policy.max_rel_error) || !std::isfinite(best.value)) {
    std::ostringstream msg;
    msg << what << " at z = " << z << ": no evaluation route reached relative error "
        << policy.max_rel_error << " (best estimate " << best.error_estimate << ")";
    throw Error(Errc::EvaluationFailure, msg.str());
  }
  return best;
}

struct LogSeries {
  double log_value = 0.0;
  std::size_t terms = 0;
};

// ln sum_k (c)_k / (b)_k y^k / k! for c >= 0, b > 0, y >= 0: all terms are
// non-negative, so plain summation is accurate. Rescales to stay finite.
LogSeries positive_kummer_log(double c, double b, double y) {
  double sum = 1.0;
  double term = 1.0;
  double log_shift = 0.0;
  LogSeries out;
  for (std::size_t k = 0; k < kDefaultMaxTerms; ++k) {
    const double dk = static_cast<double>(k);
    term *= (c + dk) * y / ((b + dk) * (dk + 1.0));
    sum += term;
    if (sum > 1e250) {
      log_shift += std::log(sum);
      term /= sum;
      sum = 1.0;
    }
    if (term <= 1e-17 * sum && dk + 1.0 > y) {
      out.log_value = log_shift + std::log(sum);
      out.terms = k + 1;
      return out;
    }
  }
  throw Error(Errc::NoConvergence, "Kummer series did not converge");
}

struct BetaPairing {
  double inner_a, inner_b, outer_a, outer_b;
};

// Outer pair feeds the Beta weight and needs b > a > 0; an inner pair with
// b >= a keeps every Kummer term positive, so prefer that.
std::optional<BetaPairing> beta_pairing(double a1, double a2, double b1, double b2) {
  const std::array<BetaPairing, 4> options{{{a1, b1, a2, b2}, {a1, b2, a2, b1},
                                             {a2, b1, a1, b2}, {a2, b2, a1, b1}}};
  std::optional<BetaPairing> fallback;
  for (const BetaPairing& p : options) {
    if (!(p.outer_b > p.outer_a && p.outer_a > 0.0)) continue;
    if (p.inner_b >= p.inner_a) return p;
    if (!fallback) fallback = p;
  }
  return fallback;
}

double max_abs(std::initializer_list<double> xs) {
  double m = 0.0;
  for (double x : xs) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::string_view to_string(Branch branch) noexcept {
  switch (branch) {
    case Branch::Series: return "series";
    case Branch::AsymptoticAlgebraic: return "asymptotic-algebraic";
    case Branch::AsymptoticExponential: return "asymptotic-exponential";
    case Branch::BetaIntegral: return "beta-integral";
  }
  return "unknown";
}

void validate(const HypergeomSpec& spec) {
  if (!std::isfinite(spec.x)) throw Error(Errc::InvalidArgument, "hypergeometric argument is not finite");
  for (double a : spec.a) {
    if (!std::isfinite(a)) throw Error(Errc::InvalidArgument, "numerator parameter is not finite");
  }
  for (double b : spec.b) {
    if (!std::isfinite(b)) throw Error(Errc::InvalidArgument, "denominator parameter is not finite");
    if (is_nonpositive_integer(b)) {
      std::ostringstream msg;
      msg << "denominator parameter " << b << " is a pole of the series";
      throw Error(Errc::PoleInDenominator, msg.str());
    }
  }
}

SignedLogGamma signed_lgamma(double x) {
  if (is_nonpositive_integer(x)) return {kInf, 0};
#if defined(__GLIBC__)
  int sign = 1;
  const double value = ::lgamma_r(x, &sign);
  return {value, sign};
#else
  const int sign = (x > 0.0 || static_cast<long long>(std::floor(x)) % 2 == 0) ? 1 : -1;
  return {std::lgamma(x), sign};
#endif
}

double pochhammer_log(double x, std::size_t n) {
  if (!(x >= 0.0)) {
    std::ostringstream msg;
    msg << "rising factorial of negative argument " << x;
    throw Error(Errc::DomainError, msg.str());
  }
  if (n == 0) return 0.0;
  if (x == 0.0) return -kInf;
  // A short log-sum is more accurate than a lgamma difference when x >> n.
  if (n <= 32) {
    NeumaierSum<double> acc;
    for (std::size_t k = 0; k < n; ++k) acc += std::log(x + static_cast<double>(k));
    return acc.value();
  }
  return std::lgamma(x + static_cast<double>(n)) - std::lgamma(x);
}

EvalReport pfq_series(const HypergeomSpec& spec, double rel_tol, std::size_t max_terms) {
  return sum_series<double>(spec, rel_tol, max_terms, kDoubleRoundoff);
}

EvalReport pfq_series_extended(const HypergeomSpec& spec, double rel_tol, std::size_t max_terms) {
  return sum_series<DoubleDouble>(spec, rel_tol, max_terms, kDoubleDoubleRoundoff);
}

EvalReport f11_asymptotic(double a, double b, double z, std::size_t m) {
  validate(HypergeomSpec{{a}, {b}, z});
  require_nonzero_argument(z);
  if (m < 1) throw Error(Errc::InvalidArgument, "asymptotic expansion needs m >= 1");
  const double lz = std::log(std::abs(z));

  LogFactor alg{-a * lz, 1};
  alg.mul_gamma(b).div_gamma(b - a);
  const std::vector<double> alg_params{a, a - b + 1.0};
  const TruncatedSum alg_sum = optimally_truncated(hypergeometric_terms(alg_params, {}, -1.0 / z, m));

  LogFactor expo{z + (a - b) * lz, 1};
  expo.mul_gamma(b).div_gamma(a);
  const std::vector<double> exp_params{b - a, 1.0 - a};
  const TruncatedSum exp_sum = optimally_truncated(hypergeometric_terms(exp_params, {}, 1.0 / z, m));

  const bool negative = z < 0.0;
  const Component parts[] = {
      make_component(negative ? 1.0 : cos_pi(a), alg, alg_sum),
      make_component(negative ? cos_pi(a - b) : 1.0, expo, exp_sum),
  };
  return combine(parts, negative ? Branch::AsymptoticAlgebraic : Branch::AsymptoticExponential);
}

std::vector<double> ck_coefficients(double a1, double a2, double b1, double b2, std::size_t m) {
  const double A = a1 + a2;
  const double B = b1 + b2;
  std::vector<double> c;
  c.reserve(m + 1);
  c.push_back(1.0);
  if (m == 0) return c;
  c.push_back((A - 1.0) * (A - B) + b1 * b2 - a1 * a2);
  const double constant = 1.0 - B + a1 * (2.0 + a1) + a2 * (2.0 + a2) - A * B + a1 * a2 + b1 * b2;
  const double linear = 2.0 * B - 3.0 * (A + 1.0);
  for (std::size_t k = 2; k <= m; ++k) {
    const double dk = static_cast<double>(k);
    const double lead = constant + linear * dk + 2.0 * dk * dk;
    const double back = (dk - A + b1 - 1.0) * (dk - A + b2 - 1.0) * (dk - A + B - 2.0);
    c.push_back((lead * c[k - 1] - back * c[k - 2]) / dk);
  }
  return c;
}

EvalReport f22_asymptotic(double a1, double a2, double b1, double b2, double z, std::size_t m) {
  validate(HypergeomSpec{{a1, a2}, {b1, b2}, z});
  require_nonzero_argument(z);
  if (m < 1) throw Error(Errc::InvalidArgument, "asymptotic expansion needs m >= 1");

  if (a2 == b2) return f11_asymptotic(a1, b1, z, m);
  if (a2 == b1) return f11_asymptotic(a1, b2, z, m);
  if (a1 == b2) return f11_asymptotic(a2, b1, z, m);
  if (a1 == b1) return f11_asymptotic(a2, b2, z, m);

  const bool negative = z < 0.0;
  const bool degenerate = near_integer(a1 - a2, kDegenerateGap);
  if (degenerate && negative) {
    std::ostringstream msg;
    msg << "a1 - a2 = " << a1 - a2 << " is too close to an integer for the algebraic expansion";
    throw Error(Errc::DegenerateParameters, msg.str());
  }
  const double lz = std::log(std::abs(z));

  std::vector<Component> parts;
  if (!degenerate) {
    for (const auto& [ai, aj] : {std::pair{a1, a2}, std::pair{a2, a1}}) {
      LogFactor pref{-ai * lz, 1};
      pref.mul_gamma(b1).mul_gamma(b2).mul_gamma(aj - ai);
      pref.div_gamma(aj).div_gamma(b1 - ai).div_gamma(b2 - ai);
      const std::vector<double> num{ai, ai - b1 + 1.0, ai - b2 + 1.0};
      const std::vector<double> den{ai - aj + 1.0};
      const TruncatedSum sum = optimally_truncated(hypergeometric_terms(num, den, -1.0 / z, m));
      parts.push_back(make_component(negative ? 1.0 : cos_pi(ai), pref, sum));
    }
  }

  const double A = a1 + a2;
  const double B = b1 + b2;
  LogFactor expo{z + (A - B) * lz, 1};
  expo.mul_gamma(b1).mul_gamma(b2).div_gamma(a1).div_gamma(a2);
  const std::vector<double> c = ck_coefficients(a1, a2, b1, b2, m);
  std::vector<double> terms;
  terms.reserve(c.size());
  double power = 1.0;
  for (double ck : c) {
    const double t = ck * power;
    if (!std::isfinite(t)) break;
    terms.push_back(t);
    power /= z;
  }
  parts.push_back(make_component(negative ? cos_pi(A - B) : 1.0, expo, optimally_truncated(terms)));

  return combine(parts, negative ? Branch::AsymptoticAlgebraic : Branch::AsymptoticExponential);
}

bool beta_integral_applicable(double a1, double a2, double b1, double b2) noexcept {
  return beta_pairing(a1, a2, b1, b2).has_value();
}

EvalReport f22_beta_integral(double a1, double a2, double b1, double b2, double z, std::size_t max_intervals) {
  validate(HypergeomSpec{{a1, a2}, {b1, b2}, z});
  if (!(z < 0.0)) throw Error(Errc::InvalidArgument, "Beta-integral route needs z < 0");
  const std::optional<BetaPairing> pairing = beta_pairing(a1, a2, b1, b2);
  if (!pairing) throw Error(Errc::InvalidArgument, "Beta-integral route needs a pairing with b > a > 0");
  const BetaPairing& pr = *pairing;
  // T ~ Beta(p, q) from the outer pair.
  const double p = pr.outer_a;
  const double q = pr.outer_b - pr.outer_a;
  const double log_beta = std::lgamma(p) + std::lgamma(q) - std::lgamma(p + q);
  const double log_scale = std::abs(std::lgamma(p)) + std::abs(std::lgamma(q)) + std::abs(std::lgamma(p + q));

  double inner_error = 0.0;
  double index = 1.0;
  std::size_t terms = 0;
  double exponent_size = 0.0;
  // ln 1F1(inner_a; inner_b; z t) through Kummer's transformation.
  auto log_inner = [&](double t) {
    const double x = z * t;
    double log_sum;
    if (pr.inner_b >= pr.inner_a) {
      const LogSeries ls = positive_kummer_log(pr.inner_b - pr.inner_a, pr.inner_b, -x);
      log_sum = ls.log_value;
      terms += ls.terms;
    } else {
      const EvalReport r = pfq_series(HypergeomSpec{{pr.inner_b - pr.inner_a}, {pr.inner_b}, -x});
      if (!(r.value > 0.0)) throw Error(Errc::EvaluationFailure, "Kummer-transformed series lost its sign");
      log_sum = std::log(r.value);
      inner_error = std::max(inner_error, r.error_estimate);
      index = std::max(index, r.cancellation_index);
      terms += r.terms_used;
    }
    exponent_size = std::max(exponent_size, std::abs(x) + std::abs(log_sum));
    return x + log_sum;
  };

  // The density t^(p-1) (1-t)^(q-1) / B(p, q) times the 1F1, in logs. The
  // right half works in h = 1 - t so nothing is lost near t = 1.
  auto left = [&](double t) {
    return std::exp((p - 1.0) * std::log(t) + (q - 1.0) * std::log1p(-t) + log_inner(t) - log_beta);
  };
  auto right = [&](double h) {
    return std::exp((p - 1.0) * std::log1p(-h) + (q - 1.0) * std::log(h) + log_inner(1.0 - h) - log_beta);
  };
  // Near an endpoint with shape < 1 the density is singular; cover it with
  // dyadic shells, each smooth enough for Gauss-Kronrod, until the rest of
  // the integrand is constant to roundoff and the sliver integrates exactly.
  const double log_slope = std::abs(z) + std::abs(p - 1.0) + std::abs(q - 1.0) + 1.0;
  constexpr double kQuadTol = 1e-14;
  double quad_error = 0.0;
  auto half_integral = [&](auto& f, double shape, double endpoint_log_value) {
    NeumaierSum<double> total;
    if (shape >= 1.0) {
      const detail::QuadratureResult r = detail::integrate(f, 0.0, 0.5, kQuadTol, max_intervals);
      quad_error += r.error;
      total += r.value;
      return total.value();
    }
    double outer = 0.5;
    while (outer * log_slope > 1e-17) {
      const detail::QuadratureResult r = detail::integrate(f, 0.5 * outer, outer, kQuadTol, max_intervals);
      quad_error += r.error;
      total += r.value;
      outer *= 0.5;
    }
    // integral_0^outer x^(shape-1) dx times the integrand's endpoint value.
    total += std::exp(endpoint_log_value + shape * std::log(outer) - std::log(shape) - log_beta);
    return total.value();
  };
  const double lo = half_integral(left, p, 0.0);
  const double hi = half_integral(right, q, log_inner(1.0));

  EvalReport out;
  out.branch = Branch::BetaIntegral;
  out.value = lo + hi;
  out.terms_used = terms;
  out.cancellation_index = index;
  if (!std::isfinite(out.value) || !(out.value > 0.0)) {
    throw Error(Errc::EvaluationFailure, "Beta-integral quadrature produced a non-positive value");
  }
  // Each integrand value is exp() of a sum whose pieces reach exponent_size
  // and log_scale, so their absolute roundoff becomes relative error.
  out.error_estimate = quad_error / out.value + inner_error +
                       kDoubleRoundoff * (4.0 + exponent_size + log_scale);
  return out;
}

EvalReport f11(double a, double b, double z, const EvalPolicy& policy) {
  validate(HypergeomSpec{{a}, {b}, z});
  if (z == 0.0) return EvalReport{1.0, 1, 1.0, Branch::Series, 0.0, false};
  if (nearly_equal(a, b)) {
    if (std::abs(z) > kMaxLog) throw Error(Errc::EvaluationFailure, "exp(z) overflows");
    return EvalReport{std::exp(z), 1, 1.0, Branch::Series, kDoubleRoundoff, false};
  }

  // Kummer's transformation turns the alternating series at z < 0 into one
  // with eventually positive terms: 1F1(a; b; z) = e^z 1F1(b-a; b; -z).
  Route series = [&]() -> EvalReport {
    if (z > 0.0) return series_route(HypergeomSpec{{a}, {b}, z}, policy);
    EvalReport r = series_route(HypergeomSpec{{b - a}, {b}, -z}, policy);
    if (!std::isfinite(r.value)) return r;
    r.value *= std::exp(z);
    r.error_estimate += kDoubleRoundoff * (1.0 + std::abs(z));
    if (!std::isfinite(r.value) || (r.value == 0.0)) return failed_route();
    return r;
  };
  Route asymptotic = [&] { return guarded([&] { return f11_asymptotic(a, b, z, policy.asymptotic_terms); }); };

  const double threshold = std::max(policy.series_threshold, 2.0 * max_abs({a, b}));
  if (std::abs(z) < threshold) return pick({series, asymptotic}, policy, "1F1", z);
  return pick({asymptotic, series}, policy, "1F1", z);
}

EvalReport f22(double a1, double a2, double b1, double b2, double z, const EvalPolicy& policy) {
  validate(HypergeomSpec{{a1, a2}, {b1, b2}, z});
  if (z == 0.0) return EvalReport{1.0, 1, 1.0, Branch::Series, 0.0, false};

  if (nearly_equal(a2, b2)) return f11(a1, b1, z, policy);
  if (nearly_equal(a2, b1)) return f11(a1, b2, z, policy);
  if (nearly_equal(a1, b2)) return f11(a2, b1, z, policy);
  if (nearly_equal(a1, b1)) return f11(a2, b2, z, policy);

  const HypergeomSpec spec{{a1, a2}, {b1, b2}, z};
  Route series = [&] { return series_route(spec, policy); };
  const bool degenerate = z < 0.0 && near_integer(a1 - a2, kDegenerateGap);
  Route asymptotic = [&] {
    if (!degenerate) {
      return guarded([&] { return f22_asymptotic(a1, a2, b1, b2, z, policy.asymptotic_terms); });
    }
    // Coalescing poles: average the expansion at a1 +- eps. The bias is
    // O(eps^2 f''), estimated from the spread of the two sides.
    const double eps = kDegenerateGap * 10.0 * std::max(1.0, std::abs(a1));
    EvalReport lo = guarded([&] { return f22_asymptotic(a1 - eps, a2, b1, b2, z, policy.asymptotic_terms); });
    EvalReport hi = guarded([&] { return f22_asymptotic(a1 + eps, a2, b1, b2, z, policy.asymptotic_terms); });
    if (!std::isfinite(lo.value) || !std::isfinite(hi.value)) return failed_route();
    EvalReport r = hi;
    r.value = 0.5 * (lo.value + hi.value);
    r.terms_used = lo.terms_used + hi.terms_used;
    r.cancellation_index = std::max(lo.cancellation_index, hi.cancellation_index);
    r.error_estimate = std::max(lo.error_estimate, hi.error_estimate) +
                       eps * std::abs(hi.value - lo.value) / std::abs(r.value);
    return r;
  };
  Route integral = [&] {
    if (!(z < 0.0) || !beta_integral_applicable(a1, a2, b1, b2)) return failed_route();
    return guarded([&] { return f22_beta_integral(a1, a2, b1, b2, z); });
  };

  const double threshold = std::max(policy.series_threshold, 2.0 * max_abs({a1, a2, b1, b2}));
  if (std::abs(z) < threshold) return pick({series, integral, asymptotic}, policy, "2F2", z);
  return pick({asymptotic, integral, series}, policy, "2F2", z);
}

}  // namespace trigene
