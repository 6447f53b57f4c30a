#include "trigene/distribution.hpp"

#include <cmath>
#include <sstream>

#include "trigene/compensated.hpp"
#include "trigene/error.hpp"

namespace trigene {

namespace {

constexpr double kClampFloor = -1e-14;
constexpr double kBreakdownFloor = -1e-10;

void check_probability(double p, std::size_t n) {
  if (!std::isfinite(p) || p < kBreakdownFloor) {
    std::ostringstream msg;
    msg << "p_" << n << " = " << p << " signals numerical breakdown";
    throw Error(Errc::NegativeProbability, msg.str());
  }
}

// True when the active state is unreachable and all mass sits at n = 0.
bool point_mass_at_zero(const RateSet& rates) {
  if (rates.nu == 0.0) return true;
  return occupancies(rates).gamma2 == 0.0;
}

double log_power_over_factorial(double nu, std::size_t n) {
  if (n == 0) return 0.0;
  return static_cast<double>(n) * std::log(nu) - std::lgamma(static_cast<double>(n) + 1.0);
}

void check_options(const TruncationOptions& options) {
  if (!(options.tail_bound > 0.0 && options.tail_bound <= 1e-2)) {
    throw Error(Errc::InvalidArgument, "tail_bound must lie in (0, 1e-2]");
  }
  if (options.hard_cap < 8) throw Error(Errc::InvalidArgument, "hard_cap must be at least 8");
}

template <typename Pn>
Distribution truncate_adaptively(Pn&& pn, const TruncationOptions& options) {
  Distribution d;
  NeumaierSum<double> cumulative;
  for (std::size_t n = 0; n <= options.hard_cap; ++n) {
    double p = pn(n);
    if (p < 0.0) {
      if (p < kClampFloor) {
        std::ostringstream msg;
        msg << "p_" << n << " = " << p << " is negative beyond roundoff";
        throw Error(Errc::NegativeProbability, msg.str());
      }
      p = 0.0;
    }
    d.probs.push_back(p);
    cumulative += p;
    if (cumulative.value() >= 1.0 - options.tail_bound && p < options.tail_bound / 100.0) {
      d.n_max = n;
      d.tail_mass_bound = std::max(0.0, 1.0 - cumulative.value());
      return d;
    }
  }
  std::ostringstream msg;
  msg << "distribution did not reach tail bound " << options.tail_bound << " within "
      << options.hard_cap << " terms";
  throw Error(Errc::TruncationFailure, msg.str());
}

Distribution point_mass(ModelKind kind, const RateSet& rates) {
  Distribution d;
  d.probs = {1.0};
  d.model = kind;
  d.rates = rates;
  return d;
}

RateSet two_state_snapshot(const TwoStateParams& params) {
  RateSet r;
  r.k2_plus = params.k_plus;
  r.k2_minus = params.k_minus;
  r.nu = params.nu;
  r.rescaled = true;
  return r;
}

}  // namespace

std::string_view to_string(ModelKind kind) noexcept {
  return kind == ModelKind::ThreeState ? "three-state" : "two-state";
}

double Distribution::total() const {
  NeumaierSum<double> s;
  for (double p : probs) s += p;
  return s.value();
}

double Distribution::mean() const {
  NeumaierSum<double> s;
  for (std::size_t n = 0; n < probs.size(); ++n) s += static_cast<double>(n) * probs[n];
  return s.value();
}

double pn_three_state(const RateSet& rates, std::size_t n, const EvalPolicy& policy) {
  require_rescaled(rates);
  if (point_mass_at_zero(rates)) return n == 0 ? 1.0 : 0.0;

  const DerivedConstants c = derived_constants(rates);
  const double log_prefactor = pochhammer_log(c.K2_minus, n) + pochhammer_log(c.K2_plus, n) -
                               pochhammer_log(c.K1_minus, n) - pochhammer_log(c.K1_plus, n) +
                               log_power_over_factorial(rates.nu, n);
  const double dn = static_cast<double>(n);
  const EvalReport f = f22(c.K2_minus + dn, c.K2_plus + dn, c.K1_minus + dn, c.K1_plus + dn,
                           -rates.nu, policy);
  const double p = std::exp(log_prefactor) * f.value;
  check_probability(p, n);
  return p;
}

double pn_two_state(double k_plus, double k_minus, double nu, std::size_t n,
                    const EvalPolicy& policy) {
  const RateSet snapshot = two_state_snapshot({k_plus, k_minus, nu});
  validate(snapshot);
  if (nu == 0.0 || k_plus == 0.0) return n == 0 ? 1.0 : 0.0;

  const double switching = k_plus + k_minus;
  const double log_prefactor = pochhammer_log(k_plus, n) - pochhammer_log(switching, n) +
                               log_power_over_factorial(nu, n);
  const double dn = static_cast<double>(n);
  const EvalReport f = f11(k_plus + dn, switching + dn, -nu, policy);
  const double p = std::exp(log_prefactor) * f.value;
  check_probability(p, n);
  return p;
}

Distribution distribution(const RateSet& rates, const TruncationOptions& options,
                          const EvalPolicy& policy) {
  require_rescaled(rates);
  check_options(options);
  if (point_mass_at_zero(rates)) return point_mass(ModelKind::ThreeState, rates);
  Distribution d = truncate_adaptively([&](std::size_t n) { return pn_three_state(rates, n, policy); },
                                       options);
  d.model = ModelKind::ThreeState;
  d.rates = rates;
  return d;
}

Distribution distribution(const TwoStateParams& params, const TruncationOptions& options,
                          const EvalPolicy& policy) {
  const RateSet snapshot = two_state_snapshot(params);
  validate(snapshot);
  check_options(options);
  if (params.nu == 0.0 || params.k_plus == 0.0) return point_mass(ModelKind::TwoState, snapshot);
  Distribution d = truncate_adaptively(
      [&](std::size_t n) { return pn_two_state(params.k_plus, params.k_minus, params.nu, n, policy); },
      options);
  d.model = ModelKind::TwoState;
  d.rates = snapshot;
  return d;
}

double g2(const RateSet& rates, double z, const EvalPolicy& policy) {
  require_rescaled(rates);
  const double gamma2 = occupancies(rates).gamma2;
  if (gamma2 == 0.0) return 0.0;
  const DerivedConstants c = derived_constants(rates);
  const EvalReport f = f22(1.0 + c.K2_minus, 1.0 + c.K2_plus, 1.0 + c.K1_minus, 1.0 + c.K1_plus,
                           rates.nu * (z - 1.0), policy);
  return gamma2 * f.value;
}

double g(const RateSet& rates, double z, const EvalPolicy& policy) {
  require_rescaled(rates);
  if (point_mass_at_zero(rates)) return 1.0;
  const DerivedConstants c = derived_constants(rates);
  return f22(c.K2_minus, c.K2_plus, c.K1_minus, c.K1_plus, rates.nu * (z - 1.0), policy).value;
}

double factorial_moment(const RateSet& rates, std::size_t m) {
  require_rescaled(rates);
  if (m == 0) throw Error(Errc::InvalidArgument, "factorial moment order must be >= 1");
  if (point_mass_at_zero(rates)) return 0.0;
  const DerivedConstants c = derived_constants(rates);
  const double log_value = static_cast<double>(m) * std::log(rates.nu) +
                           pochhammer_log(c.K2_minus, m) + pochhammer_log(c.K2_plus, m) -
                           pochhammer_log(c.K1_minus, m) - pochhammer_log(c.K1_plus, m);
  return std::exp(log_value);
}

}  // namespace trigene
