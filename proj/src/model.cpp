#include "trigene/model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>
#include <utility>

#include "trigene/error.hpp"

namespace trigene {

namespace {

void check_rate(const char* name, double value) {
  if (!std::isfinite(value) || value < 0.0) {
    std::ostringstream msg;
    msg << name << " must be finite and non-negative, got " << value;
    throw Error(Errc::InvalidArgument, msg.str());
  }
}

// Roots of x^2 - sum x + product, returned as (smaller, larger).
std::pair<double, double> quadratic_roots(double sum, double product, const char* which) {
  double disc = sum * sum - 4.0 * product;
  const double scale = std::max(sum * sum, 1.0);
  if (disc < 0.0) {
    if (disc < -kDiscriminantClamp * scale) {
      std::ostringstream msg;
      msg << which << " discriminant " << disc << " is negative";
      throw Error(Errc::NegativeDiscriminant, msg.str());
    }
    disc = 0.0;
  }
  const double root = std::sqrt(disc);
  const double larger = 0.5 * (sum + root);
  // The smaller root via the product avoids cancellation in sum - root.
  const double smaller = larger > 0.0 ? product / larger : 0.0;
  return {smaller, larger};
}

}  // namespace

RateSet RateSet::in_rescaled_units(double k1_minus, double k1_plus, double k2_minus,
                                   double k2_plus, double nu) {
  RateSet r;
  r.k1_minus = k1_minus;
  r.k1_plus = k1_plus;
  r.k2_minus = k2_minus;
  r.k2_plus = k2_plus;
  r.nu = nu;
  r.delta = 1.0;
  r.rescaled = true;
  validate(r);
  return r;
}

void validate(const RateSet& rates) {
  check_rate("k1_plus", rates.k1_plus);
  check_rate("k1_minus", rates.k1_minus);
  check_rate("k2_plus", rates.k2_plus);
  check_rate("k2_minus", rates.k2_minus);
  check_rate("nu", rates.nu);
  if (!(rates.delta > 0.0) || !std::isfinite(rates.delta)) {
    std::ostringstream msg;
    msg << "delta must be positive, got " << rates.delta;
    throw Error(Errc::NonPositiveDelta, msg.str());
  }
  if (rates.rescaled && rates.delta != 1.0) {
    throw Error(Errc::InvalidArgument, "rescaled rate set must have delta == 1");
  }
}

RateSet rescale(const RateSet& raw) {
  if (raw.rescaled) throw Error(Errc::AlreadyRescaled, "rate set is already in rescaled units");
  validate(raw);
  const double d = raw.delta;
  RateSet r;
  r.k1_plus = raw.k1_plus / d;
  r.k1_minus = raw.k1_minus / d;
  r.k2_plus = raw.k2_plus / d;
  r.k2_minus = raw.k2_minus / d;
  r.nu = raw.nu / d;
  r.delta = 1.0;
  r.rescaled = true;
  return r;
}

void require_rescaled(const RateSet& rates) {
  if (!rates.rescaled) throw Error(Errc::NotRescaled, "operation expects rescaled rates (delta == 1)");
  validate(rates);
}

Occupancies occupancies(const RateSet& rates) {
  validate(rates);
  const double inactive = rates.k1_minus * rates.k2_minus;
  const double poised = rates.k1_plus * rates.k2_minus;
  const double active = rates.k1_plus * rates.k2_plus;
  const double k_norm = inactive + poised + active;
  if (!(k_norm > 0.0)) {
    throw Error(Errc::DegenerateOccupancy, "occupancy normalizer k1-k2- + k1+k2- + k1+k2+ is zero");
  }
  return {inactive / k_norm, poised / k_norm, active / k_norm, k_norm};
}

DerivedConstants derived_constants(const RateSet& rates) {
  require_rescaled(rates);
  DerivedConstants c;
  c.kappa0 = (rates.k1_minus + rates.k1_plus) * rates.k2_minus + rates.k1_plus * rates.k2_plus;
  c.kappa1 = rates.k1_minus + rates.k1_plus + rates.k2_minus + rates.k2_plus;
  c.kappa2 = c.kappa1 - rates.k2_minus;
  c.kappa3 = rates.k1_minus + (1.0 + rates.k1_plus) * (1.0 + rates.k2_plus);

  std::tie(c.K1_minus, c.K1_plus) = quadratic_roots(c.kappa1, c.kappa0, "K1");
  std::tie(c.K2_minus, c.K2_plus) = quadratic_roots(c.kappa2, rates.k1_plus * rates.k2_plus, "K2");

  c.K_norm = rates.k1_minus * rates.k2_minus + rates.k1_plus * rates.k2_minus +
             rates.k1_plus * rates.k2_plus;
  if (c.K_norm > 0.0) {
    const Occupancies occ = occupancies(rates);
    c.gamma0 = occ.gamma0;
    c.gamma1 = occ.gamma1;
    c.gamma2 = occ.gamma2;
  }
  return c;
}

}  // namespace trigene
