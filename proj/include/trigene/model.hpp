#pragma once

#include <array>

namespace trigene {

/// Kinetic rates of the three-state gene (inactive 0 <-> poised 1 <-> active 2).
///
/// k1_plus/k1_minus switch 0->1 and 1->0, k2_plus/k2_minus switch 1->2 and
/// 2->1. mRNA is produced at rate nu in state 2 only and degrades at delta
/// per molecule in every state. Everything downstream of the boundary works
/// in rescaled units (time in mean mRNA lifetimes, delta == 1).
struct RateSet {
  double k1_plus = 0.0;
  double k1_minus = 0.0;
  double k2_plus = 0.0;
  double k2_minus = 0.0;
  double nu = 0.0;
  double delta = 1.0;
  bool rescaled = false;

  /// Rates given directly in units of delta (delta == 1).
  static RateSet in_rescaled_units(double k1_minus, double k1_plus, double k2_minus,
                                   double k2_plus, double nu);

  friend bool operator==(const RateSet&, const RateSet&) = default;
};

/// Throws InvalidArgument on negative or non-finite rates and
/// NonPositiveDelta on delta <= 0.
void validate(const RateSet& rates);

/// Divides every rate by delta. Throws AlreadyRescaled on a rescaled set.
RateSet rescale(const RateSet& raw);

/// Throws NotRescaled unless `rates.rescaled`.
void require_rescaled(const RateSet& rates);

struct Occupancies {
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double k_norm = 0.0;

  std::array<double, 3> as_array() const { return {gamma0, gamma1, gamma2}; }
};

/// Steady-state gene-state probabilities. Throws DegenerateOccupancy when the
/// normalizer k1-k2- + k1+k2- + k1+k2+ vanishes.
Occupancies occupancies(const RateSet& rates);

/// Dimensionless parameter combinations feeding the hypergeometric solution.
///
/// K1_minus/K1_plus are the roots of x^2 - kappa1 x + kappa0 and
/// K2_minus/K2_plus the roots of x^2 - kappa2 x + k1+ k2+. Both pairs are
/// real and non-negative for non-negative rates.
struct DerivedConstants {
  double kappa0 = 0.0;
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double kappa3 = 0.0;
  double K1_minus = 0.0;
  double K1_plus = 0.0;
  double K2_minus = 0.0;
  double K2_plus = 0.0;
  // Occupancies are left at zero when the chain is degenerate.
  double gamma0 = 0.0;
  double gamma1 = 0.0;
  double gamma2 = 0.0;
  double K_norm = 0.0;
};

/// Discriminants within this distance below zero are roundoff and clamp to 0.
inline constexpr double kDiscriminantClamp = 1e-12;

DerivedConstants derived_constants(const RateSet& rates);

}  // namespace trigene
