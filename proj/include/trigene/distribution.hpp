#pragma once

#include <cstddef>
#include <string_view>
#include <vector>

#include "trigene/hypergeom.hpp"
#include "trigene/model.hpp"

namespace trigene {

enum class ModelKind { ThreeState, TwoState };

std::string_view to_string(ModelKind kind) noexcept;

/// Classical on/off promoter: activation k_plus, deactivation k_minus,
/// production nu while on. Rescaled units.
struct TwoStateParams {
  double k_plus = 0.0;
  double k_minus = 0.0;
  double nu = 0.0;
};

/// Steady-state mRNA copy-number distribution truncated at n_max.
///
/// For a TwoState model `rates` holds k_plus/k_minus in k2_plus/k2_minus with
/// k1_plus = k1_minus = 0.
struct Distribution {
  std::vector<double> probs;
  std::size_t n_max = 0;
  double tail_mass_bound = 0.0;
  ModelKind model = ModelKind::ThreeState;
  RateSet rates;

  double total() const;
  double mean() const;
  double at(std::size_t n) const { return n < probs.size() ? probs[n] : 0.0; }
};

/// p_n of the three-state model from its 2F2 closed form. Throws
/// NegativeProbability below -1e-10 and EvaluationFailure when the 2F2 cannot
/// be evaluated accurately.
double pn_three_state(const RateSet& rates, std::size_t n, const EvalPolicy& policy = {});

/// p_n of the two-state model from its 1F1 closed form.
double pn_two_state(double k_plus, double k_minus, double nu, std::size_t n,
                    const EvalPolicy& policy = {});

struct TruncationOptions {
  double tail_bound = 1e-10;
  std::size_t hard_cap = 100000;
};

/// Computes p_0, p_1, ... until the cumulative mass reaches 1 - tail_bound
/// and the current p_n has dropped below tail_bound / 100.
Distribution distribution(const RateSet& rates, const TruncationOptions& options = {},
                          const EvalPolicy& policy = {});
Distribution distribution(const TwoStateParams& params, const TruncationOptions& options = {},
                          const EvalPolicy& policy = {});

/// Generating function of the active-state probabilities p_{2,n}.
double g2(const RateSet& rates, double z, const EvalPolicy& policy = {});

/// Generating function of the total mRNA distribution; g(rates, 1) == 1.
double g(const RateSet& rates, double z, const EvalPolicy& policy = {});

/// E[n (n-1) ... (n-m+1)] from the m-th derivative of g at z = 1.
double factorial_moment(const RateSet& rates, std::size_t m);

}  // namespace trigene
