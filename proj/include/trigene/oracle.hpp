#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "trigene/distribution.hpp"
#include "trigene/model.hpp"

namespace trigene {

/// Gillespie simulation settings. Every replica starts with the gene inactive
/// and no mRNA, equilibrates for t_burn_in, then records the state every
/// sample_interval.
struct SsaConfig {
  RateSet rates;
  double t_burn_in = 50.0;
  std::size_t n_samples = 200000;
  double sample_interval = 5.0;
  std::uint64_t seed = 1;
  /// Independent trajectories the samples are split across. Part of the
  /// result's identity: changing it changes the output, unlike `workers`.
  std::size_t replicas = 16;
  /// Threads used to run replicas; has no effect on the result.
  std::size_t workers = 1;
  std::uint64_t molecule_cap = 1000000;
};

void validate(const SsaConfig& config);

struct EmpiricalDistribution {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;
  std::uint64_t seed = 0;
  std::array<std::uint64_t, 3> gene_occupancy_counts{};

  std::vector<double> probs() const;
  std::array<double, 3> gene_fractions() const;
  double mean() const;

  friend bool operator==(const EmpiricalDistribution&, const EmpiricalDistribution&) = default;
};

/// Seed of replica `index`'s random stream; fixed for a given (seed, index).
std::uint64_t replica_seed(std::uint64_t seed, std::size_t index);

/// Exact stochastic simulation of the gene/mRNA chain. Output depends only on
/// the config minus `workers`. Throws SimulationRunaway past molecule_cap.
EmpiricalDistribution ssa_run(const SsaConfig& config);

/// Steady state of the master equation truncated at n_max.
struct MasterSolution {
  Distribution marginal;
  std::array<double, 3> gene_marginals{};
  /// max |A p| over the balance equations of the returned solution.
  double residual = 0.0;
};

/// Solves the stationary balance equations on 3 (n_max + 1) states with a
/// sparse LU factorization. Production at n == n_max is discarded so the
/// truncated chain keeps a proper generator. Throws SingularSystem when the
/// chain has no unique stationary law.
MasterSolution master_steady_state(const RateSet& rates, std::size_t n_max);

/// Truncation level comfortably past the bulk of the distribution.
std::size_t suggest_n_max(const RateSet& rates);

/// Half the l1 distance; shorter inputs are padded with zeros.
double tv_distance(std::span<const double> p, std::span<const double> q);
double tv_distance(const Distribution& a, const Distribution& b);
double tv_distance(const Distribution& a, const EmpiricalDistribution& b);

/// max_n |p_n - q_n| over the union support.
double max_abs_difference(std::span<const double> p, std::span<const double> q);

}  // namespace trigene
