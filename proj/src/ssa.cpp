#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <thread>

#include "trigene/error.hpp"
#include "trigene/oracle.hpp"

namespace trigene {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// xoshiro256** with explicit bit-to-double conversion, so a stream is
// reproducible across standard-library implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& word : s_) word = splitmix64(seed);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on (0, 1].
  double uniform_open_zero() { return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53; }

  double exponential(double rate) { return -std::log(uniform_open_zero()) / rate; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
  std::uint64_t s_[4];
};

struct ReplicaResult {
  std::vector<std::uint64_t> counts;
  std::array<std::uint64_t, 3> genes{};
};

// One long trajectory of the transition table
//   {0,n} -> {1,n} k1+   {1,n} -> {0,n} k1-   {1,n} -> {2,n} k2+
//   {2,n} -> {1,n} k2-   {2,n} -> {2,n+1} nu  {g,n} -> {g,n-1} n
ReplicaResult run_replica(const SsaConfig& config, std::size_t samples, std::uint64_t seed) {
  const RateSet& r = config.rates;
  Rng rng(seed);
  ReplicaResult out;
  int gene = 0;
  std::uint64_t n = 0;
  double t = 0.0;
  double next_sample = config.t_burn_in;
  std::size_t taken = 0;

  auto record = [&] {
    if (out.counts.size() <= n) out.counts.resize(n + 1, 0);
    ++out.counts[n];
    ++out.genes[static_cast<std::size_t>(gene)];
    ++taken;
    next_sample = config.t_burn_in + static_cast<double>(taken) * config.sample_interval;
  };

  while (taken < samples) {
    const double decay = static_cast<double>(n);
    double up = 0.0, down = 0.0, produce = 0.0;
    switch (gene) {
      case 0: up = r.k1_plus; break;
      case 1: up = r.k2_plus; down = r.k1_minus; break;
      default: down = r.k2_minus; produce = r.nu; break;
    }
    const double total = up + down + produce + decay;
    const double dt = total > 0.0 ? rng.exponential(total) : std::numeric_limits<double>::infinity();
    while (taken < samples && t + dt > next_sample) record();
    if (taken == samples) break;
    t += dt;

    double pick = rng.uniform_open_zero() * total;
    if ((pick -= up) <= 0.0) {
      ++gene;
    } else if ((pick -= down) <= 0.0) {
      --gene;
    } else if ((pick -= produce) <= 0.0) {
      if (++n > config.molecule_cap) {
        std::ostringstream msg;
        msg << "mRNA count exceeded " << config.molecule_cap;
        throw Error(Errc::SimulationRunaway, msg.str());
      }
    } else if (n > 0) {
      --n;
    }
  }
  return out;
}

}  // namespace

void validate(const SsaConfig& config) {
  require_rescaled(config.rates);
  if (!(config.sample_interval > 0.0)) throw Error(Errc::InvalidArgument, "sample_interval must be positive");
  if (config.n_samples < 1) throw Error(Errc::InvalidArgument, "n_samples must be at least 1");
  if (!(config.t_burn_in >= 0.0)) throw Error(Errc::InvalidArgument, "t_burn_in must be non-negative");
  if (config.replicas < 1) throw Error(Errc::InvalidArgument, "replicas must be at least 1");
}

std::uint64_t replica_seed(std::uint64_t seed, std::size_t index) {
  std::uint64_t state = seed;
  std::uint64_t mixed = splitmix64(state);
  state = mixed ^ (0xD1B54A32D192ED03ULL * (static_cast<std::uint64_t>(index) + 1));
  return splitmix64(state);
}

EmpiricalDistribution ssa_run(const SsaConfig& config) {
  validate(config);
  const std::size_t replicas = std::min(config.replicas, config.n_samples);
  std::vector<ReplicaResult> results(replicas);
  std::vector<std::exception_ptr> errors(replicas);

  auto run = [&](std::size_t index) {
    const std::size_t share =
        config.n_samples / replicas + (index < config.n_samples % replicas ? 1 : 0);
    try {
      results[index] = run_replica(config, share, replica_seed(config.seed, index));
    } catch (...) {
      errors[index] = std::current_exception();
    }
  };

  const std::size_t workers = std::clamp<std::size_t>(config.workers, 1, replicas);
  if (workers == 1) {
    for (std::size_t i = 0; i < replicas; ++i) run(i);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < replicas; i += workers) run(i);
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  EmpiricalDistribution merged;
  merged.seed = config.seed;
  for (const ReplicaResult& rr : results) {
    if (merged.counts.size() < rr.counts.size()) merged.counts.resize(rr.counts.size(), 0);
    for (std::size_t n = 0; n < rr.counts.size(); ++n) merged.counts[n] += rr.counts[n];
    for (std::size_t g = 0; g < 3; ++g) merged.gene_occupancy_counts[g] += rr.genes[g];
  }
  for (std::uint64_t c : merged.counts) merged.total += c;
  return merged;
}

std::vector<double> EmpiricalDistribution::probs() const {
  std::vector<double> p(counts.size());
  if (total == 0) return p;
  for (std::size_t n = 0; n < counts.size(); ++n) {
    p[n] = static_cast<double>(counts[n]) / static_cast<double>(total);
  }
  return p;
}

std::array<double, 3> EmpiricalDistribution::gene_fractions() const {
  std::array<double, 3> f{};
  if (total == 0) return f;
  for (std::size_t g = 0; g < 3; ++g) {
    f[g] = static_cast<double>(gene_occupancy_counts[g]) / static_cast<double>(total);
  }
  return f;
}

double EmpiricalDistribution::mean() const {
  if (total == 0) return 0.0;
  double s = 0.0;
  for (std::size_t n = 0; n < counts.size(); ++n) s += static_cast<double>(n) * static_cast<double>(counts[n]);
  return s / static_cast<double>(total);
}

}  // namespace trigene
