#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "trigene/compensated.hpp"
#include "trigene/error.hpp"
#include "trigene/oracle.hpp"

namespace trigene {

namespace {

using SparseMatrix = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

constexpr double kResidualLimit = 1e-10;

}  // namespace

// Stationary balance equations in rescaled units (degradation n per molecule):
//   0 = -(k1+ + n) p0n + (n+1) p0,n+1 + k1- p1n
//   0 = -(k1- + k2+ + n) p1n + (n+1) p1,n+1 + k1+ p0n + k2- p2n
//   0 = -(k2- + n + nu) p2n + (n+1) p2,n+1 + k2+ p1n + nu p2,n-1
// The degradation influx carries no factor delta once time is rescaled.
MasterSolution master_steady_state(const RateSet& rates, std::size_t n_max) {
  require_rescaled(rates);
  if (n_max < 1) throw Error(Errc::InvalidArgument, "n_max must be at least 1");
  // The gene chain has a single closed class exactly when this is positive;
  // otherwise LU happily returns one of many stationary laws.
  const double k_norm = rates.k1_minus * rates.k2_minus + rates.k1_plus * rates.k2_minus +
                        rates.k1_plus * rates.k2_plus;
  if (!(k_norm > 0.0)) {
    throw Error(Errc::SingularSystem, "gene chain has more than one closed class; no unique steady state");
  }
  const std::size_t levels = n_max + 1;
  const auto size = static_cast<Eigen::Index>(3 * levels);
  auto idx = [](std::size_t g, std::size_t n) { return static_cast<Eigen::Index>(3 * n + g); };

  // Generator transposed: column `from` loses `rate` on the diagonal, row
  // `to` gains it.
  std::vector<Triplet> entries;
  entries.reserve(static_cast<std::size_t>(size) * 4);
  auto flow = [&](Eigen::Index from, Eigen::Index to, double rate) {
    if (rate == 0.0) return;
    entries.emplace_back(to, from, rate);
    entries.emplace_back(from, from, -rate);
  };
  for (std::size_t n = 0; n < levels; ++n) {
    const double dn = static_cast<double>(n);
    flow(idx(0, n), idx(1, n), rates.k1_plus);
    flow(idx(1, n), idx(0, n), rates.k1_minus);
    flow(idx(1, n), idx(2, n), rates.k2_plus);
    flow(idx(2, n), idx(1, n), rates.k2_minus);
    if (n + 1 < levels) flow(idx(2, n), idx(2, n + 1), rates.nu);
    if (n > 0) {
      for (std::size_t g = 0; g < 3; ++g) flow(idx(g, n), idx(g, n - 1), dn);
    }
  }
  SparseMatrix balance(size, size);
  balance.setFromTriplets(entries.begin(), entries.end());

  // Columns of the transposed generator sum to zero, so one balance row is
  // redundant; swap it for the normalization constraint.
  std::vector<Triplet> system_entries;
  system_entries.reserve(entries.size() + static_cast<std::size_t>(size));
  for (const Triplet& t : entries) {
    if (t.row() != 0) system_entries.push_back(t);
  }
  for (Eigen::Index j = 0; j < size; ++j) system_entries.emplace_back(0, j, 1.0);
  SparseMatrix system(size, size);
  system.setFromTriplets(system_entries.begin(), system_entries.end());
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(size);
  rhs(0) = 1.0;

  Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> solver;
  solver.compute(system);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::SingularSystem, "balance matrix factorization failed; the chain has no unique steady state");
  }
  Eigen::VectorXd p = solver.solve(rhs);
  if (solver.info() != Eigen::Success || !p.allFinite()) {
    throw Error(Errc::SingularSystem, "balance system solve failed");
  }

  MasterSolution out;
  out.residual = (balance * p).cwiseAbs().maxCoeff();
  const double norm_error = std::abs(p.sum() - 1.0);
  if (out.residual > kResidualLimit || norm_error > kResidualLimit) {
    std::ostringstream msg;
    msg << "steady-state residual " << out.residual << " exceeds " << kResidualLimit;
    throw Error(Errc::SingularSystem, msg.str());
  }

  Distribution& d = out.marginal;
  d.model = ModelKind::ThreeState;
  d.rates = rates;
  d.n_max = n_max;
  d.probs.resize(levels);
  std::array<NeumaierSum<double>, 3> genes;
  for (std::size_t n = 0; n < levels; ++n) {
    double pn = 0.0;
    for (std::size_t g = 0; g < 3; ++g) {
      const double v = p(idx(g, n));
      pn += v;
      genes[g] += v;
    }
    d.probs[n] = std::max(pn, 0.0);
  }
  for (std::size_t g = 0; g < 3; ++g) out.gene_marginals[g] = genes[g].value();
  // Mass at the reflecting boundary bounds what the truncation cut off.
  d.tail_mass_bound = d.probs.back();
  return out;
}

std::size_t suggest_n_max(const RateSet& rates) {
  require_rescaled(rates);
  double mean = 0.0;
  if (rates.nu > 0.0) {
    const double k_norm = rates.k1_minus * rates.k2_minus + rates.k1_plus * rates.k2_minus +
                          rates.k1_plus * rates.k2_plus;
    mean = k_norm > 0.0 ? rates.nu * rates.k1_plus * rates.k2_plus / k_norm : rates.nu;
  }
  return static_cast<std::size_t>(std::ceil(mean + 12.0 * std::sqrt(mean + 1.0) + 30.0));
}

double tv_distance(std::span<const double> p, std::span<const double> q) {
  NeumaierSum<double> s;
  const std::size_t len = std::max(p.size(), q.size());
  for (std::size_t n = 0; n < len; ++n) {
    const double a = n < p.size() ? p[n] : 0.0;
    const double b = n < q.size() ? q[n] : 0.0;
    s += std::abs(a - b);
  }
  return std::clamp(0.5 * s.value(), 0.0, 1.0);
}

double tv_distance(const Distribution& a, const Distribution& b) { return tv_distance(a.probs, b.probs); }

double tv_distance(const Distribution& a, const EmpiricalDistribution& b) {
  return tv_distance(a.probs, b.probs());
}

double max_abs_difference(std::span<const double> p, std::span<const double> q) {
  double m = 0.0;
  const std::size_t len = std::max(p.size(), q.size());
  for (std::size_t n = 0; n < len; ++n) {
    const double a = n < p.size() ? p[n] : 0.0;
    const double b = n < q.size() ? q[n] : 0.0;
    m = std::max(m, std::abs(a - b));
  }
  return m;
}

}  // namespace trigene
