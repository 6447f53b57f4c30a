#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

#include "trigene/compensated.hpp"

namespace trigene::detail {

struct QuadratureResult {
  double value = 0.0;
  double error = 0.0;
  std::size_t evaluations = 0;
};

namespace kronrod {

// Gauss-Kronrod 7/15 abscissae on [-1, 1] (non-negative half) and weights.
inline constexpr std::array<double, 8> kNodes{
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kKronrod{
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kNodes[1], [3], [5], [7].
inline constexpr std::array<double, 4> kGauss{
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Interval {
  double lo, hi, value, error;
  bool operator<(const Interval& other) const { return error < other.error; }
};

template <class F>
Interval apply(F& f, double lo, double hi) {
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(mid);
  double k = kKronrod[7] * fc;
  double g = kGauss[3] * fc;
  double abs_k = std::abs(k);
  std::array<double, 15> values{};
  values[14] = fc;
  for (std::size_t j = 0; j < 7; ++j) {
    const double x = half * kNodes[j];
    const double f1 = f(mid - x);
    const double f2 = f(mid + x);
    values[2 * j] = f1;
    values[2 * j + 1] = f2;
    k += kKronrod[j] * (f1 + f2);
    abs_k += kKronrod[j] * (std::abs(f1) + std::abs(f2));
    if (j % 2 == 1) g += kGauss[j / 2] * (f1 + f2);
  }
  // QUADPACK's error heuristic: |K - G| rescaled by the integrand's spread.
  const double mean = 0.5 * k;
  double spread = kKronrod[7] * std::abs(fc - mean);
  for (std::size_t j = 0; j < 7; ++j) {
    spread += kKronrod[j] * (std::abs(values[2 * j] - mean) + std::abs(values[2 * j + 1] - mean));
  }
  spread *= half;
  double err = std::abs((k - g) * half);
  if (spread != 0.0 && err != 0.0) err = spread * std::min(1.0, std::pow(200.0 * err / spread, 1.5));
  err = std::max(err, 50.0 * 0x1p-53 * abs_k * half);
  return {lo, hi, k * half, err};
}

}  // namespace kronrod

/// Globally adaptive Gauss-Kronrod 7/15 on [lo, hi]: bisects the interval
/// with the largest error until the summed error is below rel_tol * |value|
/// or max_intervals is reached.
template <class F>
QuadratureResult integrate(F f, double lo, double hi, double rel_tol, std::size_t max_intervals) {
  std::priority_queue<kronrod::Interval> queue;
  queue.push(kronrod::apply(f, lo, hi));
  std::size_t evaluations = 15;
  double value = queue.top().value;
  double error = queue.top().error;
  while (error > rel_tol * std::abs(value) && queue.size() < max_intervals) {
    const kronrod::Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const kronrod::Interval left = kronrod::apply(f, worst.lo, mid);
    const kronrod::Interval right = kronrod::apply(f, mid, worst.hi);
    evaluations += 30;
    queue.push(left);
    queue.push(right);
    // Re-sum rather than update in place, so drift never accumulates.
    NeumaierSum<double> v, e;
    auto copy = queue;
    while (!copy.empty()) {
      v += copy.top().value;
      e += copy.top().error;
      copy.pop();
    }
    value = v.value();
    error = e.value();
  }
  return {value, error, evaluations};
}

}  // namespace trigene::detail
