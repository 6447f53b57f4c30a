#pragma once

// Extended-precision reference values for tests. Deliberately independent of
// the library: no recurrences or dispatch logic are shared with src/.

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace trigene::testing {

using Big = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<120>>;
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<400>>;

/// pFq(a; b; x) summed term by term in the multiprecision type `Real`.
template <class Real>
double mp_pfq_in(const std::vector<double>& a, const std::vector<double>& b, double x,
                 std::size_t max_terms, double stop) {
  Real sum = 1;
  Real term = 1;
  const Real bx = x;
  const Real eps = Real(stop);
  int quiet = 0;
  for (std::size_t k = 0; k < max_terms; ++k) {
    Real num = bx;
    for (double ai : a) num *= Real(ai) + k;
    Real den = Real(k + 1);
    for (double bj : b) den *= Real(bj) + k;
    term = term * num / den;
    sum += term;
    if (abs(term) <= eps * abs(sum)) {
      if (++quiet == 3) return static_cast<double>(sum);
    } else {
      quiet = 0;
    }
  }
  throw std::runtime_error("mp_pfq did not converge");
}

/// ~120 significant digits: enough for the e^|x| cancellation at |x| <= 100
/// as long as the result is not far below e^-|x|.
inline double mp_pfq(const std::vector<double>& a, const std::vector<double>& b, double x,
                     std::size_t max_terms = 20000) {
  return mp_pfq_in<Big>(a, b, x, max_terms, 1e-60);
}

/// ~400 digits, for |x| up to a few hundred.
inline double mp_pfq_wide(const std::vector<double>& a, const std::vector<double>& b, double x,
                          std::size_t max_terms = 200000) {
  return mp_pfq_in<Wide>(a, b, x, max_terms, 1e-200);
}

/// ln((x)_n) as a plain sum of logs.
inline double mp_log_rising(double x, std::size_t n) {
  Big s = 0;
  for (std::size_t k = 0; k < n; ++k) s += log(Big(x) + k);
  return static_cast<double>(s);
}

}  // namespace trigene::testing
