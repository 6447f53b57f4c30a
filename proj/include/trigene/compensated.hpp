#pragma once

#include <cmath>

namespace trigene {

/// Neumaier's variant of Kahan summation; also compensates when the incoming
/// term is larger in magnitude than the running sum, which is the normal case
/// for the first few terms of an alternating series.
template <typename Value>
struct NeumaierSum {
  Value sum = Value{0};
  Value compensation = Value{0};

  void operator+=(Value value) {
    using std::abs;
    const Value t = sum + value;
    if (abs(sum) >= abs(value)) {
      compensation += (sum - t) + value;
    } else {
      compensation += (value - t) + sum;
    }
    sum = t;
  }

  Value value() const { return sum + compensation; }
};

/// Unevaluated sum hi + lo with |lo| <= ulp(hi)/2, about 106 significant bits.
///
/// Built from the error-free transformations two_sum and two_prod (via fma).
/// Only the operations the series kernels need are provided.
struct DoubleDouble {
  double hi = 0.0;
  double lo = 0.0;

  constexpr DoubleDouble() = default;
  constexpr DoubleDouble(double h) : hi(h) {}  // NOLINT(google-explicit-constructor)
  constexpr DoubleDouble(double h, double l) : hi(h), lo(l) {}

  explicit operator double() const { return hi + lo; }

  friend DoubleDouble operator+(DoubleDouble x, DoubleDouble y) {
    double s, e;
    two_sum(x.hi, y.hi, s, e);
    double t, f;
    two_sum(x.lo, y.lo, t, f);
    e += t;
    quick_two_sum(s, e, s, e);
    e += f;
    quick_two_sum(s, e, s, e);
    return {s, e};
  }

  friend DoubleDouble operator-(DoubleDouble x) { return {-x.hi, -x.lo}; }
  friend DoubleDouble operator-(DoubleDouble x, DoubleDouble y) { return x + (-y); }

  friend DoubleDouble operator*(DoubleDouble x, DoubleDouble y) {
    double p = x.hi * y.hi;
    double e = std::fma(x.hi, y.hi, -p);
    e += x.hi * y.lo + x.lo * y.hi;
    quick_two_sum(p, e, p, e);
    return {p, e};
  }

  friend DoubleDouble operator/(DoubleDouble x, DoubleDouble y) {
    const double q1 = x.hi / y.hi;
    DoubleDouble r = x - y * DoubleDouble(q1);
    const double q2 = r.hi / y.hi;
    r = r - y * DoubleDouble(q2);
    const double q3 = r.hi / y.hi;
    double s, e;
    quick_two_sum(q1, q2, s, e);
    return DoubleDouble(s, e) + DoubleDouble(q3);
  }

  DoubleDouble& operator+=(DoubleDouble y) { return *this = *this + y; }
  DoubleDouble& operator*=(DoubleDouble y) { return *this = *this * y; }
  DoubleDouble& operator/=(DoubleDouble y) { return *this = *this / y; }

  friend DoubleDouble abs(DoubleDouble x) { return x.hi < 0.0 ? -x : x; }
  friend bool operator<(DoubleDouble x, DoubleDouble y) {
    return x.hi < y.hi || (x.hi == y.hi && x.lo < y.lo);
  }
  friend bool operator>=(DoubleDouble x, DoubleDouble y) { return !(x < y); }

 private:
  static void two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    const double bb = s - a;
    e = (a - (s - bb)) + (b - bb);
  }
  static void quick_two_sum(double a, double b, double& s, double& e) {
    s = a + b;
    e = b - (s - a);
  }
};

}  // namespace trigene
