#include <doctest.h>

#include <cmath>
#include <random>

#include "support/mp_oracle.hpp"
#include "trigene/error.hpp"
#include "trigene/hypergeom.hpp"

using namespace trigene;
using trigene::testing::mp_log_rising;
using trigene::testing::mp_pfq;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("pochhammer_log") {
  CHECK(pochhammer_log(3.7, 0) == 0.0);
  CHECK(pochhammer_log(2.0, 3) == doctest::Approx(std::log(24.0)).epsilon(1e-15));
  CHECK(rel(pochhammer_log(0.5, 50), mp_log_rising(0.5, 50)) < 1e-14);
  CHECK(rel(pochhammer_log(0.5, 50), 145.94689054779592713) < 1e-14);
  CHECK(rel(pochhammer_log(1e6, 3), mp_log_rising(1e6, 3)) < 1e-14);
  CHECK(rel(pochhammer_log(4.2, 400), mp_log_rising(4.2, 400)) < 1e-13);
  CHECK(std::isinf(pochhammer_log(0.0, 2)));
  CHECK(pochhammer_log(0.0, 0) == 0.0);
  CHECK(code_of([] { pochhammer_log(-1.0, 2); }) == Errc::DomainError);
}

TEST_CASE("signed_lgamma tracks sign and poles") {
  CHECK(signed_lgamma(-0.5).sign == -1);
  CHECK(signed_lgamma(-1.5).sign == 1);
  CHECK(signed_lgamma(2.5).sign == 1);
  CHECK(signed_lgamma(-2.0).sign == 0);
  CHECK(signed_lgamma(0.0).sign == 0);
  CHECK(signed_lgamma(-0.5).log_abs == doctest::Approx(std::log(2.0 * std::sqrt(M_PI))));
}

TEST_CASE("pfq_series basics") {
  const EvalReport zero = pfq_series({{0.3, 7.0}, {1.1, 2.0}, 0.0});
  CHECK(zero.value == 1.0);
  CHECK(zero.terms_used >= 1);
  CHECK(zero.cancellation_index >= 1.0);

  const EvalReport half = pfq_series({{1.0, 1.0}, {2.0, 2.0}, 0.5});
  CHECK(rel(half.value, mp_pfq({1, 1}, {2, 2}, 0.5)) < 1e-15);
  CHECK(rel(half.value, 1.140302841043172057462488) < 1e-15);

  // Exponential: 0F0(;;x).
  CHECK(rel(pfq_series({{}, {}, 2.5}).value, std::exp(2.5)) < 1e-15);
  // Terminating series: 1F1(-2; 1; x) = 1 - 2x + x^2/2.
  CHECK(pfq_series({{-2.0}, {1.0}, 3.0}).value == doctest::Approx(1.0 - 6.0 + 4.5));
}

TEST_CASE("pfq_series contiguity cancellation") {
  const double lhs = pfq_series({{0.9, 2.4}, {2.4, 3.3}, -4.0}).value;
  const double rhs = pfq_series({{0.9}, {3.3}, -4.0}).value;
  CHECK(rel(lhs, rhs) < 1e-13);
}

TEST_CASE("pfq_series errors") {
  CHECK(code_of([] { pfq_series({{1.0}, {-2.0}, 0.5}); }) == Errc::PoleInDenominator);
  CHECK(code_of([] { pfq_series({{1.0}, {0.0}, 0.5}); }) == Errc::PoleInDenominator);
  // 3F1 diverges for any x != 0.
  CHECK(code_of([] { pfq_series({{1.0, 1.5, 2.0}, {1.2}, 0.5}, 1e-17, 500); }) == Errc::NoConvergence);
  CHECK(code_of([] { pfq_series({{1.0}, {2.0}, 0.5}, 0.0); }) == Errc::InvalidArgument);
}

TEST_CASE("extended series recovers digits lost to cancellation") {
  const HypergeomSpec spec{{0.7, 1.9}, {2.1, 3.4}, -35.0};
  const double reference = mp_pfq(spec.a, spec.b, spec.x);
  const EvalReport plain = pfq_series(spec);
  const EvalReport ext = pfq_series_extended(spec);
  CHECK(plain.cancellation_index > 1e10);
  CHECK(ext.extended_precision);
  CHECK(rel(ext.value, reference) < 1e-14);
  CHECK(ext.error_estimate < 1e-14);
  // The plain estimate must admit the real error.
  CHECK(rel(plain.value, reference) <= plain.error_estimate);
}

TEST_CASE("f11_asymptotic closed-form cases") {
  // 1F1(1; 2; z) = (e^z - 1)/z.
  const EvalReport r = f11_asymptotic(1.0, 2.0, -40.0, 20);
  CHECK(r.branch == Branch::AsymptoticAlgebraic);
  CHECK(rel(r.value, (1.0 - std::exp(-40.0)) / 40.0) < 1e-15);

  for (double a : {0.4, 1.7, 3.0}) {
    const EvalReport e = f11_asymptotic(a, a, 55.0, 20);
    CHECK(e.branch == Branch::AsymptoticExponential);
    CHECK(rel(e.value, std::exp(55.0)) < 1e-14);
  }
}

TEST_CASE("f11_asymptotic agrees with the series in the overlap regime") {
  const double reference = mp_pfq({0.7}, {3.1}, -60.0);
  CHECK(rel(reference, 0.09907296610829935284732262) < 1e-14);
  CHECK(rel(f11_asymptotic(0.7, 3.1, -60.0).value, reference) < 1e-8);
  const double pos = mp_pfq({0.7}, {3.1}, 60.0);
  CHECK(rel(f11_asymptotic(0.7, 3.1, 60.0).value, pos) < 1e-10);
}

TEST_CASE("ck_coefficients") {
  const auto c0 = ck_coefficients(0.3, 1.2, 2.2, 4.0, 5);
  CHECK(c0.size() == 6);
  CHECK(c0[0] == 1.0);
  CHECK(ck_coefficients(0, 0, 0, 0, 1)[1] == 0.0);
  const auto c = ck_coefficients(1, 2, 3, 4, 4);
  CHECK(c[1] == 2.0);
  // Frozen from the recursion in 50-digit arithmetic.
  CHECK(c[2] == doctest::Approx(6.0));
  CHECK(c[3] == doctest::Approx(24.0));
  // With a2 == b2 the coefficients collapse to the 2F0 ones of 1F1,
  // (b-a)_k (1-a)_k / k!.
  const double a = 0.8, b = 2.9;
  const auto d = ck_coefficients(a, 1.7, b, 1.7, 6);
  double expected = 1.0;
  for (std::size_t k = 1; k <= 6; ++k) {
    expected *= (b - a + static_cast<double>(k) - 1.0) * (1.0 - a + static_cast<double>(k) - 1.0) /
                static_cast<double>(k);
    CHECK(d[k] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("f22_asymptotic") {
  SUBCASE("exponential branch with 1,2,3,4 at z = 50") {
    const double reference = mp_pfq({1, 2}, {3, 4}, 50.0);
    const EvalReport r = f22_asymptotic(1, 2, 3, 4, 50.0);
    CHECK(r.branch == Branch::AsymptoticExponential);
    CHECK(rel(r.value, reference) < 1e-10);
  }
  SUBCASE("algebraic branch at z = -80") {
    const double reference = mp_pfq({0.8, 2.3}, {1.9, 4.0}, -80.0);
    CHECK(rel(reference, 0.05668849563424480139057812) < 1e-14);
    const EvalReport r = f22_asymptotic(0.8, 2.3, 1.9, 4.0, -80.0);
    CHECK(r.branch == Branch::AsymptoticAlgebraic);
    CHECK(rel(r.value, reference) < 1e-8);
  }
  SUBCASE("exponential branch at z = +80") {
    const double reference = mp_pfq({0.8, 2.3}, {1.9, 4.0}, 80.0);
    CHECK(rel(reference, 1.102778868171671226937501e+30) < 1e-14);
    CHECK(rel(f22_asymptotic(0.8, 2.3, 1.9, 4.0, 80.0).value, reference) < 1e-6);
  }
  SUBCASE("a2 == b2 reduces to the 1F1 expansion") {
    for (double z : {-70.0, 65.0}) {
      const EvalReport two = f22_asymptotic(1.4, 2.6, 3.1, 2.6, z);
      const EvalReport one = f11_asymptotic(1.4, 3.1, z);
      CHECK(two.value == one.value);
    }
  }
  SUBCASE("degenerate a1 - a2 in the algebraic branch") {
    CHECK(code_of([] { f22_asymptotic(1.5, 1.5 + 1e-8, 2.0, 3.0, -60.0); }) == Errc::DegenerateParameters);
    CHECK(code_of([] { f22_asymptotic(1.5, 2.5, 2.0, 3.0, -60.0); }) == Errc::DegenerateParameters);
  }
  SUBCASE("truncation error shrinks then grows, the cut takes the minimum") {
    const double reference = mp_pfq({0.8, 2.3}, {1.9, 4.0}, 45.0);
    double best = 1.0;
    for (std::size_t m : {2u, 5u, 10u, 20u, 60u}) {
      best = std::min(best, rel(f22_asymptotic(0.8, 2.3, 1.9, 4.0, 45.0, m).value, reference));
    }
    CHECK(rel(f22_asymptotic(0.8, 2.3, 1.9, 4.0, 45.0, 200).value, reference) <= best * 1.0001);
  }
}

TEST_CASE("f22 dispatcher branch selection") {
  const EvalReport zero = f22(0.5, 1.5, 2.5, 3.5, 0.0);
  CHECK(zero.value == 1.0);
  CHECK(zero.branch == Branch::Series);

  // Fig. 1a parameters at nu = 3.
  const double K1m = 1.3245028877122398943, K1p = 6.6054971122877601057;
  const double K2m = 1.2452149828718583415, K2p = 4.3847850171281416585;
  const EvalReport small = f22(K2m, K2p, K1m, K1p, -3.0);
  CHECK(small.branch == Branch::Series);
  CHECK(small.value > 0.0);
  CHECK(rel(small.value, 0.1847555367847759121777432) < 1e-13);

  const EvalReport large = f22(K2m, K2p, K1m, K1p, -200.0);
  CHECK(large.branch == Branch::AsymptoticAlgebraic);
  CHECK(rel(large.value, mp_pfq({K2m, K2p}, {K1m, K1p}, -200.0)) < 1e-6);
  CHECK(rel(large.value, 0.0001949044661351629612520404) < 1e-6);

  // Large parameters keep the series route even at large |z|.
  const EvalReport wide = f22(60.0, 70.5, 61.0, 80.0, 55.0);
  CHECK(wide.branch == Branch::Series);
  CHECK(rel(wide.value, mp_pfq({60.0, 70.5}, {61.0, 80.0}, 55.0)) < 1e-13);
}

TEST_CASE("f22 dispatcher falls back when the preferred route is inaccurate") {
  // |z| below the threshold but the alternating series loses ~16 digits;
  // the result must still be accurate.
  const double reference = mp_pfq({0.6, 1.7}, {2.2, 3.9}, -45.0);
  const EvalReport r = f22(0.6, 1.7, 2.2, 3.9, -45.0);
  CHECK(rel(r.value, reference) < 1e-10);
  CHECK(r.error_estimate < 1e-10);
  // a1 - a2 an integer: the algebraic expansion has coalescing poles and
  // the dispatcher must still return something accurate.
  const EvalReport d = f22(1.2, 2.2, 2.9, 3.6, -60.0);
  CHECK(rel(d.value, mp_pfq({1.2, 2.2}, {2.9, 3.6}, -60.0)) < 1e-8);
  CHECK(d.error_estimate < 1e-6);
}

TEST_CASE("f22_beta_integral") {
  // Parameters shaped like p_n at large n under slow switching: the power
  // series cancels from e^30 down to e^-30.
  const double a1 = 60.01, a2 = 60.4, b1 = 60.02, b2 = 60.9, z = -30.0;
  const double reference = mp_pfq({a1, a2}, {b1, b2}, z);
  const EvalReport r = f22_beta_integral(a1, a2, b1, b2, z);
  CHECK(r.branch == Branch::BetaIntegral);
  CHECK(rel(r.value, reference) < 1e-12);
  CHECK(r.error_estimate < 1e-11);
  CHECK(rel(r.value, reference) <= 4.0 * r.error_estimate);
  // Dispatcher picks it over the double-double series here.
  const EvalReport d = f22(a1, a2, b1, b2, z);
  CHECK(rel(d.value, reference) < 1e-12);

  // Argument order does not matter.
  CHECK(rel(f22_beta_integral(a2, a1, b2, b1, z).value, reference) < 1e-12);
  CHECK(rel(f22_beta_integral(a1, a2, b2, b1, z).value, reference) < 1e-12);

  CHECK(beta_integral_applicable(1.0, 2.0, 1.5, 2.5));
  CHECK_FALSE(beta_integral_applicable(3.0, 4.0, 1.0, 2.0));
  CHECK_THROWS_AS(f22_beta_integral(1.0, 2.0, 1.5, 2.5, 1.0), Error);
  CHECK_THROWS_AS(f22_beta_integral(3.0, 4.0, 1.0, 2.0, -1.0), Error);
}

TEST_CASE("f11 dispatcher") {
  CHECK(rel(f11(1.0, 2.0, -80.0).value, (1.0 - std::exp(-80.0)) / 80.0) < 1e-14);
  CHECK(rel(f11(2.5, 2.5, -7.0).value, std::exp(-7.0)) < 1e-15);
  // Kummer-transformed series at large negative argument with large parameters.
  const double reference = mp_pfq({150.0}, {154.5}, -90.0);
  const EvalReport r = f11(150.0, 154.5, -90.0);
  CHECK(r.branch == Branch::Series);
  CHECK(rel(r.value, reference) < 1e-12);
}

TEST_CASE("property: 2F2 with a shared parameter equals 1F1") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> param(0.05, 6.0);
  std::uniform_real_distribution<double> arg(-20.0, 20.0);
  for (int i = 0; i < 200; ++i) {
    const double a1 = param(rng), c = param(rng), b1 = param(rng), x = arg(rng);
    const double two = pfq_series_extended({{a1, c}, {b1, c}, x}).value;
    const double one = pfq_series_extended({{a1}, {b1}, x}).value;
    CHECK(std::abs(two - one) <= 1e-10 * std::abs(one));
    // Plain double series: agreement limited by its own cancellation.
    const EvalReport plain = pfq_series({{a1, c}, {b1, c}, x});
    CHECK(std::abs(plain.value - one) <= std::max(1e-10, 4.0 * plain.error_estimate) * std::abs(one));
  }
}

TEST_CASE("property: derivative identity against central differences") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> param(0.2, 4.0);
  std::uniform_real_distribution<double> arg(-8.0, 8.0);
  for (int i = 0; i < 20; ++i) {
    const double a1 = param(rng), a2 = param(rng), b1 = param(rng), b2 = param(rng);
    const double x = arg(rng);
    const double h = 1e-4;
    auto F = [&](double t) { return pfq_series_extended({{a1, a2}, {b1, b2}, t}).value; };
    const double fd = (F(x + h) - F(x - h)) / (2.0 * h);
    const double identity = a1 * a2 / (b1 * b2) *
                            pfq_series_extended({{a1 + 1, a2 + 1}, {b1 + 1, b2 + 1}, x}).value;
    CHECK(std::abs(fd - identity) <= 1e-6 * std::max(std::abs(identity), 1e-3));
  }
}

TEST_CASE("property: dispatcher never returns an inaccurate value silently") {
  // Some corners (a1 + a2 well above b1 + b2 at moderate negative z) are out
  // of reach of every route; there an EvaluationFailure is the right answer.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> param(0.05, 5.0);
  std::uniform_real_distribution<double> arg(-100.0, 100.0);
  int returned = 0;
  for (int i = 0; i < 100; ++i) {
    const double a1 = param(rng);
    const double a2 = param(rng);
    const double b1 = param(rng);
    const double b2 = param(rng);
    const double z = arg(rng);
    CAPTURE(a1);
    CAPTURE(a2);
    CAPTURE(b1);
    CAPTURE(b2);
    CAPTURE(z);
    EvalReport r;
    try {
      r = f22(a1, a2, b1, b2, z);
    } catch (const Error& e) {
      CHECK(e.code() == Errc::EvaluationFailure);
      continue;
    }
    ++returned;
    CHECK(r.terms_used >= 1);
    CHECK(r.cancellation_index >= 1.0);
    REQUIRE(std::isfinite(r.value));
    CHECK(r.error_estimate <= 1e-6);
    const double reference = mp_pfq({a1, a2}, {b1, b2}, z);
    CHECK(rel(r.value, reference) <= std::max(10.0 * r.error_estimate, 1e-13));
  }
  CHECK(returned >= 90);
}
