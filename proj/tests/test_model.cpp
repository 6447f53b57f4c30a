#include <doctest.h>

#include <cmath>
#include <random>

#include "trigene/error.hpp"
#include "trigene/model.hpp"

using namespace trigene;

namespace {

RateSet fig1a() { return RateSet::in_rescaled_units(0.13, 1.3, 2.3, 4.2, 3.0); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

RateSet random_rates(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> log_rate(std::log(1e-3), std::log(1e3));
  auto draw = [&] { return std::exp(log_rate(rng)); };
  return RateSet::in_rescaled_units(draw(), draw(), draw(), draw(), draw());
}

}  // namespace

TEST_CASE("rescale divides every rate by delta") {
  RateSet raw;
  raw.k1_plus = 2.6;
  raw.k1_minus = 0.26;
  raw.k2_plus = 8.4;
  raw.k2_minus = 4.6;
  raw.nu = 6.0;
  raw.delta = 2.0;
  const RateSet r = rescale(raw);
  CHECK(r.rescaled);
  CHECK(r.delta == 1.0);
  CHECK(r.k1_plus == 1.3);
  CHECK(r.k1_minus == 0.13);
  CHECK(r.k2_plus == 4.2);
  CHECK(r.k2_minus == 2.3);
  CHECK(r.nu == 3.0);
}

TEST_CASE("rescale with delta 1 leaves rates unchanged") {
  RateSet raw;
  raw.k1_minus = 0.13;
  raw.k1_plus = 1.3;
  raw.k2_minus = 2.3;
  raw.k2_plus = 4.2;
  raw.nu = 3.0;
  const RateSet r = rescale(raw);
  CHECK(r == fig1a());
}

TEST_CASE("rescale errors") {
  RateSet raw;
  raw.delta = 0.0;
  CHECK_THROWS_AS(rescale(raw), Error);
  try {
    rescale(raw);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NonPositiveDelta);
  }
  try {
    rescale(fig1a());
    FAIL("expected AlreadyRescaled");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::AlreadyRescaled);
  }
  RateSet negative;
  negative.nu = -1.0;
  try {
    rescale(negative);
    FAIL("expected InvalidArgument");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::InvalidArgument);
  }
}

TEST_CASE("derived constants need rescaled rates") {
  RateSet raw;
  raw.k1_plus = 1.0;
  try {
    derived_constants(raw);
    FAIL("expected NotRescaled");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::NotRescaled);
  }
}

TEST_CASE("occupancies at Fig. 1a rates") {
  const Occupancies occ = occupancies(fig1a());
  CHECK(occ.k_norm == doctest::Approx(8.749).epsilon(1e-14));
  CHECK(occ.gamma0 == doctest::Approx(0.299 / 8.749).epsilon(1e-14));
  CHECK(occ.gamma1 == doctest::Approx(2.99 / 8.749).epsilon(1e-14));
  CHECK(occ.gamma2 == doctest::Approx(5.46 / 8.749).epsilon(1e-14));
  CHECK(occ.gamma0 == doctest::Approx(0.03418).epsilon(1e-3));
  CHECK(occ.gamma1 == doctest::Approx(0.34175).epsilon(1e-4));
  CHECK(occ.gamma2 == doctest::Approx(0.62407).epsilon(1e-4));
}

TEST_CASE("occupancy edge cases") {
  CHECK(occupancies(RateSet::in_rescaled_units(0.0, 1.3, 2.3, 4.2, 3.0)).gamma0 == 0.0);
  CHECK(occupancies(RateSet::in_rescaled_units(0.5, 1.3, 2.3, 0.0, 3.0)).gamma2 == 0.0);
  try {
    occupancies(RateSet::in_rescaled_units(0.0, 0.0, 2.3, 4.2, 3.0));
    FAIL("expected DegenerateOccupancy");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::DegenerateOccupancy);
  }
}

TEST_CASE("occupancies satisfy the gene-chain balance equations") {
  const RateSet r = fig1a();
  const Occupancies o = occupancies(r);
  CHECK(r.k1_minus * o.gamma1 - r.k1_plus * o.gamma0 == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(r.k2_plus * o.gamma1 - r.k2_minus * o.gamma2 == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("two-state limit constants") {
  // With k1- = 0 the K2 pair is {k1+, k2+}. Roots are stored larger-first
  // (K+ >= K-), so k2+ = 4.2 lands in K2+; p_n is symmetric in the pair.
  const DerivedConstants c = derived_constants(RateSet::in_rescaled_units(0.0, 1.3, 2.3, 4.2, 3.0));
  CHECK(c.K1_minus == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(c.K1_plus == doctest::Approx(6.5).epsilon(1e-14));
  CHECK(c.K2_minus == doctest::Approx(1.3).epsilon(1e-14));
  CHECK(c.K2_plus == doctest::Approx(4.2).epsilon(1e-14));
}

TEST_CASE("zero switching rates give zero constants") {
  const DerivedConstants c = derived_constants(RateSet::in_rescaled_units(0.0, 0.0, 0.0, 0.0, 3.0));
  CHECK(c.kappa0 == 0.0);
  CHECK(c.kappa1 == 0.0);
  CHECK(c.kappa2 == 0.0);
  CHECK(c.K1_minus == 0.0);
  CHECK(c.K1_plus == 0.0);
  CHECK(c.K2_minus == 0.0);
  CHECK(c.K2_plus == 0.0);
}

TEST_CASE("Fig. 1a constants match the extended-precision quadratic roots") {
  // Frozen from a 50-digit evaluation of the root formulas.
  const DerivedConstants c = derived_constants(fig1a());
  CHECK(rel(c.K1_minus, 1.3245028877122398943) < 1e-14);
  CHECK(rel(c.K1_plus, 6.6054971122877601057) < 1e-14);
  CHECK(rel(c.K2_minus, 1.2452149828718583415) < 1e-14);
  CHECK(rel(c.K2_plus, 4.3847850171281416585) < 1e-14);
  CHECK(c.kappa3 == doctest::Approx(0.13 + 2.3 * 5.2));
  CHECK(c.K_norm == doctest::Approx(8.749));
}

TEST_CASE("property: occupancies, root identities, realness over random rates") {
  std::mt19937_64 rng(20240611);
  for (int i = 0; i < 1000; ++i) {
    const RateSet r = random_rates(rng);
    DerivedConstants c;
    REQUIRE_NOTHROW(c = derived_constants(r));
    const double sum = c.gamma0 + c.gamma1 + c.gamma2;
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    CHECK(rel(c.K1_minus + c.K1_plus, c.kappa1) < 1e-12);
    CHECK(rel(c.K1_minus * c.K1_plus, c.kappa0) < 1e-12);
    CHECK(rel(c.K2_minus + c.K2_plus, c.kappa2) < 1e-12);
    CHECK(rel(c.K2_minus * c.K2_plus, r.k1_plus * r.k2_plus) < 1e-12);
    CHECK(c.K1_plus >= c.K1_minus);
    CHECK(c.K2_plus >= c.K2_minus);
    CHECK(c.K1_minus >= 0.0);
    CHECK(c.K2_minus >= 0.0);
    // The normalizer written as kappa0 and as the occupancy sum agree.
    CHECK(rel(c.kappa0, c.K_norm) < 1e-12);
  }
}

TEST_CASE("property: K parameters are homogeneous of degree one") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    const RateSet r = random_rates(rng);
    const DerivedConstants base = derived_constants(r);
    for (double lambda : {0.5, 2.0, 10.0}) {
      const RateSet s = RateSet::in_rescaled_units(lambda * r.k1_minus, lambda * r.k1_plus,
                                                   lambda * r.k2_minus, lambda * r.k2_plus, r.nu);
      const DerivedConstants c = derived_constants(s);
      CHECK(rel(c.K1_minus, lambda * base.K1_minus) < 1e-12);
      CHECK(rel(c.K1_plus, lambda * base.K1_plus) < 1e-12);
      CHECK(rel(c.K2_minus, lambda * base.K2_minus) < 1e-12);
      CHECK(rel(c.K2_plus, lambda * base.K2_plus) < 1e-12);
    }
  }
}
