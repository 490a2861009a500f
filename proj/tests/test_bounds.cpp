#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fvault/bounds.hpp"

using namespace fvault::bounds;

namespace {

// Binomial by the product formula, independent of the library's GMP call.
mpz_class choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  mpz_class num = 1, den = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    num *= mpz_class(std::to_string(n - i));
    den *= mpz_class(std::to_string(i + 1));
  }
  return num / den;
}

mpz_class pw(std::uint64_t q, int e) {
  mpz_class out = 1;
  for (int i = 0; i < e; ++i) out *= mpz_class(std::to_string(q));
  return out;
}

mpq_class frac(const mpz_class& a, const mpz_class& b) {
  mpq_class r(a, b);
  r.canonicalize();
  return r;
}

void check_consistent(const BoundValue& b) {
  REQUIRE(b.exact);
  if (*b.exact == 0) {
    CHECK(std::isinf(b.log2));
    return;
  }
  const double direct = std::log2(b.exact->get_d());
  if (std::isfinite(direct) && direct > -1000) CHECK(std::abs(direct - b.log2) < 1e-9);
}

}  // namespace

TEST_CASE("binomials") {
  CHECK(binomial(16, 3) == 560);
  CHECK(binomial(5, 7) == 0);
  CHECK(binomial(65536, 24) == choose(65536, 24));
  CHECK(std::isinf(log2_of(mpq_class(0))));
  CHECK(log2_of(mpq_class(1, 8)) == doctest::Approx(-3.0));
}

TEST_CASE("single-record bound") {
  const auto b = single_record_bound(16, 2, 1);
  CHECK(*b.exact == frac(16, 120));
  CHECK(b.exact_string() == "2/15");
  check_consistent(b);

  const auto eq = single_record_bound(256, 10, 10);
  CHECK(eq.log2 == doctest::Approx(-log2_of(mpq_class(choose(256, 10)))).epsilon(1e-12));

  // t!/q^k approximation at practical sizes.
  const auto big = single_record_bound(65536, 24, 9);
  mpz_class fact = 1;
  for (int i = 2; i <= 24; ++i) fact *= i;
  const double approx = log2_of(frac(fact, pw(65536, 9)));
  CHECK(std::abs(big.log2 - approx) < 1.0);
  check_consistent(big);

  CHECK_THROWS_AS(single_record_bound(16, 2, 3), std::invalid_argument);
  CHECK_THROWS_AS(single_record_bound(16, 17, 3), std::invalid_argument);
}

TEST_CASE("baseline guessing rate") {
  CHECK(*baseline_guess_rate(16, 8, 2).exact == frac(28, 120));
  CHECK(*baseline_guess_rate(256, 24, 9).exact == frac(choose(24, 9), choose(256, 9)));
}

TEST_CASE("leakage bound") {
  const std::uint64_t q = 65536;
  CHECK(*leakage_bound(q, 24, 24, 9, 8).exact == 23 * 16);
  CHECK(*leakage_bound(q, 24, 24, 9, 28).exact == 30 * 16);
  CHECK(*leakage_bound(q, 24, 24, 9, 0).exact == 15 * 16);
  CHECK(leakage_bound(q, 24, 24, 9, 0).log2 == 15 * 16);
  const auto odd = leakage_bound(10, 6, 6, 2, 2);
  CHECK(!odd.exact);
  CHECK(odd.log2 == doctest::Approx(6 * std::log2(10.0)));
  CHECK_THROWS_AS(leakage_bound(q, 24, 24, 9, 7), std::invalid_argument);
  CHECK_THROWS_AS(leakage_bound(q, 24, 20, 9, 2), std::invalid_argument);
  CHECK_THROWS_AS(leakage_bound(q, 24, 24, 9, 50), std::invalid_argument);
  CHECK_NOTHROW(leakage_bound(q, 24, 23, 9, 1));

  for (int t = 4; t <= 30; t += 2) {
    for (int s = 2; s <= t; ++s) {
      for (int k = 1; k <= s; ++k) {
        double prev = -1;
        for (int d = t - s; d <= t + s; d += 2) {
          const double v = leakage_bound(q, t, s, k, d).log2;
          REQUIRE(v >= prev);
          prev = v;
        }
      }
    }
  }
}

TEST_CASE("full-recovery lower bound") {
  const auto b = full_recovery_lower_bound(16, 8, 8, 4, 7);
  CHECK(*b.exact == frac(35, 560));
  CHECK(guess_count_h(8, 4, 7) == 0);
  CHECK(guess_count_m(8, 4, 7) == 3);
  CHECK(*full_recovery_lower_bound(256, 10, 10, 3, 7).exact == 1);
  for (int t = 6; t <= 40; ++t) {
    for (int k = 1; k <= t / 3; ++k) {
      for (int w = (t + k + 1) / 2; w <= t - k; ++w) {
        REQUIRE(*full_recovery_lower_bound(65536, t, t, k, w).exact == 1);
      }
    }
  }

  // Independent evaluation at a point with both guess counts positive.
  const int t = 12, s = 11, k = 6, w = 7;
  const int h = (t + k + 1) / 2 - w, m = k - (t - w);
  REQUIRE(h == 2);
  REQUIRE(m == 1);
  const mpq_class want = frac(choose(t - w, h) * choose(s - w, h) * choose(w, m),
                              choose(64, h) * choose(64, h) * choose(64, m));
  CHECK(*full_recovery_lower_bound(64, t, s, k, w).exact == want);
}

TEST_CASE("lower bound scales as q^-(2h+m) at the boundary") {
  // At 2 omega = t + k - 1 both guess counts are 1 for (24, 9).
  const int t = 24, k = 9, w = 16;
  REQUIRE(guess_count_h(t, k, w) == 1);
  REQUIRE(guess_count_m(t, k, w) == 1);
  double lo = 1e300, hi = 0;
  for (int bits = 8; bits <= 16; ++bits) {
    const std::uint64_t q = std::uint64_t{1} << bits;
    const double scaled = full_recovery_lower_bound(q, t, t, k, w).log2 + 3.0 * bits;
    lo = std::min(lo, scaled);
    hi = std::max(hi, scaled);
  }
  CHECK(hi - lo < 0.1);
}

TEST_CASE("full-recovery upper bound") {
  const auto b = full_recovery_upper_bound(256, 8, 8, 4, 6);
  const mpq_class want = frac(pw(256, 8), choose(256, 6) * choose(250, 2) * choose(248, 2));
  CHECK(*b.exact == want);
  check_consistent(b);

  // omega = t = s: a single set of size t.
  const auto one = full_recovery_upper_bound(256, 10, 10, 4, 10);
  CHECK(*one.exact == *single_record_bound(256, 10, 4).exact);

  for (int t = 3; t <= 14; ++t) {
    for (int s = 2; s <= t; ++s) {
      for (int w = 0; w <= s; ++w) {
        double prev = 1e300;
        for (int k = 1; k <= s; ++k) {
          const auto up = full_recovery_upper_bound(64, t, s, k, w);
          const auto lo = full_recovery_lower_bound(64, t, s, k, w);
          REQUIRE(up.log2 <= prev);
          prev = up.log2;
          REQUIRE(*lo.exact <= *up.exact);
          check_consistent(up);
          check_consistent(lo);
        }
      }
    }
  }
  CHECK_THROWS_AS(full_recovery_upper_bound(8, 6, 6, 2, 0), std::invalid_argument);
}

TEST_CASE("partial-recovery bounds") {
  // Intersection bound only past t - k, and about 1/q.
  const int t = 24, k = 9;
  CHECK(!partial_bounds(65536, t, t, k, t - k).intersection);
  double prev = 0;
  for (int bits = 8; bits <= 20; ++bits) {
    const auto pb = partial_bounds(std::uint64_t{1} << bits, t, t, k, 20);
    REQUIRE(pb.intersection);
    if (bits >= 12) {
      CHECK(std::exp2(pb.intersection->log2 - prev) == doctest::Approx(0.5).epsilon(0.03));
    }
    prev = pb.intersection->log2;
  }
  const auto at_t = partial_bounds(256, 10, 10, 4, 10);
  REQUIRE(at_t.intersection);
  CHECK(*at_t.intersection->exact ==
        frac(pw(256, 6) * choose(256, 3), choose(256, 10) * choose(9, 3)));

  // 2k <= omega < t - k has no difference bound.
  const auto gap = partial_bounds(65536, 18, 18, 2, 6);
  CHECK(!gap.difference);
  CHECK(gap.difference_case == DifferenceCase::kNone);

  const auto mid = partial_bounds(256, 10, 10, 4, 6);
  REQUIRE(mid.difference);
  CHECK(mid.difference_case == DifferenceCase::kMidRange);
  // h = 1, m = 0 here.
  CHECK(*mid.difference->exact ==
        frac(2 * pw(256, 12) * choose(256, 1), choose(4, 0) * choose(4, 1) * choose(256, 14)));

  const auto eq = partial_bounds(65536, 24, 24, 9, 9);
  REQUIRE(eq.difference);
  CHECK(eq.difference_case == DifferenceCase::kEqualK);
  const auto below = partial_bounds(65536, 24, 24, 9, 3);
  REQUIRE(below.difference);
  CHECK(below.difference_case == DifferenceCase::kBelowK);
  check_consistent(*below.difference);

  CHECK(std::string(difference_case_name(DifferenceCase::kMidRange)) == "mid_range");
  CHECK(std::string(difference_case_name(DifferenceCase::kNone)) == "none");
  CHECK_THROWS_AS(partial_bounds(256, 10, 10, 4, 11), std::invalid_argument);
}
