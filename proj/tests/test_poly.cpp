#include <doctest.h>

#include <algorithm>
#include <stdexcept>

#include "support.hpp"

using namespace fvault;
using fvault::testing::naive_eval;
using fvault::testing::random_poly;
using fvault::testing::random_set;

namespace {

Poly P(std::vector<Elem> c) { return Poly(std::move(c)); }

// Elementary symmetric function sigma_j over all j-subsets.
Elem sigma(const Field& f, const std::vector<Elem>& a, int j) {
  Elem acc = 0;
  const int n = static_cast<int>(a.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != j) continue;
    Elem prod = 1;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) prod = f.mul(prod, a[static_cast<std::size_t>(i)]);
    }
    acc ^= prod;
  }
  return acc;
}

}  // namespace

TEST_CASE("representation") {
  CHECK(Poly().is_zero());
  CHECK(Poly().degree() == kZeroDegree);
  CHECK(kZeroDegree + 1000 < -1000);
  CHECK(P({1, 2, 0, 0}).degree() == 1);
  CHECK(P({0, 0, 0}).is_zero());
  CHECK(P({3, 1}).is_monic());
  CHECK(!P({3, 2}).is_monic());
  CHECK(Poly::monomial(5, 3) == P({0, 0, 0, 5}));
}

TEST_CASE("division") {
  const Field f(4);
  Rng rng(1);
  const Poly a = random_poly(f, 7, rng);
  const auto self = divmod(f, a, a);
  CHECK(self.quotient == Poly::constant(1));
  CHECK(self.remainder.is_zero());
  CHECK(mul(f, a, Poly::constant(1)) == a);

  // x^3 + 1 = (x + 1)(x^2 + x + 1)
  const auto dm = divmod(f, P({1, 0, 0, 1}), P({1, 1}));
  CHECK(dm.quotient == P({1, 1, 1}));
  CHECK(dm.remainder.is_zero());
  CHECK_THROWS_AS(divmod(f, a, Poly()), std::domain_error);

  const Field g(8);
  for (int i = 0; i < 500; ++i) {
    const Poly x = random_poly(g, static_cast<int>(rng() % 30), rng);
    const Poly y = random_poly(g, static_cast<int>(rng() % 12), rng);
    const auto r = divmod(g, x, y);
    REQUIRE(add(mul(g, r.quotient, y), r.remainder) == x);
    REQUIRE(r.remainder.degree() < y.degree());
  }
}

TEST_CASE("gcd") {
  const Field f(8);
  Rng rng(2);
  const FeatureSet a{1, 2, 3, 4, 5}, b{4, 5, 6, 7};
  CHECK(gcd(f, char_poly(f, a), char_poly(f, b)) == char_poly(f, FeatureSet{4, 5}));
  CHECK(gcd(f, Poly(), Poly()).is_zero());
  CHECK(gcd(f, P({0, 6}), Poly()) == P({0, 1}));
}

TEST_CASE("evaluation") {
  const Field f(8);
  CHECK(eval(f, Poly::constant(0x37), 0x99) == 0x37);
  CHECK(eval(f, P({0, 1, 1}), 0x02) == 0x06);
  Rng rng(4);
  const FeatureSet a = random_set(f, 12, rng);
  const Poly chi = char_poly(f, a);
  for (Elem x : a) CHECK(eval(f, chi, x) == 0);
  for (int i = 0; i < 200; ++i) {
    const Poly p = random_poly(f, 15, rng);
    const Elem x = f.random(rng);
    REQUIRE(eval(f, p, x) == naive_eval(f, p, x));
  }
}

TEST_CASE("characteristic polynomial") {
  const Field f(4);
  CHECK(char_poly(f, FeatureSet{}) == Poly::constant(1));
  CHECK(char_poly(f, FeatureSet{9}) == P({9, 1}));
  // (X+1)(X+2)(X+3): 3*3 = 5 and 2*3 = 6 in GF(16), so X^3 + 7X + 6.
  CHECK(char_poly(f, FeatureSet{1, 2, 3}) == P({6, 7, 0, 1}));

  const Field g(8);
  Rng rng(8);
  for (int n = 0; n <= 10; ++n) {
    const auto raw = g.random_distinct(static_cast<std::size_t>(n), rng);
    const Poly chi = char_poly(g, FeatureSet(raw));
    REQUIRE(chi.degree() == n);
    REQUIRE(chi.is_monic());
    for (int j = 0; j <= n; ++j) REQUIRE(chi.coeff(n - j) == sigma(g, raw, j));
  }
}

TEST_CASE("traced Euclid") {
  const Field f(8);
  Rng rng(9);
  const Poly v = random_poly(f, 10, rng);
  const auto rows = traced_eea(f, v, Poly());
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].r == v);
  CHECK(rows[0].p == Poly::constant(1));
  CHECK(rows[0].q.is_zero());
  CHECK(rows[1].r.is_zero());
  CHECK(rows[1].p.is_zero());
  CHECK(rows[1].q == Poly::constant(1));
  CHECK_THROWS_AS(traced_eea(f, Poly(), Poly()), std::invalid_argument);

  const Poly mon = char_poly(f, random_set(f, 9, rng));
  const auto same = traced_eea(f, mon, mon);
  REQUIRE(same.size() == 3);
  CHECK(same[2].r.is_zero());
  CHECK(same[2].q.degree() == 0);

  for (int trial = 0; trial < 300; ++trial) {
    const Poly a = random_poly(f, static_cast<int>(rng() % 31), rng);
    const Poly b = random_poly(f, static_cast<int>(rng() % 31), rng);
    const auto tr = traced_eea(f, a, b);
    CHECK(tr.back().r.is_zero());
    for (std::size_t j = 0; j < tr.size(); ++j) {
      const auto& row = tr[j];
      REQUIRE(row.index == static_cast<int>(j));
      REQUIRE(add(mul(f, row.p, a), mul(f, row.q, b)) == row.r);
      if (j >= 2 && a.degree() >= b.degree()) {
        REQUIRE(row.r.degree() < tr[j - 1].r.degree());
        REQUIRE(row.q.degree() >= tr[j - 1].q.degree());
        if (!tr[j - 1].r.is_zero()) {
          REQUIRE(row.p.degree() + a.degree() == row.q.degree() + b.degree());
        }
      }
    }
  }
}

TEST_CASE("interpolation") {
  const Field f(8);
  Rng rng(12);
  const Point one[] = {{0x10, 0x77}};
  CHECK(interpolate(f, one) == Poly::constant(0x77));

  const Poly p = random_poly(f, 5, rng);
  std::vector<Point> pts;
  for (Elem x : f.random_distinct(6, rng)) pts.push_back({x, eval(f, p, x)});
  CHECK(interpolate(f, pts) == p);

  std::vector<Point> three;
  for (Elem x : f.random_distinct(3, rng)) three.push_back({x, f.random(rng)});
  const Poly r = interpolate(f, three);
  CHECK(r.degree() < 3);
  for (const auto& pt : three) CHECK(eval(f, r, pt.x) == pt.y);

  const Point dup[] = {{1, 2}, {1, 3}};
  CHECK_THROWS_AS(interpolate(f, dup), std::invalid_argument);
  CHECK_THROWS_AS(interpolate(f, std::span<const Point>{}), std::invalid_argument);

  for (int d = 0; d < 40; ++d) {
    const Poly q = random_poly(f, d, rng);
    std::vector<Point> s;
    for (Elem x : f.random_distinct(static_cast<std::size_t>(d) + 1 + rng() % 3, rng)) {
      s.push_back({x, eval(f, q, x)});
    }
    REQUIRE(interpolate(f, s) == q);
  }
}

TEST_CASE("root finding") {
  Rng rng(13);
  for (int m : {4, 8, 13, 16, 20}) {
    const Field f(m);
    CAPTURE(m);
    for (int n = 1; n <= 64 && static_cast<std::uint32_t>(n) <= f.size(); n += 7) {
      const FeatureSet a = random_set(f, static_cast<std::size_t>(n), rng);
      const Poly chi = char_poly(f, a);
      REQUIRE(roots_if_splits(f, chi, rng) == a);
      REQUIRE(roots_if_splits(f, scale(f, chi, 1 + f.random(rng) % (f.size() - 1))) == a);
      REQUIRE(roots_if_splits(f, chi, rng, RootStrategy::kSplitting) == a);
      if (m <= 13) REQUIRE(roots_if_splits(f, chi, rng, RootStrategy::kExhaustive) == a);
    }
  }

  const Field f(8);
  const Poly sq = mul(f, P({0x21, 1}), P({0x21, 1}));
  CHECK(!roots_if_splits(f, sq));
  CHECK(!roots_if_splits(f, sq, RootStrategy::kSplitting));
  CHECK_THROWS_AS(roots_if_splits(f, Poly()), std::domain_error);
  CHECK(roots_if_splits(f, Poly::constant(5)) == FeatureSet{});

  // A quadratic with no root, found by evaluating everywhere.
  Poly irr;
  for (Elem c = 1; c < 256 && irr.is_zero(); ++c) {
    const Poly cand = P({c, 1, 1});
    bool root = false;
    for (Elem x = 0; x < 256; ++x) root = root || eval(f, cand, x) == 0;
    if (!root) irr = cand;
  }
  REQUIRE(!irr.is_zero());
  CHECK(!roots_if_splits(f, irr));
  CHECK(!roots_if_splits(f, irr, RootStrategy::kSplitting));
  CHECK(!roots_if_splits(f, mul(f, irr, char_poly(f, FeatureSet{1, 2, 3}))));
}

TEST_CASE("Reed-Solomon decoding") {
  const Field f(8);
  Rng rng(14);
  const int n = 10, k = 4;
  const Poly sec = random_poly(f, k - 1, rng);
  const auto xs = f.random_distinct(n, rng);
  std::vector<Point> pts;
  for (Elem x : xs) pts.push_back({x, eval(f, sec, x)});
  CHECK(rs_decode(f, pts, k) == sec);

  auto corrupt = pts;
  for (int i = 0; i < 3; ++i) corrupt[static_cast<std::size_t>(i)].y ^= 1 + f.random(rng) % 255;
  CHECK(rs_decode(f, corrupt, k) == sec);

  auto too_many = pts;
  for (int i = 0; i < 4; ++i) too_many[static_cast<std::size_t>(i)].y ^= 1 + f.random(rng) % 255;
  // Any degree < 4 polynomial through 7 of the points passes through some 4 of
  // them, so interpolating every 4-subset shows none exists.
  int best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) != k) continue;
    std::vector<Point> sub4;
    for (int i = 0; i < n; ++i) {
      if ((mask >> i) & 1u) sub4.push_back(too_many[static_cast<std::size_t>(i)]);
    }
    const Poly cand = interpolate(f, sub4);
    int agree = 0;
    for (const auto& pt : too_many) agree += eval(f, cand, pt.x) == pt.y;
    best = std::max(best, agree);
  }
  REQUIRE(best < 7);
  CHECK(!rs_decode(f, too_many, k));
  CHECK_THROWS_AS(rs_decode(f, pts, 0), std::invalid_argument);
  CHECK_THROWS_AS(rs_decode(f, pts, n + 1), std::invalid_argument);
}

TEST_CASE("Reed-Solomon decoding agrees with exhaustive search over GF(16)") {
  const Field f(4);
  Rng rng(15);
  // k <= 4 keeps the search at 16^4 candidates.
  for (int trial = 0; trial < 400; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(std::min(n, 4)));
    const Poly base = random_poly(f, static_cast<int>(rng() % static_cast<std::uint64_t>(k)), rng);
    std::vector<Point> pts;
    for (Elem x : f.random_distinct(static_cast<std::size_t>(n), rng)) {
      pts.push_back({x, eval(f, base, x)});
    }
    const int errs = static_cast<int>(rng() % static_cast<std::uint64_t>(n + 1));
    for (int i = 0; i < errs; ++i) pts[static_cast<std::size_t>(i)].y = f.random(rng);

    std::optional<Poly> want;
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) total *= 16;
    for (std::uint64_t code = 0; code < total; ++code) {
      std::vector<Elem> c(static_cast<std::size_t>(k));
      std::uint64_t z = code;
      for (auto& e : c) {
        e = static_cast<Elem>(z & 15);
        z >>= 4;
      }
      const Poly cand(c);
      int agree = 0;
      for (const auto& pt : pts) agree += eval(f, cand, pt.x) == pt.y;
      if (2 * agree >= n + k) {
        want = cand;
        break;
      }
    }
    CAPTURE(n);
    CAPTURE(k);
    CAPTURE(errs);
    REQUIRE(rs_decode(f, pts, k) == want);
  }
}
