#pragma once

#include <cstdint>
#include <vector>

#include "fvault/feature_set.hpp"
#include "fvault/gf2m.hpp"
#include "fvault/poly.hpp"
#include "fvault/rng.hpp"

namespace fvault::testing {

// Bit-serial carry-less product reduced by `modulus`; shares no code with
// the library's table or reduction paths.
inline std::uint32_t ref_mul(std::uint32_t a, std::uint32_t b, int m, std::uint32_t modulus) {
  std::uint64_t acc = 0;
  for (int i = 0; i < m; ++i) {
    if ((b >> i) & 1u) acc ^= static_cast<std::uint64_t>(a) << i;
  }
  for (int i = 2 * m - 2; i >= m; --i) {
    if ((acc >> i) & 1u) acc ^= static_cast<std::uint64_t>(modulus) << (i - m);
  }
  return static_cast<std::uint32_t>(acc);
}

// Remainder of GF(2) polynomials given as bitmasks.
inline std::uint64_t gf2_rem(std::uint64_t a, std::uint64_t b) {
  const int db = 63 - __builtin_clzll(b);
  while (a != 0) {
    const int da = 63 - __builtin_clzll(a);
    if (da < db) break;
    a ^= b << (da - db);
  }
  return a;
}

// Irreducibility by trial division over every polynomial of degree <= deg/2.
inline bool irreducible_by_division(std::uint64_t p) {
  const int deg = 63 - __builtin_clzll(p);
  for (std::uint64_t d = 2; d < (std::uint64_t{1} << (deg / 2 + 1)); ++d) {
    if (gf2_rem(p, d) == 0) return false;
  }
  return deg >= 1;
}

inline FeatureSet random_set(const Field& f, std::size_t n, Rng& rng) {
  return FeatureSet(f.random_distinct(n, rng));
}

inline Poly random_poly(const Field& f, int degree, Rng& rng) {
  std::vector<Elem> c(static_cast<std::size_t>(degree) + 1);
  for (auto& x : c) x = f.random(rng);
  while (c.back() == 0) c.back() = f.random(rng);
  return Poly(c);
}

// Evaluation by power sums, independent of the library's Horner loop.
inline Elem naive_eval(const Field& f, const Poly& p, Elem x) {
  Elem acc = 0;
  Elem xp = 1;
  for (int i = 0; i <= p.degree(); ++i) {
    acc ^= f.mul(p.coeff(i), xp);
    xp = f.mul(xp, x);
  }
  return acc;
}

}  // namespace fvault::testing
