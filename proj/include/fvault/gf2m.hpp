#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fvault/feature_set.hpp"
#include "fvault/rng.hpp"

namespace fvault {

inline constexpr int kMinFieldBits = 2;
inline constexpr int kMaxFieldBits = 24;

/// Low-weight irreducible modulus (bit m set) for each supported degree.
std::uint32_t default_modulus(int m_bits);

/// Ben-Or irreducibility test for a GF(2) polynomial given as a bitmask.
bool is_irreducible_gf2(std::uint64_t poly);

/// GF(2^m) for 2 <= m <= 24. Immutable after construction and safe to share
/// across threads. Fields up to 2^16 multiply through log/antilog tables;
/// larger ones use carry-less multiply and reduction.
class Field {
 public:
  explicit Field(int m_bits);
  /// Custom modulus; throws std::invalid_argument if it is not an irreducible
  /// polynomial of degree m_bits.
  Field(int m_bits, std::uint32_t modulus);

  /// Process-wide cached context for the default modulus of m_bits.
  static std::shared_ptr<const Field> get(int m_bits);

  int bits() const { return m_; }
  std::uint32_t modulus() const { return modulus_; }
  std::uint32_t size() const { return q_; }
  Elem mask() const { return q_ - 1; }

  bool contains(std::uint64_t v) const { return v < q_; }
  /// Validates a raw value; throws std::out_of_range if it is not an element.
  Elem element(std::uint64_t v) const;

  static Elem add(Elem a, Elem b) { return a ^ b; }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    if (!exp_.empty()) return exp_[log_[a] + log_[b]];
    return mul_slow(a, b);
  }
  Elem sqr(Elem a) const { return mul(a, a); }
  /// Throws std::domain_error for zero.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;

  Elem random(Rng& rng) const { return static_cast<Elem>(rng() & mask()); }
  /// n pairwise distinct elements avoiding `exclude`, in draw order.
  /// Throws std::invalid_argument if n + |exclude| > q.
  std::vector<Elem> random_distinct(std::size_t n, const FeatureSet& exclude, Rng& rng) const;
  std::vector<Elem> random_distinct(std::size_t n, Rng& rng) const {
    return random_distinct(n, FeatureSet{}, rng);
  }

  /// Lowercase hex, fixed width ceil(m/4), no prefix.
  std::string to_hex(Elem a) const;
  /// Strict inverse of to_hex; throws std::invalid_argument.
  Elem from_hex(std::string_view s) const;
  int hex_width() const { return (m_ + 3) / 4; }

  friend bool operator==(const Field& a, const Field& b) {
    return a.m_ == b.m_ && a.modulus_ == b.modulus_;
  }

 private:
  Elem mul_slow(Elem a, Elem b) const;
  void build_tables();

  int m_;
  std::uint32_t modulus_;
  std::uint32_t q_;
  std::vector<std::uint32_t> log_;
  std::vector<Elem> exp_;  // length 2(q-1) so log sums never need reducing
};

}  // namespace fvault
