#pragma once

#include <cstdint>

#include "fvault/feature_set.hpp"

namespace fvault {

/// Keyed pseudo-random permutation of [0, 2^m). Seed 0 is the identity.
/// A balanced Feistel network over 2*ceil(m/2) bits; odd m cycle-walks back
/// into range.
class RandomEncoding {
 public:
  RandomEncoding(int m_bits, std::uint64_t seed);

  int bits() const { return m_; }
  std::uint64_t seed() const { return seed_; }
  bool is_identity() const { return seed_ == 0; }

  Elem apply(Elem x) const;
  Elem invert(Elem y) const;
  FeatureSet apply(const FeatureSet& a) const;
  FeatureSet invert(const FeatureSet& a) const;

 private:
  std::uint32_t round(int i, std::uint32_t half) const;
  std::uint32_t forward(std::uint32_t x) const;
  std::uint32_t backward(std::uint32_t x) const;

  int m_;
  int half_bits_;
  std::uint32_t half_mask_;
  std::uint64_t seed_;
  std::uint64_t q_;
};

inline RandomEncoding new_encoding(int m_bits, std::uint64_t seed) {
  return RandomEncoding(m_bits, seed);
}

}  // namespace fvault
