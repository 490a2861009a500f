#pragma once

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace fvault {

/// Field element value; meaning depends on the Field it is used with.
using Elem = std::uint32_t;

/// A set of distinct field elements, stored sorted ascending.
class FeatureSet {
 public:
  FeatureSet() = default;
  /// Throws std::invalid_argument on duplicate elements.
  explicit FeatureSet(std::vector<Elem> elements);
  FeatureSet(std::initializer_list<Elem> elements) : FeatureSet(std::vector<Elem>(elements)) {}

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(Elem x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

  std::span<const Elem> elements() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }
  Elem operator[](std::size_t i) const { return elems_[i]; }

  friend bool operator==(const FeatureSet&, const FeatureSet&) = default;

 private:
  std::vector<Elem> elems_;
};

FeatureSet set_union(const FeatureSet& a, const FeatureSet& b);
FeatureSet set_difference(const FeatureSet& a, const FeatureSet& b);
FeatureSet set_intersection(const FeatureSet& a, const FeatureSet& b);

}  // namespace fvault
