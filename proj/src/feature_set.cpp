#include "fvault/feature_set.hpp"

#include <iterator>
#include <stdexcept>
#include <string>

namespace fvault {

FeatureSet::FeatureSet(std::vector<Elem> elements) : elems_(std::move(elements)) {
  std::sort(elems_.begin(), elems_.end());
  if (std::adjacent_find(elems_.begin(), elems_.end()) != elems_.end()) {
    throw std::invalid_argument("feature set contains a repeated element");
  }
}

FeatureSet set_union(const FeatureSet& a, const FeatureSet& b) {
  std::vector<Elem> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FeatureSet(std::move(out));
}

FeatureSet set_difference(const FeatureSet& a, const FeatureSet& b) {
  std::vector<Elem> out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FeatureSet(std::move(out));
}

FeatureSet set_intersection(const FeatureSet& a, const FeatureSet& b) {
  std::vector<Elem> out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return FeatureSet(std::move(out));
}

}  // namespace fvault
