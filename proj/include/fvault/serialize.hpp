#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

#include "fvault/feature_set.hpp"
#include "fvault/gf2m.hpp"
#include "fvault/poly.hpp"
#include "fvault/vault.hpp"

namespace fvault {

/// Malformed serialized input. what() names the byte offset or the offending
/// field path.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string serialize(const VaultRecord& rec);
VaultRecord deserialize(std::string_view text);

struct TaggedFeatureSet {
  int m_bits = 0;
  FeatureSet elements;
};

/// {"m_bits": m, "elements": [hex, ...]}
std::string serialize_features(const Field& f, const FeatureSet& a);
TaggedFeatureSet deserialize_features(std::string_view text);

/// JSON array of hex coefficients, ascending.
std::string serialize_poly(const Field& f, const Poly& p);
Poly deserialize_poly(const Field& f, std::string_view text);

}  // namespace fvault
