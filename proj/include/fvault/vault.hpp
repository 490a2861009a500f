#pragma once

#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "fvault/feature_set.hpp"
#include "fvault/gf2m.hpp"
#include "fvault/poly.hpp"
#include "fvault/rng.hpp"

namespace fvault {

enum class Variant { kProbabilistic, kDeterministic, kBlended };

const char* variant_name(Variant v);

/// An enrolled record. `coeffs` holds exactly what is stored:
///   probabilistic: v_0..v_t (monic, so the last entry is 1)
///   deterministic: v_k..v_{t-1}; the leading 1 is implicit
///   blended:       v_0..v_{t+blend_size} over GF(2^ext_m_bits)
struct VaultRecord {
  Variant variant = Variant::kProbabilistic;
  int m_bits = 0;
  int ext_m_bits = 0;
  int t = 0;
  int k = 0;
  int blend_size = 0;
  std::vector<Elem> coeffs;

  /// Bits of the field the coefficients live in.
  int field_bits() const { return variant == Variant::kBlended ? ext_m_bits : m_bits; }
  int degree() const { return t + blend_size; }
  /// Dense polynomial over field_bits(); deterministic records get zero
  /// coefficients below k.
  Poly polynomial() const;

  friend bool operator==(const VaultRecord&, const VaultRecord&) = default;
};

/// Throws std::invalid_argument when the record violates its invariants.
void validate(const VaultRecord& rec);

/// Uniform polynomial of degree < k; with exact_degree the X^(k-1)
/// coefficient is nonzero.
Poly random_secret(const Field& f, int k, Rng& rng, bool exact_degree = false);

struct Enrollment {
  VaultRecord record;
  Poly secret;
};

Enrollment enroll_probabilistic(const Field& f, const FeatureSet& a, int k, Rng& rng);
/// V = secret + chi_A for a caller-chosen secret of degree < k.
VaultRecord enroll_probabilistic(const Field& f, const FeatureSet& a, int k, const Poly& secret);
VaultRecord enroll_deterministic(const Field& f, const FeatureSet& a, int k);

/// Isomorphic copy of GF(2^m) inside GF(2^(m*e)): a_i bits map to a_i beta^i
/// where beta is the smallest root of the base modulus in the big field.
class SubfieldEmbedding {
 public:
  SubfieldEmbedding(std::shared_ptr<const Field> base, std::shared_ptr<const Field> ext);
  static std::shared_ptr<const SubfieldEmbedding> get(int base_bits, int ext_bits);

  const Field& base() const { return *base_; }
  const Field& ext() const { return *ext_; }

  Elem embed(Elem a) const;
  FeatureSet embed(const FeatureSet& a) const;
  /// Frobenius fixed-point test: x^(2^m) == x.
  bool in_subfield(Elem x) const;
  /// Inverse of embed; throws std::invalid_argument outside the subfield.
  Elem restrict(Elem x) const;

 private:
  std::shared_ptr<const Field> base_;
  std::shared_ptr<const Field> ext_;
  std::vector<Elem> basis_;  // beta^i
  std::unordered_map<Elem, Elem> back_;
};

struct BlendedEnrollment {
  VaultRecord record;
  Poly secret;          // over the extension field
  FeatureSet embedded;  // A inside the extension field
  FeatureSet blending;  // A_bl, disjoint from the subfield
};

/// blend_size random extension-field elements outside the base field.
FeatureSet random_blending_set(const SubfieldEmbedding& emb, int blend_size, Rng& rng);

BlendedEnrollment enroll_blended(const Field& base, const FeatureSet& a, int k, int blend_size,
                                 int ext_factor, Rng& rng);
/// Same, with a caller-supplied blending set (must avoid the subfield).
BlendedEnrollment enroll_blended(const Field& base, const FeatureSet& a, int k,
                                 const FeatureSet& blending, int ext_factor, Rng& rng);

struct UnlockResult {
  std::optional<Poly> secret;  // absent for deterministic records
  FeatureSet features;         // base-field elements
};

/// Decodes with the query set `b` (base-field elements, |b| >= k).
/// std::nullopt when decoding fails or V - f does not split.
std::optional<UnlockResult> unlock(const VaultRecord& rec, const FeatureSet& b);

}  // namespace fvault
