#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fvault/feature_set.hpp"
#include "fvault/gf2m.hpp"
#include "fvault/outcome.hpp"
#include "fvault/poly.hpp"
#include "fvault/rng.hpp"
#include "fvault/vault.hpp"

namespace fvault {

// ---- partial recovery ------------------------------------------------------

enum class PartialFailure { kNoQualifyingIndex, kRemainderTooLarge, kNotSplitting };
const char* failure_name(PartialFailure f);

struct PartialRecoveryOutput {
  int omega_star = 0;
  FeatureSet diff_a;  // candidate A \ B
  FeatureSet diff_b;  // candidate B \ A
  friend bool operator==(const PartialRecoveryOutput&, const PartialRecoveryOutput&) = default;
};

using PartialResult = Outcome<PartialRecoveryOutput, PartialFailure>;

/// EEA attack on two vault polynomials sharing the secret-degree bound k.
/// V and W may come in either order; the output always refers to (V, W).
/// Throws std::invalid_argument if either degree is below k.
PartialResult partial_recovery(const Field& f, const Poly& v, const Poly& w, int k);
/// Record form; throws std::invalid_argument when the records live in
/// different fields or use different k.
PartialResult partial_recovery(const VaultRecord& v, const VaultRecord& w);

// ---- coefficient slices ----------------------------------------------------

/// Coefficients of X^low_index .. X^top of a characteristic polynomial.
struct UpperCoeffs {
  int low_index = 0;
  std::vector<Elem> coeffs;

  int top() const { return low_index + static_cast<int>(coeffs.size()) - 1; }
  /// The slice as a polynomial with zero coefficients below low_index.
  Poly polynomial() const;
  friend bool operator==(const UpperCoeffs&, const UpperCoeffs&) = default;
};

UpperCoeffs upper_coeffs(const Poly& p, int low_index);

/// Window [low-1, top-1] of chi / (X - x). Needs low_index >= 1. Exact when x
/// is a root of the underlying characteristic polynomial.
UpperCoeffs reduce_record(const Field& f, const UpperCoeffs& c, Elem x);
/// Window [low+1, top+1] of chi * (X - x); inverse of reduce_record.
UpperCoeffs extend_record(const Field& f, const UpperCoeffs& c, Elem x);

// ---- full recovery ---------------------------------------------------------

struct FullRecoveryOutput {
  FeatureSet set_a;
  FeatureSet set_b;
  friend bool operator==(const FullRecoveryOutput&, const FullRecoveryOutput&) = default;
};

enum class FullFailure {
  kTooManyGuesses,  // h >= k
  kNoQualifyingIndex,
  kRemainderTooLarge,
  kNotSplitting,
  kGuessCollision,
  kInterpolationMismatch,
  kUnlockNotSplitting,
  kInconsistentSizes,
  kVerifierRejected,
};
const char* failure_name(FullFailure f);

using FullResult = Outcome<FullRecoveryOutput, FullFailure>;

/// Final check on a candidate (A', B'), e.g. a hash of the secret.
using Verifier = std::function<bool(const FeatureSet&, const FeatureSet&)>;

FullResult full_recovery(const Field& f, const Poly& v, const Poly& w, int k, int omega_prime,
                         Rng& rng, const Verifier& verifier = {});
FullResult full_recovery(const VaultRecord& v, const VaultRecord& w, int omega_prime, Rng& rng,
                         const Verifier& verifier = {});

// ---- repeated guessing -----------------------------------------------------

struct Exhausted {
  std::uint64_t attempts = 0;
};

struct DriverConfig {
  int omega_start = 0;
  int omega_floor = 0;
  std::uint64_t budget = 0;
  std::uint64_t seed = 0;
  int threads = 1;
  /// Attempts per level are ceil(gamma / theta), theta the level's
  /// full-recovery success bound; the floor level takes the rest.
  double gamma = 4.0;
};

struct DriverSuccess {
  FullRecoveryOutput sets;
  std::uint64_t attempts = 0;  // including the successful one
  int omega_prime = 0;
};

using DriverResult = Outcome<DriverSuccess, Exhausted>;

/// Decreasing-omega' brute force. The verifier must be thread-safe when
/// cfg.threads > 1. The result does not depend on cfg.threads.
DriverResult brute_force_driver(const Field& f, const Poly& v, const Poly& w, int k,
                                const DriverConfig& cfg, const Verifier& verifier = {});
DriverResult brute_force_driver(const VaultRecord& v, const VaultRecord& w,
                                const DriverConfig& cfg, const Verifier& verifier = {});

struct SingleSuccess {
  FeatureSet set;
  std::uint64_t attempts = 0;
};

/// One guess of k elements followed by unlocking; the root set on success.
std::optional<FeatureSet> single_record_trial(const Field& f, const Poly& v, int k, Rng& rng);
Outcome<SingleSuccess, Exhausted> single_record_attack(
    const Field& f, const Poly& v, int k, Rng& rng, std::uint64_t budget,
    const std::function<bool(const FeatureSet&)>& verifier = {});

// ---- validation oracles ----------------------------------------------------

inline constexpr std::uint64_t kDefaultEnumerationCap = 50'000'000;
inline constexpr int kOracleMaxBits = 6;

/// All deg(v)-subsets A of the field with chi_A matching v on X^k and up.
/// Needs q <= 64; throws std::length_error above the cap.
std::vector<FeatureSet> matching_sets(const Field& f, const Poly& v, int k,
                                      std::uint64_t cap = kDefaultEnumerationCap);

/// Every (A, B) consistent with both records. The cap applies to
/// C(q, t) + C(q, s) and to the number of pairs returned.
std::vector<std::pair<FeatureSet, FeatureSet>> exhaustive_oracle(
    const Field& f, const Poly& v, const Poly& w, int k, std::uint64_t cap = kDefaultEnumerationCap);
std::vector<std::pair<FeatureSet, FeatureSet>> exhaustive_oracle(
    const VaultRecord& v, const VaultRecord& w, std::uint64_t cap = kDefaultEnumerationCap);

/// Sets A' containing a0 with |A'| = deg(v) whose chi matches v on X^k and up.
/// Works in any field size; the cap bounds C(q, k - |a0| - 1).
std::vector<FeatureSet> find_supersets(const Field& f, const Poly& v, int k, const FeatureSet& a0,
                                       std::uint64_t cap = kDefaultEnumerationCap);

/// True if some (A', B') consistent with the records has A' \ B' = diff_a and
/// B' \ A' = diff_b.
bool output_has_preimage(const Field& f, const Poly& v, const Poly& w, int k,
                         const PartialRecoveryOutput& out,
                         std::uint64_t cap = kDefaultEnumerationCap);

/// chi, f_hat, g_hat with V = f_hat + chi * chi_{diff_a}, W = g_hat + chi *
/// chi_{diff_b}, chi monic of degree omega_star and deg f_hat, g_hat < k.
struct CofactorWitness {
  Poly chi;
  Poly f_hat;
  Poly g_hat;
};
std::optional<CofactorWitness> shared_cofactor(const Field& f, const Poly& v, const Poly& w, int k,
                                               const PartialRecoveryOutput& out);

}  // namespace fvault
