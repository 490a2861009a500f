#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include <gmpxx.h>

namespace fvault::bounds {

/// A probability (or, for leakage, a bit count) in log2 form plus the exact
/// rational value when the arguments allow it.
struct BoundValue {
  double log2 = 0.0;
  std::optional<mpq_class> exact;

  double value() const;
  /// "num/den", or "NA" without an exact value.
  std::string exact_string() const;
};

mpz_class binomial(std::uint64_t n, std::uint64_t k);
/// log2 of a non-negative rational; -inf for zero.
double log2_of(const mpq_class& x);

/// q^(t-k) / C(q, t): ceiling on any single-record attack.
BoundValue single_record_bound(std::uint64_t q, int t, int k);
/// C(t, k) / C(q, k): guess k elements and unlock.
BoundValue baseline_guess_rate(std::uint64_t q, int t, int k);

/// Entropy loss of two records in bits: min(t+s-2k, t-k+d) * log2 q.
/// Throws std::invalid_argument unless d = t+s (mod 2) and t-s <= d <= t+s.
BoundValue leakage_bound(std::uint64_t q, int t, int s, int k, int d);

/// q^min(t+s-2k, 2t+s-2w-k) / (C(q,w) C(q-w,t-w) C(q-t,s-w)).
BoundValue full_recovery_upper_bound(std::uint64_t q, int t, int s, int k, int omega);
/// Success probability of one full-recovery run with the right omega:
/// C(t-w,h) C(s-w,h) C(w,m) / (C(q,h)^2 C(q,m)).
BoundValue full_recovery_lower_bound(std::uint64_t q, int t, int s, int k, int omega);

/// Guess counts of a full-recovery run at candidate overlap omega.
int guess_count_h(int t, int k, int omega);
int guess_count_m(int t, int k, int omega);

enum class DifferenceCase { kNone, kMidRange, kEqualK, kBelowK };
const char* difference_case_name(DifferenceCase c);

struct PartialBounds {
  /// Recovering an intersection element; only for omega > t - k.
  std::optional<BoundValue> intersection;
  /// Recovering a symmetric-difference element; tightest applicable case.
  std::optional<BoundValue> difference;
  DifferenceCase difference_case = DifferenceCase::kNone;
};

PartialBounds partial_bounds(std::uint64_t q, int t, int s, int k, int omega);

}  // namespace fvault::bounds
