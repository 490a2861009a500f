#pragma once

#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "fvault/feature_set.hpp"
#include "fvault/gf2m.hpp"
#include "fvault/rng.hpp"

namespace fvault {

/// Degree reported for the zero polynomial. It compares below every real
/// degree and stays far below them after adding any small offset.
inline constexpr int kZeroDegree = std::numeric_limits<int>::min() / 4;

/// Dense univariate polynomial, ascending coefficients, no trailing zeros.
/// Coefficients are raw values; all arithmetic takes the Field explicitly.
class Poly {
 public:
  Poly() = default;
  explicit Poly(std::vector<Elem> coeffs) : c_(std::move(coeffs)) { trim(); }

  static Poly constant(Elem c) { return Poly(std::vector<Elem>{c}); }
  static Poly monomial(Elem c, int degree);

  int degree() const { return c_.empty() ? kZeroDegree : static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const { return !c_.empty() && c_.back() == 1; }
  Elem lead() const { return c_.empty() ? 0 : c_.back(); }
  Elem coeff(int i) const {
    return i >= 0 && i < static_cast<int>(c_.size()) ? c_[static_cast<std::size_t>(i)] : 0;
  }
  std::span<const Elem> coeffs() const { return c_; }

  friend bool operator==(const Poly&, const Poly&) = default;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Elem> c_;
};

struct Point {
  Elem x;
  Elem y;
};

// Over characteristic 2, subtraction coincides with addition.
Poly add(const Poly& a, const Poly& b);
inline Poly sub(const Poly& a, const Poly& b) { return add(a, b); }
Poly mul(const Field& f, const Poly& a, const Poly& b);
Poly scale(const Field& f, const Poly& a, Elem c);
Poly make_monic(const Field& f, const Poly& a);

struct DivMod {
  Poly quotient;
  Poly remainder;
};
/// Throws std::domain_error when b is zero.
DivMod divmod(const Field& f, const Poly& a, const Poly& b);
Poly rem(const Field& f, const Poly& a, const Poly& b);
/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Field& f, Poly a, Poly b);

Elem eval(const Field& f, const Poly& p, Elem x);

/// prod_{a in A} (X - a).
Poly char_poly(const Field& f, const FeatureSet& a);
/// Same product over an arbitrary element list (no distinctness check).
Poly char_poly(const Field& f, std::span<const Elem> roots);

/// One row r = p*V + q*W of an extended Euclidean trace.
struct EeaRow {
  Poly r;
  Poly p;
  Poly q;
  int index = 0;
};

/// Incremental extended Euclid on (V, W). Starts at the row (V, 1, 0); each
/// advance() produces the next row until a zero remainder has been emitted.
class EuclidStepper {
 public:
  /// Throws std::invalid_argument when both inputs are zero.
  EuclidStepper(const Field& f, Poly v, Poly w);

  const EeaRow& current() const { return cur_; }
  /// False once the zero-remainder row has been reached.
  bool advance();

 private:
  const Field* f_;
  EeaRow prev_;
  EeaRow cur_;
  bool started_ = false;
};

/// Full trace: (V,1,0), (W,0,1), ..., terminating with (and including) the
/// first zero remainder.
std::vector<EeaRow> traced_eea(const Field& f, const Poly& v, const Poly& w);

/// Unique polynomial of degree < n through n points with distinct abscissas.
/// Throws std::invalid_argument on duplicate abscissas or empty input.
Poly interpolate(const Field& f, std::span<const Point> points);

enum class RootStrategy {
  kAuto,        ///< exhaustive evaluation for q <= 2^12, probabilistic splitting above
  kExhaustive,  ///< evaluate at every field element
  kSplitting,   ///< gcd with X^q - X, then trace-map splitting
};

inline constexpr int kExhaustiveRootMaxBits = 12;

/// Root set of p iff p splits into distinct linear factors over the field.
/// Throws std::domain_error for the zero polynomial.
std::optional<FeatureSet> roots_if_splits(const Field& f, const Poly& p, Rng& rng,
                                          RootStrategy strategy = RootStrategy::kAuto);
/// As above with an internal fixed-seed generator; the result does not depend
/// on the random choices.
std::optional<FeatureSet> roots_if_splits(const Field& f, const Poly& p,
                                          RootStrategy strategy = RootStrategy::kAuto);

/// Gao-style unique decoding: returns f with deg f < k agreeing with at least
/// (n + k) / 2 of the points, or nullopt.
std::optional<Poly> rs_decode(const Field& f, std::span<const Point> points, int k);

}  // namespace fvault
