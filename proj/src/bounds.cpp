#include "fvault/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fvault::bounds {

namespace {

void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

double log2_mpz(const mpz_class& z) {
  if (z == 0) return -std::numeric_limits<double>::infinity();
  long exp = 0;
  const double d = mpz_get_d_2exp(&exp, z.get_mpz_t());
  return std::log2(d) + static_cast<double>(exp);
}

mpz_class power(std::uint64_t q, int e) {
  mpz_class out;
  mpz_ui_pow_ui(out.get_mpz_t(), q, static_cast<unsigned long>(e));
  return out;
}

BoundValue make(mpz_class num, mpz_class den) {
  mpq_class r(num, den);
  r.canonicalize();
  BoundValue b;
  b.log2 = log2_of(r);
  b.exact = std::move(r);
  return b;
}

void check_common(std::uint64_t q, int t, int s, int k, int omega) {
  require(q >= 2, "field size must be at least 2");
  require(k >= 1 && k <= s && s <= t && static_cast<std::uint64_t>(t) <= q,
          "need 1 <= k <= s <= t <= q");
  require(omega >= 0 && omega <= s, "need 0 <= omega <= s");
}

std::optional<BoundValue> ratio_if_defined(const mpz_class& num, const mpz_class& den) {
  if (den == 0) return std::nullopt;
  return make(num, den);
}

}  // namespace

double BoundValue::value() const { return std::exp2(log2); }

std::string BoundValue::exact_string() const {
  if (!exact) return "NA";
  return exact->get_num().get_str() + "/" + exact->get_den().get_str();
}

mpz_class binomial(std::uint64_t n, std::uint64_t k) {
  mpz_class out;
  if (k > n) return out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

double log2_of(const mpq_class& x) {
  if (x < 0) throw std::domain_error("log2 of a negative value");
  if (x == 0) return -std::numeric_limits<double>::infinity();
  return log2_mpz(x.get_num()) - log2_mpz(x.get_den());
}

BoundValue single_record_bound(std::uint64_t q, int t, int k) {
  require(k >= 1 && k <= t && static_cast<std::uint64_t>(t) <= q, "need 1 <= k <= t <= q");
  return make(power(q, t - k), binomial(q, static_cast<std::uint64_t>(t)));
}

BoundValue baseline_guess_rate(std::uint64_t q, int t, int k) {
  require(k >= 1 && k <= t && static_cast<std::uint64_t>(t) <= q, "need 1 <= k <= t <= q");
  return make(binomial(static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(k)),
              binomial(q, static_cast<std::uint64_t>(k)));
}

BoundValue leakage_bound(std::uint64_t q, int t, int s, int k, int d) {
  require(q >= 2, "field size must be at least 2");
  require(k >= 1 && k <= s && s <= t, "need 1 <= k <= s <= t");
  require(((t + s - d) % 2 + 2) % 2 == 0, "d must have the parity of t + s");
  require(d >= t - s && d <= t + s, "need t - s <= d <= t + s");
  const int symbols = std::min(t + s - 2 * k, t - k + d);
  BoundValue b;
  const bool pow2 = (q & (q - 1)) == 0;
  if (pow2) {
    const int bits = 63 - __builtin_clzll(q);
    b.exact = mpq_class(symbols * bits);
    b.log2 = static_cast<double>(symbols * bits);
  } else {
    b.log2 = symbols * std::log2(static_cast<double>(q));
  }
  return b;
}

BoundValue full_recovery_upper_bound(std::uint64_t q, int t, int s, int k, int omega) {
  check_common(q, t, s, k, omega);
  const int e = std::min(t + s - 2 * k, 2 * t + s - 2 * omega - k);
  const auto w = static_cast<std::uint64_t>(omega);
  const mpz_class entropy = binomial(q, w) * binomial(q - w, static_cast<std::uint64_t>(t - omega)) *
                            binomial(q - static_cast<std::uint64_t>(t),
                                     static_cast<std::uint64_t>(s - omega));
  require(entropy != 0, "feature sets do not fit in the field");
  return make(power(q, e), entropy);
}

int guess_count_h(int t, int k, int omega) { return std::max(0, (t + k + 1) / 2 - omega); }
int guess_count_m(int t, int k, int omega) { return std::max(0, k - (t - omega)); }

BoundValue full_recovery_lower_bound(std::uint64_t q, int t, int s, int k, int omega) {
  check_common(q, t, s, k, omega);
  const auto h = static_cast<std::uint64_t>(guess_count_h(t, k, omega));
  const auto m = static_cast<std::uint64_t>(guess_count_m(t, k, omega));
  const mpz_class num = binomial(static_cast<std::uint64_t>(t - omega), h) *
                        binomial(static_cast<std::uint64_t>(s - omega), h) *
                        binomial(static_cast<std::uint64_t>(omega), m);
  const mpz_class qh = binomial(q, h);
  return make(num, qh * qh * binomial(q, m));
}

const char* difference_case_name(DifferenceCase c) {
  switch (c) {
    case DifferenceCase::kNone: return "none";
    case DifferenceCase::kMidRange: return "mid_range";
    case DifferenceCase::kEqualK: return "omega_eq_k";
    case DifferenceCase::kBelowK: return "omega_lt_k";
  }
  return "?";
}

PartialBounds partial_bounds(std::uint64_t q, int t, int s, int k, int omega) {
  check_common(q, t, s, k, omega);
  using u64 = std::uint64_t;
  PartialBounds out;
  if (omega > t - k) {
    out.intersection = make(power(q, t - k) * binomial(q, static_cast<u64>(k - 1)),
                            binomial(q, static_cast<u64>(t)) *
                                binomial(static_cast<u64>(t - 1), static_cast<u64>(k - 1)));
  }

  const mpz_class lead = 2 * power(q, t + s - 2 * k);
  const mpz_class tail = binomial(q, static_cast<u64>(t + s - omega));
  auto consider = [&](DifferenceCase c, std::optional<BoundValue> v) {
    if (!v) return;
    if (!out.difference || *v->exact < *out.difference->exact) {
      out.difference = std::move(v);
      out.difference_case = c;
    }
  };

  if (2 * omega < t + k && omega >= t - k) {
    const int h = (t + k + 1) / 2 - omega;
    const int m = k - t + omega;
    const mpz_class num = lead * binomial(q, static_cast<u64>(2 * h - 1)) * binomial(q, static_cast<u64>(m));
    const mpz_class den = binomial(static_cast<u64>(t - omega), static_cast<u64>(h - 1)) *
                          binomial(static_cast<u64>(s - omega), static_cast<u64>(h)) *
                          binomial(static_cast<u64>(omega), static_cast<u64>(m)) * tail;
    consider(DifferenceCase::kMidRange, ratio_if_defined(num, den));
  }
  if (omega == k) {
    const mpz_class num = lead * binomial(q, static_cast<u64>(k - 1)) * (t - k + 1);
    consider(DifferenceCase::kEqualK, ratio_if_defined(num, tail * k));
  }
  if (omega < k) {
    const mpz_class num = lead * binomial(q, static_cast<u64>(omega)) *
                          binomial(q, static_cast<u64>(k - omega - 1)) *
                          binomial(q, static_cast<u64>(k - omega));
    const mpz_class den = tail *
                          binomial(static_cast<u64>(t - omega - 1), static_cast<u64>(k - omega - 1)) *
                          binomial(static_cast<u64>(s - omega), static_cast<u64>(k - omega));
    consider(DifferenceCase::kBelowK, ratio_if_defined(num, den));
  }
  return out;
}

}  // namespace fvault::bounds
