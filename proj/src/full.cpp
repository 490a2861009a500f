#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "fvault/attack.hpp"
#include "fvault/bounds.hpp"

namespace fvault {

const char* failure_name(FullFailure f) {
  switch (f) {
    case FullFailure::kTooManyGuesses: return "too_many_guesses";
    case FullFailure::kNoQualifyingIndex: return "no_qualifying_index";
    case FullFailure::kRemainderTooLarge: return "remainder_too_large";
    case FullFailure::kNotSplitting: return "not_splitting";
    case FullFailure::kGuessCollision: return "guess_collision";
    case FullFailure::kInterpolationMismatch: return "interpolation_mismatch";
    case FullFailure::kUnlockNotSplitting: return "unlock_not_splitting";
    case FullFailure::kInconsistentSizes: return "inconsistent_sizes";
    case FullFailure::kVerifierRejected: return "verifier_rejected";
  }
  return "?";
}

namespace {

FullFailure lift(PartialFailure p) {
  switch (p) {
    case PartialFailure::kNoQualifyingIndex: return FullFailure::kNoQualifyingIndex;
    case PartialFailure::kRemainderTooLarge: return FullFailure::kRemainderTooLarge;
    case PartialFailure::kNotSplitting: return FullFailure::kNotSplitting;
  }
  return FullFailure::kNotSplitting;
}

// Result of steps 1-3: the guessed difference elements and the (reduced)
// partial-recovery output.
struct Stage {
  FeatureSet guessed_a;
  FeatureSet guessed_b;
  PartialRecoveryOutput partial;
};

// A vault of the reduced set: the known slice on top, a random secret below.
// Zero low coefficients would make the attack's key relation vanish with
// probability about 1/q.
Poly refill(const Field& f, const UpperCoeffs& c, Rng& rng) {
  std::vector<Elem> out(static_cast<std::size_t>(c.low_index));
  for (Elem& x : out) x = f.random(rng);
  out.insert(out.end(), c.coeffs.begin(), c.coeffs.end());
  return Poly(std::move(out));
}

// deg v >= deg w throughout.
Outcome<Stage, FullFailure> run_stage(const Field& f, const Poly& v, const Poly& w, int k, int h,
                                      Rng& rng) {
  Stage st;
  Poly rv = v, rw = w;
  if (h > 0) {
    UpperCoeffs cv = upper_coeffs(v, k);
    UpperCoeffs cw = upper_coeffs(w, k);
    st.guessed_a = FeatureSet(f.random_distinct(static_cast<std::size_t>(h), rng));
    st.guessed_b = FeatureSet(f.random_distinct(static_cast<std::size_t>(h), rng));
    for (Elem x : st.guessed_a) cv = reduce_record(f, cv, x);
    for (Elem x : st.guessed_b) cw = reduce_record(f, cw, x);
    rv = refill(f, cv, rng);
    rw = refill(f, cw, rng);
  }
  auto pr = partial_recovery(f, rv, rw, k - h);
  if (!pr) return lift(pr.error());
  st.partial = pr.value();
  return st;
}

// Steps 4-6.
FullResult complete(const Field& f, const Poly& v, const Poly& w, int k, const Stage& st,
                    Rng& rng) {
  const int t = v.degree();
  const int s = w.degree();
  if (!set_intersection(st.guessed_a, st.partial.diff_a).empty()) return FullFailure::kGuessCollision;
  FeatureSet known = set_union(st.guessed_a, st.partial.diff_a);
  const int errors = static_cast<int>(known.size());  // t - omega'
  if (errors < k) {
    const auto extra = f.random_distinct(static_cast<std::size_t>(k - errors), rng);
    FeatureSet more(extra);
    if (!set_intersection(more, known).empty()) return FullFailure::kGuessCollision;
    known = set_union(known, more);
  }

  std::vector<Point> pts;
  pts.reserve(known.size());
  for (Elem x : known) pts.push_back({x, eval(f, v, x)});
  const Poly f_star = interpolate(f, std::span<const Point>(pts.data(), static_cast<std::size_t>(k)));
  for (std::size_t i = static_cast<std::size_t>(k); i < pts.size(); ++i) {
    if (eval(f, f_star, pts[i].x) != pts[i].y) return FullFailure::kInterpolationMismatch;
  }
  auto set_a = roots_if_splits(f, sub(v, f_star));
  if (!set_a || static_cast<int>(set_a->size()) != t) return FullFailure::kUnlockNotSplitting;

  const FeatureSet common =
      set_difference(*set_a, set_union(st.partial.diff_a, st.guessed_a));
  const FeatureSet head = set_union(st.partial.diff_b, st.guessed_b);
  if (head.size() != st.partial.diff_b.size() + st.guessed_b.size() ||
      !set_intersection(head, common).empty()) {
    return FullFailure::kInconsistentSizes;
  }
  FeatureSet set_b = set_union(head, common);
  if (static_cast<int>(set_b.size()) != s) return FullFailure::kInconsistentSizes;
  return FullRecoveryOutput{std::move(*set_a), std::move(set_b)};
}

FullResult swap_back(FullResult r, bool swapped) {
  if (!r || !swapped) return r;
  return FullRecoveryOutput{r.value().set_b, r.value().set_a};
}

bool upper_match(const Field& f, const FeatureSet& a, const Poly& v, int k) {
  const Poly chi = char_poly(f, a);
  if (chi.degree() != v.degree()) return false;
  for (int i = k; i <= v.degree(); ++i) {
    if (chi.coeff(i) != v.coeff(i)) return false;
  }
  return true;
}

}  // namespace

FullResult full_recovery(const Field& f, const Poly& v, const Poly& w, int k, int omega_prime,
                         Rng& rng, const Verifier& verifier) {
  if (k < 1 || v.degree() < k || w.degree() < k) {
    throw std::invalid_argument("full recovery needs 1 <= k <= deg of both records");
  }
  const bool swapped = v.degree() < w.degree();
  const Poly& big = swapped ? w : v;
  const Poly& small = swapped ? v : w;
  const int h = bounds::guess_count_h(big.degree(), k, omega_prime);
  if (h >= k) return FullFailure::kTooManyGuesses;
  auto st = run_stage(f, big, small, k, h, rng);
  if (!st) return st.error();
  auto out = swap_back(complete(f, big, small, k, st.value(), rng), swapped);
  if (out && verifier && !verifier(out->set_a, out->set_b)) return FullFailure::kVerifierRejected;
  return out;
}

FullResult full_recovery(const VaultRecord& v, const VaultRecord& w, int omega_prime, Rng& rng,
                         const Verifier& verifier) {
  validate(v);
  validate(w);
  if (v.field_bits() != w.field_bits() || v.m_bits != w.m_bits) {
    throw std::invalid_argument("records are defined over different fields");
  }
  if (v.k != w.k) throw std::invalid_argument("records use different k");
  return full_recovery(*Field::get(v.field_bits()), v.polynomial(), w.polynomial(), v.k,
                       omega_prime, rng, verifier);
}

std::optional<FeatureSet> single_record_trial(const Field& f, const Poly& v, int k, Rng& rng) {
  const auto guess = f.random_distinct(static_cast<std::size_t>(k), rng);
  std::vector<Point> pts;
  pts.reserve(guess.size());
  for (Elem x : guess) pts.push_back({x, eval(f, v, x)});
  auto roots = roots_if_splits(f, sub(v, interpolate(f, pts)));
  if (!roots || static_cast<int>(roots->size()) != v.degree()) return std::nullopt;
  return roots;
}

Outcome<SingleSuccess, Exhausted> single_record_attack(
    const Field& f, const Poly& v, int k, Rng& rng, std::uint64_t budget,
    const std::function<bool(const FeatureSet&)>& verifier) {
  if (k < 1 || v.degree() < k) throw std::invalid_argument("need 1 <= k <= deg V");
  for (std::uint64_t i = 0; i < budget; ++i) {
    auto a = single_record_trial(f, v, k, rng);
    if (a && (!verifier || verifier(*a))) return SingleSuccess{std::move(*a), i + 1};
  }
  return Exhausted{budget};
}

namespace {

using Attempt = std::function<std::optional<FullRecoveryOutput>(std::uint64_t)>;

// Runs attempts 0..n-1 and returns the lowest-index success with the number
// of attempts that ordering implies.
std::pair<std::optional<FullRecoveryOutput>, std::uint64_t> run_attempts(std::uint64_t n,
                                                                         const Attempt& fn,
                                                                         int threads) {
  if (threads <= 1) {
    for (std::uint64_t i = 0; i < n; ++i) {
      if (auto r = fn(i)) return {std::move(r), i + 1};
    }
    return {std::nullopt, n};
  }
  const std::uint64_t batch = static_cast<std::uint64_t>(threads) * 64;
  for (std::uint64_t base = 0; base < n; base += batch) {
    const std::uint64_t end = std::min(n, base + batch);
    std::vector<std::optional<FullRecoveryOutput>> slot(end - base);
    std::vector<std::thread> pool;
    for (int tid = 0; tid < threads; ++tid) {
      pool.emplace_back([&, tid] {
        for (std::uint64_t i = base + static_cast<std::uint64_t>(tid); i < end;
             i += static_cast<std::uint64_t>(threads)) {
          slot[i - base] = fn(i);
        }
      });
    }
    for (auto& th : pool) th.join();
    for (std::uint64_t i = base; i < end; ++i) {
      if (slot[i - base]) return {std::move(slot[i - base]), i + 1};
    }
  }
  return {std::nullopt, n};
}

}  // namespace

DriverResult brute_force_driver(const Field& f, const Poly& v, const Poly& w, int k,
                                const DriverConfig& cfg, const Verifier& verifier) {
  if (cfg.omega_start < cfg.omega_floor) throw std::invalid_argument("omega_start < omega_floor");
  if (k < 1 || v.degree() < k || w.degree() < k) {
    throw std::invalid_argument("driver needs 1 <= k <= deg of both records");
  }
  if (!(cfg.gamma > 1.0)) throw std::invalid_argument("gamma must exceed 1");
  const bool swapped = v.degree() < w.degree();
  const Poly& big = swapped ? w : v;
  const Poly& small = swapped ? v : w;
  const int t = big.degree();
  const int s = small.degree();

  auto accept = [&](const FullRecoveryOutput& o) {
    if (!upper_match(f, o.set_a, big, k) || !upper_match(f, o.set_b, small, k)) return false;
    if (!verifier) return true;
    return swapped ? verifier(o.set_b, o.set_a) : verifier(o.set_a, o.set_b);
  };
  auto finish = [&](FullRecoveryOutput o, std::uint64_t attempts, int omega) -> DriverResult {
    if (swapped) std::swap(o.set_a, o.set_b);
    return DriverSuccess{std::move(o), attempts, omega};
  };

  std::uint64_t used = 0;
  for (int omega = cfg.omega_start; omega >= cfg.omega_floor && used < cfg.budget; --omega) {
    const std::uint64_t remaining = cfg.budget - used;
    std::uint64_t alloc = remaining;
    if (omega > cfg.omega_floor) {
      const int wc = std::clamp(omega, 0, s);
      const double theta = bounds::full_recovery_lower_bound(f.size(), t, s, k, wc).value();
      if (theta <= 0.0) continue;
      const double want = std::ceil(cfg.gamma / theta);
      if (want < static_cast<double>(remaining)) alloc = static_cast<std::uint64_t>(want);
    }
    const int h = bounds::guess_count_h(t, k, omega);
    const auto level = static_cast<std::uint64_t>(std::max(omega, 0));
    auto rng_for = [&](std::uint64_t i) { return Rng(derive_seed(cfg.seed, level, i)); };

    Attempt attempt;
    std::optional<Stage> fixed;
    if (h >= k) {
      // Guessing this many difference elements is worse than attacking each
      // record on its own.
      attempt = [&](std::uint64_t i) -> std::optional<FullRecoveryOutput> {
        Rng rng = rng_for(i);
        auto a = single_record_trial(f, big, k, rng);
        if (!a) return std::nullopt;
        auto b = single_record_trial(f, small, k, rng);
        if (!b) return std::nullopt;
        FullRecoveryOutput o{std::move(*a), std::move(*b)};
        if (!accept(o)) return std::nullopt;
        return o;
      };
    } else if (h == 0) {
      Rng rng = rng_for(0);
      auto st = run_stage(f, big, small, k, 0, rng);
      if (!st) {
        used += 1;
        continue;
      }
      fixed = st.value();
      // With nothing left to guess every attempt is identical.
      if (static_cast<int>(fixed->partial.diff_a.size()) >= k) alloc = 1;
      attempt = [&](std::uint64_t i) -> std::optional<FullRecoveryOutput> {
        Rng r = rng_for(i);
        auto o = complete(f, big, small, k, *fixed, r);
        if (!o || !accept(o.value())) return std::nullopt;
        return o.value();
      };
    } else {
      attempt = [&](std::uint64_t i) -> std::optional<FullRecoveryOutput> {
        Rng rng = rng_for(i);
        auto st = run_stage(f, big, small, k, h, rng);
        if (!st) return std::nullopt;
        auto o = complete(f, big, small, k, st.value(), rng);
        if (!o || !accept(o.value())) return std::nullopt;
        return o.value();
      };
    }
    auto [found, n] = run_attempts(alloc, attempt, cfg.threads);
    used += n;
    if (found) return finish(std::move(*found), used, omega);
  }
  return Exhausted{used};
}

DriverResult brute_force_driver(const VaultRecord& v, const VaultRecord& w,
                                const DriverConfig& cfg, const Verifier& verifier) {
  validate(v);
  validate(w);
  if (v.field_bits() != w.field_bits() || v.m_bits != w.m_bits) {
    throw std::invalid_argument("records are defined over different fields");
  }
  if (v.k != w.k) throw std::invalid_argument("records use different k");
  return brute_force_driver(*Field::get(v.field_bits()), v.polynomial(), w.polynomial(), v.k, cfg,
                            verifier);
}

}  // namespace fvault
