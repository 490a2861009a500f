#include "fvault/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>

#include "fvault/bounds.hpp"

namespace fvault {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

template <class F>
std::uint64_t timed(F&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  fn();
  const auto t1 = std::chrono::steady_clock::now();
  return static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(t1 - t0).count());
}

int blend_of(const ExperimentConfig& cfg) { return cfg.blend_size > 0 ? cfg.blend_size : cfg.t; }

}  // namespace

void validate(const ExperimentConfig& cfg, bool full) {
  require(cfg.m_bits >= 2 && cfg.m_bits <= kMaxFieldBits, "q_bits out of range");
  require(cfg.trials >= 1, "trials must be at least 1");
  require(cfg.threads >= 1, "threads must be at least 1");
  require(cfg.k >= 1, "k must be at least 1");
  require(cfg.k <= cfg.s && cfg.s <= cfg.t, "need k <= s <= t");
  const std::uint64_t q = std::uint64_t{1} << cfg.m_bits;
  require(static_cast<std::uint64_t>(cfg.t) <= q, "t exceeds the field size");
  for (int w : cfg.omegas) {
    require(w >= 0 && w <= cfg.s, "omega must lie in [0, s]");
    require(static_cast<std::uint64_t>(cfg.t + cfg.s - w) <= q, "sets do not fit in the field");
  }
  if (cfg.variant == Variant::kBlended) {
    require(!full, "full experiments support the prob and det variants only");
    require(cfg.s == cfg.t, "blended experiments need s = t");
    require(cfg.ext_factor >= 2 && cfg.m_bits * cfg.ext_factor <= kMaxFieldBits,
            "extension field exceeds GF(2^24)");
    require(cfg.blend_size >= 0, "blend_size must be non-negative");
  }
  if (full) {
    require(cfg.omega_prime <= cfg.s, "omega_prime must not exceed s");
  }
}

std::vector<int> omega_values(const ExperimentConfig& cfg) {
  if (!cfg.omegas.empty()) return cfg.omegas;
  const std::uint64_t q = std::uint64_t{1} << cfg.m_bits;
  std::vector<int> out;
  for (int w = 0; w <= cfg.s; ++w) {
    if (static_cast<std::uint64_t>(cfg.t + cfg.s - w) <= q) out.push_back(w);
  }
  return out;
}

void TrialStats::merge(const TrialStats& o) {
  n_trials += o.n_trials;
  n_output += o.n_output;
  n_correct += o.n_correct;
  fail_no_index += o.fail_no_index;
  fail_remainder += o.fail_remainder;
  fail_split += o.fail_split;
  total_nanos += o.total_nanos;
}

std::pair<FeatureSet, FeatureSet> random_overlapping_sets(const Field& f, int t, int s, int omega,
                                                          Rng& rng) {
  require(omega >= 0 && omega <= s && s <= t, "need 0 <= omega <= s <= t");
  const auto pool = f.random_distinct(static_cast<std::size_t>(t + s - omega), rng);
  const auto w = static_cast<std::size_t>(omega);
  const auto tail_a = static_cast<std::size_t>(t - omega);
  std::vector<Elem> a(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(w + tail_a));
  std::vector<Elem> b(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(w));
  b.insert(b.end(), pool.begin() + static_cast<std::ptrdiff_t>(w + tail_a), pool.end());
  std::pair<FeatureSet, FeatureSet> out{FeatureSet(std::move(a)), FeatureSet(std::move(b))};
  if (static_cast<int>(set_intersection(out.first, out.second).size()) != omega) {
    throw std::logic_error("overlap generator produced the wrong intersection");
  }
  return out;
}

const Field& attack_field(const ExperimentConfig& cfg) {
  const int bits = cfg.variant == Variant::kBlended ? cfg.m_bits * cfg.ext_factor : cfg.m_bits;
  return *Field::get(bits);
}

TrialInstance make_trial(const ExperimentConfig& cfg, int omega, std::uint64_t trial) {
  const Field& f = *Field::get(cfg.m_bits);
  Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(omega), trial));
  TrialInstance ti;
  std::tie(ti.set_a, ti.set_b) = random_overlapping_sets(f, cfg.t, cfg.s, omega, rng);
  FeatureSet da = set_difference(ti.set_a, ti.set_b);
  FeatureSet db = set_difference(ti.set_b, ti.set_a);
  switch (cfg.variant) {
    case Variant::kProbabilistic:
      ti.secret_v = random_secret(f, cfg.k, rng, true);
      ti.secret_w = random_secret(f, cfg.k, rng, true);
      ti.record_v = enroll_probabilistic(f, ti.set_a, cfg.k, ti.secret_v);
      ti.record_w = enroll_probabilistic(f, ti.set_b, cfg.k, ti.secret_w);
      break;
    case Variant::kDeterministic:
      ti.record_v = enroll_deterministic(f, ti.set_a, cfg.k);
      ti.record_w = enroll_deterministic(f, ti.set_b, cfg.k);
      break;
    case Variant::kBlended: {
      auto ev = enroll_blended(f, ti.set_a, cfg.k, blend_of(cfg), cfg.ext_factor, rng);
      auto ew = enroll_blended(f, ti.set_b, cfg.k, blend_of(cfg), cfg.ext_factor, rng);
      const auto emb = SubfieldEmbedding::get(cfg.m_bits, cfg.m_bits * cfg.ext_factor);
      da = emb->embed(da);
      db = emb->embed(db);
      ti.secret_v = std::move(ev.secret);
      ti.secret_w = std::move(ew.secret);
      ti.record_v = std::move(ev.record);
      ti.record_w = std::move(ew.record);
      ti.blend_v = std::move(ev.blending);
      ti.blend_w = std::move(ew.blending);
      break;
    }
  }
  ti.v = ti.record_v.polynomial();
  ti.w = ti.record_w.polynomial();
  ti.want_diff_a = std::move(da);
  ti.want_diff_b = std::move(db);
  return ti;
}

PartialTrial run_partial_trial(const ExperimentConfig& cfg, int omega, std::uint64_t trial) {
  TrialInstance ti = make_trial(cfg, omega, trial);
  const Field& f = attack_field(cfg);
  std::optional<PartialResult> res;
  const std::uint64_t ns = timed([&] { res = partial_recovery(f, ti.v, ti.w, cfg.k); });
  bool correct = false;
  if (*res) {
    const auto& o = res->value();
    correct = o.diff_a == ti.want_diff_a && o.diff_b == ti.want_diff_b;
    // Inside the extension field the blending sets shift omega*, so only the
    // base-field difference sets are compared there.
    if (cfg.variant != Variant::kBlended) correct = correct && o.omega_star == omega;
  }
  return PartialTrial{std::move(ti), std::move(*res), correct, ns};
}

void parallel_chunks(std::uint64_t n, int threads,
                     const std::function<void(std::uint64_t, std::uint64_t, int)>& fn) {
  const auto nt = static_cast<std::uint64_t>(std::max(1, threads));
  if (nt == 1 || n < 2) {
    fn(0, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  for (std::uint64_t c = 0; c < nt; ++c) {
    const std::uint64_t lo = n * c / nt;
    const std::uint64_t hi = n * (c + 1) / nt;
    pool.emplace_back([&fn, lo, hi, c] { fn(lo, hi, static_cast<int>(c)); });
  }
  for (auto& th : pool) th.join();
}

TrialStats run_partial_omega(const ExperimentConfig& cfg, int omega) {
  std::vector<TrialStats> parts(static_cast<std::size_t>(std::max(1, cfg.threads)));
  parallel_chunks(cfg.trials, cfg.threads, [&](std::uint64_t lo, std::uint64_t hi, int c) {
    TrialStats& st = parts[static_cast<std::size_t>(c)];
    for (std::uint64_t i = lo; i < hi; ++i) {
      const PartialTrial pt = run_partial_trial(cfg, omega, i);
      ++st.n_trials;
      st.total_nanos += pt.nanos;
      if (pt.result) {
        ++st.n_output;
        if (pt.correct) ++st.n_correct;
      } else {
        switch (pt.result.error()) {
          case PartialFailure::kNoQualifyingIndex: ++st.fail_no_index; break;
          case PartialFailure::kRemainderTooLarge: ++st.fail_remainder; break;
          case PartialFailure::kNotSplitting: ++st.fail_split; break;
        }
      }
    }
  });
  TrialStats total;
  for (const auto& p : parts) total.merge(p);
  return total;
}

bool run_full_trial(const ExperimentConfig& cfg, int omega, std::uint64_t trial,
                    std::uint64_t* nanos) {
  const TrialInstance ti = make_trial(cfg, omega, trial);
  const Field& f = attack_field(cfg);
  const int wp = cfg.omega_prime >= 0 ? cfg.omega_prime : omega;
  // Separate stream for the attack's own guesses.
  const std::uint64_t attack_seed =
      derive_seed(derive_seed(cfg.seed, static_cast<std::uint64_t>(omega), trial), 0x61747461636bULL);
  std::optional<FullRecoveryOutput> got;
  const std::uint64_t ns = timed([&] {
    if (cfg.budget > 0) {
      DriverConfig dc;
      dc.omega_start = wp;
      dc.omega_floor = 0;
      dc.budget = cfg.budget;
      dc.seed = attack_seed;
      auto r = brute_force_driver(f, ti.v, ti.w, cfg.k, dc);
      if (r) got = r->sets;
    } else {
      Rng rng(attack_seed);
      auto r = full_recovery(f, ti.v, ti.w, cfg.k, wp, rng);
      if (r) got = r.value();
    }
  });
  if (nanos) *nanos = ns;
  return got && got->set_a == ti.set_a && got->set_b == ti.set_b;
}

FullStats run_full_omega(const ExperimentConfig& cfg, int omega) {
  std::vector<FullStats> parts(static_cast<std::size_t>(std::max(1, cfg.threads)));
  parallel_chunks(cfg.trials, cfg.threads, [&](std::uint64_t lo, std::uint64_t hi, int c) {
    FullStats& st = parts[static_cast<std::size_t>(c)];
    for (std::uint64_t i = lo; i < hi; ++i) {
      std::uint64_t ns = 0;
      if (run_full_trial(cfg, omega, i, &ns)) ++st.n_success;
      ++st.n_trials;
      st.total_nanos += ns;
    }
  });
  FullStats total;
  for (const auto& p : parts) {
    total.n_trials += p.n_trials;
    total.n_success += p.n_success;
    total.total_nanos += p.total_nanos;
  }
  return total;
}

namespace {

std::string partial_row(const ExperimentConfig& cfg, const std::string& omega,
                        const TrialStats& st) {
  const double mean = cfg.timing && st.n_trials ? double(st.total_nanos) / double(st.n_trials) : 0.0;
  std::string row;
  row += std::to_string(cfg.m_bits) + ',' + std::to_string(cfg.t) + ',' + std::to_string(cfg.s) +
         ',' + std::to_string(cfg.k) + ',' + omega + ',' + std::to_string(st.n_trials) + ',' +
         std::to_string(st.n_output) + ',' + std::to_string(st.n_correct) + ',' +
         num(st.p_out()) + ',' + num(st.p_cor()) + ',' + std::to_string(st.fail_no_index) + ',' +
         std::to_string(st.fail_remainder) + ',' + std::to_string(st.fail_split) + ',' +
         num(mean) + ',' + std::to_string(cfg.seed) + '\n';
  return row;
}

}  // namespace

std::string experiment_partial_csv(const ExperimentConfig& cfg) {
  validate(cfg, false);
  std::string out =
      "q_bits,t,s,k,omega,trials,n_output,n_correct,p_out,p_cor,fail_no_index,fail_remainder,"
      "fail_split,mean_ns,seed\n";
  // Overlaps below this never reach the unique-decoding regime.
  const int band = (cfg.t + cfg.k + 1) / 2 - 1;
  TrialStats below;
  for (int w : omega_values(cfg)) {
    const TrialStats st = run_partial_omega(cfg, w);
    out += partial_row(cfg, std::to_string(w), st);
    if (w < band) below.merge(st);
  }
  if (below.n_trials > 0) out += partial_row(cfg, "<" + std::to_string(band), below);
  return out;
}

std::string experiment_full_csv(const ExperimentConfig& cfg) {
  validate(cfg, true);
  std::string out =
      "q_bits,t,s,k,omega,omega_prime,trials,n_success,p_success,lower_bound,mean_ns,seed\n";
  const std::uint64_t q = std::uint64_t{1} << cfg.m_bits;
  for (int w : omega_values(cfg)) {
    const FullStats st = run_full_omega(cfg, w);
    const int wp = cfg.omega_prime >= 0 ? cfg.omega_prime : w;
    const double lb = bounds::full_recovery_lower_bound(q, cfg.t, cfg.s, cfg.k, w).value();
    const double mean =
        cfg.timing && st.n_trials ? double(st.total_nanos) / double(st.n_trials) : 0.0;
    out += std::to_string(cfg.m_bits) + ',' + std::to_string(cfg.t) + ',' +
           std::to_string(cfg.s) + ',' + std::to_string(cfg.k) + ',' + std::to_string(w) + ',' +
           std::to_string(wp) + ',' + std::to_string(st.n_trials) + ',' +
           std::to_string(st.n_success) + ',' + num(st.p_success()) + ',' + num(lb) + ',' +
           num(mean) + ',' + std::to_string(cfg.seed) + '\n';
  }
  return out;
}

}  // namespace fvault
