#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "fvault/attack.hpp"
#include "fvault/vault.hpp"

namespace fvault {

struct ExperimentConfig {
  int m_bits = 8;
  int t = 24;
  int s = 24;
  int k = 9;
  std::vector<int> omegas;  // empty means 0..s
  std::uint64_t trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  Variant variant = Variant::kProbabilistic;
  /// Fill mean_ns. Off by default so that output is a pure function of the
  /// config.
  bool timing = false;
  // Blended variant.
  int ext_factor = 2;
  int blend_size = 0;  // 0 picks t
  // Full experiments. omega_prime < 0 uses the true omega; budget > 0 runs
  // the brute-force driver from omega_prime downwards instead of a single
  // full-recovery run.
  int omega_prime = -1;
  std::uint64_t budget = 0;
};

/// Throws std::invalid_argument on a bad config.
void validate(const ExperimentConfig& cfg, bool full);
std::vector<int> omega_values(const ExperimentConfig& cfg);

struct TrialStats {
  std::uint64_t n_trials = 0;
  std::uint64_t n_output = 0;
  std::uint64_t n_correct = 0;
  std::uint64_t fail_no_index = 0;
  std::uint64_t fail_remainder = 0;
  std::uint64_t fail_split = 0;
  std::uint64_t total_nanos = 0;

  double p_out() const { return n_trials ? double(n_output) / double(n_trials) : 0.0; }
  double p_cor() const { return n_trials ? double(n_correct) / double(n_trials) : 0.0; }
  void merge(const TrialStats& o);
};

/// A and B with |A| = t, |B| = s and exactly omega common elements.
std::pair<FeatureSet, FeatureSet> random_overlapping_sets(const Field& f, int t, int s, int omega,
                                                          Rng& rng);

/// One enrolled pair, with polynomials over the field the attack runs in.
struct TrialInstance {
  FeatureSet set_a;  // base-field sets
  FeatureSet set_b;
  Poly secret_v;
  Poly secret_w;
  VaultRecord record_v;
  VaultRecord record_w;
  Poly v;
  Poly w;
  /// Difference sets the attack would have to output, in the attack field.
  FeatureSet want_diff_a;
  FeatureSet want_diff_b;
  FeatureSet blend_v;  // blended variant only
  FeatureSet blend_w;
};

/// Trial `trial` at overlap omega; a pure function of (cfg, omega, trial).
TrialInstance make_trial(const ExperimentConfig& cfg, int omega, std::uint64_t trial);
/// The field partial recovery runs in for cfg.
const Field& attack_field(const ExperimentConfig& cfg);

struct PartialTrial {
  TrialInstance instance;
  PartialResult result;
  bool correct = false;
  std::uint64_t nanos = 0;
};

PartialTrial run_partial_trial(const ExperimentConfig& cfg, int omega, std::uint64_t trial);
TrialStats run_partial_omega(const ExperimentConfig& cfg, int omega);

struct FullStats {
  std::uint64_t n_trials = 0;
  std::uint64_t n_success = 0;
  std::uint64_t total_nanos = 0;
  double p_success() const { return n_trials ? double(n_success) / double(n_trials) : 0.0; }
};

/// True when the trial's attack recovered (A, B) exactly.
bool run_full_trial(const ExperimentConfig& cfg, int omega, std::uint64_t trial,
                    std::uint64_t* nanos = nullptr);
FullStats run_full_omega(const ExperimentConfig& cfg, int omega);

/// CSV with one row per omega and a single aggregate row over the
/// sub-threshold band.
std::string experiment_partial_csv(const ExperimentConfig& cfg);
std::string experiment_full_csv(const ExperimentConfig& cfg);

/// Splits [0, n) into `threads` contiguous chunks and runs fn(begin, end, chunk)
/// on each; chunk results must be merged by the caller in chunk order.
void parallel_chunks(std::uint64_t n, int threads,
                     const std::function<void(std::uint64_t, std::uint64_t, int)>& fn);

}  // namespace fvault
