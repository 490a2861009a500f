// fvault: experiments, enrollment and attacks from the command line.
//
// Exit codes: 0 success, 1 the operation ran but failed (no unlock, attack
// failure), 2 validation or schema error, 3 I/O error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvault/attack.hpp"
#include "fvault/bounds.hpp"
#include "fvault/experiment.hpp"
#include "fvault/serialize.hpp"
#include "fvault/vault.hpp"

namespace {

using namespace fvault;
using nlohmann::json;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised for conditions CLI11 cannot check on its own.
struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) throw IoError("cannot read " + path);
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw IoError("cannot write to stdout");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw IoError("cannot write " + path);
}

Variant parse_variant(const std::string& s) {
  if (s == "prob") return Variant::kProbabilistic;
  if (s == "det") return Variant::kDeterministic;
  if (s == "blended") return Variant::kBlended;
  throw UsageError("unknown variant " + s);
}

std::vector<int> parse_int_list(const std::string& s, const char* what) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto dash = item.find('-', 1);
    try {
      if (dash != std::string::npos) {
        const int lo = std::stoi(item.substr(0, dash));
        const int hi = std::stoi(item.substr(dash + 1));
        if (hi < lo) throw UsageError(std::string("empty range in --") + what);
        for (int v = lo; v <= hi; ++v) out.push_back(v);
      } else {
        std::size_t used = 0;
        out.push_back(std::stoi(item, &used));
        if (used != item.size()) throw UsageError(std::string("bad --") + what + " value " + item);
      }
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const UsageError*>(&e)) throw;
      throw UsageError(std::string("bad --") + what + " value " + item);
    }
  }
  if (out.empty()) throw UsageError(std::string("--") + what + " is empty");
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("FVAULT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  return 1;
}

json hex_array(const Field& f, const FeatureSet& a) {
  json out = json::array();
  for (Elem x : a) out.push_back(f.to_hex(x));
  return out;
}

json poly_json(const Field& f, const Poly& p) {
  json out = json::array();
  for (Elem c : p.coeffs()) out.push_back(f.to_hex(c));
  return out;
}

struct ExperimentArgs {
  ExperimentConfig cfg;
  std::string omega = "all";
  std::string variant = "prob";
  std::string out;
};

void add_experiment_flags(CLI::App* sub, ExperimentArgs& a) {
  a.cfg.threads = default_threads();
  sub->add_option("--q-bits", a.cfg.m_bits, "field size exponent")->required();
  sub->add_option("--t", a.cfg.t, "size of the first set")->required();
  sub->add_option("--s", a.cfg.s, "size of the second set (default t)");
  sub->add_option("--k", a.cfg.k, "secret length")->required();
  sub->add_option("--omega", a.omega, "comma list, ranges lo-hi, or all");
  sub->add_option("--trials", a.cfg.trials, "trials per omega")->required();
  sub->add_option("--seed", a.cfg.seed, "master seed");
  sub->add_option("--threads", a.cfg.threads, "worker threads (FVAULT_THREADS)");
  sub->add_option("--variant", a.variant, "prob, det or blended");
  sub->add_option("--ext-factor", a.cfg.ext_factor, "blended: extension degree");
  sub->add_option("--blend-size", a.cfg.blend_size, "blended: chaff set size (default t)");
  sub->add_flag("--timing", a.cfg.timing, "fill mean_ns (makes output run-dependent)");
  sub->add_option("--out", a.out, "output path (default stdout)");
}

ExperimentConfig finish(ExperimentArgs& a, const CLI::App* sub) {
  ExperimentConfig cfg = a.cfg;
  if (sub->count("--s") == 0) cfg.s = cfg.t;
  cfg.variant = parse_variant(a.variant);
  if (a.omega != "all") cfg.omegas = parse_int_list(a.omega, "omega");
  return cfg;
}

int run_bounds(int m_bits, int t, int s, int k, const std::string& omega_arg,
               const std::string& d_arg, const std::string& out) {
  if (m_bits < 1 || m_bits > 62) throw UsageError("q_bits out of range");
  const std::uint64_t q = std::uint64_t{1} << m_bits;
  std::vector<int> omegas;
  if (omega_arg == "all") {
    for (int w = 0; w <= s; ++w) omegas.push_back(w);
  } else {
    omegas = parse_int_list(omega_arg, "omega");
  }
  const std::vector<int> ds = d_arg.empty() ? std::vector<int>{} : parse_int_list(d_arg, "d");

  auto fmt = [](double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return std::string(buf);
  };
  std::string csv =
      "q_bits,t,s,k,omega,d,single_log2,baseline_log2,leakage_bits,full_upper_log2,"
      "full_lower_log2,intersection_log2,difference_log2,difference_case\n";
  const auto single = bounds::single_record_bound(q, t, k);
  const auto baseline = bounds::baseline_guess_rate(q, t, k);
  for (int w : omegas) {
    const auto upper = bounds::full_recovery_upper_bound(q, t, s, k, w);
    const auto lower = bounds::full_recovery_lower_bound(q, t, s, k, w);
    const auto pb = bounds::partial_bounds(q, t, s, k, w);
    const std::vector<int> row_ds = ds.empty() ? std::vector<int>{t + s - 2 * w} : ds;
    for (int d : row_ds) {
      const auto leak = bounds::leakage_bound(q, t, s, k, d);
      csv += std::to_string(m_bits) + ',' + std::to_string(t) + ',' + std::to_string(s) + ',' +
             std::to_string(k) + ',' + std::to_string(w) + ',' + std::to_string(d) + ',' +
             fmt(single.log2) + ',' + fmt(baseline.log2) + ',' + fmt(leak.log2) + ',' +
             fmt(upper.log2) + ',' + fmt(lower.log2) + ',' +
             (pb.intersection ? fmt(pb.intersection->log2) : "NA") + ',' +
             (pb.difference ? fmt(pb.difference->log2) : "NA") + ',' +
             bounds::difference_case_name(pb.difference_case) + '\n';
    }
  }
  write_output(out, csv);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fuzzy vault experiments and record-multiplicity attacks"};
  app.require_subcommand(1);

  ExperimentArgs ep;
  auto* sub_ep = app.add_subcommand("experiment-partial", "Monte-Carlo run of partial recovery");
  add_experiment_flags(sub_ep, ep);

  ExperimentArgs ef;
  auto* sub_ef = app.add_subcommand("experiment-full", "Monte-Carlo run of full recovery");
  add_experiment_flags(sub_ef, ef);
  sub_ef->add_option("--omega-prime", ef.cfg.omega_prime, "assumed overlap (default: true omega)");
  sub_ef->add_option("--budget", ef.cfg.budget, "run the brute-force driver with this budget");

  std::string sample_out_a, sample_out_b;
  int sample_bits = 8, sample_t = 0, sample_s = -1, sample_omega = 0;
  std::uint64_t sample_seed = 1;
  auto* sub_sample =
      app.add_subcommand("sample-sets", "Write two random sets with a given overlap");
  sub_sample->add_option("--q-bits", sample_bits)->required();
  sub_sample->add_option("--t", sample_t)->required();
  sub_sample->add_option("--s", sample_s);
  sub_sample->add_option("--omega", sample_omega)->required();
  sub_sample->add_option("--seed", sample_seed);
  sub_sample->add_option("--out-a", sample_out_a)->required();
  sub_sample->add_option("--out-b", sample_out_b)->required();

  std::string en_set, en_out, en_secret_out, en_variant = "prob";
  int en_k = 0, en_ext = 2, en_blend = 0;
  std::uint64_t en_seed = 1;
  auto* sub_en = app.add_subcommand("enroll", "Lock a feature set into a vault record");
  sub_en->add_option("--set", en_set, "feature set JSON")->required();
  sub_en->add_option("--k", en_k)->required();
  sub_en->add_option("--variant", en_variant, "prob, det or blended");
  sub_en->add_option("--seed", en_seed);
  sub_en->add_option("--ext-factor", en_ext);
  sub_en->add_option("--blend-size", en_blend, "blended: chaff set size (default |set|)");
  sub_en->add_option("--out", en_out, "record JSON (default stdout)");
  sub_en->add_option("--secret-out", en_secret_out, "also write the secret polynomial");

  std::string un_record, un_set;
  auto* sub_un = app.add_subcommand("unlock", "Open a record with a query set");
  sub_un->add_option("--record", un_record)->required();
  sub_un->add_option("--set", un_set)->required();

  std::string at_v, at_w;
  int at_omega_prime = -1;
  std::uint64_t at_budget = 0, at_seed = 1;
  int at_threads = default_threads();
  auto* sub_at = app.add_subcommand("attack", "Attack two records of related feature sets");
  sub_at->add_option("--v", at_v, "first record")->required();
  sub_at->add_option("--w", at_w, "second record")->required();
  sub_at->add_option("--omega-prime", at_omega_prime, "run full recovery at this overlap");
  sub_at->add_option("--budget", at_budget, "run the brute-force driver with this budget");
  sub_at->add_option("--seed", at_seed);
  sub_at->add_option("--threads", at_threads);

  int b_bits = 0, b_t = 0, b_s = -1, b_k = 0;
  std::string b_omega = "all", b_d, b_out;
  auto* sub_b = app.add_subcommand("bounds", "Tabulate the security bounds");
  sub_b->add_option("--q-bits", b_bits)->required();
  sub_b->add_option("--t", b_t)->required();
  sub_b->add_option("--s", b_s);
  sub_b->add_option("--k", b_k)->required();
  sub_b->add_option("--omega", b_omega, "comma list, ranges lo-hi, or all");
  sub_b->add_option("--d", b_d, "set-difference sizes for the leakage column");
  sub_b->add_option("--out", b_out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*sub_ep) {
      write_output(ep.out, experiment_partial_csv(finish(ep, sub_ep)));
      return 0;
    }
    if (*sub_ef) {
      write_output(ef.out, experiment_full_csv(finish(ef, sub_ef)));
      return 0;
    }
    if (*sub_sample) {
      if (sample_s < 0) sample_s = sample_t;
      if (sample_bits < 2 || sample_bits > kMaxFieldBits) throw UsageError("q_bits out of range");
      const Field& f = *Field::get(sample_bits);
      Rng rng(sample_seed);
      const int big = std::max(sample_t, sample_s);
      const int small = std::min(sample_t, sample_s);
      if (small < 0 || static_cast<std::uint64_t>(big + small - sample_omega) > f.size()) {
        throw UsageError("sets do not fit in the field");
      }
      auto [a, b] = random_overlapping_sets(f, big, small, sample_omega, rng);
      if (sample_t < sample_s) std::swap(a, b);
      write_output(sample_out_a, serialize_features(f, a));
      write_output(sample_out_b, serialize_features(f, b));
      return 0;
    }
    if (*sub_en) {
      const TaggedFeatureSet tf = deserialize_features(read_file(en_set));
      const Field& f = *Field::get(tf.m_bits);
      Rng rng(en_seed);
      const Variant var = parse_variant(en_variant);
      VaultRecord rec;
      std::string secret_text;
      if (var == Variant::kProbabilistic) {
        auto e = enroll_probabilistic(f, tf.elements, en_k, rng);
        rec = e.record;
        secret_text = serialize_poly(f, e.secret);
      } else if (var == Variant::kDeterministic) {
        rec = enroll_deterministic(f, tf.elements, en_k);
      } else {
        const int bl = en_blend > 0 ? en_blend : static_cast<int>(tf.elements.size());
        auto e = enroll_blended(f, tf.elements, en_k, bl, en_ext, rng);
        rec = e.record;
        secret_text = serialize_poly(*Field::get(rec.ext_m_bits), e.secret);
      }
      write_output(en_out, serialize(rec));
      if (!en_secret_out.empty()) {
        if (secret_text.empty()) throw UsageError("deterministic records carry no secret");
        write_output(en_secret_out, secret_text);
      }
      return 0;
    }
    if (*sub_un) {
      const VaultRecord rec = deserialize(read_file(un_record));
      const TaggedFeatureSet tf = deserialize_features(read_file(un_set));
      if (tf.m_bits != rec.m_bits) throw UsageError("set and record use different fields");
      auto r = unlock(rec, tf.elements);
      if (!r) {
        std::cout << json{{"unlocked", false}}.dump() << '\n';
        return 1;
      }
      const Field& base = *Field::get(rec.m_bits);
      json out{{"unlocked", true}, {"features", hex_array(base, r->features)}};
      out["secret"] = r->secret ? poly_json(*Field::get(rec.field_bits()), *r->secret) : json();
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*sub_at) {
      const VaultRecord v = deserialize(read_file(at_v));
      const VaultRecord w = deserialize(read_file(at_w));
      if (v.field_bits() != w.field_bits() || v.m_bits != w.m_bits) {
        throw UsageError("records are defined over different fields");
      }
      if (v.k != w.k) throw UsageError("records use different k");
      const Field& f = *Field::get(v.field_bits());
      if (at_budget > 0 || at_omega_prime >= 0) {
        std::optional<FullRecoveryOutput> got;
        json out;
        if (at_budget > 0) {
          DriverConfig dc;
          dc.omega_start = at_omega_prime >= 0 ? at_omega_prime : std::min(v.t, w.t);
          dc.omega_floor = 0;
          dc.budget = at_budget;
          dc.seed = at_seed;
          dc.threads = at_threads;
          auto r = brute_force_driver(v, w, dc);
          if (!r) {
            std::cout << json{{"failure", "exhausted"}, {"attempts", r.error().attempts}}.dump()
                      << '\n';
            return 1;
          }
          out["attempts"] = r->attempts;
          out["omega_prime"] = r->omega_prime;
          got = r->sets;
        } else {
          Rng rng(at_seed);
          auto r = full_recovery(v, w, at_omega_prime, rng);
          if (!r) {
            std::cout << json{{"failure", failure_name(r.error())}}.dump() << '\n';
            return 1;
          }
          got = r.value();
        }
        out["set_a"] = hex_array(f, got->set_a);
        out["set_b"] = hex_array(f, got->set_b);
        std::cout << out.dump(2) << '\n';
        return 0;
      }
      auto r = partial_recovery(v, w);
      if (!r) {
        std::cout << json{{"failure", failure_name(r.error())}}.dump() << '\n';
        return 1;
      }
      json out{{"omega_star", r->omega_star},
               {"diff_a", hex_array(f, r->diff_a)},
               {"diff_b", hex_array(f, r->diff_b)}};
      std::cout << out.dump(2) << '\n';
      return 0;
    }
    if (*sub_b) {
      return run_bounds(b_bits, b_t, b_s < 0 ? b_t : b_s, b_k, b_omega, b_d, b_out);
    }
  } catch (const IoError& e) {
    std::cerr << "fvault: " << e.what() << '\n';
    return 3;
  } catch (const FormatError& e) {
    std::cerr << "fvault: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "fvault: " << e.what() << '\n';
    return 2;
  } catch (const std::length_error& e) {
    std::cerr << "fvault: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
