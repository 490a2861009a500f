// Python bindings. Records cross the boundary as their JSON text, feature
// sets as lists of ints.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fvault/attack.hpp"
#include "fvault/bounds.hpp"
#include "fvault/experiment.hpp"
#include "fvault/serialize.hpp"
#include "fvault/vault.hpp"

namespace py = pybind11;
using namespace fvault;

namespace {

std::vector<Elem> elems(const FeatureSet& s) { return {s.begin(), s.end()}; }
std::vector<Elem> coeff_list(const Poly& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

Variant parse_variant(const std::string& v) {
  if (v == "prob" || v == "probabilistic") return Variant::kProbabilistic;
  if (v == "det" || v == "deterministic") return Variant::kDeterministic;
  if (v == "blended") return Variant::kBlended;
  throw std::invalid_argument("unknown variant: " + v);
}

FeatureSet checked_set(const Field& f, const std::vector<Elem>& xs) {
  for (Elem x : xs) {
    if (x >= f.size()) throw std::invalid_argument("feature outside the field");
  }
  FeatureSet s(xs);
  if (s.size() != xs.size()) throw std::invalid_argument("features must be distinct");
  return s;
}

py::dict bound_dict(const bounds::BoundValue& b) {
  py::dict d;
  d["log2"] = b.log2;
  d["exact"] = b.exact ? py::object(py::str(b.exact_string())) : py::object(py::none());
  return d;
}

py::object partial_dict(const PartialResult& r) {
  py::dict d;
  if (!r) {
    d["failure"] = failure_name(r.error());
    return std::move(d);
  }
  d["omega_star"] = r->omega_star;
  d["diff_a"] = elems(r->diff_a);
  d["diff_b"] = elems(r->diff_b);
  return std::move(d);
}

ExperimentConfig make_config(int q_bits, int t, int s, int k, std::vector<int> omegas,
                             std::uint64_t trials, std::uint64_t seed, int threads,
                             const std::string& variant) {
  ExperimentConfig c;
  c.m_bits = q_bits;
  c.t = t;
  c.s = s;
  c.k = k;
  c.omegas = std::move(omegas);
  c.trials = trials;
  c.seed = seed;
  c.threads = threads;
  c.variant = parse_variant(variant);
  return c;
}

}  // namespace

PYBIND11_MODULE(_fvault, m) {
  m.doc() = "Improved fuzzy vault and record-multiplicity attacks";
  py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);

  m.def("gf_mul", [](int m_bits, Elem a, Elem b) {
    const Field& f = *Field::get(m_bits);
    if (a >= f.size() || b >= f.size()) throw std::invalid_argument("element outside the field");
    return f.mul(a, b);
  });
  m.def("char_poly", [](int m_bits, const std::vector<Elem>& xs) {
    const Field& f = *Field::get(m_bits);
    return coeff_list(char_poly(f, checked_set(f, xs)));
  }, "Coefficients of the characteristic polynomial, ascending.");

  m.def(
      "enroll",
      [](const std::vector<Elem>& features, int m_bits, int k, const std::string& variant,
         std::uint64_t seed, int ext_factor, int blend_size) {
        const Field& f = *Field::get(m_bits);
        const FeatureSet a = checked_set(f, features);
        Rng rng(seed);
        py::dict d;
        switch (parse_variant(variant)) {
          case Variant::kProbabilistic: {
            const Enrollment e = enroll_probabilistic(f, a, k, rng);
            d["record"] = serialize(e.record);
            d["secret"] = coeff_list(e.secret);
            break;
          }
          case Variant::kDeterministic:
            d["record"] = serialize(enroll_deterministic(f, a, k));
            d["secret"] = py::none();
            break;
          case Variant::kBlended: {
            const BlendedEnrollment e = enroll_blended(
                f, a, k, blend_size > 0 ? blend_size : static_cast<int>(a.size()), ext_factor, rng);
            d["record"] = serialize(e.record);
            d["secret"] = coeff_list(e.secret);
            break;
          }
        }
        return d;
      },
      py::arg("features"), py::arg("m_bits"), py::arg("k"), py::arg("variant") = "prob",
      py::arg("seed") = 1, py::arg("ext_factor") = 2, py::arg("blend_size") = 0);

  m.def(
      "unlock",
      [](const std::string& record, const std::vector<Elem>& query) -> py::object {
        const VaultRecord rec = deserialize(record);
        const auto u = unlock(rec, checked_set(*Field::get(rec.m_bits), query));
        if (!u) return py::none();
        py::dict d;
        d["features"] = elems(u->features);
        d["secret"] = u->secret ? py::object(py::cast(coeff_list(*u->secret))) : py::object(py::none());
        return std::move(d);
      },
      py::arg("record"), py::arg("query"));

  m.def(
      "sample_sets",
      [](int m_bits, int t, int s, int omega, std::uint64_t seed) {
        Rng rng(seed);
        const auto [a, b] = random_overlapping_sets(*Field::get(m_bits), t, s, omega, rng);
        return py::make_tuple(elems(a), elems(b));
      },
      py::arg("m_bits"), py::arg("t"), py::arg("s"), py::arg("omega"), py::arg("seed") = 1);

  m.def(
      "partial_recovery",
      [](const std::string& v, const std::string& w) {
        return partial_dict(partial_recovery(deserialize(v), deserialize(w)));
      },
      py::arg("v"), py::arg("w"));

  m.def(
      "full_recovery",
      [](const std::string& v, const std::string& w, int omega_prime, std::uint64_t seed) {
        Rng rng(seed);
        const FullResult r = full_recovery(deserialize(v), deserialize(w), omega_prime, rng);
        py::dict d;
        if (!r) {
          d["failure"] = failure_name(r.error());
        } else {
          d["set_a"] = elems(r->set_a);
          d["set_b"] = elems(r->set_b);
        }
        return d;
      },
      py::arg("v"), py::arg("w"), py::arg("omega_prime"), py::arg("seed") = 1);

  m.def(
      "brute_force",
      [](const std::string& v, const std::string& w, int omega_start, std::uint64_t budget,
         std::uint64_t seed, int threads) {
        DriverConfig cfg{omega_start, 0, budget, seed, threads};
        DriverResult r = [&] {
          py::gil_scoped_release release;
          return brute_force_driver(deserialize(v), deserialize(w), cfg);
        }();
        py::dict d;
        if (!r) {
          d["exhausted"] = r.error().attempts;
        } else {
          d["set_a"] = elems(r->sets.set_a);
          d["set_b"] = elems(r->sets.set_b);
          d["attempts"] = r->attempts;
          d["omega_prime"] = r->omega_prime;
        }
        return d;
      },
      py::arg("v"), py::arg("w"), py::arg("omega_start"), py::arg("budget"), py::arg("seed") = 1,
      py::arg("threads") = 1);

  m.def("single_record_bound", [](std::uint64_t q, int t, int k) {
    return bound_dict(bounds::single_record_bound(q, t, k));
  });
  m.def("leakage_bound", [](std::uint64_t q, int t, int s, int k, int d) {
    return bound_dict(bounds::leakage_bound(q, t, s, k, d));
  });
  m.def("full_recovery_lower_bound", [](std::uint64_t q, int t, int s, int k, int omega) {
    return bound_dict(bounds::full_recovery_lower_bound(q, t, s, k, omega));
  });
  m.def("full_recovery_upper_bound", [](std::uint64_t q, int t, int s, int k, int omega) {
    return bound_dict(bounds::full_recovery_upper_bound(q, t, s, k, omega));
  });

  m.def(
      "experiment_partial",
      [](int q_bits, int t, int s, int k, std::vector<int> omegas, std::uint64_t trials,
         std::uint64_t seed, int threads, const std::string& variant) {
        const ExperimentConfig c =
            make_config(q_bits, t, s, k, std::move(omegas), trials, seed, threads, variant);
        py::gil_scoped_release release;
        return experiment_partial_csv(c);
      },
      py::arg("q_bits"), py::arg("t"), py::arg("s"), py::arg("k"),
      py::arg("omegas") = std::vector<int>{}, py::arg("trials") = 1, py::arg("seed") = 1,
      py::arg("threads") = 1, py::arg("variant") = "prob",
      "CSV text; an empty omega list means every feasible overlap.");
  m.def(
      "experiment_full",
      [](int q_bits, int t, int s, int k, std::vector<int> omegas, std::uint64_t trials,
         std::uint64_t seed, int threads) {
        const ExperimentConfig c =
            make_config(q_bits, t, s, k, std::move(omegas), trials, seed, threads, "prob");
        py::gil_scoped_release release;
        return experiment_full_csv(c);
      },
      py::arg("q_bits"), py::arg("t"), py::arg("s"), py::arg("k"),
      py::arg("omegas") = std::vector<int>{}, py::arg("trials") = 1, py::arg("seed") = 1,
      py::arg("threads") = 1);
}
