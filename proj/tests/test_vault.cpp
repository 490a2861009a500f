#include <doctest.h>

#include <set>
#include <stdexcept>

#include <json.hpp>

#include "fvault/encoding.hpp"
#include "fvault/serialize.hpp"
#include "fvault/vault.hpp"
#include "support.hpp"

using namespace fvault;
using fvault::testing::random_set;

namespace {

// B of size |A| sharing exactly `overlap` elements with A.
FeatureSet query_with_overlap(const Field& f, const FeatureSet& a, int overlap, Rng& rng) {
  std::vector<Elem> own(a.begin(), a.end());
  for (std::size_t i = own.size(); i > 1; --i) std::swap(own[i - 1], own[uniform_below(rng, i)]);
  own.resize(static_cast<std::size_t>(overlap));
  const auto fresh = f.random_distinct(a.size() - static_cast<std::size_t>(overlap), a, rng);
  own.insert(own.end(), fresh.begin(), fresh.end());
  return FeatureSet(std::move(own));
}

}  // namespace

TEST_CASE("probabilistic enrollment") {
  const Field f(8);
  Rng rng(21);
  const FeatureSet a = random_set(f, 24, rng);
  const Enrollment e = enroll_probabilistic(f, a, 9, rng);
  const Poly v = e.record.polynomial();
  const Poly chi = char_poly(f, a);
  CHECK(v.degree() == 24);
  CHECK(v.is_monic());
  CHECK(e.secret.degree() < 9);
  for (int j = 9; j <= 24; ++j) CHECK(v.coeff(j) == chi.coeff(j));
  CHECK(add(v, chi) == e.secret);

  const auto u = unlock(e.record, a);
  REQUIRE(u);
  CHECK(u->features == a);
  CHECK(u->secret == e.secret);

  // k = t: every stored coefficient below the leading one carries the secret.
  const Enrollment full = enroll_probabilistic(f, a, 24, rng);
  CHECK(full.record.coeffs.back() == 1);
  CHECK(add(full.record.polynomial(), chi) == full.secret);

  CHECK_THROWS_AS(enroll_probabilistic(f, a, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(enroll_probabilistic(f, a, 25, rng), std::invalid_argument);
}

TEST_CASE("record invariants hold for every enrolled record") {
  Rng rng(22);
  for (int m : {4, 8, 16}) {
    const Field f(m);
    for (int i = 0; i < 40; ++i) {
      const int t = 1 + static_cast<int>(rng() % 15);
      const int k = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(t));
      const FeatureSet a = random_set(f, static_cast<std::size_t>(t), rng);
      const Poly chi = char_poly(f, a);
      const Poly v = enroll_probabilistic(f, a, k, rng).record.polynomial();
      for (int j = k; j <= t; ++j) REQUIRE(v.coeff(j) == chi.coeff(j));
    }
  }
}

TEST_CASE("deterministic enrollment") {
  const Field f(8);
  Rng rng(23);
  const FeatureSet a = random_set(f, 24, rng);
  const VaultRecord det = enroll_deterministic(f, a, 9);
  const VaultRecord prob = enroll_probabilistic(f, a, 9, rng).record;
  REQUIRE(det.coeffs.size() == 15);
  for (int j = 9; j < 24; ++j) CHECK(det.coeffs[static_cast<std::size_t>(j - 9)] == prob.coeffs[static_cast<std::size_t>(j)]);

  // The zero-padded polynomial is a probabilistic record for the secret that
  // cancels the low part of chi_A.
  const Poly padded = det.polynomial();
  const Poly low = add(padded, char_poly(f, a));
  CHECK(low.degree() < 9);
  CHECK(enroll_probabilistic(f, a, 9, low).polynomial() == padded);

  const auto u = unlock(det, a);
  REQUIRE(u);
  CHECK(u->features == a);
  CHECK(!u->secret);
}

TEST_CASE("unlocking succeeds at the decoding radius and fails below it") {
  const Field f(16);
  Rng rng(24);
  const int t = 24, k = 9;
  int successes = 0, trials = 0;
  for (int i = 0; i < 60; ++i) {
    const FeatureSet a = random_set(f, t, rng);
    const Enrollment e = enroll_probabilistic(f, a, k, rng);
    const int need = (t + k + 1) / 2;
    const auto at_radius = unlock(e.record, query_with_overlap(f, a, need, rng));
    REQUIRE(at_radius);
    CHECK(at_radius->features == a);
    CHECK(at_radius->secret == e.secret);
    const int bigger = need + static_cast<int>(rng() % static_cast<std::uint64_t>(t - need + 1));
    REQUIRE(unlock(e.record, query_with_overlap(f, a, bigger, rng)));
    ++trials;
    successes += unlock(e.record, query_with_overlap(f, a, need - 1, rng)).has_value();
  }
  CHECK(successes < trials / 10);

  // Random disjoint queries essentially never unlock.
  const FeatureSet a = random_set(f, t, rng);
  const Enrollment e = enroll_probabilistic(f, a, k, rng);
  int opened = 0;
  for (int i = 0; i < 500; ++i) {
    opened += unlock(e.record, FeatureSet(f.random_distinct(t, a, rng))).has_value();
  }
  CHECK(opened < 5);
  CHECK_THROWS_AS(unlock(e.record, FeatureSet{1, 2}), std::invalid_argument);
}

TEST_CASE("subfield embedding") {
  const auto emb = SubfieldEmbedding::get(4, 8);
  const Field& b = emb->base();
  const Field& k = emb->ext();
  int in_sub = 0;
  for (Elem x = 0; x < k.size(); ++x) in_sub += emb->in_subfield(x);
  CHECK(in_sub == 16);
  for (Elem x = 0; x < 16; ++x) {
    CHECK(emb->in_subfield(emb->embed(x)));
    CHECK(emb->restrict(emb->embed(x)) == x);
    for (Elem y = 0; y < 16; ++y) {
      CHECK(emb->embed(b.mul(x, y)) == k.mul(emb->embed(x), emb->embed(y)));
      CHECK(emb->embed(Field::add(x, y)) == Field::add(emb->embed(x), emb->embed(y)));
    }
  }
  Elem outside = 0;
  while (emb->in_subfield(outside)) ++outside;
  CHECK_THROWS_AS(emb->restrict(outside), std::invalid_argument);
}

TEST_CASE("blended enrollment") {
  const Field f(8);
  Rng rng(25);
  const FeatureSet a = random_set(f, 12, rng);
  const auto emb = SubfieldEmbedding::get(8, 16);
  const Field& big = emb->ext();

  const BlendedEnrollment none = enroll_blended(f, a, 5, 0, 2, rng);
  CHECK(none.record.polynomial() == add(none.secret, char_poly(big, emb->embed(a))));

  const BlendedEnrollment e = enroll_blended(f, a, 5, 12, 2, rng);
  CHECK(e.record.degree() == 24);
  CHECK(e.blending.size() == 12);
  for (Elem x : e.blending) CHECK(!emb->in_subfield(x));
  const Poly v = e.record.polynomial();
  // V(x) = f(x) exactly on A inside the base field.
  for (Elem x = 0; x < 256; ++x) {
    const Elem ex = emb->embed(x);
    CHECK((eval(big, v, ex) == eval(big, e.secret, ex)) == a.contains(x));
  }
  const auto u = unlock(e.record, a);
  REQUIRE(u);
  CHECK(u->features == a);
  CHECK(u->secret == e.secret);

  CHECK_THROWS_AS(enroll_blended(f, a, 5, 12, 1, rng), std::invalid_argument);
  CHECK_THROWS_AS(enroll_blended(f, a, 5, FeatureSet{emb->embed(3)}, 2, rng), std::invalid_argument);
}

TEST_CASE("random encoding") {
  for (int m = 2; m <= 12; ++m) {
    for (std::uint64_t seed : {0ull, 1ull, 0xdeadbeefull}) {
      const RandomEncoding enc(m, seed);
      std::set<Elem> image;
      for (Elem x = 0; x < (1u << m); ++x) {
        const Elem y = enc.apply(x);
        REQUIRE(y < (1u << m));
        REQUIRE(enc.invert(y) == x);
        image.insert(y);
        if (seed == 0) REQUIRE(y == x);
      }
      REQUIRE(image.size() == (1u << m));
    }
  }
  const RandomEncoding enc = new_encoding(16, 99);
  CHECK(!enc.is_identity());
  CHECK(new_encoding(16, 0).is_identity());
  Rng rng(26);
  const Field f(16);
  const FeatureSet a = random_set(f, 24, rng);
  CHECK(enc.invert(enc.apply(a)) == a);
  CHECK(enc.apply(a).size() == a.size());

  // Independent encodings of one set overlap in about t^2/q elements.
  double total = 0;
  for (std::uint64_t s = 1; s <= 10000; ++s) {
    total += double(set_intersection(RandomEncoding(16, 2 * s).apply(a),
                                     RandomEncoding(16, 2 * s + 1).apply(a))
                        .size());
  }
  CHECK(total / 10000 < 1.0);
}

TEST_CASE("record serialization") {
  const Field f(8);
  Rng rng(27);
  const FeatureSet a = random_set(f, 24, rng);
  const VaultRecord prob = enroll_probabilistic(f, a, 9, rng).record;
  const VaultRecord det = enroll_deterministic(f, a, 9);
  const VaultRecord bl = enroll_blended(f, a, 9, 8, 2, rng).record;
  for (const VaultRecord* r : {&prob, &det, &bl}) {
    const std::string text = serialize(*r);
    CHECK(deserialize(text) == *r);
    CHECK(serialize(deserialize(text)) == text);
  }
  const auto j = nlohmann::json::parse(serialize(det));
  CHECK(j["variant"] == "deterministic");
  CHECK(j["coeffs"].size() == 15);
  CHECK(!j.contains("ext_m_bits"));
  CHECK(nlohmann::json::parse(serialize(bl))["ext_m_bits"] == 16);
}

TEST_CASE("malformed records are rejected with a location") {
  const Field f(8);
  Rng rng(28);
  const std::string good = serialize(enroll_probabilistic(f, random_set(f, 6, rng), 3, rng).record);
  auto why = [](const std::string& text) -> std::string {
    try {
      deserialize(text);
    } catch (const FormatError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(why(good.substr(0, good.size() / 2)).find("byte") != std::string::npos);
  CHECK(why("") != "");
  CHECK(why("[]").find("$") != std::string::npos);
  CHECK(why(R"({"variant":"probabilistic","m_bits":8,"t":1,"k":1,"coeffs":["zz","01"]})")
            .find("$.coeffs[0]") != std::string::npos);
  CHECK(why(R"({"variant":"probabilistic","m_bits":8,"t":1,"k":1,"coeffs":["03","02"]})")
            .find("monic") != std::string::npos);
  CHECK(why(R"({"variant":"other","m_bits":8,"t":1,"k":1,"coeffs":[]})").find("$.variant") !=
        std::string::npos);
  CHECK(why(R"({"variant":"probabilistic","m_bits":30,"t":1,"k":1,"coeffs":[]})")
            .find("$.m_bits") != std::string::npos);
  CHECK(why(R"({"variant":"probabilistic","m_bits":8,"t":2,"k":1,"coeffs":["00","01"]})") != "");
  CHECK(why(R"({"variant":"deterministic","m_bits":8,"t":2,"k":1,"coeffs":["aa"]})") == "");
}

TEST_CASE("feature set and polynomial serialization") {
  const Field f(12);
  Rng rng(29);
  const FeatureSet a = random_set(f, 10, rng);
  const auto back = deserialize_features(serialize_features(f, a));
  CHECK(back.m_bits == 12);
  CHECK(back.elements == a);
  CHECK_THROWS_AS(deserialize_features(R"({"m_bits":8,"elements":["01","01"]})"), FormatError);
  const Poly p = fvault::testing::random_poly(f, 7, rng);
  CHECK(deserialize_poly(f, serialize_poly(f, p)) == p);
  CHECK(serialize_poly(Field(8), Poly(std::vector<Elem>{0x1b, 0, 1})) == R"(["1b","00","01"])");
}
