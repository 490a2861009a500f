#include "fvault/vault.hpp"

#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

namespace fvault {

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw std::invalid_argument(msg);
}

void check_elements(const Field& f, const FeatureSet& a) {
  for (Elem x : a) {
    require(f.contains(x), "feature " + std::to_string(x) + " is not in GF(2^" +
                               std::to_string(f.bits()) + ")");
  }
}

void check_k(int k, std::size_t t) {
  require(k >= 1 && static_cast<std::size_t>(k) <= t,
          "need 1 <= k <= |A| (k=" + std::to_string(k) + ", |A|=" + std::to_string(t) + ")");
}

std::vector<Elem> padded(const Poly& p, std::size_t len) {
  std::vector<Elem> out(p.coeffs().begin(), p.coeffs().end());
  out.resize(len, 0);
  return out;
}

}  // namespace

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::kProbabilistic: return "probabilistic";
    case Variant::kDeterministic: return "deterministic";
    case Variant::kBlended: return "blended";
  }
  return "?";
}

Poly VaultRecord::polynomial() const {
  if (variant != Variant::kDeterministic) return Poly(coeffs);
  std::vector<Elem> c(static_cast<std::size_t>(t) + 1, 0);
  std::copy(coeffs.begin(), coeffs.end(), c.begin() + k);
  c.back() = 1;
  return Poly(std::move(c));
}

void validate(const VaultRecord& rec) {
  require(rec.m_bits >= kMinFieldBits && rec.m_bits <= kMaxFieldBits,
          "m_bits must be in [2, 24], got " + std::to_string(rec.m_bits));
  require(rec.k >= 1 && rec.k <= rec.t,
          "need 1 <= k <= t (k=" + std::to_string(rec.k) + ", t=" + std::to_string(rec.t) + ")");
  require(static_cast<std::uint64_t>(rec.t) <= (std::uint64_t{1} << rec.m_bits),
          "t exceeds the field size");
  std::size_t expected = 0;
  switch (rec.variant) {
    case Variant::kProbabilistic:
      require(rec.ext_m_bits == 0 && rec.blend_size == 0, "blending parameters on a plain record");
      expected = static_cast<std::size_t>(rec.t) + 1;
      break;
    case Variant::kDeterministic:
      require(rec.ext_m_bits == 0 && rec.blend_size == 0, "blending parameters on a plain record");
      expected = static_cast<std::size_t>(rec.t - rec.k);
      break;
    case Variant::kBlended:
      require(rec.ext_m_bits > rec.m_bits && rec.ext_m_bits % rec.m_bits == 0 &&
                  rec.ext_m_bits <= kMaxFieldBits,
              "ext_m_bits must be a proper multiple of m_bits and at most 24");
      require(rec.blend_size >= 0, "blend_size must be non-negative");
      expected = static_cast<std::size_t>(rec.t + rec.blend_size) + 1;
      break;
  }
  require(rec.coeffs.size() == expected, std::string(variant_name(rec.variant)) +
                                             " record needs " + std::to_string(expected) +
                                             " coefficients, has " +
                                             std::to_string(rec.coeffs.size()));
  const std::uint64_t q = std::uint64_t{1} << rec.field_bits();
  for (Elem c : rec.coeffs) require(c < q, "coefficient out of field range");
  if (rec.variant != Variant::kDeterministic) require(rec.coeffs.back() == 1, "record is not monic");
}

Poly random_secret(const Field& f, int k, Rng& rng, bool exact_degree) {
  std::vector<Elem> c(static_cast<std::size_t>(k));
  for (auto& x : c) x = f.random(rng);
  if (exact_degree && k > 0) {
    while (c.back() == 0) c.back() = f.random(rng);
  }
  return Poly(std::move(c));
}

VaultRecord enroll_probabilistic(const Field& f, const FeatureSet& a, int k, const Poly& secret) {
  check_elements(f, a);
  check_k(k, a.size());
  require(secret.degree() < k, "secret polynomial must have degree < k");
  const Poly v = add(secret, char_poly(f, a));
  VaultRecord rec;
  rec.variant = Variant::kProbabilistic;
  rec.m_bits = f.bits();
  rec.t = static_cast<int>(a.size());
  rec.k = k;
  rec.coeffs = padded(v, a.size() + 1);
  return rec;
}

Enrollment enroll_probabilistic(const Field& f, const FeatureSet& a, int k, Rng& rng) {
  check_k(k, a.size());
  Poly secret = random_secret(f, k, rng);
  VaultRecord rec = enroll_probabilistic(f, a, k, secret);
  return {std::move(rec), std::move(secret)};
}

VaultRecord enroll_deterministic(const Field& f, const FeatureSet& a, int k) {
  check_elements(f, a);
  check_k(k, a.size());
  const Poly chi = char_poly(f, a);
  VaultRecord rec;
  rec.variant = Variant::kDeterministic;
  rec.m_bits = f.bits();
  rec.t = static_cast<int>(a.size());
  rec.k = k;
  for (int i = k; i < rec.t; ++i) rec.coeffs.push_back(chi.coeff(i));
  return rec;
}

SubfieldEmbedding::SubfieldEmbedding(std::shared_ptr<const Field> base,
                                     std::shared_ptr<const Field> ext)
    : base_(std::move(base)), ext_(std::move(ext)) {
  const int m = base_->bits();
  require(ext_->bits() % m == 0 && ext_->bits() > m,
          "extension degree must be a proper multiple of the base degree");
  std::vector<Elem> mod_coeffs(static_cast<std::size_t>(m) + 1);
  for (int i = 0; i <= m; ++i) mod_coeffs[static_cast<std::size_t>(i)] = (base_->modulus() >> i) & 1;
  // The base modulus splits over the big field; all its roots lie in the subfield.
  auto roots = roots_if_splits(*ext_, Poly(std::move(mod_coeffs)));
  if (!roots || roots->empty()) throw std::logic_error("base modulus does not split in extension");
  const Elem beta = (*roots)[0];
  Elem pw = 1;
  for (int i = 0; i < m; ++i) {
    basis_.push_back(pw);
    pw = ext_->mul(pw, beta);
  }
  back_.reserve(base_->size());
  for (std::uint64_t a = 0; a < base_->size(); ++a) {
    back_.emplace(embed(static_cast<Elem>(a)), static_cast<Elem>(a));
  }
}

std::shared_ptr<const SubfieldEmbedding> SubfieldEmbedding::get(int base_bits, int ext_bits) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const SubfieldEmbedding>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{base_bits, ext_bits}];
  if (!slot) {
    slot = std::make_shared<const SubfieldEmbedding>(Field::get(base_bits), Field::get(ext_bits));
  }
  return slot;
}

Elem SubfieldEmbedding::embed(Elem a) const {
  require(base_->contains(a), "element is not in the base field");
  Elem out = 0;
  for (std::size_t i = 0; a != 0; ++i, a >>= 1) {
    if (a & 1) out ^= basis_[i];
  }
  return out;
}

FeatureSet SubfieldEmbedding::embed(const FeatureSet& a) const {
  std::vector<Elem> out;
  out.reserve(a.size());
  for (Elem x : a) out.push_back(embed(x));
  return FeatureSet(std::move(out));
}

bool SubfieldEmbedding::in_subfield(Elem x) const {
  Elem y = x;
  for (int i = 0; i < base_->bits(); ++i) y = ext_->sqr(y);
  return y == x;
}

Elem SubfieldEmbedding::restrict(Elem x) const {
  auto it = back_.find(x);
  require(it != back_.end(), "element is not in the embedded subfield");
  return it->second;
}

FeatureSet random_blending_set(const SubfieldEmbedding& emb, int blend_size, Rng& rng) {
  require(blend_size >= 0, "blend_size must be non-negative");
  const std::uint64_t room = emb.ext().size() - emb.base().size();
  require(static_cast<std::uint64_t>(blend_size) <= room, "blend_size exceeds K \\ F");
  std::vector<Elem> out;
  out.reserve(static_cast<std::size_t>(blend_size));
  while (out.size() < static_cast<std::size_t>(blend_size)) {
    const Elem x = emb.ext().random(rng);
    if (emb.in_subfield(x) || std::find(out.begin(), out.end(), x) != out.end()) continue;
    out.push_back(x);
  }
  return FeatureSet(std::move(out));
}

BlendedEnrollment enroll_blended(const Field& base, const FeatureSet& a, int k,
                                 const FeatureSet& blending, int ext_factor, Rng& rng) {
  require(ext_factor >= 2, "ext_factor must be at least 2");
  require(base.bits() * ext_factor <= kMaxFieldBits, "extension field exceeds GF(2^24)");
  require(base == *Field::get(base.bits()), "blended vaults need the default base modulus");
  check_elements(base, a);
  check_k(k, a.size());
  const auto emb = SubfieldEmbedding::get(base.bits(), base.bits() * ext_factor);
  const Field& ext = emb->ext();
  for (Elem x : blending) {
    require(ext.contains(x) && !emb->in_subfield(x), "blending element lies in the base field");
  }
  BlendedEnrollment out;
  out.embedded = emb->embed(a);
  out.blending = blending;
  out.secret = random_secret(ext, k, rng);
  const Poly v = add(out.secret, mul(ext, char_poly(ext, blending), char_poly(ext, out.embedded)));
  out.record.variant = Variant::kBlended;
  out.record.m_bits = base.bits();
  out.record.ext_m_bits = ext.bits();
  out.record.t = static_cast<int>(a.size());
  out.record.k = k;
  out.record.blend_size = static_cast<int>(blending.size());
  out.record.coeffs = padded(v, a.size() + blending.size() + 1);
  return out;
}

BlendedEnrollment enroll_blended(const Field& base, const FeatureSet& a, int k, int blend_size,
                                 int ext_factor, Rng& rng) {
  require(ext_factor >= 2, "ext_factor must be at least 2");
  require(base.bits() * ext_factor <= kMaxFieldBits, "extension field exceeds GF(2^24)");
  const auto emb = SubfieldEmbedding::get(base.bits(), base.bits() * ext_factor);
  const FeatureSet bl = random_blending_set(*emb, blend_size, rng);
  return enroll_blended(base, a, k, bl, ext_factor, rng);
}

std::optional<UnlockResult> unlock(const VaultRecord& rec, const FeatureSet& b) {
  validate(rec);
  require(b.size() >= static_cast<std::size_t>(rec.k), "unlocking set smaller than k");
  const auto base = Field::get(rec.m_bits);
  check_elements(*base, b);

  std::shared_ptr<const SubfieldEmbedding> emb;
  const Field* f = base.get();
  FeatureSet query = b;
  if (rec.variant == Variant::kBlended) {
    emb = SubfieldEmbedding::get(rec.m_bits, rec.ext_m_bits);
    f = &emb->ext();
    query = emb->embed(b);
  }
  const Poly v = rec.polynomial();
  std::vector<Point> pts;
  pts.reserve(query.size());
  for (Elem x : query) pts.push_back({x, eval(*f, v, x)});
  auto secret = rs_decode(*f, pts, rec.k);
  if (!secret) return std::nullopt;
  auto roots = roots_if_splits(*f, sub(v, *secret));
  if (!roots) return std::nullopt;

  UnlockResult out;
  if (rec.variant == Variant::kBlended) {
    std::vector<Elem> feats;
    for (Elem x : *roots) {
      if (emb->in_subfield(x)) feats.push_back(emb->restrict(x));
    }
    out.features = FeatureSet(std::move(feats));
  } else {
    out.features = std::move(*roots);
  }
  if (rec.variant != Variant::kDeterministic) out.secret = std::move(secret);
  return out;
}

}  // namespace fvault
