#include <algorithm>
#include <stdexcept>
#include <string>

#include "fvault/attack.hpp"
#include "fvault/bounds.hpp"

namespace fvault {

namespace {

std::uint64_t binom_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  const mpz_class b = bounds::binomial(n, k);
  if (b > mpz_class(std::to_string(cap))) return cap + 1;
  return std::stoull(b.get_str());
}

bool upper_equal(std::span<const Elem> chi, const Poly& v, int k) {
  for (int i = k; i <= v.degree(); ++i) {
    if (chi[static_cast<std::size_t>(i)] != v.coeff(i)) return false;
  }
  return true;
}

// Depth-first over increasing t-tuples, carrying chi of the prefix.
class SubsetWalker {
 public:
  SubsetWalker(const Field& f, const Poly& v, int k)
      : f_(f), v_(v), k_(k), t_(v.degree()), chi_(static_cast<std::size_t>(t_) + 1),
        pick_(static_cast<std::size_t>(t_)) {
    for (auto& row : chi_) row.assign(static_cast<std::size_t>(t_) + 1, 0);
    chi_[0][0] = 1;
  }

  std::vector<FeatureSet> run() {
    walk(0, 0);
    return std::move(out_);
  }

 private:
  void walk(int depth, std::uint32_t from) {
    if (depth == t_) {
      if (upper_equal(chi_[static_cast<std::size_t>(t_)], v_, k_)) out_.emplace_back(pick_);
      return;
    }
    const auto& cur = chi_[static_cast<std::size_t>(depth)];
    auto& nxt = chi_[static_cast<std::size_t>(depth) + 1];
    const std::uint32_t last = f_.size() - static_cast<std::uint32_t>(t_ - depth);
    for (std::uint32_t a = from; a <= last; ++a) {
      nxt[0] = f_.mul(a, cur[0]);
      for (int j = 1; j <= depth + 1; ++j) {
        nxt[static_cast<std::size_t>(j)] =
            cur[static_cast<std::size_t>(j) - 1] ^ f_.mul(a, cur[static_cast<std::size_t>(j)]);
      }
      pick_[static_cast<std::size_t>(depth)] = a;
      walk(depth + 1, a + 1);
    }
  }

  const Field& f_;
  const Poly& v_;
  int k_;
  int t_;
  std::vector<std::vector<Elem>> chi_;
  std::vector<Elem> pick_;
  std::vector<FeatureSet> out_;
};

bool matches_upper(const Field& f, const FeatureSet& a, const Poly& v, int k) {
  const Poly chi = char_poly(f, a);
  if (chi.degree() != v.degree()) return false;
  for (int i = k; i <= v.degree(); ++i) {
    if (chi.coeff(i) != v.coeff(i)) return false;
  }
  return true;
}

}  // namespace

std::vector<FeatureSet> matching_sets(const Field& f, const Poly& v, int k, std::uint64_t cap) {
  if (f.bits() > kOracleMaxBits) throw std::invalid_argument("exhaustive oracle needs q <= 64");
  if (v.degree() < k || !v.is_monic()) throw std::invalid_argument("record must be monic of degree >= k");
  if (binom_capped(f.size(), static_cast<std::uint64_t>(v.degree()), cap) > cap) {
    throw std::length_error("enumeration exceeds the configured cap");
  }
  return SubsetWalker(f, v, k).run();
}

std::vector<std::pair<FeatureSet, FeatureSet>> exhaustive_oracle(const Field& f, const Poly& v,
                                                                 const Poly& w, int k,
                                                                 std::uint64_t cap) {
  if (f.bits() > kOracleMaxBits) throw std::invalid_argument("exhaustive oracle needs q <= 64");
  const std::uint64_t n = binom_capped(f.size(), static_cast<std::uint64_t>(std::max(v.degree(), 0)), cap) +
                          binom_capped(f.size(), static_cast<std::uint64_t>(std::max(w.degree(), 0)), cap);
  if (n > cap) throw std::length_error("enumeration exceeds the configured cap");
  const auto as = matching_sets(f, v, k, cap);
  const auto bs = matching_sets(f, w, k, cap);
  if (!as.empty() && bs.size() > cap / as.size()) {
    throw std::length_error("oracle output exceeds the configured cap");
  }
  std::vector<std::pair<FeatureSet, FeatureSet>> out;
  out.reserve(as.size() * bs.size());
  for (const auto& a : as) {
    for (const auto& b : bs) out.emplace_back(a, b);
  }
  return out;
}

std::vector<std::pair<FeatureSet, FeatureSet>> exhaustive_oracle(const VaultRecord& v,
                                                                 const VaultRecord& w,
                                                                 std::uint64_t cap) {
  validate(v);
  validate(w);
  if (v.field_bits() != w.field_bits() || v.k != w.k) {
    throw std::invalid_argument("records are defined over different fields or k");
  }
  return exhaustive_oracle(*Field::get(v.field_bits()), v.polynomial(), w.polynomial(), v.k, cap);
}

std::vector<FeatureSet> find_supersets(const Field& f, const Poly& v, int k, const FeatureSet& a0,
                                       std::uint64_t cap) {
  const int t = v.degree();
  const int c = t - static_cast<int>(a0.size());
  std::vector<FeatureSet> out;
  if (c < 0 || !v.is_monic()) return out;
  // V = f_hat + chi_{a0} chi_C, so V div chi_{a0} matches chi_C from X^u up.
  const Poly qt = divmod(f, v, char_poly(f, a0)).quotient;
  const int u = k - static_cast<int>(a0.size());

  auto accept = [&](const FeatureSet& rest) {
    if (static_cast<int>(rest.size()) != c || !set_intersection(rest, a0).empty()) return;
    FeatureSet full = set_union(a0, rest);
    if (matches_upper(f, full, v, k)) out.push_back(std::move(full));
  };

  if (u <= 0) {
    if (auto r = roots_if_splits(f, qt)) accept(*r);
    return out;
  }

  // Fix the u-1 smallest elements S of C. Then chi_{C \ S} equals
  // (qt div chi_S) up to its constant term, so C \ S is a level set of that
  // quotient above max(S).
  const int anchors = u - 1;
  if (binom_capped(f.size(), static_cast<std::uint64_t>(anchors), cap) > cap) {
    throw std::length_error("superset search exceeds the configured cap");
  }
  const int rest_size = c - anchors;
  std::vector<Elem> pick(static_cast<std::size_t>(anchors));
  std::vector<std::pair<Elem, Elem>> level;  // (value, x)
  level.reserve(f.size());

  std::function<void(int, std::uint64_t)> walk = [&](int depth, std::uint64_t from) {
    if (depth == anchors) {
      const FeatureSet s(pick);
      if (!set_intersection(s, a0).empty()) return;
      const Poly qs = divmod(f, qt, char_poly(f, s)).quotient;
      level.clear();
      for (std::uint64_t xv = from; xv < f.size(); ++xv) {
        const auto x = static_cast<Elem>(xv);
        if (a0.contains(x)) continue;
        level.emplace_back(eval(f, qs, x), x);
      }
      std::sort(level.begin(), level.end());
      for (std::size_t i = 0; i < level.size();) {
        std::size_t j = i;
        while (j < level.size() && level[j].first == level[i].first) ++j;
        if (static_cast<int>(j - i) == rest_size) {
          std::vector<Elem> cand(pick);
          for (std::size_t z = i; z < j; ++z) cand.push_back(level[z].second);
          accept(FeatureSet(std::move(cand)));
        }
        i = j;
      }
      return;
    }
    for (std::uint64_t a = from; a < f.size(); ++a) {
      if (a0.contains(static_cast<Elem>(a))) continue;
      pick[static_cast<std::size_t>(depth)] = static_cast<Elem>(a);
      walk(depth + 1, a + 1);
    }
  };
  walk(0, 0);
  return out;
}

bool output_has_preimage(const Field& f, const Poly& v, const Poly& w, int k,
                         const PartialRecoveryOutput& out, std::uint64_t cap) {
  const auto as = find_supersets(f, v, k, out.diff_a, cap);
  if (as.empty()) return false;
  const auto bs = find_supersets(f, w, k, out.diff_b, cap);
  for (const auto& a : as) {
    for (const auto& b : bs) {
      if (set_difference(a, b) == out.diff_a && set_difference(b, a) == out.diff_b) return true;
    }
  }
  return false;
}

}  // namespace fvault
