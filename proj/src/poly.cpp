#include "fvault/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace fvault {

namespace {

constexpr std::uint64_t kRootFinderSeed = 0x5eed'f00d'cafe'beefULL;

std::vector<Elem> to_vec(const Poly& p) { return {p.coeffs().begin(), p.coeffs().end()}; }

void check_distinct_abscissas(std::span<const Point> points) {
  std::vector<Elem> xs;
  xs.reserve(points.size());
  for (const auto& pt : points) xs.push_back(pt.x);
  std::sort(xs.begin(), xs.end());
  if (std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
    throw std::invalid_argument("interpolation points have a repeated abscissa");
  }
}

// Remainder of `a` modulo a monic polynomial given by its coefficient vector.
void reduce_monic_inplace(const Field& f, std::vector<Elem>& a, std::span<const Elem> m) {
  const std::size_t dm = m.size() - 1;
  while (a.size() > dm) {
    const Elem c = a.back();
    const std::size_t shift = a.size() - 1 - dm;
    if (c != 0) {
      for (std::size_t i = 0; i < dm; ++i) a[shift + i] ^= f.mul(c, m[i]);
    }
    a.pop_back();
  }
  while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly sqr_mod(const Field& f, const Poly& a, const Poly& monic_mod) {
  std::vector<Elem> out(a.coeffs().empty() ? 0 : 2 * a.coeffs().size() - 1, 0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i) out[2 * i] = f.sqr(a.coeffs()[i]);
  reduce_monic_inplace(f, out, monic_mod.coeffs());
  return Poly(std::move(out));
}

// True iff monic p (deg >= 2) divides X^q - X, i.e. splits with distinct roots.
bool divides_frobenius(const Field& f, const Poly& p) {
  Poly x = Poly::monomial(1, 1);
  Poly acc = x;
  for (int i = 0; i < f.bits(); ++i) acc = sqr_mod(f, acc, p);
  return acc == x;
}

// sum_{i<m} (aX)^(2^i) mod p
Poly trace_map(const Field& f, Elem a, const Poly& p) {
  Poly term = rem(f, Poly::monomial(a, 1), p);
  Poly acc = term;
  for (int i = 1; i < f.bits(); ++i) {
    term = sqr_mod(f, term, p);
    acc = add(acc, term);
  }
  return acc;
}

// p monic, squarefree and split over the field.
void split_roots(const Field& f, const Poly& p, Rng& rng, std::vector<Elem>& out) {
  const int d = p.degree();
  if (d <= 0) return;
  if (d == 1) {
    out.push_back(p.coeff(0));
    return;
  }
  for (;;) {
    Elem a = 0;
    while (a == 0) a = f.random(rng);
    Poly g = gcd(f, trace_map(f, a, p), p);
    if (g.degree() > 0 && g.degree() < d) {
      Poly h = divmod(f, p, g).quotient;
      split_roots(f, g, rng, out);
      split_roots(f, h, rng, out);
      return;
    }
  }
}

std::optional<FeatureSet> roots_exhaustive(const Field& f, const Poly& monic) {
  // Deflate on every root found so a repeated root shows up as a root of the
  // quotient.
  std::vector<Elem> cur = to_vec(monic);
  std::vector<Elem> roots;
  const auto target = static_cast<std::size_t>(monic.degree());
  for (std::uint64_t xv = 0; xv < f.size() && roots.size() < target; ++xv) {
    const auto x = static_cast<Elem>(xv);
    for (;;) {
      Elem acc = 0;
      for (auto it = cur.rbegin(); it != cur.rend(); ++it) acc = f.mul(acc, x) ^ *it;
      if (acc != 0) break;
      if (!roots.empty() && roots.back() == x) return std::nullopt;
      roots.push_back(x);
      // synthetic division by (X - x)
      std::vector<Elem> q(cur.size() - 1);
      Elem carry = 0;
      for (std::size_t j = cur.size() - 1; j > 0; --j) {
        carry = cur[j] ^ f.mul(carry, x);
        q[j - 1] = carry;
      }
      cur = std::move(q);
      if (cur.size() <= 1) break;
    }
  }
  if (roots.size() != target) return std::nullopt;
  return FeatureSet(std::move(roots));
}

}  // namespace

Poly Poly::monomial(Elem c, int degree) {
  if (c == 0) return {};
  std::vector<Elem> v(static_cast<std::size_t>(degree) + 1, 0);
  v.back() = c;
  return Poly(std::move(v));
}

Poly add(const Poly& a, const Poly& b) {
  const auto& big = a.coeffs().size() >= b.coeffs().size() ? a : b;
  const auto& small = &big == &a ? b : a;
  std::vector<Elem> out = to_vec(big);
  for (std::size_t i = 0; i < small.coeffs().size(); ++i) out[i] ^= small.coeffs()[i];
  return Poly(std::move(out));
}

Poly mul(const Field& f, const Poly& a, const Poly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  const auto ac = a.coeffs();
  const auto bc = b.coeffs();
  std::vector<Elem> out(ac.size() + bc.size() - 1, 0);
  for (std::size_t i = 0; i < ac.size(); ++i) {
    if (ac[i] == 0) continue;
    for (std::size_t j = 0; j < bc.size(); ++j) out[i + j] ^= f.mul(ac[i], bc[j]);
  }
  return Poly(std::move(out));
}

Poly scale(const Field& f, const Poly& a, Elem c) {
  std::vector<Elem> out = to_vec(a);
  for (auto& x : out) x = f.mul(x, c);
  return Poly(std::move(out));
}

Poly make_monic(const Field& f, const Poly& a) {
  if (a.is_zero() || a.is_monic()) return a;
  return scale(f, a, f.inv(a.lead()));
}

DivMod divmod(const Field& f, const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("polynomial division by zero");
  if (a.degree() < b.degree()) return {Poly{}, a};
  const auto bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const Elem inv_lead = f.inv(b.lead());
  std::vector<Elem> r = to_vec(a);
  std::vector<Elem> q(r.size() - db, 0);
  for (std::size_t k = r.size(); k-- > db;) {
    const Elem c = f.mul(r[k], inv_lead);
    if (c == 0) continue;
    const std::size_t shift = k - db;
    q[shift] = c;
    for (std::size_t i = 0; i <= db; ++i) r[shift + i] ^= f.mul(c, bc[i]);
  }
  r.resize(db);
  return {Poly(std::move(q)), Poly(std::move(r))};
}

Poly rem(const Field& f, const Poly& a, const Poly& b) { return divmod(f, a, b).remainder; }

Poly gcd(const Field& f, Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = rem(f, a, b);
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(f, a);
}

Elem eval(const Field& f, const Poly& p, Elem x) {
  Elem acc = 0;
  const auto c = p.coeffs();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = f.mul(acc, x) ^ *it;
  return acc;
}

Poly char_poly(const Field& f, std::span<const Elem> roots) {
  std::vector<Elem> c(roots.size() + 1, 0);
  c[0] = 1;
  std::size_t deg = 0;
  for (Elem a : roots) {
    // multiply by (X + a)
    ++deg;
    for (std::size_t j = deg; j > 0; --j) c[j] = c[j - 1] ^ f.mul(a, c[j]);
    c[0] = f.mul(a, c[0]);
  }
  return Poly(std::move(c));
}

Poly char_poly(const Field& f, const FeatureSet& a) { return char_poly(f, a.elements()); }

EuclidStepper::EuclidStepper(const Field& f, Poly v, Poly w) : f_(&f) {
  if (v.is_zero() && w.is_zero()) {
    throw std::invalid_argument("extended Euclid needs at least one nonzero input");
  }
  cur_ = EeaRow{std::move(v), Poly::constant(1), Poly{}, 0};
  prev_ = EeaRow{std::move(w), Poly{}, Poly::constant(1), 1};  // staged row 1
}

bool EuclidStepper::advance() {
  if (!started_) {
    if (cur_.r.is_zero()) return false;
    started_ = true;
    std::swap(prev_, cur_);
    return true;
  }
  if (cur_.r.is_zero()) return false;
  auto [quot, r] = divmod(*f_, prev_.r, cur_.r);
  EeaRow next{std::move(r), sub(prev_.p, mul(*f_, quot, cur_.p)),
              sub(prev_.q, mul(*f_, quot, cur_.q)), cur_.index + 1};
  prev_ = std::move(cur_);
  cur_ = std::move(next);
  return true;
}

std::vector<EeaRow> traced_eea(const Field& f, const Poly& v, const Poly& w) {
  EuclidStepper st(f, v, w);
  std::vector<EeaRow> rows{st.current()};
  while (st.advance()) rows.push_back(st.current());
  return rows;
}

Poly interpolate(const Field& f, std::span<const Point> points) {
  if (points.empty()) throw std::invalid_argument("interpolation needs at least one point");
  check_distinct_abscissas(points);
  std::vector<Elem> xs;
  xs.reserve(points.size());
  for (const auto& pt : points) xs.push_back(pt.x);
  const Poly full = char_poly(f, std::span<const Elem>(xs));
  const auto mc = full.coeffs();
  const std::size_t n = points.size();
  std::vector<Elem> acc(n, 0);
  std::vector<Elem> basis(n);
  for (const auto& pt : points) {
    if (pt.y == 0) continue;
    // basis = full / (X - x_i)
    Elem carry = 0;
    for (std::size_t j = n; j > 0; --j) {
      carry = mc[j] ^ f.mul(carry, pt.x);
      basis[j - 1] = carry;
    }
    Elem denom = 0;
    for (std::size_t j = n; j-- > 0;) denom = f.mul(denom, pt.x) ^ basis[j];
    const Elem c = f.div(pt.y, denom);
    for (std::size_t j = 0; j < n; ++j) acc[j] ^= f.mul(c, basis[j]);
  }
  return Poly(std::move(acc));
}

std::optional<FeatureSet> roots_if_splits(const Field& f, const Poly& p, Rng& rng,
                                          RootStrategy strategy) {
  if (p.is_zero()) throw std::domain_error("roots of the zero polynomial");
  const Poly monic = make_monic(f, p);
  if (monic.degree() == 0) return FeatureSet{};
  if (strategy == RootStrategy::kAuto) {
    strategy = f.bits() <= kExhaustiveRootMaxBits ? RootStrategy::kExhaustive
                                                  : RootStrategy::kSplitting;
  }
  if (strategy == RootStrategy::kExhaustive) return roots_exhaustive(f, monic);
  if (monic.degree() >= 2 && !divides_frobenius(f, monic)) return std::nullopt;
  std::vector<Elem> roots;
  roots.reserve(static_cast<std::size_t>(monic.degree()));
  split_roots(f, monic, rng, roots);
  return FeatureSet(std::move(roots));
}

std::optional<FeatureSet> roots_if_splits(const Field& f, const Poly& p, RootStrategy strategy) {
  Rng rng(kRootFinderSeed);
  return roots_if_splits(f, p, rng, strategy);
}

std::optional<Poly> rs_decode(const Field& f, std::span<const Point> points, int k) {
  const auto n = static_cast<int>(points.size());
  if (k < 1 || k > n) {
    throw std::invalid_argument("decoding needs 1 <= k <= n (k=" + std::to_string(k) +
                                ", n=" + std::to_string(n) + ")");
  }
  check_distinct_abscissas(points);
  std::vector<Elem> xs;
  xs.reserve(points.size());
  for (const auto& pt : points) xs.push_back(pt.x);
  const Poly g0 = char_poly(f, std::span<const Elem>(xs));
  const Poly g1 = interpolate(f, points);

  // Stop at the first remainder with 2 deg(r) < n + k; then f = r / q.
  EuclidStepper st(f, g0, g1);
  while (!(st.current().r.is_zero() || 2 * st.current().r.degree() < n + k)) {
    if (!st.advance()) return std::nullopt;
  }
  const EeaRow& row = st.current();
  if (row.q.is_zero()) return std::nullopt;
  auto [cand, r] = divmod(f, row.r, row.q);
  if (!r.is_zero() || cand.degree() >= k) return std::nullopt;
  int agree = 0;
  for (const auto& pt : points) agree += eval(f, cand, pt.x) == pt.y ? 1 : 0;
  if (2 * agree < n + k) return std::nullopt;
  return cand;
}

}  // namespace fvault
