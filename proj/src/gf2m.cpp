#include "fvault/gf2m.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_set>

namespace fvault {

namespace {

// Trinomials where one exists, pentanomials otherwise. The m = 8 entry is the
// AES polynomial x^8 + x^4 + x^3 + x + 1.
constexpr std::array<std::uint32_t, kMaxFieldBits + 1> kModulusTable = {
    0,         0,         0x7,       0xB,       0x13,      0x25,      0x43,
    0x83,      0x11B,     0x211,     0x409,     0x805,     0x1009,    0x201B,
    0x4021,    0x8003,    0x1002B,   0x20009,   0x40081,   0x80027,   0x100009,
    0x200005,  0x400003,  0x800021,  0x100001B,
};

constexpr int kTableMaxBits = 16;

int degree_gf2(std::uint64_t p) { return p == 0 ? -1 : 63 - std::countl_zero(p); }

std::uint64_t mod_gf2(std::uint64_t a, std::uint64_t f) {
  const int df = degree_gf2(f);
  for (int da = degree_gf2(a); da >= df; da = degree_gf2(a)) a ^= f << (da - df);
  return a;
}

std::uint64_t mulmod_gf2(std::uint64_t a, std::uint64_t b, std::uint64_t f) {
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1) r ^= a;
    b >>= 1;
    a <<= 1;
  }
  return mod_gf2(r, f);
}

std::uint64_t gcd_gf2(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a = mod_gf2(a, b);
    std::swap(a, b);
  }
  return a;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p == 0) {
      out.push_back(p);
      while (n % p == 0) n /= p;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::uint32_t default_modulus(int m_bits) {
  if (m_bits < kMinFieldBits || m_bits > kMaxFieldBits) {
    throw std::invalid_argument("field degree must be in [2, 24], got " + std::to_string(m_bits));
  }
  return kModulusTable[static_cast<std::size_t>(m_bits)];
}

bool is_irreducible_gf2(std::uint64_t poly) {
  const int d = degree_gf2(poly);
  if (d < 1) return false;
  if (d == 1) return true;
  // f is irreducible iff gcd(x^(2^i) - x, f) = 1 for all 1 <= i <= d/2.
  const std::uint64_t x = 2;
  std::uint64_t p = x;
  for (int i = 1; i <= d / 2; ++i) {
    p = mulmod_gf2(p, p, poly);
    if (gcd_gf2(poly, p ^ x) != 1) return false;
  }
  return true;
}

Field::Field(int m_bits) : Field(m_bits, default_modulus(m_bits)) {}

Field::Field(int m_bits, std::uint32_t modulus) : m_(m_bits), modulus_(modulus), q_(0) {
  if (m_bits < kMinFieldBits || m_bits > kMaxFieldBits) {
    throw std::invalid_argument("field degree must be in [2, 24], got " + std::to_string(m_bits));
  }
  if (degree_gf2(modulus) != m_bits || !is_irreducible_gf2(modulus)) {
    throw std::invalid_argument("modulus is not an irreducible polynomial of degree " +
                                std::to_string(m_bits));
  }
  q_ = std::uint32_t{1} << m_bits;
  if (m_bits <= kTableMaxBits) build_tables();
}

std::shared_ptr<const Field> Field::get(int m_bits) {
  static std::mutex mu;
  static std::map<int, std::shared_ptr<const Field>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[m_bits];
  if (!slot) slot = std::make_shared<const Field>(m_bits);
  return slot;
}

Elem Field::element(std::uint64_t v) const {
  if (v >= q_) {
    throw std::out_of_range("value " + std::to_string(v) + " is not an element of GF(2^" +
                            std::to_string(m_) + ")");
  }
  return static_cast<Elem>(v);
}

Elem Field::mul_slow(Elem a, Elem b) const {
  return static_cast<Elem>(mulmod_gf2(a, b, modulus_));
}

void Field::build_tables() {
  // The modulus need not be primitive, so search for a generator of the
  // multiplicative group first.
  const std::uint64_t order = q_ - 1;
  const auto factors = prime_factors(order);
  auto slow_pow = [&](Elem a, std::uint64_t e) {
    Elem r = 1;
    while (e != 0) {
      if (e & 1) r = mul_slow(r, a);
      a = mul_slow(a, a);
      e >>= 1;
    }
    return r;
  };
  Elem gen = 0;
  for (Elem g = 2; g < q_ && gen == 0; ++g) {
    bool primitive = true;
    for (auto p : factors) {
      if (slow_pow(g, order / p) == 1) {
        primitive = false;
        break;
      }
    }
    if (primitive) gen = g;
  }
  log_.assign(q_, 0);
  exp_.assign(2 * order, 0);
  Elem v = 1;
  for (std::uint64_t i = 0; i < order; ++i) {
    exp_[i] = v;
    exp_[i + order] = v;
    log_[v] = static_cast<std::uint32_t>(i);
    v = mul_slow(v, gen);
  }
}

Elem Field::inv(Elem a) const {
  if (a == 0) throw std::domain_error("inverse of zero");
  if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
  return pow(a, q_ - 2);
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  Elem r = 1;
  while (e != 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

std::vector<Elem> Field::random_distinct(std::size_t n, const FeatureSet& exclude, Rng& rng) const {
  if (n + exclude.size() > q_) {
    throw std::invalid_argument("cannot draw " + std::to_string(n) + " distinct elements from " +
                                std::to_string(q_ - exclude.size()) + " candidates");
  }
  std::vector<Elem> out;
  out.reserve(n);
  if (2 * (n + exclude.size()) > q_) {
    // Dense request: partial Fisher-Yates over the allowed values.
    std::vector<Elem> pool;
    pool.reserve(q_ - exclude.size());
    for (Elem v = 0; v < q_; ++v) {
      if (!exclude.contains(v)) pool.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = i + uniform_below(rng, pool.size() - i);
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<Elem> seen;
  while (out.size() < n) {
    const Elem v = random(rng);
    if (exclude.contains(v) || !seen.insert(v).second) continue;
    out.push_back(v);
  }
  return out;
}

std::string Field::to_hex(Elem a) const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string s(static_cast<std::size_t>(hex_width()), '0');
  for (int i = hex_width() - 1; i >= 0; --i) {
    s[static_cast<std::size_t>(i)] = kDigits[a & 0xF];
    a >>= 4;
  }
  return s;
}

Elem Field::from_hex(std::string_view s) const {
  if (static_cast<int>(s.size()) != hex_width()) {
    throw std::invalid_argument("expected " + std::to_string(hex_width()) +
                                " hex digits, got \"" + std::string(s) + "\"");
  }
  for (char c : s) {
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) {
      throw std::invalid_argument("invalid lowercase hex digit in \"" + std::string(s) + "\"");
    }
  }
  std::uint64_t v = 0;
  std::from_chars(s.data(), s.data() + s.size(), v, 16);
  if (v >= q_) {
    throw std::invalid_argument("\"" + std::string(s) + "\" is out of range for GF(2^" +
                                std::to_string(m_) + ")");
  }
  return static_cast<Elem>(v);
}

}  // namespace fvault
