#include "fvault/encoding.hpp"

#include <stdexcept>
#include <string>

#include "fvault/gf2m.hpp"
#include "fvault/rng.hpp"

namespace fvault {

namespace {
constexpr int kRounds = 8;
}

RandomEncoding::RandomEncoding(int m_bits, std::uint64_t seed)
    : m_(m_bits), half_bits_((m_bits + 1) / 2), seed_(seed), q_(std::uint64_t{1} << m_bits) {
  if (m_bits < kMinFieldBits || m_bits > kMaxFieldBits) {
    throw std::invalid_argument("encoding field degree must be in [2, 24], got " +
                                std::to_string(m_bits));
  }
  half_mask_ = (std::uint32_t{1} << half_bits_) - 1;
}

std::uint32_t RandomEncoding::round(int i, std::uint32_t half) const {
  const std::uint64_t h = splitmix64(seed_ ^ splitmix64((std::uint64_t(i) << 32) | half));
  return static_cast<std::uint32_t>(h) & half_mask_;
}

std::uint32_t RandomEncoding::forward(std::uint32_t x) const {
  std::uint32_t l = x >> half_bits_;
  std::uint32_t r = x & half_mask_;
  for (int i = 0; i < kRounds; ++i) {
    const std::uint32_t nl = r;
    r = l ^ round(i, r);
    l = nl;
  }
  return (l << half_bits_) | r;
}

std::uint32_t RandomEncoding::backward(std::uint32_t y) const {
  std::uint32_t l = y >> half_bits_;
  std::uint32_t r = y & half_mask_;
  for (int i = kRounds - 1; i >= 0; --i) {
    const std::uint32_t pr = l;
    l = r ^ round(i, l);
    r = pr;
  }
  return (l << half_bits_) | r;
}

Elem RandomEncoding::apply(Elem x) const {
  if (x >= q_) throw std::out_of_range("encoding input outside the field");
  if (is_identity()) return x;
  std::uint32_t y = forward(x);
  while (y >= q_) y = forward(y);
  return y;
}

Elem RandomEncoding::invert(Elem y) const {
  if (y >= q_) throw std::out_of_range("encoding input outside the field");
  if (is_identity()) return y;
  std::uint32_t x = backward(y);
  while (x >= q_) x = backward(x);
  return x;
}

FeatureSet RandomEncoding::apply(const FeatureSet& a) const {
  std::vector<Elem> out;
  out.reserve(a.size());
  for (Elem x : a) out.push_back(apply(x));
  return FeatureSet(std::move(out));
}

FeatureSet RandomEncoding::invert(const FeatureSet& a) const {
  std::vector<Elem> out;
  out.reserve(a.size());
  for (Elem x : a) out.push_back(invert(x));
  return FeatureSet(std::move(out));
}

}  // namespace fvault
