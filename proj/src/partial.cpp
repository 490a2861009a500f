#include <stdexcept>
#include <string>

#include "fvault/attack.hpp"

namespace fvault {

const char* failure_name(PartialFailure f) {
  switch (f) {
    case PartialFailure::kNoQualifyingIndex: return "no_qualifying_index";
    case PartialFailure::kRemainderTooLarge: return "remainder_too_large";
    case PartialFailure::kNotSplitting: return "not_splitting";
  }
  return "?";
}

namespace {

// deg v >= deg w.
PartialResult partial_ordered(const Field& f, const Poly& v, const Poly& w, int k) {
  EuclidStepper st(f, v, w);
  int prev_r_degree = kZeroDegree;
  std::optional<EeaRow> hit;
  do {
    const EeaRow& row = st.current();
    if (row.r.is_zero()) break;
    if (!row.q.is_zero() && row.r.degree() < row.q.degree() + k) {
      // deg q grows strictly from row 2 on, so the first hit is the unique
      // minimiser.
      if (row.index >= 2 && !(prev_r_degree > row.r.degree())) {
        throw std::logic_error("Euclidean remainders failed to decrease");
      }
      hit = row;
      break;
    }
    prev_r_degree = row.r.degree();
  } while (st.advance());
  if (!hit) return PartialFailure::kNoQualifyingIndex;

  if (rem(f, v, hit->q).degree() >= k) return PartialFailure::kRemainderTooLarge;
  if (hit->p.is_zero()) return PartialFailure::kNotSplitting;
  auto ra = roots_if_splits(f, hit->q);
  if (!ra) return PartialFailure::kNotSplitting;
  auto rb = roots_if_splits(f, hit->p);
  if (!rb) return PartialFailure::kNotSplitting;
  return PartialRecoveryOutput{v.degree() - hit->q.degree(), std::move(*ra), std::move(*rb)};
}

}  // namespace

PartialResult partial_recovery(const Field& f, const Poly& v, const Poly& w, int k) {
  if (k < 1 || v.degree() < k || w.degree() < k) {
    throw std::invalid_argument("partial recovery needs 1 <= k <= deg of both records");
  }
  if (v.degree() >= w.degree()) return partial_ordered(f, v, w, k);
  auto r = partial_ordered(f, w, v, k);
  if (!r) return r.error();
  const auto& o = r.value();
  return PartialRecoveryOutput{v.degree() - static_cast<int>(o.diff_b.size()), o.diff_b, o.diff_a};
}

PartialResult partial_recovery(const VaultRecord& v, const VaultRecord& w) {
  validate(v);
  validate(w);
  if (v.field_bits() != w.field_bits() || v.m_bits != w.m_bits) {
    throw std::invalid_argument("records are defined over different fields");
  }
  if (v.k != w.k) throw std::invalid_argument("records use different k");
  return partial_recovery(*Field::get(v.field_bits()), v.polynomial(), w.polynomial(), v.k);
}

Poly UpperCoeffs::polynomial() const {
  std::vector<Elem> c(static_cast<std::size_t>(low_index), 0);
  c.insert(c.end(), coeffs.begin(), coeffs.end());
  return Poly(std::move(c));
}

UpperCoeffs upper_coeffs(const Poly& p, int low_index) {
  if (low_index < 0 || p.degree() < low_index) {
    throw std::invalid_argument("slice start beyond polynomial degree");
  }
  UpperCoeffs out{low_index, {}};
  for (int i = low_index; i <= p.degree(); ++i) out.coeffs.push_back(p.coeff(i));
  return out;
}

UpperCoeffs reduce_record(const Field& f, const UpperCoeffs& c, Elem x) {
  if (c.low_index < 1) throw std::invalid_argument("cannot reduce a slice starting at X^0");
  // b_{m} = a_{m+1} + x b_{m+1}, walking down from the top.
  UpperCoeffs out{c.low_index - 1, std::vector<Elem>(c.coeffs.size())};
  Elem carry = 0;
  for (std::size_t i = c.coeffs.size(); i-- > 0;) {
    carry = c.coeffs[i] ^ f.mul(x, carry);
    out.coeffs[i] = carry;
  }
  return out;
}

UpperCoeffs extend_record(const Field& f, const UpperCoeffs& c, Elem x) {
  // a_j = b_{j-1} + x b_j with b_{top+1} = 0.
  UpperCoeffs out{c.low_index + 1, std::vector<Elem>(c.coeffs.size())};
  const std::size_t n = c.coeffs.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Elem above = i + 1 < n ? c.coeffs[i + 1] : 0;
    out.coeffs[i] = c.coeffs[i] ^ f.mul(x, above);
  }
  return out;
}

std::optional<CofactorWitness> shared_cofactor(const Field& f, const Poly& v, const Poly& w, int k,
                                               const PartialRecoveryOutput& out) {
  const Poly chi_a = char_poly(f, out.diff_a);
  const Poly chi_b = char_poly(f, out.diff_b);
  const Poly qv = divmod(f, v, chi_a).quotient;
  const Poly qw = divmod(f, w, chi_b).quotient;
  // chi is pinned to qv on X^uv.. and to qw on X^uw..; anything below both
  // thresholds is free, so zero it.
  const int uv = std::max(0, k - static_cast<int>(out.diff_a.size()));
  const int uw = std::max(0, k - static_cast<int>(out.diff_b.size()));
  const Poly& src = uv <= uw ? qv : qw;
  const int from = std::min(uv, uw);
  std::vector<Elem> c;
  for (int i = 0; i <= src.degree(); ++i) c.push_back(i >= from ? src.coeff(i) : 0);
  Poly chi(std::move(c));
  if (!chi.is_monic() || chi.degree() != out.omega_star) return std::nullopt;
  Poly f_hat = sub(v, mul(f, chi, chi_a));
  Poly g_hat = sub(w, mul(f, chi, chi_b));
  if (f_hat.degree() >= k || g_hat.degree() >= k) return std::nullopt;
  return CofactorWitness{std::move(chi), std::move(f_hat), std::move(g_hat)};
}

}  // namespace fvault
