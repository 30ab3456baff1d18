#include "hyperzeta/poly.hpp"

#include <gmp.h>

#include <algorithm>
#include <bit>
#include <map>
#include <string>

#include "hyperzeta/error.hpp"

namespace hyperzeta {

ZqPoly::ZqPoly(ParamsPtr params) : params_(std::move(params)) {}

ZqPoly::ZqPoly(ParamsPtr params, std::vector<Residue> flat) : params_(std::move(params)), data_(std::move(flat)) {
  if (data_.size() % params_->degree() != 0) {
    throw ZetaError(ErrorCode::kInvalidParams, "flat coefficient array is not a multiple of n");
  }
  const Residue m = params_->ring().modulus();
  for (auto& v : data_) v %= m;
  trim();
}

ZqPoly ZqPoly::from_ints(ParamsPtr params, const std::vector<int64_t>& coeffs) {
  const int n = params->degree();
  std::vector<Residue> flat(coeffs.size() * n, 0);
  for (size_t i = 0; i < coeffs.size(); ++i) flat[i * n] = params->ring().from_int(coeffs[i]);
  return ZqPoly(std::move(params), std::move(flat));
}

ZqPoly ZqPoly::from_elems(ParamsPtr params, const std::vector<ZqElem>& coeffs) {
  const int n = params->degree();
  std::vector<Residue> flat(coeffs.size() * n, 0);
  for (size_t i = 0; i < coeffs.size(); ++i) {
    require_compatible(*params, *coeffs[i].params());
    std::copy(coeffs[i].coeffs().begin(), coeffs[i].coeffs().end(), flat.begin() + i * n);
  }
  return ZqPoly(std::move(params), std::move(flat));
}

ZqPoly ZqPoly::monomial(const ZqElem& c, int degree) {
  ZqPoly r(c.params());
  r.set_coeff(degree, c);
  return r;
}

void ZqPoly::check(const ZqPoly& o) const {
  if (params_ != o.params_) require_compatible(*params_, *o.params_);
}

void ZqPoly::trim() {
  const int n = params_->degree();
  while (!data_.empty() && params_->is_zero(data_.data() + data_.size() - n)) data_.resize(data_.size() - n);
}

void ZqPoly::resize(int len) { data_.resize(static_cast<size_t>(len) * params_->degree(), 0); }

ZqElem ZqPoly::coeff(int i) const {
  ZqElem r(params_);
  if (i < 0 || i > degree()) return r;
  const int n = params_->degree();
  return ZqElem(params_, std::vector<Residue>(at(i), at(i) + n));
}

void ZqPoly::set_coeff(int i, const ZqElem& c) {
  require_compatible(*params_, *c.params());
  if (i < 0) throw ZetaError(ErrorCode::kInvalidParams, "negative coefficient index");
  if (i > degree()) resize(i + 1);
  std::copy(c.coeffs().begin(), c.coeffs().end(), at(i));
  trim();
}

ZqPoly& ZqPoly::operator+=(const ZqPoly& o) {
  check(o);
  if (o.data_.size() > data_.size()) data_.resize(o.data_.size(), 0);
  const auto& ring = params_->ring();
  for (size_t i = 0; i < o.data_.size(); ++i) data_[i] = ring.add(data_[i], o.data_[i]);
  trim();
  return *this;
}

ZqPoly& ZqPoly::operator-=(const ZqPoly& o) {
  check(o);
  if (o.data_.size() > data_.size()) data_.resize(o.data_.size(), 0);
  const auto& ring = params_->ring();
  for (size_t i = 0; i < o.data_.size(); ++i) data_[i] = ring.sub(data_[i], o.data_[i]);
  trim();
  return *this;
}

ZqPoly ZqPoly::operator-() const {
  ZqPoly r = *this;
  for (auto& v : r.data_) v = params_->ring().neg(v);
  return r;
}

namespace {

// Below this many coefficients in the shorter factor the schoolbook product wins.
constexpr int kKroneckerThreshold = 12;

int bit_length(Residue v) {
  const auto hi = static_cast<uint64_t>(v >> 64);
  return hi ? 128 - std::countl_zero(hi) : 64 - std::countl_zero(static_cast<uint64_t>(v));
}

// Packs the flat coefficient array into limbs: coefficient (i, j) of x^i t^j
// lands in slot i (2n - 1) + j, each slot `width` limbs wide.
void pack(const std::vector<Residue>& flat, int n, int width, std::vector<mp_limb_t>& out) {
  const int stride = 2 * n - 1;
  const size_t len = flat.size() / n;
  out.assign(((len - 1) * stride + n) * width, 0);
  for (size_t i = 0; i < len; ++i)
    for (int j = 0; j < n; ++j) {
      const Residue v = flat[i * n + j];
      mp_limb_t* slot = out.data() + (i * stride + j) * width;
      slot[0] = static_cast<mp_limb_t>(v);
      if (width > 1) slot[1] = static_cast<mp_limb_t>(v >> 64);
    }
}

}  // namespace

// One big-integer product: both factors are evaluated at 2^(64 width), with
// slots wide enough that no coefficient sum can carry into its neighbour.
ZqPoly kronecker_product(const ZqPoly& a, const ZqPoly& b) {
  const auto& params = *a.params();
  const auto& ring = params.ring();
  const int n = params.degree();
  const int stride = 2 * n - 1;
  const Residue m = ring.modulus();
  const int terms = std::min(a.length(), b.length()) * n;
  const int bits = 2 * bit_length(m - 1) + bit_length(static_cast<Residue>(terms)) + 1;
  const int width = (bits + 63) / 64;

  std::vector<mp_limb_t> pa, pb;
  pack(a.flat(), n, width, pa);
  pack(b.flat(), n, width, pb);
  if (pa.size() < pb.size()) std::swap(pa, pb);
  std::vector<mp_limb_t> prod(pa.size() + pb.size());
  mpn_mul(prod.data(), pa.data(), static_cast<mp_size_t>(pa.size()), pb.data(), static_cast<mp_size_t>(pb.size()));

  const mp_limb_t mod_limbs[2] = {static_cast<mp_limb_t>(m), static_cast<mp_limb_t>(m >> 64)};
  const mp_size_t mod_size = mod_limbs[1] ? 2 : 1;
  std::vector<mp_limb_t> quot(width + 1), rem(2);
  auto slot_value = [&](size_t slot) -> Residue {
    const size_t at = slot * width;
    if (at >= prod.size()) return 0;
    const mp_limb_t* src = prod.data() + at;
    mp_size_t size = std::min<mp_size_t>(width, static_cast<mp_size_t>(prod.size() - at));
    while (size > 0 && src[size - 1] == 0) --size;
    if (size == 0) return 0;
    if (size <= 2) {
      const Residue v = (size == 2 ? static_cast<Residue>(src[1]) << 64 : 0) | src[0];
      return v % m;
    }
    if (size < mod_size) return src[0];
    rem.assign(2, 0);
    mpn_tdiv_qr(quot.data(), rem.data(), 0, src, size, mod_limbs, mod_size);
    return (static_cast<Residue>(rem[1]) << 64) | rem[0];
  };

  const int len = a.length() + b.length() - 1;
  std::vector<Residue> flat(static_cast<size_t>(len) * n);
  std::vector<Residue> t(stride);
  for (int i = 0; i < len; ++i) {
    if (n == 1) {
      flat[i] = slot_value(i);
      continue;
    }
    for (int j = 0; j < stride; ++j) t[j] = slot_value(static_cast<size_t>(i) * stride + j);
    params.fold_product(t.data(), flat.data() + static_cast<size_t>(i) * n);
  }
  return ZqPoly(a.params(), std::move(flat));
}

ZqPoly operator*(const ZqPoly& a, const ZqPoly& b) {
  a.check(b);
  ZqPoly r(a.params_);
  if (a.is_zero() || b.is_zero()) return r;
  if (std::min(a.length(), b.length()) >= kKroneckerThreshold) return kronecker_product(a, b);
  const auto& params = *a.params_;
  const auto& ring = params.ring();
  const int la = a.length(), lb = b.length();
  if (params.degree() == 1) {
    const bool narrow = (ring.modulus() >> 63) == 0;
    std::vector<Residue> out(la + lb - 1, 0);
    if (narrow) {
      // reduced products are < 2^63, so up to 2^64 of them sum without overflow
      for (int k = 0; k < la + lb - 1; ++k) {
        Residue acc = 0;
        const int lo = std::max(0, k - lb + 1), hi = std::min(k, la - 1);
        for (int i = lo; i <= hi; ++i) acc += ring.mul(a.data_[i], b.data_[k - i]);
        out[k] = acc % ring.modulus();
      }
    } else {
      for (int i = 0; i < la; ++i) {
        if (a.data_[i] == 0) continue;
        for (int j = 0; j < lb; ++j) out[i + j] = ring.add(out[i + j], ring.mul(a.data_[i], b.data_[j]));
      }
    }
    r.data_ = std::move(out);
  } else {
    r.resize(la + lb - 1);
    for (int i = 0; i < la; ++i) {
      if (params.is_zero(a.at(i))) continue;
      for (int j = 0; j < lb; ++j) params.mul_acc(a.at(i), b.at(j), r.at(i + j));
    }
  }
  r.trim();
  return r;
}

ZqPoly& ZqPoly::operator*=(const ZqPoly& o) { return *this = *this * o; }

bool ZqPoly::operator==(const ZqPoly& o) const { return params_->compatible(*o.params_) && data_ == o.data_; }

ZqPoly ZqPoly::scaled(const ZqElem& c) const {
  require_compatible(*params_, *c.params());
  ZqPoly r = *this;
  for (int i = 0; i < length(); ++i) params_->mul(r.at(i), c.coeffs().data(), r.at(i));
  r.trim();
  return r;
}

ZqPoly ZqPoly::scaled_int(int64_t c) const {
  ZqPoly r = *this;
  const Residue cr = params_->ring().from_int(c);
  for (auto& v : r.data_) v = params_->ring().mul(v, cr);
  r.trim();
  return r;
}

ZqPoly ZqPoly::derivative() const {
  ZqPoly r(params_);
  if (length() <= 1) return r;
  r.resize(length() - 1);
  const auto& ring = params_->ring();
  for (int i = 1; i < length(); ++i) params_->scale(at(i), ring.from_int(i), r.at(i - 1));
  r.trim();
  return r;
}

ZqPoly ZqPoly::shifted(int k) const {
  ZqPoly r(params_);
  if (is_zero()) return r;
  if (k < 0) throw ZetaError(ErrorCode::kInvalidParams, "negative shift");
  r.data_.assign(static_cast<size_t>(k) * params_->degree(), 0);
  r.data_.insert(r.data_.end(), data_.begin(), data_.end());
  return r;
}

ZqPoly ZqPoly::sigma() const {
  ZqPoly r = *this;
  for (int i = 0; i < length(); ++i) params_->sigma(r.at(i), r.at(i));
  r.trim();
  return r;
}

ZqPoly ZqPoly::substitute_power(int e) const {
  ZqPoly r(params_);
  if (is_zero()) return r;
  r.resize(degree() * e + 1);
  const int n = params_->degree();
  for (int i = 0; i < length(); ++i) std::copy(at(i), at(i) + n, r.at(i * e));
  r.trim();
  return r;
}

ZqElem ZqPoly::evaluate(const ZqElem& x) const {
  ZqElem acc(params_);
  for (int i = degree(); i >= 0; --i) acc = acc * x + coeff(i);
  return acc;
}

int ZqPoly::valuation() const {
  int v = params_->precision();
  for (int i = 0; i < length(); ++i) v = std::min(v, params_->valuation(at(i)));
  return v;
}

void ZqPoly::add_scaled_shifted(const ZqPoly& src, const Residue* c, int shift) {
  check(src);
  if (src.is_zero() || params_->is_zero(c)) return;
  if (src.length() + shift > length()) resize(src.length() + shift);
  if (params_->degree() == 1) {
    const auto& ring = params_->ring();
    for (int i = 0; i < src.length(); ++i) data_[i + shift] = ring.add(data_[i + shift], ring.mul(src.data_[i], c[0]));
  } else {
    for (int i = 0; i < src.length(); ++i) params_->mul_acc(src.at(i), c, at(i + shift));
  }
  trim();
}

void ZqPoly::multiply_p_power(int v) {
  if (v == 0) return;
  const auto& ring = params_->ring();
  for (auto& x : data_) x = ring.shift_up(x, v);
  trim();
}

void ZqPoly::divide_p_power(int v) {
  if (v == 0) return;
  if (valuation() < v) {
    throw ZetaError(ErrorCode::kGuardExhausted, "exact division by p^" + std::to_string(v) + " leaves a remainder");
  }
  const auto& ring = params_->ring();
  for (auto& x : data_) x = ring.shift_down(x, v);
  trim();
}

namespace {

// Below these sizes long division beats the Newton-inverse route.
constexpr int kFastDivisorLength = 12;
constexpr int kFastQuotientLength = 24;

ZqPoly truncated(const ZqPoly& f, int len) {
  if (f.length() <= len) return f;
  const int n = f.params()->degree();
  std::vector<Residue> flat(f.flat().begin(), f.flat().begin() + static_cast<size_t>(len) * n);
  return ZqPoly(f.params(), std::move(flat));
}

// Coefficient i moves to len - 1 - i; f must have at most len coefficients.
ZqPoly reversed(const ZqPoly& f, int len) {
  const int n = f.params()->degree();
  std::vector<Residue> flat(static_cast<size_t>(len) * n, 0);
  for (int i = 0; i < f.length(); ++i) std::copy(f.at(i), f.at(i) + n, flat.data() + static_cast<size_t>(len - 1 - i) * n);
  return ZqPoly(f.params(), std::move(flat));
}

// 1/h mod x^len by Newton iteration; h(0) must be a unit.
ZqPoly inverse_series(const ZqPoly& h, int len) {
  const auto& params = h.params();
  std::vector<Residue> c0(params->degree());
  params->inverse(h.at(0), c0.data());
  ZqPoly g(params, c0);
  const ZqPoly two = ZqPoly::from_ints(params, {2});
  for (int k = 1; k < len;) {
    k = std::min(2 * k, len);
    g = truncated(g * (two - truncated(truncated(h, k) * g, k)), k);
  }
  return g;
}

// `inv` is 1/rev(d) to at least deg f - deg d + 1 terms.
DivMod divmod_with_inverse(const ZqPoly& f, const ZqPoly& d, const ZqPoly& inv) {
  const int m = f.degree() - d.degree() + 1;
  ZqPoly q = reversed(truncated(truncated(reversed(f, f.length()), m) * inv, m), m);
  q.trim();
  ZqPoly r = f - q * d;
  if (r.degree() >= d.degree()) throw ZetaError(ErrorCode::kInconsistentResult, "Newton division left a long remainder");
  return {q, r};
}

DivMod divmod_newton(const ZqPoly& f, const ZqPoly& d) {
  return divmod_with_inverse(f, d, inverse_series(reversed(d, d.length()), f.degree() - d.degree() + 1));
}

}  // namespace

DivMod divmod(const ZqPoly& f, const ZqPoly& d) {
  require_compatible(*f.params(), *d.params());
  const auto& params = *f.params();
  if (d.is_zero()) throw ZetaError(ErrorCode::kNonUnitLeading, "division by the zero polynomial");
  if (params.valuation(d.at(d.degree())) > 0) {
    throw ZetaError(ErrorCode::kNonUnitLeading, "divisor leading coefficient is not a unit");
  }
  const int n = params.degree();
  const int dd = d.degree();
  if (d.length() >= kFastDivisorLength && f.degree() - dd + 1 >= kFastQuotientLength) return divmod_newton(f, d);
  ZqPoly rem = f;
  ZqPoly quo(f.params());
  if (f.degree() < dd) return {quo, rem};
  quo.resize(f.degree() - dd + 1);
  std::vector<Residue> lead_inv(n), c(n), neg_c(n);
  params.inverse(d.at(dd), lead_inv.data());
  const bool monic = d.coeff(dd) == ZqElem::from_int(f.params(), 1);
  const auto& ring = params.ring();
  Residue* r = rem.at(0);
  for (int k = f.degree(); k >= dd; --k) {
    Residue* top = r + static_cast<size_t>(k) * n;
    if (params.is_zero(top)) continue;
    if (monic) {
      std::copy(top, top + n, c.begin());
    } else {
      params.mul(top, lead_inv.data(), c.data());
    }
    std::copy(c.begin(), c.end(), quo.at(k - dd));
    for (int i = 0; i < n; ++i) neg_c[i] = ring.neg(c[i]);
    const int base = k - dd;
    if (n == 1) {
      for (int i = 0; i < dd; ++i) r[base + i] = ring.add(r[base + i], ring.mul(d.at(i)[0], neg_c[0]));
    } else {
      for (int i = 0; i < dd; ++i) params.mul_acc(d.at(i), neg_c.data(), r + static_cast<size_t>(base + i) * n);
    }
    std::fill(top, top + n, Residue{0});
  }
  rem.trim();
  quo.trim();
  return {quo, rem};
}

BezoutContext::BezoutContext(const ZqPoly& P)
    : P_(P), dP_(P.derivative()), U_(P.params()), V_(P.params()) {
  const auto& params = P.params();
  if (P.is_zero() || !(P.coeff(P.degree()) == ZqElem::from_int(params, 1))) {
    throw ZetaError(ErrorCode::kNotMonic, "Bezout context needs a monic polynomial");
  }
  // Euclid over F_q = W/p
  auto residue_field = params->at_precision(1);
  auto reduce = [&](const ZqPoly& f) { return ZqPoly(residue_field, f.flat()); };
  ZqPoly r0 = reduce(P_), r1 = reduce(dP_);
  ZqPoly s0(residue_field), s1 = ZqPoly::from_ints(residue_field, {1});
  if (r1.is_zero()) throw ZetaError(ErrorCode::kNotSquarefree, "P' vanishes mod p");
  while (!r1.is_zero()) {
    auto [q, r] = divmod(r0, r1);
    ZqPoly s2 = s0 - q * s1;
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.degree() != 0) throw ZetaError(ErrorCode::kNotSquarefree, "gcd(P, P') is nonconstant mod p");
  s0 = s0.scaled(r0.coeff(0).inverse());
  s0 = divmod(s0, reduce(P_)).remainder;

  // Newton lifting of V = 1/P' in W[x]/(P)
  ZqPoly V(params, s0.flat());
  const ZqPoly two = ZqPoly::from_ints(params, {2});
  int iterations = 1;
  while ((1 << (iterations - 1)) < params->precision()) ++iterations;
  for (int it = 0; it < iterations; ++it) {
    ZqPoly t = divmod(dP_ * V, P_).remainder;
    V = divmod(V * (two - t), P_).remainder;
  }
  ZqPoly one_minus = ZqPoly::from_ints(params, {1}) - dP_ * V;
  auto [u, rem] = divmod(one_minus, P_);
  if (!rem.is_zero()) throw ZetaError(ErrorCode::kNotSquarefree, "Bezout lift failed to converge");
  U_ = std::move(u);
  V_ = std::move(V);
}

BezoutDecomposition BezoutContext::decompose(const ZqPoly& A) const {
  auto [qa, r] = divmod(A, P_);
  ZqPoly C = divmod(r * V_, P_).remainder;
  auto [b, rem] = divmod(r - dP_ * C, P_);
  if (!rem.is_zero()) {
    throw ZetaError(ErrorCode::kInconsistentResult, "Bezout division left a nonzero remainder");
  }
  return {qa + b, C};
}

BaseExpansion base_expansion(const ZqPoly& A, const ZqPoly& d, int count) {
  BaseExpansion out{std::vector<ZqPoly>(count, ZqPoly(A.params())), ZqPoly(A.params())};
  if (count == 0) {
    out.quotient = A;
    return out;
  }
  // d^h with 1/rev(d^h) to `inv_len` terms, grown on demand
  struct Power {
    ZqPoly value, inv;
    int inv_len = 0;
  };
  std::map<int, Power> powers;
  powers.emplace(1, Power{d, ZqPoly(A.params())});
  auto power = [&](auto& self, int h) -> Power& {
    if (auto it = powers.find(h); it != powers.end()) return it->second;
    const ZqPoly& half = self(self, h / 2).value;
    ZqPoly r = half * half;
    if (h % 2) r = r * d;
    return powers.emplace(h, Power{std::move(r), ZqPoly(A.params())}).first->second;
  };
  auto divide = [&](const ZqPoly& R, int h) {
    Power& pw = power(power, h);
    const int m = R.degree() - pw.value.degree() + 1;
    if (m < kFastQuotientLength || pw.value.length() < kFastDivisorLength) return divmod(R, pw.value);
    if (pw.inv_len < m) {
      pw.inv_len = std::max(m, 2 * pw.inv_len);
      pw.inv = inverse_series(reversed(pw.value, pw.value.length()), pw.inv_len);
    }
    return divmod_with_inverse(R, pw.value, pw.inv);
  };
  // R has fewer than `span` digits; write them from position `at`.
  auto split = [&](auto& self, const ZqPoly& R, int span, int at) -> void {
    if (R.degree() < d.degree()) {
      out.digits[at] = R;
      return;
    }
    const int h = span / 2;
    auto qr = divide(R, h);
    self(self, qr.remainder, h, at);
    self(self, qr.quotient, span - h, at + h);
  };
  auto top = divide(A, count);
  out.quotient = std::move(top.quotient);
  split(split, top.remainder, count, 0);
  return out;
}

}  // namespace hyperzeta
