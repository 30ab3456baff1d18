#include "hyperzeta/padic.hpp"

#include <algorithm>
#include <string>

#include "hyperzeta/error.hpp"

namespace hyperzeta {

namespace {

using FpPoly = std::vector<uint64_t>;

void trim(FpPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t p) {
  return static_cast<uint64_t>(static_cast<unsigned __int128>(a) * b % p);
}

uint64_t invmod(uint64_t a, uint64_t p) {
  int64_t r0 = static_cast<int64_t>(p), r1 = static_cast<int64_t>(a % p), s0 = 0, s1 = 1;
  while (r1 != 0) {
    int64_t q = r0 / r1;
    std::swap(r0, r1);
    r1 -= q * r0;
    std::swap(s0, s1);
    s1 -= q * s0;
  }
  return static_cast<uint64_t>((s0 % static_cast<int64_t>(p) + static_cast<int64_t>(p)) % static_cast<int64_t>(p));
}

FpPoly fp_mod(FpPoly a, const FpPoly& f, uint64_t p) {
  trim(a);
  const size_t df = f.size() - 1;
  const uint64_t lead_inv = invmod(f.back(), p);
  while (a.size() > df) {
    uint64_t c = mulmod(a.back(), lead_inv, p);
    size_t shift = a.size() - 1 - df;
    for (size_t i = 0; i <= df; ++i) {
      a[shift + i] = (a[shift + i] + p - mulmod(c, f[i], p)) % p;
    }
    trim(a);
  }
  return a;
}

FpPoly fp_mulmod(const FpPoly& a, const FpPoly& b, const FpPoly& f, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  FpPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
  return fp_mod(std::move(r), f, p);
}

FpPoly fp_powmod(FpPoly base, uint64_t e, const FpPoly& f, uint64_t p) {
  FpPoly r{1};
  base = fp_mod(std::move(base), f, p);
  while (e > 0) {
    if (e & 1) r = fp_mulmod(r, base, f, p);
    base = fp_mulmod(base, base, f, p);
    e >>= 1;
  }
  return fp_mod(r, f, p);
}

FpPoly fp_gcd(FpPoly a, FpPoly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = fp_mod(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

// x^(p^k) mod f
FpPoly frobenius_power(const FpPoly& f, uint64_t p, int k) {
  FpPoly x{0, 1};
  FpPoly r = fp_mod(x, f, p);
  for (int i = 0; i < k; ++i) r = fp_powmod(r, p, f, p);
  return r;
}

FpPoly fp_sub(FpPoly a, const FpPoly& b, uint64_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

// a^{-1} mod f over F_p; empty when not invertible.
FpPoly fp_inverse_mod(const FpPoly& a, const FpPoly& f, uint64_t p) {
  FpPoly r0 = f, r1 = fp_mod(a, f, p);
  FpPoly s0{}, s1{1};
  while (!r1.empty()) {
    // q = r0 / r1
    FpPoly q(r0.size() >= r1.size() ? r0.size() - r1.size() + 1 : 1, 0);
    FpPoly rem = r0;
    const uint64_t li = invmod(r1.back(), p);
    while (rem.size() >= r1.size() && !rem.empty()) {
      uint64_t c = mulmod(rem.back(), li, p);
      size_t shift = rem.size() - r1.size();
      q[shift] = c;
      for (size_t i = 0; i < r1.size(); ++i) rem[shift + i] = (rem[shift + i] + p - mulmod(c, r1[i], p)) % p;
      trim(rem);
    }
    trim(q);
    FpPoly qs(q.size() + s1.size(), 0);
    for (size_t i = 0; i < q.size(); ++i)
      for (size_t j = 0; j < s1.size(); ++j) qs[i + j] = (qs[i + j] + mulmod(q[i], s1[j], p)) % p;
    trim(qs);
    FpPoly s2 = fp_sub(s0, qs, p);
    r0 = std::move(r1);
    r1 = std::move(rem);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) return {};
  const uint64_t c = invmod(r0[0], p);
  for (auto& v : s0) v = mulmod(v, c, p);
  return fp_mod(s0, f, p);
}

}  // namespace

bool is_prime(uint64_t n) {
  if (n < 2) return false;
  for (uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

bool is_irreducible_mod_p(const std::vector<uint64_t>& coeffs, uint64_t p) {
  FpPoly f;
  for (auto c : coeffs) f.push_back(c % p);
  trim(f);
  if (f.size() < 2) return false;
  const int n = static_cast<int>(f.size()) - 1;
  const uint64_t li = invmod(f.back(), p);
  for (auto& c : f) c = mulmod(c, li, p);
  if (n == 1) return true;
  FpPoly x{0, 1};
  if (fp_sub(frobenius_power(f, p, n), fp_mod(x, f, p), p).size() != 0) return false;
  for (int r = 2; r <= n; ++r) {
    if (n % r != 0 || !is_prime(static_cast<uint64_t>(r))) continue;
    FpPoly h = fp_sub(frobenius_power(f, p, n / r), fp_mod(x, f, p), p);
    if (fp_gcd(f, h, p).size() != 1) return false;
  }
  return true;
}

std::vector<int64_t> default_modulus(uint64_t p, int n) {
  if (n < 1) throw ZetaError(ErrorCode::kInvalidParams, "extension degree must be >= 1");
  if (n == 1) return {0, 1};
  std::vector<uint64_t> c(n + 1, 0);
  c[n] = 1;
  while (true) {
    if (c[0] != 0 && is_irreducible_mod_p(c, p)) break;
    int i = 0;
    while (i < n && ++c[i] == p) c[i++] = 0;
    if (i == n) throw ZetaError(ErrorCode::kInvalidParams, "no irreducible polynomial found");
  }
  return std::vector<int64_t>(c.begin(), c.end());
}

PadicParams::PadicParams(uint64_t p, int n, int precision, std::vector<int64_t> modulus_digits)
    : n_(n), ring_(p, precision), modulus_digits_(std::move(modulus_digits)) {
  modulus_.reserve(n + 1);
  for (auto d : modulus_digits_) modulus_.push_back(ring_.from_int(d));
}

ParamsPtr PadicParams::create(uint64_t p, int n, int precision, std::vector<int64_t> modulus) {
  if (p == 2) throw ZetaError(ErrorCode::kEvenCharacteristic, "p = 2 is not supported; p must be an odd prime");
  if (!is_prime(p)) throw ZetaError(ErrorCode::kInvalidParams, std::to_string(p) + " is not prime");
  if (p >= (uint64_t{1} << 32)) throw ZetaError(ErrorCode::kInvalidParams, "p must be below 2^32");
  if (n < 1) throw ZetaError(ErrorCode::kInvalidParams, "extension degree must be >= 1");
  if (precision < 1) throw ZetaError(ErrorCode::kPrecisionRange, "working precision must be >= 1");
  if (modulus.empty()) modulus = default_modulus(p, n);
  if (static_cast<int>(modulus.size()) != n + 1) {
    throw ZetaError(ErrorCode::kInvalidParams, "field modulus must have n+1 = " + std::to_string(n + 1) + " coefficients");
  }
  std::vector<int64_t> digits;
  std::vector<uint64_t> fp;
  for (auto c : modulus) {
    int64_t d = c % static_cast<int64_t>(p);
    if (d < 0) d += static_cast<int64_t>(p);
    digits.push_back(d);
    fp.push_back(static_cast<uint64_t>(d));
  }
  if (digits.back() != 1) throw ZetaError(ErrorCode::kInvalidParams, "field modulus must be monic");
  if (!is_irreducible_mod_p(fp, p)) {
    throw ZetaError(ErrorCode::kInvalidParams, "field modulus is not irreducible mod " + std::to_string(p));
  }
  std::shared_ptr<PadicParams> params(new PadicParams(p, n, precision, std::move(digits)));
  params->compute_sigma();
  return params;
}

int64_t PadicParams::q() const {
  __int128 q = 1;
  for (int i = 0; i < n_; ++i) {
    q *= p();
    if (q > (static_cast<__int128>(1) << 62)) throw ZetaError(ErrorCode::kInvalidParams, "q = p^n too large");
  }
  return static_cast<int64_t>(q);
}

ParamsPtr PadicParams::at_precision(int digits) const {
  if (digits < 1 || digits > precision()) {
    throw ZetaError(ErrorCode::kPrecisionRange,
                    "requested " + std::to_string(digits) + " digits, available 1.." + std::to_string(precision()));
  }
  std::shared_ptr<PadicParams> params(new PadicParams(p(), n_, digits, modulus_digits_));
  params->sigma_matrix_.resize(sigma_matrix_.size());
  const Residue m = params->ring_.modulus();
  for (size_t i = 0; i < sigma_matrix_.size(); ++i) params->sigma_matrix_[i] = sigma_matrix_[i] % m;
  return params;
}

bool PadicParams::compatible(const PadicParams& o) const {
  return this == &o || (ring_ == o.ring_ && n_ == o.n_ && modulus_digits_ == o.modulus_digits_);
}

void require_compatible(const PadicParams& a, const PadicParams& b) {
  if (!a.compatible(b)) throw ZetaError(ErrorCode::kParamMismatch, "operands belong to different p-adic contexts");
}

void PadicParams::add(const Residue* a, const Residue* b, Residue* out) const {
  for (int i = 0; i < n_; ++i) out[i] = ring_.add(a[i], b[i]);
}

void PadicParams::sub(const Residue* a, const Residue* b, Residue* out) const {
  for (int i = 0; i < n_; ++i) out[i] = ring_.sub(a[i], b[i]);
}

void PadicParams::mul(const Residue* a, const Residue* b, Residue* out) const {
  if (n_ == 1) {
    out[0] = ring_.mul(a[0], b[0]);
    return;
  }
  Residue tmp[64];
  std::vector<Residue> heap;
  Residue* t = tmp;
  if (2 * n_ - 1 > 64) {
    heap.resize(2 * n_ - 1);
    t = heap.data();
  }
  std::fill(t, t + 2 * n_ - 1, Residue{0});
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n_; ++j) t[i + j] = ring_.add(t[i + j], ring_.mul(a[i], b[j]));
  }
  fold_product(t, out);
}

void PadicParams::fold_product(Residue* t, Residue* out) const {
  for (int k = 2 * n_ - 2; k >= n_; --k) {
    const Residue c = t[k];
    if (c == 0) continue;
    for (int l = 0; l < n_; ++l) t[k - n_ + l] = ring_.sub(t[k - n_ + l], ring_.mul(c, modulus_[l]));
  }
  std::copy(t, t + n_, out);
}

void PadicParams::mul_acc(const Residue* a, const Residue* b, Residue* out) const {
  if (n_ == 1) {
    out[0] = ring_.add(out[0], ring_.mul(a[0], b[0]));
    return;
  }
  Residue tmp[32];
  std::vector<Residue> heap;
  Residue* t = tmp;
  if (n_ > 32) {
    heap.resize(n_);
    t = heap.data();
  }
  mul(a, b, t);
  add(out, t, out);
}

void PadicParams::scale(const Residue* a, Residue c, Residue* out) const {
  for (int i = 0; i < n_; ++i) out[i] = ring_.mul(a[i], c);
}

bool PadicParams::is_zero(const Residue* a) const {
  for (int i = 0; i < n_; ++i)
    if (a[i] != 0) return false;
  return true;
}

int PadicParams::valuation(const Residue* a) const {
  int v = precision();
  for (int i = 0; i < n_; ++i) v = std::min(v, ring_.valuation(a[i]));
  return v;
}

void PadicParams::inverse(const Residue* a, Residue* out) const {
  if (n_ == 1) {
    out[0] = ring_.inverse(a[0]);
    return;
  }
  const uint64_t p = this->p();
  FpPoly abar(n_), f(n_ + 1);
  for (int i = 0; i < n_; ++i) abar[i] = static_cast<uint64_t>(a[i] % p);
  for (int i = 0; i <= n_; ++i) f[i] = static_cast<uint64_t>(modulus_digits_[i]);
  trim(abar);
  if (abar.empty()) throw ZetaError(ErrorCode::kNotUnit, "element vanishes mod p and has no inverse");
  FpPoly inv = fp_inverse_mod(abar, f, p);
  if (inv.empty()) throw ZetaError(ErrorCode::kNotUnit, "element is not invertible mod p");
  std::vector<Residue> x(n_, 0), ax(n_), two(n_, 0);
  for (size_t i = 0; i < inv.size(); ++i) x[i] = static_cast<Residue>(inv[i]);
  two[0] = 2 % ring_.modulus();
  for (int prec = 1; prec < precision(); prec *= 2) {
    mul(a, x.data(), ax.data());
    sub(two.data(), ax.data(), ax.data());
    mul(x.data(), ax.data(), x.data());
  }
  std::copy(x.begin(), x.end(), out);
}

void PadicParams::sigma(const Residue* a, Residue* out) const {
  if (n_ == 1) {
    out[0] = a[0];
    return;
  }
  std::vector<Residue> r(n_, 0);
  for (int i = 0; i < n_; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < n_; ++j) r[j] = ring_.add(r[j], ring_.mul(a[i], sigma_matrix_[i * n_ + j]));
  }
  std::copy(r.begin(), r.end(), out);
}

void PadicParams::compute_sigma() {
  sigma_matrix_.assign(static_cast<size_t>(n_) * n_, 0);
  if (n_ == 1) {
    sigma_matrix_[0] = 1;
    return;
  }
  const int n = n_;
  auto eval = [&](const std::vector<Residue>& s, bool derivative) {
    // Horner on m(T) or m'(T) with Z_p coefficients
    std::vector<Residue> acc(n, 0);
    const int top = derivative ? n - 1 : n;
    for (int k = top; k >= 0; --k) {
      mul(acc.data(), s.data(), acc.data());
      Residue c = derivative ? ring_.mul(modulus_[k + 1], ring_.from_int(k + 1)) : modulus_[k];
      acc[0] = ring_.add(acc[0], c);
    }
    return acc;
  };
  // start at t^p, the Frobenius image mod p
  std::vector<Residue> s(n, 0), t(n, 0);
  t[1] = 1;
  s[0] = 1;
  for (uint64_t e = p(); e > 0; e >>= 1) {
    if (e & 1) mul(s.data(), t.data(), s.data());
    mul(t.data(), t.data(), t.data());
  }
  int iterations = 1;
  while ((1 << (iterations - 1)) < precision()) ++iterations;
  std::vector<Residue> inv(n);
  for (int it = 0; it < iterations; ++it) {
    auto f = eval(s, false);
    auto df = eval(s, true);
    if (valuation(df.data()) > 0) {
      throw ZetaError(ErrorCode::kNewtonNonconvergence, "m'(t^p) is not a unit; modulus is not separable mod p");
    }
    inverse(df.data(), inv.data());
    mul(f.data(), inv.data(), f.data());
    sub(s.data(), f.data(), s.data());
  }
  if (!is_zero(eval(s, false).data())) {
    throw ZetaError(ErrorCode::kNewtonNonconvergence, "Newton iteration for sigma(t) did not converge");
  }
  std::vector<Residue> power(n, 0);
  power[0] = 1;
  for (int i = 0; i < n; ++i) {
    std::copy(power.begin(), power.end(), sigma_matrix_.begin() + static_cast<size_t>(i) * n);
    mul(power.data(), s.data(), power.data());
  }
}

// ---- ZqElem ----

ZqElem::ZqElem(ParamsPtr params) : params_(std::move(params)), c_(params_->degree(), 0) {}

ZqElem::ZqElem(ParamsPtr params, std::vector<Residue> coeffs) : params_(std::move(params)), c_(std::move(coeffs)) {
  if (static_cast<int>(c_.size()) != params_->degree()) {
    throw ZetaError(ErrorCode::kInvalidParams, "element needs exactly n coefficients");
  }
  for (auto& v : c_) v %= params_->ring().modulus();
}

ZqElem ZqElem::from_int(ParamsPtr params, int64_t v) {
  ZqElem r(std::move(params));
  r.c_[0] = r.params_->ring().from_int(v);
  return r;
}

ZqElem ZqElem::from_digits(ParamsPtr params, const std::vector<int64_t>& coeffs) {
  ZqElem r(std::move(params));
  if (static_cast<int>(coeffs.size()) > r.params_->degree()) {
    throw ZetaError(ErrorCode::kInvalidParams, "too many coefficients for an element of W");
  }
  for (size_t i = 0; i < coeffs.size(); ++i) r.c_[i] = r.params_->ring().from_int(coeffs[i]);
  return r;
}

void ZqElem::check(const ZqElem& o) const {
  if (params_ != o.params_) require_compatible(*params_, *o.params_);
}

bool ZqElem::is_zero() const { return params_->is_zero(c_.data()); }
bool ZqElem::is_unit() const { return valuation() == 0; }
int ZqElem::valuation() const { return params_->valuation(c_.data()); }

ZqElem& ZqElem::operator+=(const ZqElem& o) {
  check(o);
  params_->add(c_.data(), o.c_.data(), c_.data());
  return *this;
}

ZqElem& ZqElem::operator-=(const ZqElem& o) {
  check(o);
  params_->sub(c_.data(), o.c_.data(), c_.data());
  return *this;
}

ZqElem& ZqElem::operator*=(const ZqElem& o) {
  check(o);
  params_->mul(c_.data(), o.c_.data(), c_.data());
  return *this;
}

ZqElem ZqElem::operator-() const {
  ZqElem r(params_);
  for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = params_->ring().neg(c_[i]);
  return r;
}

bool ZqElem::operator==(const ZqElem& o) const { return params_->compatible(*o.params_) && c_ == o.c_; }

ZqElem ZqElem::pow(uint64_t e) const {
  ZqElem r = from_int(params_, 1), b = *this;
  while (e > 0) {
    if (e & 1) r *= b;
    b *= b;
    e >>= 1;
  }
  return r;
}

ZqElem ZqElem::inverse() const {
  ZqElem r(params_);
  params_->inverse(c_.data(), r.c_.data());
  return r;
}

ZqElem ZqElem::sigma(int times) const {
  const int n = params_->degree();
  times %= n;
  if (times < 0) times += n;
  ZqElem r = *this;
  for (int k = 0; k < times; ++k) params_->sigma(r.c_.data(), r.c_.data());
  return r;
}

ZqElem ZqElem::reduce_precision(int digits) const {
  auto target = params_->at_precision(digits);
  return ZqElem(target, c_);
}

}  // namespace hyperzeta
