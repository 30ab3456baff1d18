#include "hyperzeta/residue.hpp"

#include <gmp.h>

#include <algorithm>

#include "hyperzeta/error.hpp"

namespace hyperzeta {

std::string to_string(Residue v) {
  if (v == 0) return "0";
  std::string s;
  while (v > 0) {
    s.push_back(static_cast<char>('0' + static_cast<int>(v % 10)));
    v /= 10;
  }
  std::reverse(s.begin(), s.end());
  return s;
}

ResidueRing::ResidueRing(uint64_t p, int digits) : p_(p), digits_(digits) {
  if (p < 3 || (p & 1) == 0) {
    throw ZetaError(ErrorCode::kInvalidParams, "residue ring needs an odd prime, got " + std::to_string(p));
  }
  if (digits < 1) throw ZetaError(ErrorCode::kPrecisionRange, "precision must be at least one digit");
  const Residue limit = static_cast<Residue>(1) << 125;
  powers_.reserve(digits + 1);
  powers_.push_back(1);
  for (int k = 1; k <= digits; ++k) {
    if (powers_.back() > limit / p) {
      throw ZetaError(ErrorCode::kPrecisionRange,
                      std::to_string(p) + "^" + std::to_string(digits) + " exceeds the 125-bit residue limit");
    }
    powers_.push_back(powers_.back() * p);
  }
  modulus_ = powers_.back();
  narrow_ = (modulus_ >> 64) == 0;
}

Residue ResidueRing::from_int(int64_t v) const {
  if (v >= 0) return static_cast<Residue>(static_cast<uint64_t>(v)) % modulus_;
  // -(v+1) avoids overflow at INT64_MIN
  Residue mag = static_cast<Residue>(static_cast<uint64_t>(-(v + 1))) + 1;
  return neg(mag % modulus_);
}

__int128 ResidueRing::to_signed(Residue a) const {
  if (a > modulus_ / 2) return -static_cast<__int128>(modulus_ - a);
  return static_cast<__int128>(a);
}

Residue ResidueRing::mul_wide(Residue a, Residue b) const {
  mp_limb_t x[2] = {static_cast<mp_limb_t>(a), static_cast<mp_limb_t>(a >> 64)};
  mp_limb_t y[2] = {static_cast<mp_limb_t>(b), static_cast<mp_limb_t>(b >> 64)};
  mp_limb_t m[2] = {static_cast<mp_limb_t>(modulus_), static_cast<mp_limb_t>(modulus_ >> 64)};
  mp_limb_t prod[4];
  mp_limb_t quot[3];
  mp_limb_t rem[2];
  mpn_mul_n(prod, x, y, 2);
  mpn_tdiv_qr(quot, rem, 0, prod, 4, m, 2);
  return (static_cast<Residue>(rem[1]) << 64) | rem[0];
}

Residue ResidueRing::pow(Residue a, uint64_t e) const {
  Residue r = 1 % modulus_;
  while (e > 0) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

int ResidueRing::valuation(Residue a) const {
  if (a == 0) return digits_;
  int v = 0;
  while (a % p_ == 0) {
    a /= p_;
    ++v;
  }
  return v;
}

Residue ResidueRing::shift_down(Residue a, int v) const {
  if (v == 0) return a;
  return a / powers_.at(v);
}

Residue ResidueRing::shift_up(Residue a, int v) const {
  if (v == 0) return a;
  if (v >= digits_) return 0;
  return mul(a, powers_[v]);
}

Residue ResidueRing::inverse(Residue a) const {
  if (a % p_ == 0) throw ZetaError(ErrorCode::kNotUnit, "element divisible by p has no inverse");
  // inverse mod p by extended Euclid, then Newton lifting x <- x(2 - a x)
  int64_t r0 = static_cast<int64_t>(p_), r1 = static_cast<int64_t>(a % p_);
  int64_t s0 = 0, s1 = 1;
  while (r1 != 0) {
    int64_t q = r0 / r1;
    std::swap(r0, r1);
    r1 -= q * r0;
    std::swap(s0, s1);
    s1 -= q * s0;
  }
  Residue x = from_int(s0);
  for (int prec = 1; prec < digits_; prec *= 2) {
    x = mul(x, sub(2, mul(a, x)));
  }
  return x;
}

std::pair<int, Residue> ResidueRing::split(uint64_t m) const {
  if (m == 0) throw ZetaError(ErrorCode::kNotUnit, "division by zero");
  int v = 0;
  while (m % p_ == 0) {
    m /= p_;
    ++v;
  }
  return {v, static_cast<Residue>(m) % modulus_};
}

}  // namespace hyperzeta
