#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyperzeta {

/// A residue modulo p^N, always kept in [0, p^N).
using Residue = unsigned __int128;

std::string to_string(Residue v);

/// Fixed-point arithmetic in Z/p^N for an odd prime p.
///
/// Moduli below 2^64 take a single-division fast path; larger moduli (up to
/// 2^125) fall back to GMP limb arithmetic for products.
class ResidueRing {
 public:
  ResidueRing(uint64_t p, int digits);

  uint64_t prime() const { return p_; }
  int digits() const { return digits_; }
  Residue modulus() const { return modulus_; }
  Residue power(int k) const { return powers_.at(k); }

  Residue from_int(int64_t v) const;
  /// Representative in (-p^N/2, p^N/2].
  __int128 to_signed(Residue a) const;

  Residue add(Residue a, Residue b) const {
    Residue s = a + b;
    return s >= modulus_ ? s - modulus_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + (modulus_ - b); }
  Residue neg(Residue a) const { return a == 0 ? 0 : modulus_ - a; }
  Residue mul(Residue a, Residue b) const {
    return narrow_ ? mul_narrow(static_cast<uint64_t>(a), static_cast<uint64_t>(b))
                   : mul_wide(a, b);
  }
  Residue pow(Residue a, uint64_t e) const;

  /// Number of factors of p dividing a; `digits()` for zero.
  int valuation(Residue a) const;
  /// a / p^v where p^v | a. The v invented high digits are zero.
  Residue shift_down(Residue a, int v) const;
  /// a * p^v mod p^N.
  Residue shift_up(Residue a, int v) const;
  /// Inverse of a unit; throws NotUnit when p | a.
  Residue inverse(Residue a) const;
  /// Splits m = p^v * u with gcd(u, p) = 1; returns (v, u mod p^N).
  std::pair<int, Residue> split(uint64_t m) const;

  bool operator==(const ResidueRing& o) const { return p_ == o.p_ && digits_ == o.digits_; }

 private:
  Residue mul_narrow(uint64_t a, uint64_t b) const {
#if defined(__x86_64__)
    uint64_t hi, lo, q, r;
    __asm__("mulq %3" : "=a"(lo), "=d"(hi) : "a"(a), "rm"(b));
    __asm__("divq %4" : "=a"(q), "=d"(r) : "a"(lo), "d"(hi), "rm"(static_cast<uint64_t>(modulus_)));
    (void)q;
    return r;
#else
    return (static_cast<Residue>(a) * b) % modulus_;
#endif
  }
  Residue mul_wide(Residue a, Residue b) const;

  uint64_t p_;
  int digits_;
  Residue modulus_;
  bool narrow_;
  std::vector<Residue> powers_;
};

}  // namespace hyperzeta
