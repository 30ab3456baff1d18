#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "hyperzeta/residue.hpp"

namespace hyperzeta {

class PadicParams;
using ParamsPtr = std::shared_ptr<const PadicParams>;

bool is_prime(uint64_t n);

/// Rabin irreducibility test over F_p. `coeffs` is constant-first and monic.
bool is_irreducible_mod_p(const std::vector<uint64_t>& coeffs, uint64_t p);

/// First monic irreducible of degree n over F_p when the n low coefficients
/// are read as base-p digits, constant term least significant.
std::vector<int64_t> default_modulus(uint64_t p, int n);

/// Working context for W/p^Nw = (Z/p^Nw)[t]/m(t), the unramified degree-n
/// extension of Z_p at fixed precision, together with the precomputed image
/// of t under the Witt Frobenius. Immutable and shared between threads.
class PadicParams {
 public:
  /// `modulus` holds n+1 integers, constant term first, leading 1. An empty
  /// modulus selects `default_modulus(p, n)` (or t for n = 1).
  static ParamsPtr create(uint64_t p, int n, int precision, std::vector<int64_t> modulus = {});

  uint64_t p() const { return ring_.prime(); }
  int degree() const { return n_; }
  int precision() const { return ring_.digits(); }
  const ResidueRing& ring() const { return ring_; }
  /// Modulus digits in [0, p), constant first, n+1 entries.
  const std::vector<int64_t>& modulus_digits() const { return modulus_digits_; }
  /// q = p^n as an integer (throws if it does not fit in 63 bits).
  int64_t q() const;

  ParamsPtr at_precision(int digits) const;
  bool compatible(const PadicParams& other) const;

  // Kernels on length-n coefficient arrays. Outputs may alias inputs.
  void add(const Residue* a, const Residue* b, Residue* out) const;
  void sub(const Residue* a, const Residue* b, Residue* out) const;
  void mul(const Residue* a, const Residue* b, Residue* out) const;
  /// out += a * b
  void mul_acc(const Residue* a, const Residue* b, Residue* out) const;
  /// Reduces a product t of length 2n-1 modulo m(t) into out (n entries).
  /// Overwrites t.
  void fold_product(Residue* t, Residue* out) const;
  void scale(const Residue* a, Residue c, Residue* out) const;
  void inverse(const Residue* a, Residue* out) const;
  void sigma(const Residue* a, Residue* out) const;
  bool is_zero(const Residue* a) const;
  int valuation(const Residue* a) const;

 private:
  PadicParams(uint64_t p, int n, int precision, std::vector<int64_t> modulus_digits);
  void compute_sigma();

  int n_;
  ResidueRing ring_;
  std::vector<int64_t> modulus_digits_;
  std::vector<Residue> modulus_;       // n+1 residues, monic
  std::vector<Residue> sigma_matrix_;  // column i = sigma(t^i), n*n
};

/// An element of W/p^Nw: n residues, coefficients of 1, t, ..., t^(n-1).
class ZqElem {
 public:
  explicit ZqElem(ParamsPtr params);
  ZqElem(ParamsPtr params, std::vector<Residue> coeffs);
  static ZqElem from_int(ParamsPtr params, int64_t v);
  static ZqElem from_digits(ParamsPtr params, const std::vector<int64_t>& coeffs);

  const ParamsPtr& params() const { return params_; }
  std::span<const Residue> coeffs() const { return c_; }
  Residue operator[](int i) const { return c_[i]; }

  bool is_zero() const;
  bool is_unit() const;
  int valuation() const;

  ZqElem& operator+=(const ZqElem& o);
  ZqElem& operator-=(const ZqElem& o);
  ZqElem& operator*=(const ZqElem& o);
  friend ZqElem operator+(ZqElem a, const ZqElem& b) { return a += b; }
  friend ZqElem operator-(ZqElem a, const ZqElem& b) { return a -= b; }
  friend ZqElem operator*(ZqElem a, const ZqElem& b) { return a *= b; }
  ZqElem operator-() const;
  bool operator==(const ZqElem& o) const;

  ZqElem pow(uint64_t e) const;
  /// Multiplicative inverse; throws NotUnit when the element vanishes mod p.
  ZqElem inverse() const;
  /// Witt vector Frobenius, applied `times` times.
  ZqElem sigma(int times = 1) const;
  /// Coefficients reduced mod p^digits, rebound to a context of that precision.
  ZqElem reduce_precision(int digits) const;

 private:
  void check(const ZqElem& o) const;

  ParamsPtr params_;
  std::vector<Residue> c_;
};

void require_compatible(const PadicParams& a, const PadicParams& b);

}  // namespace hyperzeta
