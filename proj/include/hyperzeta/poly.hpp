#pragma once

#include <cstdint>
#include <vector>

#include "hyperzeta/padic.hpp"

namespace hyperzeta {

/// Dense polynomial over W/p^Nw, lowest degree first. Coefficients are stored
/// flat (n residues each) and trailing zero coefficients are always trimmed,
/// so the zero polynomial has no coefficients.
class ZqPoly {
 public:
  explicit ZqPoly(ParamsPtr params);
  ZqPoly(ParamsPtr params, std::vector<Residue> flat);
  static ZqPoly from_ints(ParamsPtr params, const std::vector<int64_t>& coeffs);
  static ZqPoly from_elems(ParamsPtr params, const std::vector<ZqElem>& coeffs);
  static ZqPoly monomial(const ZqElem& c, int degree);

  const ParamsPtr& params() const { return params_; }
  int degree() const { return length() - 1; }
  int length() const { return static_cast<int>(data_.size()) / params_->degree(); }
  bool is_zero() const { return data_.empty(); }

  ZqElem coeff(int i) const;
  void set_coeff(int i, const ZqElem& c);
  const Residue* at(int i) const { return data_.data() + static_cast<size_t>(i) * params_->degree(); }
  Residue* at(int i) { return data_.data() + static_cast<size_t>(i) * params_->degree(); }
  const std::vector<Residue>& flat() const { return data_; }

  ZqPoly& operator+=(const ZqPoly& o);
  ZqPoly& operator-=(const ZqPoly& o);
  ZqPoly& operator*=(const ZqPoly& o);
  friend ZqPoly operator+(ZqPoly a, const ZqPoly& b) { return a += b; }
  friend ZqPoly operator-(ZqPoly a, const ZqPoly& b) { return a -= b; }
  friend ZqPoly operator*(const ZqPoly& a, const ZqPoly& b);
  ZqPoly operator-() const;
  friend ZqPoly operator*(const ZqElem& c, const ZqPoly& f) { return f.scaled(c); }
  bool operator==(const ZqPoly& o) const;

  ZqPoly scaled(const ZqElem& c) const;
  ZqPoly scaled_int(int64_t c) const;
  ZqPoly derivative() const;
  /// Multiplication by x^k.
  ZqPoly shifted(int k) const;
  /// Coefficientwise Witt Frobenius.
  ZqPoly sigma() const;
  /// f(x^e).
  ZqPoly substitute_power(int e) const;
  ZqElem evaluate(const ZqElem& x) const;
  /// Minimum coefficient valuation; the precision for the zero polynomial.
  int valuation() const;

  /// this += c * x^shift * src, with c a length-n coefficient array.
  void add_scaled_shifted(const ZqPoly& src, const Residue* c, int shift);
  /// Multiply every coefficient by p^v (top digits fall off).
  void multiply_p_power(int v);
  /// Exact division of every coefficient by p^v; requires valuation() >= v.
  void divide_p_power(int v);
  /// Resize to `len` coefficients, zero-filling; callers must trim().
  void resize(int len);
  void trim();

 private:
  void check(const ZqPoly& o) const;

  ParamsPtr params_;
  std::vector<Residue> data_;
};

struct DivMod {
  ZqPoly quotient;
  ZqPoly remainder;
};

/// f = quotient * d + remainder with deg remainder < deg d. Throws
/// NonUnitLeading unless the leading coefficient of d is a unit.
DivMod divmod(const ZqPoly& f, const ZqPoly& d);

/// Product by Kronecker substitution into one GMP multiplication; operator*
/// switches to it once both factors are long.
ZqPoly kronecker_product(const ZqPoly& a, const ZqPoly& b);

/// A = sum_{i < count} digits[i] d^i + quotient d^count with every digit of
/// degree below deg d. Divide and conquer over powers of the monic d.
struct BaseExpansion {
  std::vector<ZqPoly> digits;
  ZqPoly quotient;
};
BaseExpansion base_expansion(const ZqPoly& A, const ZqPoly& d, int count);

struct BezoutDecomposition {
  ZqPoly B;
  ZqPoly C;
};

/// Precomputed U, V with P U + P' V = 1 over W/p^Nw, for a monic P that is
/// squarefree mod p. V is found by Euclid over F_q and lifted by Newton
/// iteration on V <- V (2 - P' V) mod P.
class BezoutContext {
 public:
  explicit BezoutContext(const ZqPoly& P);

  const ZqPoly& P() const { return P_; }
  const ZqPoly& dP() const { return dP_; }
  const ZqPoly& U() const { return U_; }
  const ZqPoly& V() const { return V_; }

  /// A = P B + P' C with deg C < deg P.
  BezoutDecomposition decompose(const ZqPoly& A) const;

 private:
  ZqPoly P_, dP_, U_, V_;
};

inline BezoutDecomposition bezout_decompose(const ZqPoly& A, const BezoutContext& ctx) { return ctx.decompose(A); }

}  // namespace hyperzeta
