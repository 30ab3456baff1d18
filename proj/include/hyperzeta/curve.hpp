#pragma once

#include <map>
#include <memory>

#include "hyperzeta/curve_spec.hpp"
#include "hyperzeta/padic.hpp"
#include "hyperzeta/poly.hpp"

namespace hyperzeta {

/// A validated curve lifted to W/p^Nw: the digit lift of P, its derivative,
/// E(x) = P^sigma(x^p) - P(x)^p and the Bezout context for (P, P').
class LiftedCurve {
 public:
  LiftedCurve(CurveSpec spec, ParamsPtr params);

  const CurveSpec& spec() const { return spec_; }
  const ParamsPtr& params() const { return params_; }
  int genus() const { return genus_; }
  const ZqPoly& P() const { return bezout_.P(); }
  const ZqPoly& dP() const { return bezout_.dP(); }
  const ZqPoly& E() const { return E_; }
  const BezoutContext& bezout() const { return bezout_; }

 private:
  static ZqPoly lift(const CurveSpec& spec, const ParamsPtr& params);

  CurveSpec spec_;
  ParamsPtr params_;
  int genus_;
  BezoutContext bezout_;
  ZqPoly E_;
};

using CurvePtr = std::shared_ptr<const LiftedCurve>;

/// Checks the curve hypotheses (odd p, monic P of degree 2g+1, squarefree
/// mod p) and lifts the curve to `precision` p-adic digits. The returned
/// curve's spec has its field modulus filled in.
CurvePtr validate_curve(const CurveSpec& spec, int precision);

/// sum_j A_j(x) dx / y^(2j+1). Index j >= 1 is a pole at the finite
/// Weierstrass points, j = 0 the basis level, j <= -1 a positive power of y.
class OddYForm {
 public:
  explicit OddYForm(CurvePtr curve);

  const CurvePtr& curve() const { return curve_; }
  const std::map<int, ZqPoly>& terms() const { return terms_; }
  ZqPoly term(int j) const;
  void add_term(int j, const ZqPoly& a);
  bool empty() const { return terms_.empty(); }
  int max_index() const;
  int min_index() const;

  OddYForm& operator+=(const OddYForm& o);
  OddYForm& operator-=(const OddYForm& o);
  friend OddYForm operator+(OddYForm a, const OddYForm& b) { return a += b; }
  friend OddYForm operator-(OddYForm a, const OddYForm& b) { return a -= b; }
  OddYForm scaled(const ZqElem& c) const;
  friend OddYForm operator*(const ZqElem& c, const OddYForm& u) { return u.scaled(c); }
  bool operator==(const OddYForm& o) const;

 private:
  void check(const OddYForm& o) const;

  CurvePtr curve_;
  std::map<int, ZqPoly> terms_;
};

/// Rewrites every j < 0 term A y^(2m-1) dx (m = -j) as A P^m dx / y, so the
/// support lands in j >= 0.
OddYForm fold_into_poles(const OddYForm& u);

/// d(C / y^(s-2)) = C' dx / y^(s-2) - (s-2)/2 C P' dx / y^s, for odd s >= 3.
OddYForm exact_pole_differential(const CurvePtr& curve, const ZqPoly& C, int s);
/// d(C y) = (C' P + C P' / 2) dx / y.
OddYForm exact_infinity_differential(const CurvePtr& curve, const ZqPoly& C);

}  // namespace hyperzeta
