#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <random>
#include <vector>

#include "hyperzeta/curve.hpp"
#include "hyperzeta/padic.hpp"
#include "hyperzeta/poly.hpp"
#include "hyperzeta/reduce.hpp"
#include "hyperzeta/error.hpp"

namespace test_support {

using namespace hyperzeta;
using Rational = boost::rational<int64_t>;
using RationalPoly = std::vector<Rational>;  // constant first

inline CurveSpec prime_curve(uint64_t p, const std::vector<int64_t>& coeffs) {
  CurveSpec s;
  s.p = p;
  s.n = 1;
  for (auto c : coeffs) s.coeffs.push_back({c});
  return s;
}

inline ZqElem random_elem(const ParamsPtr& params, std::mt19937_64& rng) {
  std::vector<Residue> c(params->degree());
  const auto m = params->ring().modulus();
  for (auto& x : c) x = ((static_cast<Residue>(rng()) << 64) | rng()) % m;
  return ZqElem(params, std::move(c));
}

inline ZqPoly random_poly(const ParamsPtr& params, int degree, std::mt19937_64& rng) {
  std::vector<ZqElem> c;
  for (int i = 0; i <= degree; ++i) c.push_back(random_elem(params, rng));
  return ZqPoly::from_elems(params, c);
}

/// Residue of an exact rational in Z_p at the precision of `params`.
inline ZqElem rational_elem(const ParamsPtr& params, Rational r) {
  return ZqElem::from_int(params, r.numerator()) * ZqElem::from_int(params, r.denominator()).inverse();
}

inline ZqPoly rational_poly(const ParamsPtr& params, const RationalPoly& f) {
  std::vector<ZqElem> c;
  for (auto r : f) c.push_back(rational_elem(params, r));
  return ZqPoly::from_elems(params, c);
}

/// Zero-padded coefficient i of f.
inline ZqElem coeff(const ZqPoly& f, int i) { return i < f.length() ? f.coeff(i) : ZqElem(f.params()); }

/// True when every coefficient of f vanishes modulo p^digits.
inline bool vanishes_mod(const ZqPoly& f, int digits) { return f.is_zero() || f.valuation() >= digits; }

inline bool equal_mod(const ZqElem& a, const ZqElem& b, int digits) {
  const ZqElem d = a - b;
  return d.is_zero() || d.valuation() >= digits;
}

// Coordinates of a BasisVector brought to the scale p^e.
inline std::vector<ZqElem> at_scale(const BasisVector& v, int e) {
  std::vector<ZqElem> out;
  const auto& params = v.coords.front().params();
  const ZqElem lift = ZqElem::from_int(params, static_cast<int64_t>(params->p())).pow(e - v.stats.scale);
  for (const auto& c : v.coords) out.push_back(c * lift);
  return out;
}

inline bool same_class(const BasisVector& a, const BasisVector& b, int digits) {
  const int e = std::max(a.stats.scale, b.stats.scale);
  auto x = at_scale(a, e), y = at_scale(b, e);
  for (size_t i = 0; i < x.size(); ++i)
    if (!equal_mod(x[i], y[i], digits + e)) return false;
  return true;
}

inline bool is_zero_class(const BasisVector& a, int digits) {
  for (const auto& c : a.coords)
    if (!c.is_zero() && c.valuation() - a.stats.scale < digits) return false;
  return true;
}

// First squarefree monic polynomial x^(2g+1) + x + c over F_p.
inline CurvePtr curve_of_genus(uint64_t p, int g, int digits) {
  for (int64_t c = 1;; ++c) {
    std::vector<int64_t> f(2 * g + 2, 0);
    f[0] = c;
    f[1] = 1;
    f[2] = c + 1;
    f[2 * g + 1] = 1;
    try {
      return validate_curve(prime_curve(p, f), digits);
    } catch (const ZetaError&) {
    }
  }
}

inline OddYForm random_form(const CurvePtr& c, std::mt19937_64& rng) {
  OddYForm u(c);
  for (int j = -1; j <= 6; ++j)
    if (rng() % 3) u.add_term(j, random_poly(c->params(), static_cast<int>(rng() % 9), rng));
  return u;
}

}  // namespace test_support
