#include "hyperzeta/curve.hpp"

#include <string>

#include "hyperzeta/error.hpp"

namespace hyperzeta {

std::vector<int64_t> CurveSpec::coeff_digits(int i) const {
  std::vector<int64_t> d(n, 0);
  if (i < 0 || i >= static_cast<int>(coeffs.size())) return d;
  if (static_cast<int>(coeffs[i].size()) > n) {
    throw ZetaError(ErrorCode::kParseError, "coefficient " + std::to_string(i) + " has more than n coordinates");
  }
  const auto P = static_cast<int64_t>(p);
  for (size_t k = 0; k < coeffs[i].size(); ++k) d[k] = ((coeffs[i][k] % P) + P) % P;
  return d;
}

int CurveSpec::degree() const {
  if (p == 0) return -1;
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) {
    for (auto c : coeff_digits(i))
      if (c != 0) return i;
  }
  return -1;
}

int CurveSpec::genus() const {
  const int d = degree();
  if (d < 3 || d % 2 == 0) {
    throw ZetaError(ErrorCode::kWrongDegree, "P must have odd degree 2g+1 >= 3, got degree " + std::to_string(d));
  }
  return (d - 1) / 2;
}

ZqPoly LiftedCurve::lift(const CurveSpec& spec, const ParamsPtr& params) {
  std::vector<ZqElem> c;
  for (int i = 0; i <= spec.degree(); ++i) c.push_back(ZqElem::from_digits(params, spec.coeff_digits(i)));
  return ZqPoly::from_elems(params, c);
}

LiftedCurve::LiftedCurve(CurveSpec spec, ParamsPtr params)
    : spec_(std::move(spec)), params_(std::move(params)), genus_(spec_.genus()), bezout_(lift(spec_, params_)),
      E_(params_) {
  const int p = static_cast<int>(params_->p());
  ZqPoly pp = ZqPoly::from_ints(params_, {1}), base = P();
  for (int e = p; e > 0; e >>= 1) {
    if (e & 1) pp *= base;
    if (e > 1) base *= base;
  }
  E_ = P().sigma().substitute_power(p) - pp;
}

CurvePtr validate_curve(const CurveSpec& spec, int precision) {
  if (spec.p == 2) throw ZetaError(ErrorCode::kEvenCharacteristic, "characteristic 2 is not supported; p must be odd");
  if (spec.n < 1) throw ZetaError(ErrorCode::kInvalidParams, "extension degree n must be >= 1");
  auto params = PadicParams::create(spec.p, spec.n, precision, spec.modulus);
  spec.genus();
  const int d = spec.degree();
  auto lead = spec.coeff_digits(d);
  for (int k = 0; k < spec.n; ++k) {
    if (lead[k] != (k == 0 ? 1 : 0)) throw ZetaError(ErrorCode::kNotMonic, "P must be monic");
  }
  CurveSpec resolved = spec;
  resolved.modulus = params->modulus_digits();
  resolved.coeffs.resize(d + 1);
  return std::make_shared<const LiftedCurve>(std::move(resolved), std::move(params));
}

// ---- OddYForm ----

OddYForm::OddYForm(CurvePtr curve) : curve_(std::move(curve)) {}

void OddYForm::check(const OddYForm& o) const {
  if (curve_ == o.curve_) return;
  if (!curve_->params()->compatible(*o.curve_->params()) || !(curve_->P() == o.curve_->P())) {
    throw ZetaError(ErrorCode::kCurveMismatch, "forms live on different curves");
  }
}

ZqPoly OddYForm::term(int j) const {
  auto it = terms_.find(j);
  return it == terms_.end() ? ZqPoly(curve_->params()) : it->second;
}

void OddYForm::add_term(int j, const ZqPoly& a) {
  if (a.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(j, a);
  if (!inserted) {
    it->second += a;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

int OddYForm::max_index() const { return terms_.empty() ? 0 : terms_.rbegin()->first; }
int OddYForm::min_index() const { return terms_.empty() ? 0 : terms_.begin()->first; }

OddYForm& OddYForm::operator+=(const OddYForm& o) {
  check(o);
  for (const auto& [j, a] : o.terms_) add_term(j, a);
  return *this;
}

OddYForm& OddYForm::operator-=(const OddYForm& o) {
  check(o);
  for (const auto& [j, a] : o.terms_) add_term(j, -a);
  return *this;
}

OddYForm OddYForm::scaled(const ZqElem& c) const {
  OddYForm r(curve_);
  for (const auto& [j, a] : terms_) r.add_term(j, a.scaled(c));
  return r;
}

bool OddYForm::operator==(const OddYForm& o) const {
  check(o);
  return terms_ == o.terms_;
}

OddYForm fold_into_poles(const OddYForm& u) {
  OddYForm r(u.curve());
  const auto& P = u.curve()->P();
  for (const auto& [j, a] : u.terms()) {
    if (j >= 0) {
      r.add_term(j, a);
      continue;
    }
    ZqPoly folded = a;
    for (int m = 0; m < -j; ++m) folded *= P;
    r.add_term(0, folded);
  }
  return r;
}

OddYForm exact_pole_differential(const CurvePtr& curve, const ZqPoly& C, int s) {
  if (s < 3 || s % 2 == 0) throw ZetaError(ErrorCode::kInvalidParams, "pole order must be odd and >= 3");
  const auto& params = curve->params();
  OddYForm r(curve);
  r.add_term((s - 3) / 2, C.derivative());
  ZqElem half = ZqElem::from_int(params, 2).inverse();
  ZqElem factor = -(ZqElem::from_int(params, s - 2) * half);
  r.add_term((s - 1) / 2, (C * curve->dP()).scaled(factor));
  return r;
}

OddYForm exact_infinity_differential(const CurvePtr& curve, const ZqPoly& C) {
  const auto& params = curve->params();
  OddYForm r(curve);
  ZqElem half = ZqElem::from_int(params, 2).inverse();
  r.add_term(0, C.derivative() * curve->P() + (C * curve->dP()).scaled(half));
  return r;
}

}  // namespace hyperzeta
