#include "hyperzeta/frobenius.hpp"

#include <string>

#include "hyperzeta/error.hpp"

namespace hyperzeta {

ZqElem binom_half(int k, const ParamsPtr& params) {
  if (k < 0) throw ZetaError(ErrorCode::kInvalidParams, "binomial index must be >= 0");
  const auto& ring = params->ring();
  // C(2k, k) via C(2i, i) = C(2i-2, i-1) * 2(2i-1) / i, tracking the p-part exactly
  Residue unit = 1;
  int val = 0;
  for (int i = 1; i <= k; ++i) {
    auto [vn, un] = ring.split(2 * static_cast<uint64_t>(2 * i - 1));
    auto [vd, ud] = ring.split(static_cast<uint64_t>(i));
    unit = ring.mul(ring.mul(unit, un), ring.inverse(ud));
    val += vn - vd;
  }
  Residue central = val >= params->precision() ? 0 : ring.shift_up(unit, val);
  Residue quarter = ring.inverse(4 % ring.modulus());
  Residue r = ring.mul(central, ring.pow(quarter, static_cast<uint64_t>(k)));
  if (k % 2 == 1) r = ring.neg(r);
  std::vector<Residue> c(params->degree(), 0);
  c[0] = r;
  return ZqElem(params, std::move(c));
}

int series_pole_index(uint64_t p, int k) { return static_cast<int>((p * (2 * static_cast<uint64_t>(k) + 1) - 1) / 2); }

FrobeniusSeries::FrobeniusSeries(CurvePtr curve, int truncation) : curve_(std::move(curve)), K_(truncation) {
  if (truncation < 0) throw ZetaError(ErrorCode::kInvalidParams, "series truncation must be >= 0");
  const auto& params = curve_->params();
  const auto p = static_cast<int64_t>(params->p());
  // term k is divisible by p^(k+1), so terms with k+1 >= Nw vanish identically
  const int last = std::min(K_, params->precision() - 2);
  ZqPoly power = ZqPoly::from_ints(params, {1});
  for (int k = 0; k <= last; ++k) {
    if (k > 0) power *= curve_->E();
    terms_.push_back(power.scaled(binom_half(k, params) * ZqElem::from_int(params, p)));
  }
}

OddYForm FrobeniusSeries::image(int i) const {
  const int g = curve_->genus();
  if (i < 0 || i >= 2 * g) throw ZetaError(ErrorCode::kInvalidParams, "basis index out of range 0..2g-1");
  const auto p = static_cast<int>(curve_->params()->p());
  OddYForm form(curve_);
  for (size_t k = 0; k < terms_.size(); ++k) {
    form.add_term(series_pole_index(p, static_cast<int>(k)), terms_[k].shifted(p * i + p - 1));
  }
  return form;
}

OddYForm frobenius_basis_image(const CurvePtr& curve, int i, int truncation) {
  return FrobeniusSeries(curve, truncation).image(i);
}

}  // namespace hyperzeta
