#pragma once

#include <vector>

#include "hyperzeta/curve.hpp"

namespace hyperzeta {

/// Binomial coefficient C(-1/2, k) = (-1)^k C(2k, k) / 4^k as an element of
/// Z_p at the working precision of `params`.
ZqElem binom_half(int k, const ParamsPtr& params);

/// Pole index carrying the k-th series term: (p(2k+1) - 1) / 2.
int series_pole_index(uint64_t p, int k);

/// The truncated expansion of the Frobenius lift of dx/y,
///   F(dx / y) = p x^(p-1) sum_k C(-1/2, k) E(x)^k dx / y^(p(2k+1)),
/// with the terms p C(-1/2, k) E^k precomputed once per curve.
class FrobeniusSeries {
 public:
  FrobeniusSeries(CurvePtr curve, int truncation);

  int truncation() const { return K_; }
  const CurvePtr& curve() const { return curve_; }
  /// F(x^i dx / y) truncated after the K-th term.
  OddYForm image(int i) const;

 private:
  CurvePtr curve_;
  int K_;
  std::vector<ZqPoly> terms_;  // p C(-1/2,k) E^k; identically zero terms are dropped
};

OddYForm frobenius_basis_image(const CurvePtr& curve, int i, int truncation);

}  // namespace hyperzeta
