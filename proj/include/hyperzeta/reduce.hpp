#pragma once

#include <vector>

#include "hyperzeta/curve.hpp"
#include "hyperzeta/matrix.hpp"

namespace hyperzeta {

/// Bookkeeping for one reduction, all in p-adic digits.
struct ReductionStats {
  int scale = 0;           // the form was multiplied by p^scale to keep divisions exact
  int pole_shift = 0;      // largest p-power divided out by a pole step
  int infinity_shift = 0;  // largest p-power divided out by an infinity step

  /// Digits of the working precision that can no longer be trusted.
  int digits_consumed() const { return scale + pole_shift + infinity_shift + 1; }
};

/// Coordinates on x^i dx / y, i < 2g. The true coordinates are
/// coords / p^stats.scale.
struct BasisVector {
  std::vector<ZqElem> coords;
  ReductionStats stats;
};

enum class ReductionOrder {
  kTopDown,      // highest pole first, then the whole infinity cascade
  kInterleaved,  // clear high degree at level 0 first, normalise by P before each pole step
};

/// One pole step: A dx / y^s  ~  (B + 2 C' / (s-2)) dx / y^(s-2) where
/// A = P B + P' C. Throws GuardExhausted when s-2 is divisible by p and C'
/// is not.
ZqPoly reduce_pole_step(const ZqPoly& A, int s, const LiftedCurve& curve);

struct InfinityStep {
  ZqPoly A;
  int degree_drop = 0;
};

/// Removes the leading term a x^m dx / y (m >= 2g) using
/// d(x^t y) = (t x^(t-1) P + x^t P' / 2) dx / y with t = m - 2g.
/// Returns A unchanged with degree_drop 0 when deg A < 2g.
InfinityStep reduce_infinity_step(const ZqPoly& A, const LiftedCurve& curve);

/// Reduces a form supported on j >= 0 (negative indices are folded first) to
/// the basis. Whenever a division by a multiple of p would leave Z_q, the
/// whole form is rescaled by the missing p-power; GuardExhausted is thrown
/// once stats.digits_consumed() exceeds `guard`.
BasisVector reduce_to_basis(const OddYForm& u, int guard, ReductionOrder order = ReductionOrder::kTopDown);

/// Matrix of Frobenius on H^1_- in the basis x^i dx / y, one column per basis
/// element, integral after removing the common denominator p^denominator.
struct FrobMatrix {
  ZqMatrix matrix;
  int denominator = 0;     // true matrix = matrix / p^denominator
  int precision = 0;       // entries of `matrix` are correct modulo p^precision
  int guard = 0;
  int guard_consumed = 0;  // max digits consumed over all columns
};

FrobMatrix frobenius_matrix(const CurvePtr& curve, int truncation, int guard, int threads = 1,
                            ReductionOrder order = ReductionOrder::kTopDown);

/// The same operator in the basis x^i dx / y^3, obtained from `phi` by the
/// change of basis T (columns: reductions of x^i dx / y^3):
/// Phi_3 = T^-1 Phi T^sigma.
FrobMatrix change_to_y3_basis(const FrobMatrix& phi, const CurvePtr& curve, int guard);

}  // namespace hyperzeta
