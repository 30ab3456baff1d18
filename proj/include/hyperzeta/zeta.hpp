#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "hyperzeta/curve.hpp"
#include "hyperzeta/reduce.hpp"

namespace hyperzeta {

/// Exact integers for Q(t) and point counts.
using Integer = __int128;

std::string to_string(Integer v);

/// N: digits that pin Q; guard: extra working digits; Nw = N + guard;
/// K: last retained term of the Frobenius series.
struct PrecisionPlan {
  int N = 0;
  int guard = 0;
  int Nw = 0;
  int K = 0;
  int guard_required = 0;  // smallest admissible guard for this K
};

/// Smallest N with p^N > 2 C(2g,g) q^(g/2).
int uniqueness_digits(int g, uint64_t p, int n);
/// Guard digits needed for series truncation K (see README for the terms).
int required_guard(int g, uint64_t p, int n, int K);
/// Default plan: minimal N, K = Nw - 1 iterated with the guard to a fixed point.
PrecisionPlan required_precision(int g, uint64_t p, int n);

struct PlanOverrides {
  std::optional<int> precision;  // N
  std::optional<int> guard;      // absolute guard, or an increment when guard_relative
  bool guard_relative = false;
  std::optional<int> truncation;  // K
};

/// Applies user overrides, refusing (InvalidParams) any that violate the
/// plan inequalities.
PrecisionPlan make_plan(int g, uint64_t p, int n, const PlanOverrides& overrides);

/// Matrix of the q-power Frobenius F^n in the same basis. With columns
/// holding images, F^n = Phi Phi^sigma ... Phi^(sigma^(n-1)).
FrobMatrix q_power_matrix(const FrobMatrix& phi, int n);

/// Unique integer a with a = r mod p^N and a^2 <= bound_sq; throws
/// LiftAmbiguous when no such integer exists or it is not unique.
Integer lift_weil(Integer r, Integer modulus, Integer bound_sq);

struct LiftedPolynomial {
  std::vector<Integer> Q;   // 2g+1 coefficients, constant first
  int det_check_digits = 0;  // digits to which det(M) = q^g was confirmed
};

/// Reads Q(t) = det(I - t M) off the q-power matrix and lifts it into the
/// Weil window. Coefficients above g come from the functional equation and
/// are checked against the matrix wherever digits remain.
LiftedPolynomial lift_Q(const FrobMatrix& M, const PrecisionPlan& plan, int g);

/// #X(F_{q^m}) from Q via Newton's identities.
Integer counts_from_Q(const std::vector<Integer>& Q, Integer q, int m);

enum class BasisMode { kY1, kY3 };
const char* basis_name(BasisMode b);

struct ZetaOptions {
  PlanOverrides overrides;
  BasisMode basis = BasisMode::kY1;
  int threads = 1;
  ReductionOrder order = ReductionOrder::kTopDown;
};

struct StageTimes {
  double lift = 0, frobenius = 0, charpoly = 0, total = 0;  // seconds
};

struct ZetaResult {
  CurveSpec spec;  // with the field modulus filled in
  int genus = 0;
  uint64_t p = 0;
  int n = 1;
  Integer q = 0;
  std::vector<std::vector<int64_t>> lifted_P;  // digits of the lift of P
  PrecisionPlan plan;
  BasisMode basis = BasisMode::kY1;
  std::vector<Integer> Q;
  Integer group_order = 0;
  std::vector<Integer> counts;  // m = 1..g+1
  int guard_consumed = 0;
  int denominator = 0;  // p-power denominator of Phi
  int det_check_digits = 0;
  StageTimes times;
  long peak_memory_kb = 0;
};

/// Validates the curve and runs plan -> lift -> Phi -> q-power matrix -> Q.
ZetaResult assemble_zeta(const CurveSpec& spec, const ZetaOptions& options = {});

/// Hard checks on an emitted Q: Q(0) = 1, functional equation, Weil bounds,
/// Q(1) > 0. Throws InconsistentResult naming the failed property.
void check_structure(const std::vector<Integer>& Q, Integer q, int g);

}  // namespace hyperzeta
