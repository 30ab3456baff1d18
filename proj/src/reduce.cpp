#include "hyperzeta/reduce.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

#include "hyperzeta/error.hpp"
#include "hyperzeta/frobenius.hpp"

namespace hyperzeta {
namespace {

ZqElem scalar(const ParamsPtr& params, Residue r) {
  std::vector<Residue> c(params->degree(), 0);
  c[0] = r;
  return ZqElem(params, std::move(c));
}

ZqElem shift_down(const ZqElem& a, int v) {
  const auto& ring = a.params()->ring();
  std::vector<Residue> c(a.coeffs().begin(), a.coeffs().end());
  for (auto& x : c) x = ring.shift_down(x, v);
  return ZqElem(a.params(), std::move(c));
}

// Working state of one reduction: the pending pole slots and the scale.
class Reducer {
 public:
  Reducer(const LiftedCurve& curve, int guard, bool rescale)
      : curve_(curve), params_(curve.params()), guard_(guard), rescale_(rescale) {}

  std::map<int, ZqPoly> slots;
  ReductionStats stats;

  ZqPoly take(int j) {
    auto it = slots.find(j);
    if (it == slots.end()) return ZqPoly(params_);
    ZqPoly a = std::move(it->second);
    slots.erase(it);
    return a;
  }

  void put(int j, const ZqPoly& a) {
    if (a.is_zero()) return;
    auto [it, fresh] = slots.emplace(j, a);
    if (!fresh) it->second += a;
  }

  // A dx / y^s -> result dx / y^(s-2)
  ZqPoly pole_step(const ZqPoly& A, int s) {
    auto d = curve_.bezout().decompose(A);
    ZqPoly t = d.C.derivative().scaled_int(2);
    const auto [v, unit] = params_->ring().split(static_cast<uint64_t>(s - 2));
    if (v > 0) {
      const int need = v - t.valuation();
      if (need > 0) {
        rescale(need, &t);
        d.B.multiply_p_power(need);
      }
      t.divide_p_power(v);
      stats.pole_shift = std::max(stats.pole_shift, v);
      check_guard();
    }
    if (unit != 1) t = t.scaled(scalar(params_, params_->ring().inverse(unit)));
    return d.B + t;
  }

  // Removes the coefficient of x^m (m >= 2g) from A.
  void infinity_step(ZqPoly& A, int m) {
    const int g = curve_.genus();
    const int t = m - 2 * g;
    ZqElem a = A.coeff(m);
    if (a.is_zero()) return;
    const auto [v, unit] = params_->ring().split(static_cast<uint64_t>(2 * m - 2 * g + 1));
    if (v > 0) {
      const int need = v - a.valuation();
      if (need > 0) {
        rescale(need, &A);
        a = A.coeff(m);
      }
      a = shift_down(a, v);
      stats.infinity_shift = std::max(stats.infinity_shift, v);
      check_guard();
    }
    const ZqElem c = a * scalar(params_, params_->ring().inverse(unit));
    if (t > 0) {
      const ZqElem c2 = -(ZqElem::from_int(params_, 2 * static_cast<int64_t>(t)) * c);
      A.add_scaled_shifted(curve_.P(), c2.coeffs().data(), t - 1);
    }
    const ZqElem neg = -c;
    A.add_scaled_shifted(curve_.dP(), neg.coeffs().data(), t);
    if (A.length() > m && !A.coeff(m).is_zero()) {
      throw ZetaError(ErrorCode::kInconsistentResult, "infinity step left a leading term");
    }
  }

  void infinity_cascade(ZqPoly& A) {
    const int bound = 2 * curve_.genus();
    for (int m = A.degree(); m >= bound; --m) {
      if (m > A.degree()) continue;
      infinity_step(A, m);
    }
  }

  void check_guard() const {
    if (stats.digits_consumed() > guard_) {
      throw ZetaError(ErrorCode::kGuardExhausted, "reduction consumed " + std::to_string(stats.digits_consumed()) +
                                                      " digits, guard is " + std::to_string(guard_));
    }
  }

 private:
  void rescale(int need, ZqPoly* working) {
    if (!rescale_) {
      throw ZetaError(ErrorCode::kGuardExhausted, "exact division by a multiple of p leaves Z_q");
    }
    for (auto& [j, a] : slots) a.multiply_p_power(need);
    working->multiply_p_power(need);
    stats.scale += need;
    check_guard();
  }

  const LiftedCurve& curve_;
  ParamsPtr params_;
  int guard_;
  bool rescale_;
};

}  // namespace

ZqPoly reduce_pole_step(const ZqPoly& A, int s, const LiftedCurve& curve) {
  if (s < 3 || s % 2 == 0) throw ZetaError(ErrorCode::kInvalidParams, "pole order must be odd and >= 3");
  Reducer r(curve, curve.params()->precision(), false);
  return r.pole_step(A, s);
}

InfinityStep reduce_infinity_step(const ZqPoly& A, const LiftedCurve& curve) {
  InfinityStep out{A, 0};
  if (A.degree() < 2 * curve.genus()) return out;
  Reducer r(curve, curve.params()->precision(), false);
  const int m = A.degree();
  r.infinity_step(out.A, m);
  out.degree_drop = m - out.A.degree();
  return out;
}

BasisVector reduce_to_basis(const OddYForm& u, int guard, ReductionOrder order) {
  const auto& curve = *u.curve();
  const auto& params = curve.params();
  Reducer r(curve, guard, true);
  r.check_guard();
  const OddYForm folded = fold_into_poles(u);
  // A dx/y^(2j+1) with A = sum A_i P^i is sum A_i dx/y^(2(j-i)+1): spreading
  // long numerators over the lower slots up front keeps every pole step small.
  const int plen = curve.P().length();
  for (const auto& [j, a] : folded.terms()) {
    if (j < 1 || a.length() <= 2 * plen) {
      r.put(j, a);
      continue;
    }
    auto e = base_expansion(a, curve.P(), j);
    for (int i = 0; i < j; ++i) r.put(j - i, e.digits[i]);
    r.put(0, e.quotient);
  }

  if (order == ReductionOrder::kTopDown) {
    while (!r.slots.empty() && r.slots.rbegin()->first > 0) {
      const int j = r.slots.rbegin()->first;
      ZqPoly A = r.take(j);
      r.put(j - 1, r.pole_step(A, 2 * j + 1));
    }
  } else {
    ZqPoly A0 = r.take(0);
    r.infinity_cascade(A0);
    r.put(0, A0);
    while (!r.slots.empty() && r.slots.rbegin()->first > 0) {
      const int j = r.slots.rbegin()->first;
      auto qr = divmod(r.take(j), curve.P());
      r.put(j - 1, qr.quotient);
      r.put(j - 1, r.pole_step(qr.remainder, 2 * j + 1));
      if (j == 1) {
        ZqPoly a = r.take(0);
        r.infinity_cascade(a);
        r.put(0, a);
      }
    }
  }
  ZqPoly A0 = r.take(0);
  r.infinity_cascade(A0);

  BasisVector out;
  const int dim = 2 * curve.genus();
  out.coords.reserve(dim);
  for (int i = 0; i < dim; ++i) out.coords.push_back(i < A0.length() ? A0.coeff(i) : ZqElem(params));
  out.stats = r.stats;
  return out;
}

namespace {

template <class F>
void parallel_for(int count, int threads, F&& body) {
  threads = std::clamp(threads, 1, std::max(1, count));
  if (threads == 1) {
    for (int i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Brings columns with individual scales to a common one, then divides out
// as much of p as the entries allow. Returns (matrix, denominator, digits
// of the stored entries that are reliable).
struct Normalized {
  ZqMatrix matrix;
  int denominator;
  int precision;
  int consumed;
};

Normalized normalize_columns(const ParamsPtr& params, const std::vector<BasisVector>& cols) {
  const int dim = static_cast<int>(cols.size());
  const int Nw = params->precision();
  int e = 0;
  for (const auto& c : cols) e = std::max(e, c.stats.scale);
  ZqMatrix m(params, dim);
  int consumed = 0;
  int reliable = Nw - e;  // relative to true units scaled by p^e
  for (int i = 0; i < dim; ++i) {
    const auto& s = cols[i].stats;
    consumed = std::max(consumed, s.digits_consumed());
    const ZqElem lift = ZqElem::from_int(params, static_cast<int64_t>(params->p())).pow(e - s.scale);
    for (int r = 0; r < dim; ++r) m.at(r, i) = cols[i].coords[r] * lift;
    reliable = std::min(reliable, Nw - (s.pole_shift + s.infinity_shift + 1) - s.scale);
  }
  const int shift = std::min(e, m.valuation());
  m.divide_p_power(shift);
  const int delta = e - shift;
  return {std::move(m), delta, reliable + delta, consumed};
}

}  // namespace

FrobMatrix frobenius_matrix(const CurvePtr& curve, int truncation, int guard, int threads, ReductionOrder order) {
  FrobeniusSeries series(curve, truncation);
  const int dim = 2 * curve->genus();
  std::vector<BasisVector> cols(dim);
  parallel_for(dim, threads, [&](int i) { cols[i] = reduce_to_basis(series.image(i), guard, order); });
  auto n = normalize_columns(curve->params(), cols);
  return FrobMatrix{std::move(n.matrix), n.denominator, n.precision, guard, n.consumed};
}

FrobMatrix change_to_y3_basis(const FrobMatrix& phi, const CurvePtr& curve, int guard) {
  const auto& params = curve->params();
  const int dim = 2 * curve->genus();
  std::vector<BasisVector> cols(dim);
  for (int i = 0; i < dim; ++i) {
    OddYForm u(curve);
    u.add_term(1, ZqPoly::monomial(ZqElem::from_int(params, 1), i));
    cols[i] = reduce_to_basis(u, guard);
  }
  // A common scale on T cancels in T^-1 Phi T^sigma.
  auto t = normalize_columns(params, cols);
  const ZqMatrix& T = t.matrix;
  const ZqElem det = T.determinant();
  const int v = det.valuation();
  if (v >= std::min(t.precision, phi.precision)) {
    throw ZetaError(ErrorCode::kNotUnit, "change of basis to x^i dx / y^3 is singular at this precision");
  }
  const ZqElem unit_inv = shift_down(det, v).inverse();
  ZqMatrix x = T.adjugate() * phi.matrix * T.sigma();
  x.scale(unit_inv);
  const int total = phi.denominator + v;
  const int shift = std::min(total, x.valuation());
  x.divide_p_power(shift);
  FrobMatrix out{std::move(x), total - shift, std::min(phi.precision, t.precision) - shift, guard,
                 std::max(phi.guard_consumed, t.consumed)};
  return out;
}

}  // namespace hyperzeta
