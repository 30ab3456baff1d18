#include "hyperzeta/zeta.hpp"

#include <sys/resource.h>

#include <algorithm>
#include <chrono>

#include "hyperzeta/error.hpp"

namespace hyperzeta {
namespace {

constexpr Integer kIntegerLimit = static_cast<Integer>(1) << 120;

Integer checked_mul(Integer a, Integer b) {
  Integer r;
  if (__builtin_mul_overflow(a, b, &r) || r > kIntegerLimit || r < -kIntegerLimit) {
    throw ZetaError(ErrorCode::kPrecisionRange, "integer result exceeds 120 bits");
  }
  return r;
}

Integer ipow(Integer b, int e) {
  Integer r = 1;
  for (int i = 0; i < e; ++i) r = checked_mul(r, b);
  return r;
}

Integer binomial(int n, int k) {
  Integer r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// floor(log_p x) for x >= 1
int flog(uint64_t p, uint64_t x) {
  int e = 0;
  while (x >= p) {
    x /= p;
    ++e;
  }
  return e;
}

// smallest e with p^e >= x
int clog(uint64_t p, uint64_t x) {
  int e = 0;
  unsigned __int128 v = 1;
  while (v < x) {
    v *= p;
    ++e;
  }
  return e;
}

// Digits lost to divisions while reducing series term k, beyond the p^(k+1)
// that the term carries.
int term_excess(int g, uint64_t p, int k) {
  const uint64_t pole = p * (2 * static_cast<uint64_t>(k) + 1) - 2;
  const uint64_t degree = 2 * g * p - 1 + static_cast<uint64_t>(k) * p * (2 * g + 1);
  const uint64_t infinity = 2 * degree - 2 * g + 1;
  return flog(p, pole) + flog(p, infinity) - (k + 1);
}

int scale_allowance(int g, uint64_t p, int K) {
  int s = 0;
  for (int k = 0; k <= K; ++k) s = std::max(s, term_excess(g, p, k));
  return s;
}

int denominator_allowance(int g, uint64_t p, int n, int K) {
  return p <= static_cast<uint64_t>(2 * g + 1) ? 2 * g * n * scale_allowance(g, p, K) : 0;
}

Integer residue_to_integer(Residue r) { return static_cast<Integer>(r); }

double seconds_since(std::chrono::steady_clock::time_point t) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t).count();
}

}  // namespace

std::string to_string(Integer v) {
  if (v < 0) return "-" + to_string(static_cast<Residue>(-v));
  return to_string(static_cast<Residue>(v));
}

int uniqueness_digits(int g, uint64_t p, int n) {
  const Integer q = ipow(p, n);
  const Integer c = binomial(2 * g, g);
  const Integer bound = checked_mul(checked_mul(4, checked_mul(c, c)), ipow(q, g));
  int N = 1;
  Integer pn = p;
  while (pn * pn <= bound) {
    pn *= p;
    ++N;
  }
  return N;
}

int required_guard(int g, uint64_t p, int n, int K) {
  const uint64_t jmax = (p * (2 * static_cast<uint64_t>(K) + 1) - 1) / 2;
  const int base = clog(p, (2 * g + 1) * (jmax + 1)) + clog(p, 2 * jmax + 1) + 1;
  return base + scale_allowance(g, p, K) + denominator_allowance(g, p, n, K);
}

PrecisionPlan required_precision(int g, uint64_t p, int n) {
  return make_plan(g, p, n, {});
}

PrecisionPlan make_plan(int g, uint64_t p, int n, const PlanOverrides& o) {
  if (g < 1 || n < 1 || p < 3) throw ZetaError(ErrorCode::kInvalidParams, "invalid genus, degree or prime");
  const int N0 = uniqueness_digits(g, p, n);
  PrecisionPlan plan;
  plan.N = N0;
  if (o.precision) {
    if (*o.precision < N0) {
      throw ZetaError(ErrorCode::kInvalidParams, "precision " + std::to_string(*o.precision) +
                                                     " does not pin Q; at least " + std::to_string(N0) +
                                                     " digits are required");
    }
    plan.N = *o.precision;
  }
  // default: guard(K) with K = N + guard - 1, iterated to a fixed point
  int default_guard = required_guard(g, p, n, plan.N);
  for (int it = 0; it < 1000; ++it) {
    const int next = required_guard(g, p, n, plan.N + default_guard - 1);
    if (next == default_guard) break;
    default_guard = next;
  }

  if (o.guard) {
    plan.guard = o.guard_relative ? default_guard + *o.guard : *o.guard;
  } else if (o.truncation) {
    plan.guard = required_guard(g, p, n, *o.truncation);
  } else {
    plan.guard = default_guard;
  }
  plan.Nw = plan.N + plan.guard;
  plan.K = o.truncation ? *o.truncation : plan.Nw - 1;
  if (plan.K < 1) throw ZetaError(ErrorCode::kInvalidParams, "truncation must be at least 1");

  plan.guard_required = required_guard(g, p, n, plan.K);
  if (plan.guard < plan.guard_required) {
    throw ZetaError(ErrorCode::kInvalidParams, "guard " + std::to_string(plan.guard) + " is below the required " +
                                                   std::to_string(plan.guard_required) + " digits");
  }
  if (o.truncation) {
    // omitted term k has valuation >= -term_excess(k) after reduction
    const int den = denominator_allowance(g, p, n, plan.K + 3);
    for (int k = plan.K + 1; k <= plan.K + 3; ++k) {
      if (-term_excess(g, p, k) - den < plan.N) {
        throw ZetaError(ErrorCode::kInvalidParams,
                        "truncation " + std::to_string(plan.K) + " drops series terms that affect the result");
      }
    }
  }
  return plan;
}

FrobMatrix q_power_matrix(const FrobMatrix& phi, int n) {
  FrobMatrix m = phi;
  for (int k = 1; k < n; ++k) m.matrix = m.matrix * phi.matrix.sigma(k);
  m.denominator = phi.denominator * n;
  return m;
}

Integer lift_weil(Integer r, Integer modulus, Integer bound_sq) {
  int fits = 0;
  Integer found = 0;
  for (Integer c : {r, r - modulus}) {
    if (c * c <= bound_sq) {
      ++fits;
      found = c;
    }
  }
  if (fits != 1) {
    throw ZetaError(ErrorCode::kLiftAmbiguous, "residue " + to_string(r) + " mod " + to_string(modulus) +
                                                   (fits == 0 ? " has no lift" : " has two lifts") +
                                                   " in the Weil window");
  }
  return found;
}

LiftedPolynomial lift_Q(const FrobMatrix& M, const PrecisionPlan& plan, int g) {
  const auto& params = M.matrix.params();
  const auto& ring = params->ring();
  const int n = params->degree();
  const Integer q = ipow(params->p(), n);
  const auto c = M.matrix.reverse_charpoly();
  const int R = std::min(M.precision, params->precision());

  // Coefficient i of det(I - t M_true), reduced mod p^digits; nullopt if no digits survive.
  auto coefficient = [&](int i, int& digits) -> std::vector<Residue> {
    const int shift = M.denominator * i;
    digits = R - shift;
    std::vector<Residue> out(n, 0);
    if (digits <= 0) return out;
    for (int k = 0; k < n; ++k) {
      const Residue v = c[i][k];
      if (shift > 0 && v % ring.power(shift) != 0) {
        throw ZetaError(ErrorCode::kInconsistentResult,
                        "coefficient " + std::to_string(i) + " of det(I - tM) is not integral");
      }
      out[k] = ring.shift_down(v, shift) % ring.power(digits);
    }
    return out;
  };

  LiftedPolynomial out;
  out.Q.assign(2 * g + 1, 0);
  out.Q[0] = 1;
  const Integer pN = residue_to_integer(ring.power(plan.N));
  for (int i = 1; i <= g; ++i) {
    int digits = 0;
    auto v = coefficient(i, digits);
    if (digits < plan.N) {
      throw ZetaError(ErrorCode::kGuardExhausted, "only " + std::to_string(std::max(digits, 0)) +
                                                      " reliable digits for a_" + std::to_string(i) + ", need " +
                                                      std::to_string(plan.N));
    }
    for (int k = 1; k < n; ++k) {
      if (v[k] % ring.power(plan.N) != 0) {
        throw ZetaError(ErrorCode::kNotRational, "a_" + std::to_string(i) + " has a nonzero extension component");
      }
    }
    const Integer r = residue_to_integer(v[0] % ring.power(plan.N));
    const Integer b = binomial(2 * g, i);
    out.Q[i] = lift_weil(r, pN, checked_mul(checked_mul(b, b), ipow(q, i)));
  }
  for (int i = 1; i <= g; ++i) out.Q[g + i] = checked_mul(ipow(q, i), out.Q[g - i]);

  // whatever digits remain above g must agree with the functional equation
  for (int i = g + 1; i <= 2 * g; ++i) {
    int digits = 0;
    auto v = coefficient(i, digits);
    if (digits <= 0) continue;
    const Integer mod = residue_to_integer(ring.power(digits));
    Integer expect = out.Q[i] % mod;
    if (expect < 0) expect += mod;
    bool ok = residue_to_integer(v[0]) == expect;
    for (int k = 1; k < n; ++k) ok = ok && v[k] == 0;
    if (!ok) {
      throw ZetaError(ErrorCode::kInconsistentResult,
                      "coefficient " + std::to_string(i) + " of det(I - tM) contradicts the functional equation");
    }
    if (i == 2 * g) out.det_check_digits = digits;
  }
  return out;
}

Integer counts_from_Q(const std::vector<Integer>& Q, Integer q, int m) {
  // s_k = -k a_k - sum_{j=1}^{k-1} a_j s_{k-j}
  auto a = [&](int k) -> Integer { return k < static_cast<int>(Q.size()) ? Q[k] : 0; };
  std::vector<Integer> s(m + 1, 0);
  for (int k = 1; k <= m; ++k) {
    Integer v = -checked_mul(k, a(k));
    for (int j = 1; j < k; ++j) v -= checked_mul(a(j), s[k - j]);
    s[k] = v;
  }
  return ipow(q, m) + 1 - s[m];
}

const char* basis_name(BasisMode b) { return b == BasisMode::kY1 ? "y1" : "y3"; }

void check_structure(const std::vector<Integer>& Q, Integer q, int g) {
  auto fail = [](const std::string& what) { throw ZetaError(ErrorCode::kInconsistentResult, what); };
  if (static_cast<int>(Q.size()) != 2 * g + 1) fail("Q has the wrong degree");
  if (Q[0] != 1) fail("Q(0) != 1");
  for (int i = 1; i <= g; ++i) {
    if (Q[g + i] != checked_mul(ipow(q, i), Q[g - i])) fail("functional equation fails at a_" + std::to_string(g + i));
  }
  for (int i = 1; i <= 2 * g; ++i) {
    const Integer b = binomial(2 * g, i);
    if (checked_mul(Q[i], Q[i]) > checked_mul(checked_mul(b, b), ipow(q, i))) {
      fail("Weil bound fails at a_" + std::to_string(i));
    }
  }
  Integer at_one = 0;
  for (auto a : Q) at_one += a;
  if (at_one <= 0) fail("Q(1) <= 0");
}

ZetaResult assemble_zeta(const CurveSpec& spec, const ZetaOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  ZetaResult res;
  const auto base = validate_curve(spec, 1);
  res.spec = base->spec();
  res.genus = base->genus();
  res.p = spec.p;
  res.n = spec.n;
  res.basis = options.basis;
  const int g = res.genus;
  res.q = ipow(spec.p, spec.n);
  res.plan = make_plan(g, spec.p, spec.n, options.overrides);
  for (int i = 0; i <= res.spec.degree(); ++i) res.lifted_P.push_back(res.spec.coeff_digits(i));

  auto t = std::chrono::steady_clock::now();
  const auto curve = validate_curve(res.spec, res.plan.Nw);
  res.times.lift = seconds_since(t);

  t = std::chrono::steady_clock::now();
  FrobMatrix phi = frobenius_matrix(curve, res.plan.K, res.plan.guard, options.threads, options.order);
  if (options.basis == BasisMode::kY3) phi = change_to_y3_basis(phi, curve, res.plan.guard);
  res.times.frobenius = seconds_since(t);
  res.guard_consumed = phi.guard_consumed;
  res.denominator = phi.denominator;

  t = std::chrono::steady_clock::now();
  const FrobMatrix M = q_power_matrix(phi, spec.n);
  auto lifted = lift_Q(M, res.plan, g);
  res.times.charpoly = seconds_since(t);
  res.Q = std::move(lifted.Q);
  res.det_check_digits = lifted.det_check_digits;
  check_structure(res.Q, res.q, g);

  res.group_order = 0;
  for (auto a : res.Q) res.group_order += a;
  for (int m = 1; m <= g + 1; ++m) res.counts.push_back(counts_from_Q(res.Q, res.q, m));

  res.times.total = seconds_since(start);
  rusage usage{};
  if (getrusage(RUSAGE_SELF, &usage) == 0) res.peak_memory_kb = usage.ru_maxrss;
  return res;
}

}  // namespace hyperzeta
