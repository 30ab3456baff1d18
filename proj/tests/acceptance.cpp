// Acceptance run: one PASS/FAIL line per criterion. Criterion 9 (timing) is
// informational and never fails the run.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>

#include "hyperzeta/oracle.hpp"
#include "hyperzeta/zeta.hpp"
#include "support.hpp"

using namespace hyperzeta;
using namespace test_support;

namespace {

struct Criterion {
  int id;
  std::string title;
  int checks = 0;
  int failures = 0;
  std::string first_failure;
  std::string note;

  void check(bool ok, const std::string& what) {
    ++checks;
    if (ok) return;
    if (failures++ == 0) first_failure = what;
  }
};

std::string describe(const CurveSpec& s) {
  std::ostringstream o;
  o << "p=" << s.p << " n=" << s.n << " P=[";
  for (size_t i = 0; i < s.coeffs.size(); ++i) {
    o << (i ? "," : "");
    if (s.n == 1) {
      o << s.coeffs[i][0];
    } else {
      o << "[";
      for (size_t k = 0; k < s.coeffs[i].size(); ++k) o << (k ? "," : "") << s.coeffs[i][k];
      o << "]";
    }
  }
  return o.str() + "]";
}

std::string poly_string(const std::vector<Integer>& Q) {
  std::string r = "[";
  for (size_t i = 0; i < Q.size(); ++i) r += (i ? "," : "") + to_string(Q[i]);
  return r + "]";
}

// Random monic squarefree P of the given degree over F_{p^n}.
CurveSpec random_curve(uint64_t p, int n, int degree, std::mt19937_64& rng) {
  for (;;) {
    CurveSpec s;
    s.p = p;
    s.n = n;
    for (int i = 0; i < degree; ++i) {
      std::vector<int64_t> c(n);
      for (auto& x : c) x = static_cast<int64_t>(rng() % p);
      s.coeffs.push_back(c);
    }
    std::vector<int64_t> one(n, 0);
    one[0] = 1;
    s.coeffs.push_back(one);
    try {
      validate_curve(s, 1);
      return s;
    } catch (const ZetaError&) {
    }
  }
}

class Acceptance {
 public:
  Acceptance() {
    const char* titles[] = {"",
                            "genus-1 agreement with brute force over F_5, F_7, F_11, F_13",
                            "genus-2 agreement for m = 1, 2 over F_5 and F_7",
                            "extension fields F_25 and F_49, m = 1, 2",
                            "structural invariants on every run",
                            "exact differentials reduce to zero",
                            "linearity and order independence of the reduction",
                            "guard vs guard+2 give identical Q",
                            "Frobenius automorphism contract",
                            "p-scaling of genus-2 runs (informational)",
                            "genus-4 curve over F_7"};
    for (int i = 0; i <= 10; ++i) c_.push_back({i, titles[i]});
  }

  // Full pipeline on one curve with the invariant and robustness checks
  // that apply to every acceptance curve; returns Q (empty on failure).
  std::vector<Integer> run_curve(Criterion& owner, const CurveSpec& spec, int mmax) {
    const std::string name = describe(spec);
    ZetaResult r;
    try {
      r = assemble_zeta(spec);
    } catch (const ZetaError& e) {
      owner.check(false, name + ": " + e.what());
      return {};
    }
    auto& inv = c_[4];
    try {
      check_structure(r.Q, r.q, r.genus);
      inv.check(true, "");
    } catch (const ZetaError& e) {
      inv.check(false, name + ": " + e.what());
    }
    inv.check(r.det_check_digits >= r.plan.N, name + ": det(M) = q^g confirmed to only " +
                                                  std::to_string(r.det_check_digits) + " digits");
    Integer q1 = 0;
    for (auto a : r.Q) q1 += a;
    inv.check(r.Q.front() == 1, name + ": Q(0) != 1");
    inv.check(q1 > 0 && q1 == r.group_order, name + ": group order is not Q(1) > 0");

    auto report = verify(r.spec, r.Q, mmax, kDefaultBudget, 4);
    for (const auto& e : report.entries) {
      owner.check(e.agree(), name + ": m=" + std::to_string(e.m) + " predicted " + to_string(e.predicted) +
                                 ", counted " + (e.observed ? std::to_string(*e.observed) : "n/a") + ", Q=" +
                                 poly_string(r.Q));
    }

    ZetaOptions plus2;
    plus2.overrides.guard = 2;
    plus2.overrides.guard_relative = true;
    try {
      auto r2 = assemble_zeta(spec, plus2);
      c_[7].check(r2.Q == r.Q, name + ": Q changed with two more guard digits");
    } catch (const ZetaError& e) {
      c_[7].check(false, name + ": guard+2 run failed: " + e.what());
    }
    return r.Q;
  }

  void genus_one() {
    auto& c = c_[1];
    auto x3mx = prime_curve(7, {0, -1, 0, 1});
    c.check(run_curve(c, x3mx, 1) == std::vector<Integer>{1, 0, 7}, "y^2 = x^3 - x over F_7: Q != 1 + 7t^2");
    auto x3x1 = prime_curve(5, {1, 1, 0, 1});
    c.check(run_curve(c, x3x1, 1) == std::vector<Integer>{1, 3, 5}, "y^2 = x^3 + x + 1 over F_5: Q != 1 + 3t + 5t^2");
    std::mt19937_64 rng(101);
    for (uint64_t p : {5, 7, 11, 13})
      for (int i = 0; i < 20; ++i) run_curve(c, random_curve(p, 1, 3, rng), 1);
  }

  void genus_two() {
    std::mt19937_64 rng(202);
    for (uint64_t p : {5, 7})
      for (int i = 0; i < 5; ++i) run_curve(c_[2], random_curve(p, 1, 5, rng), 2);
  }

  void extensions() {
    std::mt19937_64 rng(303);
    for (uint64_t p : {5, 7}) run_curve(c_[3], random_curve(p, 2, 3, rng), 2);
  }

  void exactness() {
    auto& c = c_[5];
    for (auto [p, g] : {std::pair{3ull, 1}, std::pair{5ull, 2}, std::pair{7ull, 3}, std::pair{3ull, 3}}) {
      const auto plan = required_precision(g, p, 1);
      auto curve = curve_of_genus(p, g, plan.Nw);
      const int digits = plan.Nw - plan.guard;
      std::mt19937_64 rng(p * 17 + g);
      for (int t = 0; t < 100; ++t) {
        const int s = 3 + 2 * static_cast<int>(rng() % 5);  // 3..11
        auto C = random_poly(curve->params(), static_cast<int>(rng() % (2 * g + 1)), rng);
        try {
          auto v = reduce_to_basis(exact_pole_differential(curve, C, s), plan.guard);
          c.check(is_zero_class(v, digits), "p=" + std::to_string(p) + " g=" + std::to_string(g) +
                                                " s=" + std::to_string(s) + ": nonzero class");
        } catch (const ZetaError& e) {
          c.check(false, "p=" + std::to_string(p) + " s=" + std::to_string(s) + ": " + e.what());
        }
      }
      c.note = "Nw, guard from the default plan";
    }
  }

  void linearity() {
    auto& c = c_[6];
    for (auto [p, g] : {std::pair{5ull, 1}, std::pair{3ull, 2}, std::pair{7ull, 3}}) {
      const auto plan = required_precision(g, p, 1);
      auto curve = curve_of_genus(p, g, plan.Nw);
      const int digits = plan.Nw - plan.guard;
      std::mt19937_64 rng(p * 29 + g);
      for (int t = 0; t < 100; ++t) {
        auto u = random_form(curve, rng), v = random_form(curve, rng);
        auto a = random_elem(curve->params(), rng), b = random_elem(curve->params(), rng);
        try {
          auto lhs = reduce_to_basis(a * u + b * v, plan.guard);
          auto ru = reduce_to_basis(u, plan.guard), rv = reduce_to_basis(v, plan.guard);
          const int e = std::max(ru.stats.scale, rv.stats.scale);
          BasisVector rhs{{}, {}};
          rhs.stats.scale = e;
          auto xu = at_scale(ru, e), xv = at_scale(rv, e);
          for (size_t i = 0; i < xu.size(); ++i) rhs.coords.push_back(a * xu[i] + b * xv[i]);
          c.check(same_class(lhs, rhs, digits), "p=" + std::to_string(p) + ": not linear");
          auto alt = reduce_to_basis(u, plan.guard, ReductionOrder::kInterleaved);
          c.check(same_class(ru, alt, digits), "p=" + std::to_string(p) + ": order dependent");
        } catch (const ZetaError& e) {
          c.check(false, "p=" + std::to_string(p) + ": " + e.what());
        }
      }
    }
  }

  void sigma_contract() {
    auto& c = c_[8];
    std::mt19937_64 rng(808);
    const std::tuple<uint64_t, int, int> fields[] = {{5, 2, 6}, {7, 3, 5}, {3, 5, 10}, {13, 4, 4}};
    for (auto [p, n, Nw] : fields) {
      auto P = PadicParams::create(p, n, Nw);
      const std::string f = "F_" + std::to_string(p) + "^" + std::to_string(n);
      for (int i = 0; i < 250; ++i) {
        auto a = random_elem(P, rng), b = random_elem(P, rng);
        c.check(a.sigma(n) == a, f + ": sigma^n != id");
        c.check(a.sigma().reduce_precision(1) == a.reduce_precision(1).pow(p), f + ": sigma(a) != a^p mod p");
        c.check((a + b).sigma() == a.sigma() + b.sigma(), f + ": not additive");
        c.check((a * b).sigma() == a.sigma() * b.sigma(), f + ": not multiplicative");
      }
    }
  }

  void scaling() {
    auto& c = c_[9];
    std::ostringstream o;
    double prev = 0;
    for (uint64_t p : {31, 61, 127}) {
      auto spec = prime_curve(p, {1, 2, 3, 4, 5, 1});
      const auto t0 = std::chrono::steady_clock::now();
      try {
        assemble_zeta(spec);
      } catch (const ZetaError& e) {
        c.check(false, "p=" + std::to_string(p) + ": " + e.what());
        continue;
      }
      const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      char buf[64];
      std::snprintf(buf, sizeof buf, "p=%llu %.3fs", static_cast<unsigned long long>(p), t);
      o << (prev > 0 ? ", " : "") << buf;
      if (prev > 0) {
        std::snprintf(buf, sizeof buf, " (x%.1f)", t / prev);
        o << buf;
        c.check(t / prev <= 3.0, "growth above 3x per doubling of p");
      }
      prev = t;
    }
    c.note = o.str();
  }

  void genus_four() {
    auto& c = c_[10];
    std::mt19937_64 rng(1010);
    auto spec = random_curve(7, 1, 9, rng);
    const auto t0 = std::chrono::steady_clock::now();
    const int before = c_[4].failures;
    auto Q = run_curve(c, spec, 1);
    const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.check(Q.size() == 9, describe(spec) + ": no degree-8 Q");
    c.check(c_[4].failures == before, describe(spec) + ": structural invariant failed");
    c.check(t < 600, "took longer than 10 minutes");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2fs including the guard+2 rerun", t);
    c.note = buf;
  }

  int report() {
    bool ok = true;
    for (int i = 1; i <= 10; ++i) {
      const auto& c = c_[i];
      const bool pass = c.failures == 0;
      const char* tag = i == 9 ? (pass ? "INFO PASS" : "INFO FAIL") : (pass ? "PASS" : "FAIL");
      std::cout << "[" << tag << "] " << i << ". " << c.title << " (" << c.checks << " checks";
      if (!c.note.empty()) std::cout << "; " << c.note;
      std::cout << ")";
      if (!pass) std::cout << " -- " << c.failures << " failed, first: " << c.first_failure;
      std::cout << "\n";
      if (i != 9) ok = ok && pass;
    }
    return ok ? 0 : 1;
  }

 private:
  std::vector<Criterion> c_;
};

}  // namespace

int main() {
  Acceptance a;
  a.genus_one();
  a.genus_two();
  a.extensions();
  a.exactness();
  a.linearity();
  a.sigma_contract();
  a.scaling();
  a.genus_four();
  return a.report();
}
