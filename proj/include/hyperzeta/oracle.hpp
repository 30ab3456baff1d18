#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "hyperzeta/curve_spec.hpp"
#include "hyperzeta/zeta.hpp"

namespace hyperzeta {

/// F_{q^m} = F_p[u]/(f(u)), deg f = n m, with F_q = F_p[t]/(m(t)) embedded
/// by t -> theta, a root of m found by exhaustive search. Self-contained:
/// nothing here touches the p-adic code.
class FqTower {
 public:
  using Elem = std::vector<uint32_t>;  // coefficients of 1, u, ..., u^(D-1)

  /// `fq_modulus`: n+1 integers, constant first (ignored for n = 1; empty
  /// selects the first irreducible in base-p digit order). `field_modulus`
  /// optionally fixes f; otherwise the first irreducible of degree n m.
  FqTower(uint64_t p, int n, int m, std::vector<int64_t> fq_modulus = {},
          std::vector<int64_t> field_modulus = {});

  uint64_t p() const { return p_; }
  int degree() const { return D_; }
  uint64_t size() const { return size_; }
  const std::vector<uint32_t>& modulus() const { return f_; }
  const Elem& theta() const { return theta_; }

  Elem zero() const { return Elem(D_, 0); }
  Elem one() const;
  Elem from_int(int64_t v) const;
  /// Elements are numbered by their coordinates read as base-p digits.
  Elem from_index(uint64_t i) const;
  uint64_t index(const Elem& a) const;

  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem pow(Elem a, unsigned __int128 e) const;
  /// Image of the F_q element with F_p-coordinates `coords`.
  Elem embed(const std::vector<int64_t>& coords) const;

  /// Monic irreducible over F_p of degree d, first in base-p digit order.
  static std::vector<uint32_t> first_irreducible(uint64_t p, int d);
  static bool irreducible(const std::vector<uint32_t>& f, uint64_t p);

 /// Allocation-free product; `scratch` holds 2D words.
  void mul_into(const uint32_t* a, const uint32_t* b, uint32_t* out, uint64_t* scratch) const;

 private:

  uint64_t p_;
  int n_, D_;
  uint64_t size_;
  std::vector<uint32_t> f_;  // monic, D+1 entries
  std::vector<uint32_t> fq_modulus_;
  Elem theta_;
};

/// 0 for zero, else a^((|F|-1)/2) mapped to +1 or -1.
int quadratic_character(const FqTower& field, const FqTower::Elem& a);

constexpr uint64_t kDefaultBudget = uint64_t{1} << 24;

/// #X(F_{q^m}) for the smooth projective model (one point at infinity).
/// Throws BudgetExceeded when q^m > budget.
uint64_t naive_count(const CurveSpec& spec, int m, uint64_t budget = kDefaultBudget, int threads = 1,
                     std::vector<int64_t> field_modulus = {});

struct VerifyEntry {
  int m = 0;
  Integer predicted = 0;
  std::optional<uint64_t> observed;  // empty when over budget
  bool agree() const { return observed && static_cast<Integer>(*observed) == predicted; }
};

struct VerifyReport {
  std::vector<VerifyEntry> entries;
  bool all_agree() const;
  bool budget_exceeded() const;
};

/// Compares counts_from_Q with naive_count for m = 1..mmax. Disagreement and
/// budget overruns are reported, not thrown.
VerifyReport verify(const CurveSpec& spec, const std::vector<Integer>& Q, int mmax,
                    uint64_t budget = kDefaultBudget, int threads = 1);

}  // namespace hyperzeta
