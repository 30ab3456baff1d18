#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperzeta/error.hpp"
#include "hyperzeta/oracle.hpp"
#include "support.hpp"

using namespace hyperzeta;
using test_support::prime_curve;

TEST_CASE("quadratic character") {
  FqTower f7(7, 1, 1);
  CHECK(quadratic_character(f7, f7.from_int(0)) == 0);
  CHECK(quadratic_character(f7, f7.from_int(1)) == 1);
  CHECK(quadratic_character(f7, f7.from_int(3)) == -1);
  for (int a : {1, 2, 4}) CHECK(quadratic_character(f7, f7.from_int(a)) == 1);
  // every element of F_7 is a square in F_49
  FqTower f49(7, 1, 2);
  for (int a = 1; a < 7; ++a) CHECK(quadratic_character(f49, f49.from_int(a)) == 1);
  // agrees with the squares table on F_125
  FqTower f(5, 3, 1);
  std::vector<int> square(f.size(), -1);
  square[0] = 0;
  for (uint64_t i = 1; i < f.size(); ++i) {
    auto x = f.from_index(i);
    square[f.index(f.mul(x, x))] = 1;
  }
  for (uint64_t i = 0; i < f.size(); ++i) CHECK(quadratic_character(f, f.from_index(i)) == square[i]);
}

TEST_CASE("tower construction") {
  FqTower t(5, 2, 3);
  CHECK(t.degree() == 6);
  CHECK(FqTower::irreducible(t.modulus(), 5));
  // the F_25 modulus x^2 + 2 has theta as a root
  CHECK(t.index(t.add(t.mul(t.theta(), t.theta()), t.from_int(2))) == 0);
  // the embedding respects + and x on samples
  std::mt19937_64 rng(1);
  for (int i = 0; i < 50; ++i) {
    std::vector<int64_t> a{static_cast<int64_t>(rng() % 5), static_cast<int64_t>(rng() % 5)};
    std::vector<int64_t> b{static_cast<int64_t>(rng() % 5), static_cast<int64_t>(rng() % 5)};
    std::vector<int64_t> sum{(a[0] + b[0]) % 5, (a[1] + b[1]) % 5};
    // (a0 + a1 t)(b0 + b1 t) with t^2 = -2
    std::vector<int64_t> prod{((a[0] * b[0] - 2 * a[1] * b[1]) % 5 + 5) % 5, (a[0] * b[1] + a[1] * b[0]) % 5};
    CHECK(t.embed(sum) == t.add(t.embed(a), t.embed(b)));
    CHECK(t.embed(prod) == t.mul(t.embed(a), t.embed(b)));
  }
  CHECK(FqTower::first_irreducible(7, 2) == std::vector<uint32_t>{1, 0, 1});
  CHECK(FqTower::first_irreducible(5, 2) == std::vector<uint32_t>{2, 0, 1});
}

TEST_CASE("naive counts") {
  CHECK(naive_count(prime_curve(7, {0, -1, 0, 1}), 1) == 8);
  CHECK(naive_count(prime_curve(5, {1, 1, 0, 1}), 1) == 9);
  CHECK(naive_count(prime_curve(7, {0, -1, 0, 1}), 2) == 64);
  CHECK(naive_count(prime_curve(7, {0, -1, 0, 1}), 2, kDefaultBudget, 4) == 64);
  try {
    naive_count(prime_curve(7, {0, -1, 0, 1}), 9);
    FAIL("expected BudgetExceeded");
  } catch (const ZetaError& e) {
    CHECK(e.code() == ErrorCode::kBudgetExceeded);
  }
}

TEST_CASE("counts are independent of the field modulus") {
  auto spec = prime_curve(5, {1, 2, 0, 3, 0, 1});
  // x^2 + 2 and x^2 + 3 are both irreducible over F_5
  CHECK(naive_count(spec, 2, kDefaultBudget, 1, {2, 0, 1}) == naive_count(spec, 2, kDefaultBudget, 1, {3, 0, 1}));
  CurveSpec ext;
  ext.p = 7;
  ext.n = 2;
  ext.modulus = {1, 0, 1};
  ext.coeffs = {{3, 1}, {1}, {0}, {1}};
  // x^4 + x + 1 and x^4 + 2x + 3 over F_7 (both irreducible)
  const auto a = naive_count(ext, 2, kDefaultBudget, 1, {1, 1, 0, 0, 1});
  const auto b = naive_count(ext, 2, kDefaultBudget, 1, {3, 2, 0, 0, 1});
  CHECK(a == b);
  CHECK(a == naive_count(ext, 2));
}

TEST_CASE("parity of counts on random curves") {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    const uint64_t p = trial % 2 ? 5 : 7;
    std::vector<int64_t> f(4);
    for (auto& x : f) x = static_cast<int64_t>(rng() % p);
    f[3] = 1;
    auto spec = prime_curve(p, f);
    // roots of P contribute one point each, other x contribute 0 or 2
    int roots = 0;
    for (uint64_t x = 0; x < p; ++x) {
      int64_t v = 0;
      for (int k = 3; k >= 0; --k) v = (v * static_cast<int64_t>(x) + f[k]) % static_cast<int64_t>(p);
      roots += v == 0;
    }
    CHECK((naive_count(spec, 1) - 1 - roots) % 2 == 0);
  }
}

TEST_CASE("verify report") {
  auto spec = prime_curve(7, {0, -1, 0, 1});
  auto ok = verify(spec, {1, 0, 7}, 2);
  CHECK(ok.all_agree());
  CHECK(ok.entries.size() == 2);
  auto bad = verify(spec, {1, 1, 7}, 1);
  CHECK_FALSE(bad.all_agree());
  CHECK(bad.entries[0].predicted == 9);  // q + 1 + a_1
  CHECK(*bad.entries[0].observed == 8);
  auto partial = verify(spec, {1, 0, 7}, 3, 100);
  CHECK(partial.entries.size() == 3);
  CHECK(partial.entries[1].agree());
  CHECK_FALSE(partial.entries[2].observed.has_value());
  CHECK(partial.budget_exceeded());
}
