#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperzeta/error.hpp"
#include "hyperzeta/frobenius.hpp"
#include "hyperzeta/reduce.hpp"
#include "support.hpp"

using namespace hyperzeta;
using namespace test_support;

namespace {

constexpr int kWork = 12;   // working digits
constexpr int kGuard = 8;   // comparisons are made modulo p^(kWork - kGuard)

}  // namespace

TEST_CASE("pole step") {
  auto c = validate_curve(prime_curve(7, {1, 1, 0, 1}), 6);
  const auto& P = c->params();
  CHECK(reduce_pole_step(c->dP(), 3, *c).is_zero());
  CHECK(reduce_pole_step(c->P(), 5, *c) == ZqPoly::from_ints(P, {1}));
  CHECK(reduce_pole_step(ZqPoly::from_ints(P, {1}), 3, *c) ==
        rational_poly(P, {Rational(9, 31), Rational(6, 31)}));
  // d((6x^2 - 9x + 4) / (31 y)) links the two levels
  auto exact = exact_pole_differential(c, rational_poly(P, {Rational(4, 31), Rational(-9, 31), Rational(6, 31)}), 3);
  CHECK(reduce_pole_step(exact.term(1), 3, *c) == -exact.term(0));
  CHECK_THROWS_AS(reduce_pole_step(ZqPoly::from_ints(P, {1}), 4, *c), ZetaError);
}

TEST_CASE("pole step division by p") {
  auto c = validate_curve(prime_curve(5, {1, 1, 0, 1}), 6);
  try {
    reduce_pole_step(ZqPoly::from_ints(c->params(), {1}), 7, *c);
    FAIL("expected GuardExhausted");
  } catch (const ZetaError& e) {
    CHECK(e.code() == ErrorCode::kGuardExhausted);
  }
  // C' divisible by 5: A = 5 x P' gives C = 5x, C' = 5
  auto A = ZqPoly::from_ints(c->params(), {0, 5}) * c->dP();
  CHECK(reduce_pole_step(A, 7, *c) == ZqPoly::from_ints(c->params(), {2}));
}

TEST_CASE("infinity step") {
  auto c1 = validate_curve(prime_curve(7, {1, 1, 0, 1}), 1);
  auto r1 = reduce_infinity_step(ZqPoly::from_ints(c1->params(), {0, 0, 0, 1}), *c1);
  CHECK(r1.A == ZqPoly::from_ints(c1->params(), {1, 5}));
  CHECK(r1.degree_drop == 2);

  auto c = validate_curve(prime_curve(7, {1, 1, 0, 1}), 5);
  auto r = reduce_infinity_step(ZqPoly::from_ints(c->params(), {0, 0, 0, 1}), *c);
  CHECK(r.A == rational_poly(c->params(), {Rational(-2, 5), Rational(-3, 5)}));

  auto low = ZqPoly::from_ints(c->params(), {3, 4});
  auto same = reduce_infinity_step(low, *c);
  CHECK(same.A == low);
  CHECK(same.degree_drop == 0);

  OddYForm dp(c);
  dp.add_term(0, c->dP());
  CHECK(is_zero_class(reduce_to_basis(dp, kGuard), 5));
}

TEST_CASE("basis elements and exact forms reduce as expected") {
  for (auto [p, g] : {std::pair{5ull, 1}, std::pair{7ull, 2}, std::pair{3ull, 3}, std::pair{11ull, 3}}) {
    CAPTURE(p);
    CAPTURE(g);
    auto c = curve_of_genus(p, g, kWork);
    const auto& P = c->params();
    for (int i = 0; i < 2 * g; ++i) {
      OddYForm u(c);
      u.add_term(0, ZqPoly::monomial(ZqElem::from_int(P, 1), i));
      auto v = reduce_to_basis(u, kGuard);
      for (int k = 0; k < 2 * g; ++k) CHECK(v.coords[k] == ZqElem::from_int(P, k == i ? 1 : 0));
    }
    OddYForm dp3(c);
    dp3.add_term(1, c->dP());
    CHECK(is_zero_class(reduce_to_basis(dp3, kGuard), kWork - kGuard));

    std::mt19937_64 rng(p * 100 + g);
    for (int trial = 0; trial < 100; ++trial) {
      const int s = 3 + 2 * static_cast<int>(rng() % 5);
      auto C = random_poly(P, static_cast<int>(rng() % (2 * g + 1)), rng);
      auto v = reduce_to_basis(exact_pole_differential(c, C, s), kGuard);
      CHECK(is_zero_class(v, kWork - kGuard));
      auto w = reduce_to_basis(exact_infinity_differential(c, C), kGuard);
      CHECK(is_zero_class(w, kWork - kGuard));
    }
  }
}

TEST_CASE("linearity and order independence") {
  for (auto [p, g] : {std::pair{5ull, 1}, std::pair{3ull, 2}, std::pair{7ull, 3}}) {
    CAPTURE(p);
    auto c = curve_of_genus(p, g, kWork);
    std::mt19937_64 rng(p + 31 * g);
    for (int trial = 0; trial < 100; ++trial) {
      auto u = random_form(c, rng), v = random_form(c, rng);
      auto a = random_elem(c->params(), rng), b = random_elem(c->params(), rng);
      auto lhs = reduce_to_basis(a * u + b * v, kGuard);
      auto ru = reduce_to_basis(u, kGuard), rv = reduce_to_basis(v, kGuard);
      const int e = std::max(ru.stats.scale, rv.stats.scale);
      BasisVector rhs{{}, {}};
      rhs.stats.scale = e;
      auto xu = at_scale(ru, e), xv = at_scale(rv, e);
      for (size_t i = 0; i < xu.size(); ++i) rhs.coords.push_back(a * xu[i] + b * xv[i]);
      CHECK(same_class(lhs, rhs, kWork - kGuard));
      CHECK(same_class(ru, reduce_to_basis(u, kGuard, ReductionOrder::kInterleaved), kWork - kGuard));
    }
  }
}

TEST_CASE("guard budget is enforced") {
  auto c = validate_curve(prime_curve(5, {1, 1, 0, 1}), 6);
  OddYForm u(c);
  u.add_term(3, ZqPoly::from_ints(c->params(), {1}));  // dx / y^7: divides by 5
  CHECK_NOTHROW(reduce_to_basis(u, 4));
  try {
    reduce_to_basis(u, 1);
    FAIL("expected GuardExhausted");
  } catch (const ZetaError& e) {
    CHECK(e.code() == ErrorCode::kGuardExhausted);
  }
}

TEST_CASE("frobenius matrix") {
  SUBCASE("integral for p > 2g + 1") {
    for (auto [p, coeffs] : {std::pair{7ull, std::vector<int64_t>{0, -1, 0, 1}},
                             std::pair{7ull, std::vector<int64_t>{3, 1, 4, 1, 5, 1}},
                             std::pair{11ull, std::vector<int64_t>{1, 2, 0, 3, 0, 1}}}) {
      auto c = validate_curve(prime_curve(p, coeffs), 10);
      auto phi = frobenius_matrix(c, 9, 8);
      CHECK(phi.denominator == 0);
      CHECK(phi.matrix.size() == 2 * c->genus());
      CHECK(phi.guard_consumed <= 8);
    }
  }
  SUBCASE("column i is the reduced image of x^i dx / y; threads do not change it") {
    auto c = validate_curve(prime_curve(5, {1, 2, 0, 3, 0, 1}), 12);
    auto one = frobenius_matrix(c, 11, 10, 1);
    auto four = frobenius_matrix(c, 11, 10, 4);
    CHECK(one.matrix == four.matrix);
    CHECK(one.precision == four.precision);
    auto col = reduce_to_basis(frobenius_basis_image(c, 2, 11), 10);
    const auto& P = c->params();
    const ZqElem five = ZqElem::from_int(P, 5);
    for (int r = 0; r < 4; ++r) {
      CHECK(equal_mod(one.matrix.at(r, 2) * five.pow(col.stats.scale), col.coords[r] * five.pow(one.denominator),
                      one.precision));
    }
  }
  SUBCASE("y3 basis gives a similar matrix") {
    auto c = validate_curve(prime_curve(7, {3, 1, 4, 1, 5, 1}), 12);
    auto phi = frobenius_matrix(c, 11, 9);
    auto phi3 = change_to_y3_basis(phi, c, 9);
    // same characteristic polynomial for n = 1
    const int digits = std::min(phi.precision, phi3.precision) - phi3.denominator * 4;
    auto a = phi.matrix.reverse_charpoly(), b = phi3.matrix.reverse_charpoly();
    for (int i = 1; i <= 4; ++i) {
      const int shift = phi3.denominator * i;
      const auto& ring = c->params()->ring();
      CHECK(a[i][0] % ring.power(digits) == ring.shift_down(b[i][0], shift) % ring.power(digits));
    }
  }
}
