#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hyperzeta/frobenius.hpp"
#include "support.hpp"

using namespace hyperzeta;
using namespace test_support;

namespace {

using IntPoly = std::vector<int64_t>;

IntPoly mul(const IntPoly& a, const IntPoly& b) {
  IntPoly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

// Power series in z truncated after z^K: Newton iteration for (1 + z)^(-1/2).
std::vector<ZqElem> newton_inverse_sqrt(const ParamsPtr& P, int K) {
  auto series_mul = [&](const std::vector<ZqElem>& a, const std::vector<ZqElem>& b) {
    std::vector<ZqElem> r(K + 1, ZqElem(P));
    for (int i = 0; i <= K; ++i)
      for (int j = 0; i + j <= K; ++j) r[i + j] += a[i] * b[j];
    return r;
  };
  std::vector<ZqElem> one_plus_z(K + 1, ZqElem(P)), r(K + 1, ZqElem(P));
  one_plus_z[0] = ZqElem::from_int(P, 1);
  if (K >= 1) one_plus_z[1] = ZqElem::from_int(P, 1);
  r[0] = ZqElem::from_int(P, 1);
  const ZqElem half = ZqElem::from_int(P, 2).inverse(), three = ZqElem::from_int(P, 3);
  for (int precision = 1; precision <= 2 * K + 2; precision *= 2) {
    auto t = series_mul(one_plus_z, series_mul(r, r));
    for (auto& c : t) c = -c;
    t[0] += three;
    r = series_mul(r, t);
    for (auto& c : r) c *= half;
  }
  return r;
}

}  // namespace

TEST_CASE("binom_half") {
  auto P = PadicParams::create(7, 1, 2);
  CHECK(binom_half(0, P) == ZqElem::from_int(P, 1));
  CHECK(binom_half(1, P) == -ZqElem::from_int(P, 2).inverse());
  CHECK(binom_half(2, P) == ZqElem::from_int(P, 31));
  // k with large p-part in C(2k,k) and 4^k: exact for p = 3 up to k = 40
  auto Q = PadicParams::create(3, 2, 8);
  CHECK(newton_inverse_sqrt(Q, 40) == [&] {
    std::vector<ZqElem> v;
    for (int k = 0; k <= 40; ++k) v.push_back(binom_half(k, Q));
    return v;
  }());
}

TEST_CASE("series pole index") {
  CHECK(series_pole_index(5, 0) == 2);
  CHECK(series_pole_index(5, 1) == 7);
  CHECK(series_pole_index(7, 2) == 17);
}

TEST_CASE("frobenius image against exact integer expansion") {
  // p = 5, P = x^3 + x + 1, i = 0, K = 1
  auto curve = validate_curve(prime_curve(5, {1, 1, 0, 1}), 6);
  const auto& params = curve->params();
  const IntPoly P{1, 1, 0, 1};
  IntPoly P5{1};
  for (int i = 0; i < 5; ++i) P5 = mul(P5, P);
  IntPoly E(16, 0);
  for (size_t i = 0; i < P.size(); ++i) E[5 * i] += P[i];
  for (size_t i = 0; i < P5.size(); ++i) E[i] -= P5[i];
  IntPoly x4E = mul({0, 0, 0, 0, 1}, E);

  RationalPoly slot7;
  for (auto c : x4E) slot7.push_back(Rational(-5 * c, 2));
  auto u = frobenius_basis_image(curve, 0, 1);
  CHECK(u.terms().size() == 2);
  CHECK(u.term(2) == ZqPoly::from_ints(params, {0, 0, 0, 0, 5}));
  CHECK(u.term(7) == rational_poly(params, slot7));
  CHECK(curve->E() == ZqPoly::from_ints(params, E));
}

TEST_CASE("frobenius image structure") {
  CurveSpec s = prime_curve(7, {3, 1, 4, 1, 5, 1});
  auto curve = validate_curve(s, 5);
  const int K = 3;
  FrobeniusSeries series(curve, K);
  for (int i = 0; i < 2 * curve->genus(); ++i) {
    auto u = series.image(i);
    for (const auto& [j, a] : u.terms()) {
      bool listed = false;
      for (int k = 0; k <= K; ++k) listed = listed || j == series_pole_index(7, k);
      CHECK(listed);
    }
    CHECK(u == frobenius_basis_image(curve, i, K));
    // modulo p^2 only the leading term survives: 7 x^(7i+6) at slot 3
    for (const auto& [j, a] : u.terms()) {
      if (j == 3) {
        CHECK(a == ZqPoly::monomial(ZqElem::from_int(curve->params(), 7), 7 * i + 6));
      } else {
        CHECK(vanishes_mod(a, 2));
      }
    }
  }
}

TEST_CASE("truncated square root squares back to the Frobenius of P") {
  // T = sum_{k<=K} C_k E^k P^(p(K-k)) satisfies T^2 P^sigma(x^p) = P^(p(2K+1)) mod p^(K+1)
  for (auto [p, n, K] : {std::tuple{5ull, 1, 2}, std::tuple{3ull, 2, 3}}) {
    CurveSpec s = prime_curve(p, {1, 1, 0, 1});
    s.n = n;
    if (n == 2) s.coeffs[0] = {1, 1};
    auto curve = validate_curve(s, K + 3);
    const auto& params = curve->params();
    ZqPoly Pp = ZqPoly::from_ints(params, {1});
    for (uint64_t i = 0; i < p; ++i) Pp *= curve->P();
    std::vector<ZqPoly> Ppow{ZqPoly::from_ints(params, {1})};
    for (int i = 0; i <= 2 * K + 1; ++i) Ppow.push_back(Ppow.back() * Pp);
    ZqPoly T(params), Ek = ZqPoly::from_ints(params, {1});
    for (int k = 0; k <= K; ++k) {
      T += (Ek * Ppow[K - k]).scaled(binom_half(k, params));
      Ek *= curve->E();
    }
    auto lhs = T * T * curve->P().sigma().substitute_power(static_cast<int>(p));
    CHECK(vanishes_mod(lhs - Ppow[2 * K + 1], K + 1));
  }
}
