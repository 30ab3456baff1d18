#include "hyperzeta/oracle.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "hyperzeta/error.hpp"

namespace hyperzeta {
namespace {

using Poly = std::vector<uint64_t>;  // over F_p, constant first, trimmed

void trim(Poly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

uint64_t inv_mod(uint64_t a, uint64_t p) {
  // p prime: a^(p-2)
  unsigned __int128 r = 1, b = a % p;
  for (uint64_t e = p - 2; e; e >>= 1) {
    if (e & 1) r = r * b % p;
    b = b * b % p;
  }
  return static_cast<uint64_t>(r);
}

Poly poly_mod(Poly a, const Poly& m, uint64_t p) {
  trim(a);
  const uint64_t lead_inv = inv_mod(m.back(), p);
  while (a.size() >= m.size()) {
    const uint64_t c = static_cast<uint64_t>(static_cast<unsigned __int128>(a.back()) * lead_inv % p);
    const size_t off = a.size() - m.size();
    for (size_t j = 0; j < m.size(); ++j) {
      a[off + j] = static_cast<uint64_t>((a[off + j] + static_cast<unsigned __int128>(p - c) * m[j]) % p);
    }
    trim(a);
  }
  return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, uint64_t p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j)
      r[i + j] = static_cast<uint64_t>((r[i + j] + static_cast<unsigned __int128>(a[i]) * b[j]) % p);
  return poly_mod(std::move(r), m, p);
}

Poly poly_gcd(Poly a, Poly b, uint64_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = poly_mod(a, b, p);
    a = std::move(b);
    b = std::move(r);
  }
  return a;
}

}  // namespace

bool FqTower::irreducible(const std::vector<uint32_t>& f32, uint64_t p) {
  // Ben-Or: f is irreducible iff gcd(u^(p^i) - u, f) = 1 for i <= deg f / 2
  Poly f(f32.begin(), f32.end());
  trim(f);
  const int d = static_cast<int>(f.size()) - 1;
  if (d < 1) return false;
  if (d == 1) return true;
  Poly x = poly_mod(Poly{0, 1}, f, p);
  Poly power = x;
  for (int i = 1; i <= d / 2; ++i) {
    // power <- power^p
    Poly base = power, acc{1};
    for (uint64_t e = p; e; e >>= 1) {
      if (e & 1) acc = poly_mulmod(acc, base, f, p);
      base = poly_mulmod(base, base, f, p);
    }
    power = acc;
    Poly diff = power;
    diff.resize(std::max<size_t>(diff.size(), 2), 0);
    diff[1] = (diff[1] + p - 1) % p;
    trim(diff);
    if (diff.empty()) return false;
    if (poly_gcd(f, diff, p).size() != 1) return false;
  }
  return true;
}

std::vector<uint32_t> FqTower::first_irreducible(uint64_t p, int d) {
  std::vector<uint32_t> f(d + 1, 0);
  f[d] = 1;
  while (true) {
    if (irreducible(f, p)) return f;
    int i = 0;
    while (i < d && ++f[i] == p) f[i++] = 0;
    if (i == d) throw ZetaError(ErrorCode::kInconsistentResult, "no irreducible polynomial found");
  }
}

FqTower::FqTower(uint64_t p, int n, int m, std::vector<int64_t> fq_modulus, std::vector<int64_t> field_modulus)
    : p_(p), n_(n), D_(n * m) {
  if (p < 3 || p >= (uint64_t{1} << 32) || n < 1 || m < 1) {
    throw ZetaError(ErrorCode::kInvalidParams, "field tower needs an odd prime below 2^32 and n, m >= 1");
  }
  size_ = 1;
  for (int i = 0; i < D_; ++i) {
    if (size_ > (uint64_t{1} << 62) / p) throw ZetaError(ErrorCode::kBudgetExceeded, "field too large");
    size_ *= p;
  }
  auto reduce_digits = [&](const std::vector<int64_t>& v) {
    std::vector<uint32_t> r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = static_cast<uint32_t>(((v[i] % int64_t(p)) + int64_t(p)) % int64_t(p));
    return r;
  };
  if (field_modulus.empty()) {
    f_ = first_irreducible(p, D_);
  } else {
    f_ = reduce_digits(field_modulus);
    if (static_cast<int>(f_.size()) != D_ + 1 || f_.back() != 1 || !irreducible(f_, p)) {
      throw ZetaError(ErrorCode::kInvalidParams, "field modulus must be monic irreducible of degree n*m");
    }
  }
  theta_ = zero();
  if (n_ > 1) {
    fq_modulus_ = fq_modulus.empty() ? first_irreducible(p, n_) : reduce_digits(fq_modulus);
    bool found = false;
    for (uint64_t i = 0; i < size_ && !found; ++i) {
      Elem x = from_index(i);
      Elem v = zero();
      for (int k = n_; k >= 0; --k) v = add(mul(v, x), from_int(fq_modulus_[k]));
      if (index(v) == 0) {
        theta_ = x;
        found = true;
      }
    }
    if (!found) throw ZetaError(ErrorCode::kInconsistentResult, "F_q modulus has no root in the tower");
  }
}

FqTower::Elem FqTower::one() const { return from_int(1); }

FqTower::Elem FqTower::from_int(int64_t v) const {
  Elem r = zero();
  const int64_t p = static_cast<int64_t>(p_);
  r[0] = static_cast<uint32_t>(((v % p) + p) % p);
  return r;
}

FqTower::Elem FqTower::from_index(uint64_t i) const {
  Elem r(D_);
  for (int k = 0; k < D_; ++k) {
    r[k] = static_cast<uint32_t>(i % p_);
    i /= p_;
  }
  return r;
}

uint64_t FqTower::index(const Elem& a) const {
  uint64_t r = 0;
  for (int k = D_ - 1; k >= 0; --k) r = r * p_ + a[k];
  return r;
}

FqTower::Elem FqTower::add(const Elem& a, const Elem& b) const {
  Elem r(D_);
  for (int k = 0; k < D_; ++k) r[k] = static_cast<uint32_t>((uint64_t{a[k]} + b[k]) % p_);
  return r;
}

FqTower::Elem FqTower::sub(const Elem& a, const Elem& b) const {
  Elem r(D_);
  for (int k = 0; k < D_; ++k) r[k] = static_cast<uint32_t>((uint64_t{a[k]} + p_ - b[k]) % p_);
  return r;
}

void FqTower::mul_into(const uint32_t* a, const uint32_t* b, uint32_t* out, uint64_t* s) const {
  const int len = 2 * D_ - 1;
  std::fill(s, s + len, 0);
  for (int i = 0; i < D_; ++i) {
    if (!a[i]) continue;
    for (int j = 0; j < D_; ++j) s[i + j] = (s[i + j] + uint64_t{a[i]} * b[j]) % p_;
  }
  for (int k = len - 1; k >= D_; --k) {
    const uint64_t c = s[k];
    if (!c) continue;
    for (int j = 0; j < D_; ++j) s[k - D_ + j] = (s[k - D_ + j] + (p_ - f_[j]) * c) % p_;
  }
  for (int k = 0; k < D_; ++k) out[k] = static_cast<uint32_t>(s[k]);
}

FqTower::Elem FqTower::mul(const Elem& a, const Elem& b) const {
  Elem r(D_);
  std::vector<uint64_t> scratch(2 * D_);
  mul_into(a.data(), b.data(), r.data(), scratch.data());
  return r;
}

FqTower::Elem FqTower::pow(Elem a, unsigned __int128 e) const {
  Elem r = one();
  for (; e; e >>= 1) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
  }
  return r;
}

FqTower::Elem FqTower::embed(const std::vector<int64_t>& coords) const {
  Elem r = zero();
  Elem power = one();
  for (size_t k = 0; k < coords.size(); ++k) {
    if (k > 0) {
      if (n_ == 1) {
        if (coords[k] % static_cast<int64_t>(p_) != 0) {
          throw ZetaError(ErrorCode::kInvalidParams, "prime-field coefficient has extra coordinates");
        }
        continue;
      }
      power = mul(power, theta_);
    }
    r = add(r, mul(power, from_int(coords[k])));
  }
  return r;
}

int quadratic_character(const FqTower& field, const FqTower::Elem& a) {
  if (field.index(a) == 0) return 0;
  unsigned __int128 e = 1;
  for (int i = 0; i < field.degree(); ++i) e *= field.p();
  const auto r = field.pow(a, (e - 1) / 2);
  return field.index(r) == 1 ? 1 : -1;
}

uint64_t naive_count(const CurveSpec& spec, int m, uint64_t budget, int threads, std::vector<int64_t> field_modulus) {
  if (m < 1) throw ZetaError(ErrorCode::kInvalidParams, "extension degree m must be positive");
  // q^m within budget, computed without overflow
  {
    unsigned __int128 size = 1;
    for (int i = 0; i < spec.n * m; ++i) {
      size *= spec.p;
      if (size > budget) {
        throw ZetaError(ErrorCode::kBudgetExceeded,
                        "F_{q^" + std::to_string(m) + "} exceeds the enumeration budget of " + std::to_string(budget));
      }
    }
  }
  const FqTower field(spec.p, spec.n, m, spec.modulus, std::move(field_modulus));
  const int D = field.degree();
  const uint64_t size = field.size();
  const int deg = static_cast<int>(spec.coeffs.size()) - 1;
  std::vector<FqTower::Elem> coeffs;
  for (const auto& c : spec.coeffs) coeffs.push_back(field.embed(c));

  // squares table: y^2 for every y
  std::vector<uint8_t> square(size, 0);
  {
    std::vector<uint64_t> scratch(2 * D);
    FqTower::Elem y(D), y2(D);
    for (uint64_t i = 0; i < size; ++i) {
      y = field.from_index(i);
      field.mul_into(y.data(), y.data(), y2.data(), scratch.data());
      square[field.index(y2)] = 1;
    }
  }

  threads = static_cast<int>(std::clamp<uint64_t>(threads, 1, std::max<uint64_t>(1, size / 4096)));
  std::atomic<uint64_t> total{0};
  auto worker = [&](uint64_t lo, uint64_t hi) {
    std::vector<uint64_t> scratch(2 * D);
    FqTower::Elem x(D), v(D), t(D);
    uint64_t local = 0;
    for (uint64_t i = lo; i < hi; ++i) {
      x = field.from_index(i);
      v = coeffs[deg];
      for (int k = deg - 1; k >= 0; --k) {
        field.mul_into(v.data(), x.data(), t.data(), scratch.data());
        for (int c = 0; c < D; ++c) v[c] = static_cast<uint32_t>((uint64_t{t[c]} + coeffs[k][c]) % spec.p);
      }
      const uint64_t idx = field.index(v);
      local += idx == 0 ? 1 : (square[idx] ? 2 : 0);
    }
    total += local;
  };
  std::vector<std::thread> pool;
  const uint64_t chunk = (size + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const uint64_t lo = t * chunk, hi = std::min(size, lo + chunk);
    if (lo < hi) pool.emplace_back(worker, lo, hi);
  }
  for (auto& th : pool) th.join();
  return total + 1;
}

bool VerifyReport::all_agree() const {
  return std::all_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return e.agree(); });
}

bool VerifyReport::budget_exceeded() const {
  return std::any_of(entries.begin(), entries.end(), [](const VerifyEntry& e) { return !e.observed; });
}

VerifyReport verify(const CurveSpec& spec, const std::vector<Integer>& Q, int mmax, uint64_t budget, int threads) {
  VerifyReport report;
  Integer q = 1;
  for (int i = 0; i < spec.n; ++i) q *= spec.p;
  for (int m = 1; m <= mmax; ++m) {
    VerifyEntry e;
    e.m = m;
    e.predicted = counts_from_Q(Q, q, m);
    try {
      e.observed = naive_count(spec, m, budget, threads);
    } catch (const ZetaError& err) {
      if (err.code() != ErrorCode::kBudgetExceeded) throw;
    }
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace hyperzeta
