#include "hyperzeta/matrix.hpp"

#include <algorithm>

#include "hyperzeta/error.hpp"

namespace hyperzeta {

ZqMatrix::ZqMatrix(ParamsPtr params, int size)
    : params_(std::move(params)), size_(size), entries_(static_cast<size_t>(size) * size, ZqElem(params_)) {}

ZqMatrix ZqMatrix::identity(ParamsPtr params, int size) {
  ZqMatrix m(params, size);
  for (int i = 0; i < size; ++i) m.at(i, i) = ZqElem::from_int(params, 1);
  return m;
}

ZqMatrix operator*(const ZqMatrix& a, const ZqMatrix& b) {
  if (a.size_ != b.size_) throw ZetaError(ErrorCode::kParamMismatch, "matrix sizes differ");
  require_compatible(*a.params_, *b.params_);
  ZqMatrix r(a.params_, a.size_);
  for (int i = 0; i < a.size_; ++i)
    for (int j = 0; j < a.size_; ++j) {
      ZqElem acc(a.params_);
      for (int k = 0; k < a.size_; ++k) acc += a.at(i, k) * b.at(k, j);
      r.at(i, j) = acc;
    }
  return r;
}

ZqMatrix ZqMatrix::sigma(int times) const {
  ZqMatrix r = *this;
  for (auto& e : r.entries_) e = e.sigma(times);
  return r;
}

ZqMatrix ZqMatrix::transposed() const {
  ZqMatrix r(params_, size_);
  for (int i = 0; i < size_; ++i)
    for (int j = 0; j < size_; ++j) r.at(j, i) = at(i, j);
  return r;
}

int ZqMatrix::valuation() const {
  int v = params_->precision();
  for (const auto& e : entries_) v = std::min(v, e.valuation());
  return v;
}

void ZqMatrix::multiply_p_power(int v) {
  const ZqElem pv = ZqElem::from_int(params_, static_cast<int64_t>(params_->p())).pow(static_cast<uint64_t>(v));
  for (auto& e : entries_) e *= pv;
}

void ZqMatrix::divide_p_power(int v) {
  if (v == 0) return;
  if (valuation() < v) throw ZetaError(ErrorCode::kGuardExhausted, "matrix is not divisible by the requested power of p");
  const auto& ring = params_->ring();
  for (auto& e : entries_) {
    std::vector<Residue> c(e.coeffs().begin(), e.coeffs().end());
    for (auto& x : c) x = ring.shift_down(x, v);
    e = ZqElem(params_, std::move(c));
  }
}

void ZqMatrix::scale(const ZqElem& c) {
  for (auto& e : entries_) e *= c;
}

std::vector<ZqElem> ZqMatrix::reverse_charpoly() const {
  // Berkowitz: the characteristic polynomial of the leading k x k block is
  // obtained from that of the (k-1) x (k-1) block by a Toeplitz product.
  const int n = size_;
  std::vector<ZqElem> poly{ZqElem::from_int(params_, 1)};  // det(tI - A_0) coefficients, highest first
  for (int k = 0; k < n; ++k) {
    // A_{k+1} = [[A_k, R], [S, a]] with R the column above the new diagonal, S the row left of it
    const ZqElem& a = at(k, k);
    std::vector<ZqElem> toeplitz;  // -1, a, S R, S A R, S A^2 R, ...
    toeplitz.push_back(ZqElem::from_int(params_, -1));
    toeplitz.push_back(a);
    std::vector<ZqElem> v(k, ZqElem(params_));
    for (int i = 0; i < k; ++i) v[i] = at(i, k);
    for (int power = 0; power < k; ++power) {
      ZqElem s(params_);
      for (int i = 0; i < k; ++i) s += at(k, i) * v[i];
      toeplitz.push_back(s);
      std::vector<ZqElem> nv(k, ZqElem(params_));
      for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) nv[i] += at(i, j) * v[j];
      v = std::move(nv);
    }
    // new poly = T * poly where T is (k+2) x (k+1) lower-triangular Toeplitz
    std::vector<ZqElem> next(k + 2, ZqElem(params_));
    for (int i = 0; i < k + 2; ++i)
      for (int j = 0; j <= std::min(i, k); ++j) next[i] += toeplitz[i - j] * poly[j];
    poly = std::move(next);
  }
  // Berkowitz yields det(A - tI) up to sign with highest power first; normalise to det(tI - A)
  const ZqElem lead = poly[0];
  if (lead == ZqElem::from_int(params_, -1)) {
    for (auto& c : poly) c = -c;
  }
  // det(I - tA) = t^n det(t^{-1} I - A): same coefficients, read lowest power first
  return poly;
}

ZqElem ZqMatrix::determinant() const {
  auto c = reverse_charpoly();
  ZqElem d = c[size_];
  return size_ % 2 == 0 ? d : -d;
}

ZqMatrix ZqMatrix::adjugate() const {
  const int n = size_;
  ZqMatrix adj(params_, n);
  if (n == 1) {
    adj.at(0, 0) = ZqElem::from_int(params_, 1);
    return adj;
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ZqMatrix minor(params_, n - 1);
      for (int r = 0, mr = 0; r < n; ++r) {
        if (r == i) continue;
        for (int c = 0, mc = 0; c < n; ++c) {
          if (c == j) continue;
          minor.at(mr, mc++) = at(r, c);
        }
        ++mr;
      }
      ZqElem cof = minor.determinant();
      adj.at(j, i) = ((i + j) % 2 == 0) ? cof : -cof;
    }
  return adj;
}

}  // namespace hyperzeta
