#pragma once

#include <vector>

#include "hyperzeta/padic.hpp"

namespace hyperzeta {

/// Square matrix over W/p^Nw, column-major.
class ZqMatrix {
 public:
  ZqMatrix(ParamsPtr params, int size);
  static ZqMatrix identity(ParamsPtr params, int size);

  const ParamsPtr& params() const { return params_; }
  int size() const { return size_; }
  ZqElem& at(int row, int col) { return entries_[static_cast<size_t>(col) * size_ + row]; }
  const ZqElem& at(int row, int col) const { return entries_[static_cast<size_t>(col) * size_ + row]; }

  friend ZqMatrix operator*(const ZqMatrix& a, const ZqMatrix& b);
  bool operator==(const ZqMatrix& o) const { return entries_ == o.entries_; }
  ZqMatrix sigma(int times = 1) const;
  ZqMatrix transposed() const;
  /// Minimum entry valuation (the precision for the zero matrix).
  int valuation() const;
  void multiply_p_power(int v);
  void divide_p_power(int v);
  void scale(const ZqElem& c);

  /// Coefficients c_0 = 1, c_1, ..., c_n of det(I - t M) = sum c_i t^i,
  /// computed by the division-free Berkowitz algorithm.
  std::vector<ZqElem> reverse_charpoly() const;
  ZqElem determinant() const;
  ZqMatrix adjugate() const;

 private:
  ParamsPtr params_;
  int size_;
  std::vector<ZqElem> entries_;
};

}  // namespace hyperzeta
