#ifndef PNORMCUT_MATRIX_HPP
#define PNORMCUT_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pnormcut/numerics.hpp"

namespace pnormcut {

/// Row-major rectangular matrix.
template <class T>
class DenseMatrix {
 public:
  using value_type = T;

  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}
  DenseMatrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) throw std::invalid_argument("matrix data size does not match its shape");
  }
  DenseMatrix(std::initializer_list<std::initializer_list<T>> rows) : rows_(rows.size()) {
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return data_.empty(); }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<T> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const T> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<T>& data() const { return data_; }

  DenseMatrix transpose() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  /// Elementwise conversion.
  template <class F>
  auto map(F&& f) const -> DenseMatrix<decltype(f(std::declval<const T&>()))> {
    using U = decltype(f(std::declval<const T&>()));
    std::vector<U> out;
    out.reserve(data_.size());
    for (const auto& v : data_) out.push_back(f(v));
    return DenseMatrix<U>(rows_, cols_, std::move(out));
  }

  friend bool operator==(const DenseMatrix& a, const DenseMatrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <class T>
DenseMatrix<T> vstack(const DenseMatrix<T>& top, const DenseMatrix<T>& bottom) {
  if (top.cols() != bottom.cols()) throw std::invalid_argument("vstack: column counts differ");
  std::vector<T> data(top.data());
  data.insert(data.end(), bottom.data().begin(), bottom.data().end());
  return DenseMatrix<T>(top.rows() + bottom.rows(), top.cols(), std::move(data));
}

template <class T>
DenseMatrix<T> scaled(const DenseMatrix<T>& m, const T& s) {
  return m.map([&](const T& v) { return T(v * s); });
}

template <class T>
std::size_t nonzeros(const DenseMatrix<T>& m) {
  std::size_t count = 0;
  for (const auto& v : m.data()) count += (v != 0);
  return count;
}

using Matrix = DenseMatrix<double>;
using ExactMatrix = DenseMatrix<Rational>;

Matrix to_real(const ExactMatrix& m);
/// Exact: every double is a dyadic rational.
ExactMatrix to_exact(const Matrix& m);

std::vector<double> multiply(const Matrix& m, std::span<const double> x);
std::vector<double> multiply_transpose(const Matrix& m, std::span<const double> y);

/// Pads with zero rows or zero columns up to a max(rows, cols) square.
template <class T>
DenseMatrix<T> pad_square(const DenseMatrix<T>& m) {
  const std::size_t side = std::max(m.rows(), m.cols());
  DenseMatrix<T> out(side, side);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

// Text format: a "rows cols" header followed by rows of whitespace-separated
// entries. Entries are decimal literals ("-2.5", "1e-3") or exact "num/den"
// tokens; '#' starts a comment.

enum class MatrixFormat {
  kDecimal,   ///< Exact when the entry has a terminating expansion, 17 digits otherwise.
  kRational,  ///< Lossless "num/den" tokens.
};

void write_matrix(std::ostream& os, const ExactMatrix& m, MatrixFormat format = MatrixFormat::kDecimal);
ExactMatrix read_matrix(std::istream& is);

/// Decimal rendering of one entry, exact whenever the expansion terminates.
std::string format_decimal(const Rational& q);

}  // namespace pnormcut

#endif  // PNORMCUT_MATRIX_HPP
