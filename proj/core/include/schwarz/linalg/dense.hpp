#pragma once

#include <span>
#include <vector>

#include "schwarz/types.hpp"

namespace schwarz {

/// Column-major dense matrix.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(Index rows, Index cols, double fill = 0.0);

  static DenseMatrix identity(Index n);

  Index rows() const noexcept { return rows_; }
  Index cols() const noexcept { return cols_; }
  bool empty() const noexcept { return rows_ == 0 || cols_ == 0; }

  double& operator()(Index i, Index j) { return values_[offset(i, j)]; }
  double operator()(Index i, Index j) const { return values_[offset(i, j)]; }

  double* data() noexcept { return values_.data(); }
  const double* data() const noexcept { return values_.data(); }
  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<double> col(Index j) {
    return {values_.data() + offset(0, j), static_cast<std::size_t>(rows_)};
  }
  std::span<const double> col(Index j) const {
    return {values_.data() + offset(0, j), static_cast<std::size_t>(rows_)};
  }

  DenseMatrix transposed() const;

 private:
  std::size_t offset(Index i, Index j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(rows_) +
           static_cast<std::size_t>(i);
  }

  Index rows_ = 0;
  Index cols_ = 0;
  std::vector<double> values_;
};

enum class Op { none, transpose };

/// C = op(A) op(B).
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, Op op_a = Op::none,
                   Op op_b = Op::none);

/// y = op(A) x.
Vector matvec(const DenseMatrix& a, std::span<const double> x, Op op = Op::none);

/// Replaces A with (A + A^*)/2 and returns the largest absolute skew entry removed.
double symmetrize(DenseMatrix& a);

double frobenius_norm(const DenseMatrix& a);
double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b);

double dot(std::span<const double> x, std::span<const double> y);
double norm2(std::span<const double> x);
/// y += alpha x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

}  // namespace schwarz
