#include "schwarz/linalg/dense.hpp"

#include <algorithm>
#include <cmath>

#include "blas_lapack.hpp"

namespace schwarz {

DenseMatrix::DenseMatrix(Index rows, Index cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) throw DimensionError("DenseMatrix: negative dimension");
  values_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), fill);
}

DenseMatrix DenseMatrix::identity(Index n) {
  DenseMatrix m(n, n);
  for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (Index j = 0; j < cols_; ++j)
    for (Index i = 0; i < rows_; ++i) t(j, i) = conj((*this)(i, j));
  return t;
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b, Op op_a, Op op_b) {
  const Index m = op_a == Op::none ? a.rows() : a.cols();
  const Index k = op_a == Op::none ? a.cols() : a.rows();
  const Index kb = op_b == Op::none ? b.rows() : b.cols();
  const Index n = op_b == Op::none ? b.cols() : b.rows();
  if (k != kb) throw DimensionError("matmul: inner dimensions differ");
  DenseMatrix c(m, n);
  if (m == 0 || n == 0 || k == 0) return c;
  cblas_dgemm(CblasColMajor, op_a == Op::none ? CblasNoTrans : CblasTrans,
              op_b == Op::none ? CblasNoTrans : CblasTrans, m, n, k, 1.0, a.data(),
              std::max<Index>(1, a.rows()), b.data(), std::max<Index>(1, b.rows()), 0.0,
              c.data(), std::max<Index>(1, m));
  return c;
}

Vector matvec(const DenseMatrix& a, std::span<const double> x, Op op) {
  const Index in = op == Op::none ? a.cols() : a.rows();
  const Index out = op == Op::none ? a.rows() : a.cols();
  if (static_cast<Index>(x.size()) != in) throw DimensionError("matvec: size mismatch");
  Vector y(static_cast<std::size_t>(out), 0.0);
  if (a.empty()) return y;
  cblas_dgemv(CblasColMajor, op == Op::none ? CblasNoTrans : CblasTrans, a.rows(), a.cols(),
              1.0, a.data(), std::max<Index>(1, a.rows()), x.data(), 1, 0.0, y.data(), 1);
  return y;
}

double symmetrize(DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("symmetrize: matrix not square");
  double skew = 0.0;
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = j + 1; i < a.rows(); ++i) {
      const double lower = a(i, j);
      const double upper = a(j, i);
      skew = std::max(skew, std::abs(lower - conj(upper)) / 2);
      const double avg = (lower + conj(upper)) / 2;
      a(i, j) = avg;
      a(j, i) = conj(avg);
    }
  }
  return skew;
}

double frobenius_norm(const DenseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

double max_abs_diff(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("max_abs_diff: shape mismatch");
  double m = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t k = 0; k < av.size(); ++k) m = std::max(m, std::abs(av[k] - bv[k]));
  return m;
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("dot: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += conj(x[i]) * y[i];
  return s;
}

double norm2(std::span<const double> x) { return std::sqrt(dot(x, x)); }

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw DimensionError("axpy: size mismatch");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

}  // namespace schwarz
