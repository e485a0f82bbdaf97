#pragma once

#include <span>
#include <utility>
#include <vector>

#include "schwarz/linalg/dense.hpp"
#include "schwarz/types.hpp"

namespace schwarz {

struct Triplet {
  Index row;
  Index col;
  double value;
};

/// Compressed sparse row matrix.
///
/// Column indices are strictly increasing within each row. The hermitian
/// hint is a promise made by the producer; `is_hermitian()` checks it.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
               std::vector<Index> col_indices, std::vector<double> values,
               bool hermitian_hint = false);

  /// Duplicate (row, col) entries are summed. Explicit zeros are kept so
  /// that element assembly preserves the structural pattern.
  static SparseMatrix from_triplets(Index nrows, Index ncols, std::vector<Triplet> triplets,
                                    bool hermitian_hint = false);
  static SparseMatrix identity(Index n);
  static SparseMatrix diagonal(std::span<const double> d);
  static SparseMatrix from_dense(const DenseMatrix& a, double drop_tol = 0.0,
                                 bool hermitian_hint = false);

  Index nrows() const noexcept { return nrows_; }
  Index ncols() const noexcept { return ncols_; }
  Index nnz() const noexcept { return static_cast<Index>(col_indices_.size()); }
  bool hermitian_hint() const noexcept { return hermitian_hint_; }

  std::span<const Index> row_offsets() const noexcept { return row_offsets_; }
  std::span<const Index> col_indices() const noexcept { return col_indices_; }
  std::span<const double> values() const noexcept { return values_; }

  std::span<const Index> row_cols(Index i) const {
    return {col_indices_.data() + row_offsets_[i],
            static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
  }
  std::span<const double> row_values(Index i) const {
    return {values_.data() + row_offsets_[i],
            static_cast<std::size_t>(row_offsets_[i + 1] - row_offsets_[i])};
  }

  /// Stored value at (i, j), zero when the entry is not in the pattern.
  double at(Index i, Index j) const;
  bool has_entry(Index i, Index j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  Vector multiply(std::span<const double> x) const;
  /// y = A^* x
  Vector multiply_adjoint(std::span<const double> x) const;

  SparseMatrix transpose() const;
  DenseMatrix to_dense() const;
  Vector diagonal_values() const;

  bool is_hermitian(double rel_tol = 0.0) const;

  /// Lower and upper bandwidth (kl, ku) of the stored pattern.
  std::pair<Index, Index> bandwidth() const;

  SparseMatrix with_hermitian_hint(bool hint) const;

 private:
  void validate() const;

  Index nrows_ = 0;
  Index ncols_ = 0;
  std::vector<Index> row_offsets_{0};
  std::vector<Index> col_indices_;
  std::vector<double> values_;
  bool hermitian_hint_ = false;
};

Vector spmv(const SparseMatrix& a, std::span<const double> x);

/// Sub-matrix A(rows, cols) for sorted index lists; realizes R A R'^* for
/// Boolean restrictions R, R'.
SparseMatrix triple_product(std::span<const Index> rows, const SparseMatrix& a,
                            std::span<const Index> cols);

/// alpha A + beta B on the union pattern.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0,
                 double beta = 1.0);

/// (A + A^*)/2
SparseMatrix symmetric_part(const SparseMatrix& a);

/// A B for a sparse A and dense B.
DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b);

/// A B for sparse A and B.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);

double frobenius_norm(const SparseMatrix& a);

}  // namespace schwarz
