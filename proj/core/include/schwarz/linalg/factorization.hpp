#pragma once

#include <memory>
#include <span>

#include "schwarz/linalg/dense.hpp"
#include "schwarz/linalg/sparse.hpp"
#include "schwarz/types.hpp"

namespace schwarz {

struct Icc0Options {
  /// First relative diagonal shift tried after a breakdown: A + shift*diag(A).
  double initial_shift = 1e-8;
  /// Number of times the shift is doubled before giving up.
  int max_doublings = 3;
};

/// A factorized square matrix that can solve with one or many right-hand sides.
///
/// Exact kinds (dense LU, dense Cholesky, band LU) reproduce A^{-1}; icc0 only
/// guarantees that solve() is the forward/backward substitution with its own
/// incomplete factor L L^*.
class Factorization {
 public:
  enum class Kind { dense_lu, dense_cholesky, band_lu, icc0 };

  Factorization();
  ~Factorization();
  Factorization(Factorization&&) noexcept;
  Factorization& operator=(Factorization&&) noexcept;
  Factorization(const Factorization&);
  Factorization& operator=(const Factorization&);

  Kind kind() const noexcept;
  Index size() const noexcept;
  bool exact() const noexcept { return kind() != Kind::icc0; }

  void solve_in_place(std::span<double> b) const;
  Vector solve(std::span<const double> b) const;
  /// Solves for every column of B in place.
  void solve_in_place(DenseMatrix& b) const;

  /// Relative diagonal shift that made icc0 succeed (0 when none was needed).
  double shift() const noexcept;
  /// Number of shifted retries icc0 needed.
  int shifts_used() const noexcept;

  /// Incomplete factor L (lower triangular, diagonal stored last per row).
  const SparseMatrix& icc_factor() const;
  /// Packed factor data of dense kinds (LAPACK layout).
  const DenseMatrix& dense_factor() const;

  struct Impl;

 private:
  explicit Factorization(std::unique_ptr<Impl> impl);
  friend Factorization dense_lu(DenseMatrix a);
  friend Factorization dense_cholesky(DenseMatrix a);
  friend Factorization band_lu(const SparseMatrix& a);
  friend Factorization icc0(const SparseMatrix& a, const Icc0Options& options);

  std::unique_ptr<Impl> impl_;
};

/// LU with partial pivoting. Throws FactorizationError on an exactly singular pivot.
Factorization dense_lu(DenseMatrix a);
/// Cholesky of a hermitian positive definite matrix. Throws NotPositiveDefinite.
Factorization dense_cholesky(DenseMatrix a);
/// Banded LU with partial pivoting, sized from the sparsity bandwidth of A.
Factorization band_lu(const SparseMatrix& a);
/// Zero fill-in incomplete Cholesky on the lower pattern of A.
Factorization icc0(const SparseMatrix& a, const Icc0Options& options = {});

}  // namespace schwarz
