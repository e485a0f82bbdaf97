#pragma once

#include <memory>
#include <span>

#include "schwarz/linalg/factorization.hpp"
#include "schwarz/linalg/sparse.hpp"
#include "schwarz/precond/local_solvers.hpp"

namespace schwarz {

/// M_0^{-1} = R_0^* (R_0 A R_0^*)^{-1} R_0 with the rows of R_0 spanning the coarse space.
class CoarseOperator {
 public:
  CoarseOperator() = default;
  /// `r0` is m x n. Throws PreconditionError when R_0 A R_0^* is singular.
  CoarseOperator(const SparseMatrix& a, SparseMatrix r0);

  Index dimension() const noexcept { return r0_.nrows(); }
  Index global_size() const noexcept { return r0_.ncols(); }
  bool empty() const noexcept { return dimension() == 0; }

  void apply(std::span<const double> r, std::span<double> out) const;
  Vector apply(std::span<const double> r) const;

  const SparseMatrix& r0() const noexcept { return r0_; }
  const DenseMatrix& coarse_matrix() const noexcept { return e_; }
  /// Reciprocal condition estimate of E in the 1-norm.
  double rcond() const noexcept { return rcond_; }

 private:
  SparseMatrix r0_;
  DenseMatrix e_;
  Factorization lu_;
  double rcond_ = 1.0;
};

/// Multiplicative two-level preconditioner:
///   y1 = M_1^{-1} r,  y = y1 + M_0^{-1}(r - A y1).
class TwoLevel {
 public:
  TwoLevel(std::shared_ptr<const SparseMatrix> a, std::shared_ptr<const LocalSolvers> one_level,
           std::shared_ptr<const CoarseOperator> coarse);

  void apply(std::span<const double> r, std::span<double> out) const;
  Vector apply(std::span<const double> r) const;

  const SparseMatrix& matrix() const { return *a_; }
  const LocalSolvers& one_level() const { return *one_level_; }
  bool has_coarse() const { return coarse_ && !coarse_->empty(); }
  const CoarseOperator& coarse() const { return *coarse_; }
  Index coarse_dimension() const { return has_coarse() ? coarse_->dimension() : 0; }

 private:
  std::shared_ptr<const SparseMatrix> a_;
  std::shared_ptr<const LocalSolvers> one_level_;
  std::shared_ptr<const CoarseOperator> coarse_;
};

struct SigmaRho {
  double sigma = 0.0;  // ||I - M_0^{-1} A||_C
  double rho = 0.0;    // ||I - C^{-1} A||_C
  /// 1/(1 - rho) when rho < 1, +inf otherwise.
  double sigma_bound = 0.0;
  /// sigma <= 1/(1 - rho) + 1e-8, vacuous when rho >= 1.
  bool lemma_holds = true;
};

/// Dense measurement of sigma and rho. C must be SPD.
SigmaRho measure_sigma_rho(const CoarseOperator& coarse, const SparseMatrix& a,
                           const SparseMatrix& c);

}  // namespace schwarz
