#include "schwarz/precond/two_level.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "blas_lapack.hpp"
#include "schwarz/linalg/eigen.hpp"

namespace schwarz {

CoarseOperator::CoarseOperator(const SparseMatrix& a, SparseMatrix r0) : r0_(std::move(r0)) {
  if (r0_.ncols() != a.nrows()) throw DimensionError("coarse operator: R0 width mismatch");
  const Index m = r0_.nrows();
  if (m == 0) return;
  const SparseMatrix e = multiply(multiply(r0_, a), r0_.transpose());
  e_ = e.to_dense();
  double anorm = 0.0;
  for (Index j = 0; j < m; ++j) {
    double s = 0.0;
    for (Index i = 0; i < m; ++i) s += std::abs(e_(i, j));
    anorm = std::max(anorm, s);
  }
  try {
    lu_ = dense_lu(e_);
  } catch (const FactorizationError&) {
    throw PreconditionError(
        "coarse matrix R0 A R0^* is singular; raise the rank-filter tolerance");
  }
  double rc = 0.0;
  const lapack_int info = LAPACKE_dgecon(LAPACK_COL_MAJOR, '1', m,
                                         lu_.dense_factor().data(), m, anorm, &rc);
  if (info != 0) throw Error("coarse operator: dgecon failed");
  rcond_ = rc;
  if (!(rc > 1e2 * std::numeric_limits<double>::epsilon()))
    throw PreconditionError("coarse matrix R0 A R0^* is numerically singular (rcond " +
                            std::to_string(rc) + "); raise the rank-filter tolerance");
}

void CoarseOperator::apply(std::span<const double> r, std::span<double> out) const {
  if (static_cast<Index>(out.size()) != global_size() ||
      static_cast<Index>(r.size()) != global_size())
    throw DimensionError("coarse apply: size mismatch");
  std::fill(out.begin(), out.end(), 0.0);
  if (empty()) return;
  Vector rc = r0_.multiply(r);
  lu_.solve_in_place(rc);
  const Vector y = r0_.multiply_adjoint(rc);
  std::copy(y.begin(), y.end(), out.begin());
}

Vector CoarseOperator::apply(std::span<const double> r) const {
  Vector out(r.size());
  apply(r, out);
  return out;
}

TwoLevel::TwoLevel(std::shared_ptr<const SparseMatrix> a,
                   std::shared_ptr<const LocalSolvers> one_level,
                   std::shared_ptr<const CoarseOperator> coarse)
    : a_(std::move(a)), one_level_(std::move(one_level)), coarse_(std::move(coarse)) {
  if (!a_ || !one_level_) throw Error("TwoLevel: matrix and one-level solver required");
}

void TwoLevel::apply(std::span<const double> r, std::span<double> out) const {
  one_level_->apply(r, out);
  if (!has_coarse()) return;
  Vector res = a_->multiply(out);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] = r[i] - res[i];
  const Vector corr = coarse_->apply(res);
  for (std::size_t i = 0; i < corr.size(); ++i) out[i] += corr[i];
}

Vector TwoLevel::apply(std::span<const double> r) const {
  Vector out(r.size());
  apply(r, out);
  return out;
}

SigmaRho measure_sigma_rho(const CoarseOperator& coarse, const SparseMatrix& a,
                           const SparseMatrix& c) {
  const Index n = a.nrows();
  if (n > kDenseCap) throw CapacityError("measure_sigma_rho: global size exceeds dense cap");
  SigmaRho out;
  const LinearMap e0 = [&](std::span<const double> x, std::span<double> y) {
    const Vector ax = a.multiply(x);
    const Vector m0 = coarse.empty() ? Vector(x.size(), 0.0) : coarse.apply(ax);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - m0[i];
  };
  out.sigma = c_operator_norm(e0, c, n);

  const Factorization cf = dense_cholesky(c.to_dense());
  const LinearMap ec = [&](std::span<const double> x, std::span<double> y) {
    Vector ax = a.multiply(x);
    cf.solve_in_place(ax);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - ax[i];
  };
  out.rho = c_operator_norm(ec, c, n);
  out.sigma_bound =
      out.rho < 1.0 ? 1.0 / (1.0 - out.rho) : std::numeric_limits<double>::infinity();
  out.lemma_holds = !(out.rho < 1.0) || out.sigma <= out.sigma_bound + 1e-8;
  return out;
}

}  // namespace schwarz
