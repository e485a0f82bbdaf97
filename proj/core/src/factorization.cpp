#include "schwarz/linalg/factorization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blas_lapack.hpp"

namespace schwarz {

struct Factorization::Impl {
  Kind kind = Kind::dense_lu;
  Index n = 0;
  DenseMatrix factor;            // dense LU / Cholesky factor, or LAPACK band storage
  std::vector<lapack_int> ipiv;  // dense and band LU
  Index kl = 0;
  Index ku = 0;
  SparseMatrix lower;  // icc0 factor L
  SparseMatrix upper;  // L^* stored as CSR for the backward sweep
  double shift = 0.0;
  int shifts_used = 0;
};

Factorization::Factorization() : impl_(std::make_unique<Impl>()) {}
Factorization::~Factorization() = default;
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;
Factorization::Factorization(const Factorization& other)
    : impl_(std::make_unique<Impl>(*other.impl_)) {}
Factorization& Factorization::operator=(const Factorization& other) {
  if (this != &other) impl_ = std::make_unique<Impl>(*other.impl_);
  return *this;
}
Factorization::Factorization(std::unique_ptr<Impl> impl) : impl_(std::move(impl)) {}

Factorization::Kind Factorization::kind() const noexcept { return impl_->kind; }
Index Factorization::size() const noexcept { return impl_->n; }
double Factorization::shift() const noexcept { return impl_->shift; }
int Factorization::shifts_used() const noexcept { return impl_->shifts_used; }

const SparseMatrix& Factorization::icc_factor() const {
  if (impl_->kind != Kind::icc0) throw Error("icc_factor: not an icc0 factorization");
  return impl_->lower;
}

const DenseMatrix& Factorization::dense_factor() const {
  if (impl_->kind != Kind::dense_lu && impl_->kind != Kind::dense_cholesky)
    throw Error("dense_factor: not a dense factorization");
  return impl_->factor;
}

namespace {

void icc_solve(const SparseMatrix& lower, const SparseMatrix& upper, std::span<double> b) {
  const Index n = lower.nrows();
  for (Index i = 0; i < n; ++i) {
    auto cols = lower.row_cols(i);
    auto vals = lower.row_values(i);
    double s = b[i];
    const std::size_t last = cols.size() - 1;  // diagonal
    for (std::size_t p = 0; p < last; ++p) s -= vals[p] * b[cols[p]];
    b[i] = s / vals[last];
  }
  for (Index i = n - 1; i >= 0; --i) {
    auto cols = upper.row_cols(i);
    auto vals = upper.row_values(i);
    double s = b[i];
    for (std::size_t p = 1; p < cols.size(); ++p) s -= vals[p] * b[cols[p]];
    b[i] = s / vals[0];
  }
}

}  // namespace

void Factorization::solve_in_place(std::span<double> b) const {
  const Impl& f = *impl_;
  if (static_cast<Index>(b.size()) != f.n) throw DimensionError("solve: size mismatch");
  if (f.n == 0) return;
  lapack_int info = 0;
  switch (f.kind) {
    case Kind::dense_lu:
      info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', f.n, 1, f.factor.data(), f.n, f.ipiv.data(),
                            b.data(), f.n);
      break;
    case Kind::dense_cholesky:
      info = LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', f.n, 1, f.factor.data(), f.n, b.data(), f.n);
      break;
    case Kind::band_lu:
      info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', f.n, f.kl, f.ku, 1, f.factor.data(),
                            f.factor.rows(), f.ipiv.data(), b.data(), f.n);
      break;
    case Kind::icc0:
      icc_solve(f.lower, f.upper, b);
      break;
  }
  if (info != 0) throw Error("solve: LAPACK error " + std::to_string(info));
}

Vector Factorization::solve(std::span<const double> b) const {
  Vector x(b.begin(), b.end());
  solve_in_place(x);
  return x;
}

void Factorization::solve_in_place(DenseMatrix& b) const {
  const Impl& f = *impl_;
  if (b.rows() != f.n) throw DimensionError("solve: size mismatch");
  if (f.n == 0 || b.cols() == 0) return;
  lapack_int info = 0;
  switch (f.kind) {
    case Kind::dense_lu:
      info = LAPACKE_dgetrs(LAPACK_COL_MAJOR, 'N', f.n, b.cols(), f.factor.data(), f.n,
                            f.ipiv.data(), b.data(), f.n);
      break;
    case Kind::dense_cholesky:
      info = LAPACKE_dpotrs(LAPACK_COL_MAJOR, 'L', f.n, b.cols(), f.factor.data(), f.n, b.data(),
                            f.n);
      break;
    case Kind::band_lu:
      info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', f.n, f.kl, f.ku, b.cols(), f.factor.data(),
                            f.factor.rows(), f.ipiv.data(), b.data(), f.n);
      break;
    case Kind::icc0:
      for (Index j = 0; j < b.cols(); ++j) icc_solve(f.lower, f.upper, b.col(j));
      break;
  }
  if (info != 0) throw Error("solve: LAPACK error " + std::to_string(info));
}

Factorization dense_lu(DenseMatrix a) {
  if (a.rows() != a.cols()) throw DimensionError("dense_lu: matrix not square");
  auto impl = std::make_unique<Factorization::Impl>();
  impl->kind = Factorization::Kind::dense_lu;
  impl->n = a.rows();
  impl->ipiv.resize(static_cast<std::size_t>(a.rows()));
  if (impl->n > 0) {
    const lapack_int info =
        LAPACKE_dgetrf(LAPACK_COL_MAJOR, a.rows(), a.cols(), a.data(), a.rows(), impl->ipiv.data());
    if (info > 0)
      throw FactorizationError("dense_lu: zero pivot at " + std::to_string(info - 1), info - 1);
    if (info < 0) throw Error("dense_lu: LAPACK argument error");
  }
  impl->factor = std::move(a);
  return Factorization(std::move(impl));
}

Factorization dense_cholesky(DenseMatrix a) {
  if (a.rows() != a.cols()) throw DimensionError("dense_cholesky: matrix not square");
  auto impl = std::make_unique<Factorization::Impl>();
  impl->kind = Factorization::Kind::dense_cholesky;
  impl->n = a.rows();
  if (impl->n > 0) {
    const lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', a.rows(), a.data(), a.rows());
    if (info > 0)
      throw NotPositiveDefinite(
          "dense_cholesky: non-positive pivot at " + std::to_string(info - 1), info - 1);
    if (info < 0) throw Error("dense_cholesky: LAPACK argument error");
  }
  // Keep only the factor; LAPACK leaves the original upper triangle in place.
  for (Index j = 1; j < a.cols(); ++j)
    for (Index i = 0; i < j; ++i) a(i, j) = 0.0;
  impl->factor = std::move(a);
  return Factorization(std::move(impl));
}

Factorization band_lu(const SparseMatrix& a) {
  if (a.nrows() != a.ncols()) throw DimensionError("band_lu: matrix not square");
  auto impl = std::make_unique<Factorization::Impl>();
  impl->kind = Factorization::Kind::band_lu;
  impl->n = a.nrows();
  const auto [kl, ku] = a.bandwidth();
  impl->kl = kl;
  impl->ku = ku;
  const Index ldab = 2 * kl + ku + 1;
  DenseMatrix ab(ldab, a.nrows());
  for (Index i = 0; i < a.nrows(); ++i) {
    auto cols = a.row_cols(i);
    auto vals = a.row_values(i);
    for (std::size_t p = 0; p < cols.size(); ++p) ab(kl + ku + i - cols[p], cols[p]) = vals[p];
  }
  impl->ipiv.resize(static_cast<std::size_t>(a.nrows()));
  if (impl->n > 0) {
    const lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, a.nrows(), a.ncols(), kl, ku,
                                           ab.data(), ldab, impl->ipiv.data());
    if (info > 0)
      throw FactorizationError("band_lu: zero pivot at " + std::to_string(info - 1), info - 1);
    if (info < 0) throw Error("band_lu: LAPACK argument error");
  }
  impl->factor = std::move(ab);
  return Factorization(std::move(impl));
}

namespace {

// Row-oriented up-looking ICC(0) on the lower pattern of A with A + shift*diag(A).
// Returns the failing row, or -1 on success.
Index icc0_attempt(const SparseMatrix& a, double shift, std::vector<Index>& offsets,
                   std::vector<Index>& cols, std::vector<double>& vals) {
  const Index n = a.nrows();
  offsets.assign(static_cast<std::size_t>(n) + 1, 0);
  cols.clear();
  vals.clear();
  for (Index i = 0; i < n; ++i) {
    auto rc = a.row_cols(i);
    auto rv = a.row_values(i);
    for (std::size_t p = 0; p < rc.size() && rc[p] <= i; ++p) {
      cols.push_back(rc[p]);
      vals.push_back(rv[p]);
    }
    if (cols.empty() || cols.back() != i) return i;  // missing diagonal
    offsets[i + 1] = static_cast<Index>(cols.size());
    vals.back() *= 1.0 + shift;
  }
  for (Index i = 0; i < n; ++i) {
    const Index begin = offsets[i];
    const Index diag = offsets[i + 1] - 1;
    for (Index p = begin; p < diag; ++p) {
      const Index k = cols[p];
      // s = sum over m < k of L(i,m) L(k,m), merging the two sorted rows.
      double s = 0.0;
      Index q = offsets[k];
      const Index kdiag = offsets[k + 1] - 1;
      for (Index r = begin; r < p && q < kdiag;) {
        if (cols[r] < cols[q]) {
          ++r;
        } else if (cols[r] > cols[q]) {
          ++q;
        } else {
          s += vals[r] * conj(vals[q]);
          ++r;
          ++q;
        }
      }
      vals[p] = (vals[p] - s) / vals[kdiag];
    }
    double d = vals[diag];
    for (Index p = begin; p < diag; ++p) d -= vals[p] * conj(vals[p]);
    if (!(d > 0.0)) return i;
    vals[diag] = std::sqrt(d);
  }
  return -1;
}

}  // namespace

Factorization icc0(const SparseMatrix& a, const Icc0Options& options) {
  if (a.nrows() != a.ncols()) throw DimensionError("icc0: matrix not square");
  for (double d : a.diagonal_values())
    if (!(d > 0.0)) throw NotPositiveDefinite("icc0: diagonal not positive");
  std::vector<Index> offsets;
  std::vector<Index> cols;
  std::vector<double> vals;
  double shift = 0.0;
  int retries = 0;
  Index bad = icc0_attempt(a, shift, offsets, cols, vals);
  while (bad >= 0) {
    if (retries > options.max_doublings)
      throw NotPositiveDefinite("icc0: non-positive pivot at row " + std::to_string(bad) +
                                    " after " + std::to_string(retries) + " shifted retries",
                                bad);
    shift = options.initial_shift * std::ldexp(1.0, retries);
    ++retries;
    bad = icc0_attempt(a, shift, offsets, cols, vals);
  }
  auto impl = std::make_unique<Factorization::Impl>();
  impl->kind = Factorization::Kind::icc0;
  impl->n = a.nrows();
  impl->lower = SparseMatrix(a.nrows(), a.ncols(), std::move(offsets), std::move(cols),
                             std::move(vals));
  impl->upper = impl->lower.transpose();
  impl->shift = shift;
  impl->shifts_used = retries;
  return Factorization(std::move(impl));
}

}  // namespace schwarz
