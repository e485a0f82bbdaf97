#include "schwarz/linalg/eigen.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "blas_lapack.hpp"
#include "schwarz/linalg/factorization.hpp"

namespace schwarz {

namespace {

void fix_sign(std::span<double> v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs(v[i]) > std::abs(v[best])) best = i;
  if (!v.empty() && v[best] < 0.0)
    for (double& x : v) x = -x;
}

// dsyevr on the lower triangle of `a` (overwritten). Returns eigenvalues in w
// and eigenvectors in z (n x m).
lapack_int syevr(DenseMatrix& a, EigRange range, Vector& w, DenseMatrix& z) {
  const Index n = a.rows();
  char which = 'A';
  double vl = 0.0;
  double vu = 0.0;
  lapack_int il = 1;
  lapack_int iu = n;
  switch (range.kind) {
    case EigRange::Kind::all:
      break;
    case EigRange::Kind::values:
      which = 'V';
      // LAPACK needs finite bounds; widen infinities with the Gershgorin radius.
      {
        double radius = 0.0;
        for (Index j = 0; j < n; ++j) {
          double s = 0.0;
          for (Index i = 0; i < n; ++i) s += std::abs(a(std::max(i, j), std::min(i, j)));
          radius = std::max(radius, s);
        }
        radius = 2.0 * radius + 1.0;
        vl = std::isfinite(range.lower) ? range.lower : -radius;
        vu = std::isfinite(range.upper) ? range.upper : radius;
      }
      if (!(vl < vu)) {
        w.clear();
        z = DenseMatrix(n, 0);
        return 0;
      }
      break;
    case EigRange::Kind::indices: {
      which = 'I';
      Index first = range.first < 0 ? n + range.first : range.first;
      Index last = range.last < 0 ? n + range.last : range.last;
      first = std::max<Index>(first, 0);
      last = std::min<Index>(last, n - 1);
      if (first > last) {
        w.clear();
        z = DenseMatrix(n, 0);
        return 0;
      }
      il = first + 1;
      iu = last + 1;
      break;
    }
  }
  const DenseMatrix saved = which == 'I' ? a : DenseMatrix();
  w.assign(static_cast<std::size_t>(n), 0.0);
  DenseMatrix zfull(n, which == 'I' ? iu - il + 1 : n);
  std::vector<lapack_int> isuppz(2 * static_cast<std::size_t>(std::max<Index>(n, 1)));
  lapack_int m = 0;
  const lapack_int info =
      LAPACKE_dsyevr(LAPACK_COL_MAJOR, 'V', which, 'L', n, a.data(), n, vl, vu, il, iu, 0.0, &m,
                     w.data(), zfull.data(), n, isuppz.data());
  if (info != 0) return info;
  if (which == 'I' && m != iu - il + 1) {
    // dsyevr can drop members of a tight cluster in index mode; slice the full spectrum.
    Vector wall;
    DenseMatrix zall;
    DenseMatrix again = saved;
    const lapack_int full = syevr(again, EigRange::all(), wall, zall);
    if (full != 0) return full;
    const auto count = static_cast<std::size_t>(iu - il + 1);
    w.assign(wall.begin() + (il - 1), wall.begin() + (il - 1) + static_cast<std::ptrdiff_t>(count));
    z = DenseMatrix(n, iu - il + 1);
    std::copy_n(zall.col(il - 1).data(), static_cast<std::size_t>(n) * count, z.data());
    return 0;
  }
  w.resize(static_cast<std::size_t>(m));
  z = DenseMatrix(n, m);
  std::copy_n(zfull.data(), static_cast<std::size_t>(n) * static_cast<std::size_t>(m), z.data());
  return 0;
}

std::vector<EigPair> to_pairs(const Vector& w, DenseMatrix& z, const EigRange& range) {
  std::vector<EigPair> out;
  out.reserve(w.size());
  for (std::size_t k = 0; k < w.size(); ++k) {
    // dsyevr's value interval is half-open (vl, vu]; the API promises strict bounds.
    if (range.kind == EigRange::Kind::values &&
        !(w[k] > range.lower && w[k] < range.upper))
      continue;
    auto col = z.col(static_cast<Index>(k));
    fix_sign(col);
    out.push_back({w[k], Vector(col.begin(), col.end())});
  }
  return out;
}

}  // namespace

std::vector<EigPair> eig_hermitian(const DenseMatrix& a, EigRange range) {
  if (a.rows() != a.cols()) throw DimensionError("eig_hermitian: matrix not square");
  if (a.rows() == 0) return {};
  DenseMatrix work = a;
  Vector w;
  DenseMatrix z;
  const lapack_int info = syevr(work, range, w, z);
  if (info != 0) throw Error("eig_hermitian: dsyevr failed with info " + std::to_string(info));
  return to_pairs(w, z, range);
}

Vector eigenvalues_hermitian(const DenseMatrix& a) {
  if (a.rows() != a.cols()) throw DimensionError("eigenvalues_hermitian: matrix not square");
  const Index n = a.rows();
  if (n == 0) return {};
  DenseMatrix work = a;
  Vector w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data());
  if (info != 0) throw Error("eigenvalues_hermitian: dsyevd failed with info " + std::to_string(info));
  return w;
}

std::vector<EigPair> gevp_hpd(const DenseMatrix& g, const DenseMatrix& ctil, EigRange range) {
  const Index n = g.rows();
  if (g.cols() != n || ctil.rows() != n || ctil.cols() != n)
    throw DimensionError("gevp_hpd: shape mismatch");
  if (n == 0) return {};
  DenseMatrix l = ctil;
  lapack_int info = LAPACKE_dpotrf(LAPACK_COL_MAJOR, 'L', n, l.data(), n);
  if (info > 0)
    throw NotPositiveDefinite("gevp_hpd: right-hand matrix is not positive definite", info - 1);
  DenseMatrix work = g;
  info = LAPACKE_dsygst(LAPACK_COL_MAJOR, 1, 'L', n, work.data(), n, l.data(), n);
  if (info != 0) throw Error("gevp_hpd: dsygst failed");
  Vector w;
  DenseMatrix z;
  info = syevr(work, range, w, z);
  if (info != 0) throw Error("gevp_hpd: dsyevr failed with info " + std::to_string(info));
  if (z.cols() > 0)
    cblas_dtrsm(CblasColMajor, CblasLeft, CblasLower, CblasTrans, CblasNonUnit, n, z.cols(), 1.0,
                l.data(), n, z.data(), n);
  double scale = 0.0;
  for (double v : w) scale = std::max(scale, std::abs(v));
  const double clamp_tol = 1e-12 * std::max(1.0, scale);
  for (double& v : w)
    if (v < 0.0 && v > -clamp_tol) v = 0.0;
  return to_pairs(w, z, range);
}

DenseMatrix materialize(const LinearMap& op, Index n) {
  DenseMatrix m(n, n);
  Vector e(static_cast<std::size_t>(n), 0.0);
  for (Index j = 0; j < n; ++j) {
    e[j] = 1.0;
    op(e, m.col(j));
    e[j] = 0.0;
  }
  return m;
}

double c_operator_norm(const DenseMatrix& e, const SparseMatrix& c) {
  const Index n = e.rows();
  if (e.cols() != n || c.nrows() != n || c.ncols() != n)
    throw DimensionError("c_operator_norm: shape mismatch");
  if (n > kDenseCap)
    throw CapacityError("c_operator_norm: order " + std::to_string(n) + " exceeds dense cap");
  if (n == 0) return 0.0;
  DenseMatrix ce = multiply(c, e);
  DenseMatrix g = matmul(e, ce, Op::transpose);
  symmetrize(g);
  DenseMatrix cd = c.to_dense();
  auto top = gevp_hpd(g, cd, EigRange::largest(1));
  return std::sqrt(std::max(0.0, top.empty() ? 0.0 : top.back().eigenvalue));
}

double c_operator_norm(const LinearMap& e, const SparseMatrix& c, Index n) {
  if (n > kDenseCap)
    throw CapacityError("c_operator_norm: order " + std::to_string(n) + " exceeds dense cap");
  return c_operator_norm(materialize(e, n), c);
}

}  // namespace schwarz
