#include "schwarz/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace schwarz {

SparseMatrix::SparseMatrix(Index nrows, Index ncols, std::vector<Index> row_offsets,
                           std::vector<Index> col_indices, std::vector<double> values,
                           bool hermitian_hint)
    : nrows_(nrows),
      ncols_(ncols),
      row_offsets_(std::move(row_offsets)),
      col_indices_(std::move(col_indices)),
      values_(std::move(values)),
      hermitian_hint_(hermitian_hint) {
  validate();
}

void SparseMatrix::validate() const {
  if (nrows_ < 0 || ncols_ < 0) throw DimensionError("SparseMatrix: negative dimension");
  if (row_offsets_.size() != static_cast<std::size_t>(nrows_) + 1)
    throw DimensionError("SparseMatrix: row_offsets must have nrows+1 entries");
  if (row_offsets_.front() != 0 ||
      row_offsets_.back() != static_cast<Index>(col_indices_.size()))
    throw DimensionError("SparseMatrix: row_offsets do not bracket col_indices");
  if (col_indices_.size() != values_.size())
    throw DimensionError("SparseMatrix: col_indices and values differ in length");
  for (Index i = 0; i < nrows_; ++i) {
    if (row_offsets_[i + 1] < row_offsets_[i])
      throw DimensionError("SparseMatrix: row_offsets not monotone");
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const Index c = col_indices_[p];
      if (c < 0 || c >= ncols_)
        throw DimensionError("SparseMatrix: column index out of range in row " +
                             std::to_string(i));
      if (p > row_offsets_[i] && col_indices_[p - 1] >= c)
        throw DimensionError("SparseMatrix: columns not strictly increasing in row " +
                             std::to_string(i));
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(Index nrows, Index ncols,
                                         std::vector<Triplet> triplets, bool hermitian_hint) {
  for (const auto& t : triplets)
    if (t.row < 0 || t.row >= nrows || t.col < 0 || t.col >= ncols)
      throw DimensionError("from_triplets: index out of range");
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  std::vector<Index> offsets(static_cast<std::size_t>(nrows) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  cols.reserve(triplets.size());
  vals.reserve(triplets.size());
  Index last_row = -1;
  Index last_col = -1;
  for (const auto& t : triplets) {
    if (t.row == last_row && t.col == last_col) {
      vals.back() += t.value;
      continue;
    }
    cols.push_back(t.col);
    vals.push_back(t.value);
    ++offsets[t.row + 1];
    last_row = t.row;
    last_col = t.col;
  }
  for (Index i = 0; i < nrows; ++i) offsets[i + 1] += offsets[i];
  return SparseMatrix(nrows, ncols, std::move(offsets), std::move(cols), std::move(vals),
                      hermitian_hint);
}

SparseMatrix SparseMatrix::identity(Index n) {
  std::vector<double> ones(static_cast<std::size_t>(n), 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> d) {
  const auto n = static_cast<Index>(d.size());
  std::vector<Index> offsets(static_cast<std::size_t>(n) + 1);
  std::vector<Index> cols(static_cast<std::size_t>(n));
  for (Index i = 0; i <= n; ++i) offsets[i] = i;
  for (Index i = 0; i < n; ++i) cols[i] = i;
  return SparseMatrix(n, n, std::move(offsets), std::move(cols),
                      std::vector<double>(d.begin(), d.end()), true);
}

SparseMatrix SparseMatrix::from_dense(const DenseMatrix& a, double drop_tol,
                                      bool hermitian_hint) {
  std::vector<Index> offsets(static_cast<std::size_t>(a.rows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      const double v = a(i, j);
      if (std::abs(v) > drop_tol) {
        cols.push_back(j);
        vals.push_back(v);
      }
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(offsets), std::move(cols),
                      std::move(vals), hermitian_hint);
}

double SparseMatrix::at(Index i, Index j) const {
  auto cols = row_cols(i);
  auto it = std::lower_bound(cols.begin(), cols.end(), j);
  if (it == cols.end() || *it != j) return 0.0;
  return values_[row_offsets_[i] + (it - cols.begin())];
}

bool SparseMatrix::has_entry(Index i, Index j) const {
  auto cols = row_cols(i);
  return std::binary_search(cols.begin(), cols.end(), j);
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (static_cast<Index>(x.size()) != ncols_ || static_cast<Index>(y.size()) != nrows_)
    throw DimensionError("spmv: dimension mismatch");
  for (Index i = 0; i < nrows_; ++i) {
    double s = 0.0;
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      s += values_[p] * x[col_indices_[p]];
    y[i] = s;
  }
}

Vector SparseMatrix::multiply(std::span<const double> x) const {
  Vector y(static_cast<std::size_t>(nrows_));
  multiply(x, y);
  return y;
}

Vector SparseMatrix::multiply_adjoint(std::span<const double> x) const {
  if (static_cast<Index>(x.size()) != nrows_) throw DimensionError("spmv^*: dimension mismatch");
  Vector y(static_cast<std::size_t>(ncols_), 0.0);
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      y[col_indices_[p]] += conj(values_[p]) * x[i];
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<Index> offsets(static_cast<std::size_t>(ncols_) + 1, 0);
  for (Index c : col_indices_) ++offsets[c + 1];
  for (Index j = 0; j < ncols_; ++j) offsets[j + 1] += offsets[j];
  std::vector<Index> cols(col_indices_.size());
  std::vector<double> vals(values_.size());
  std::vector<Index> next(offsets.begin(), offsets.end() - 1);
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const Index dst = next[col_indices_[p]]++;
      cols[dst] = i;
      vals[dst] = conj(values_[p]);
    }
  }
  return SparseMatrix(ncols_, nrows_, std::move(offsets), std::move(cols), std::move(vals),
                      hermitian_hint_);
}

DenseMatrix SparseMatrix::to_dense() const {
  DenseMatrix d(nrows_, ncols_);
  for (Index i = 0; i < nrows_; ++i)
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p)
      d(i, col_indices_[p]) = values_[p];
  return d;
}

Vector SparseMatrix::diagonal_values() const {
  Vector d(static_cast<std::size_t>(std::min(nrows_, ncols_)), 0.0);
  for (Index i = 0; i < static_cast<Index>(d.size()); ++i) d[i] = at(i, i);
  return d;
}

bool SparseMatrix::is_hermitian(double rel_tol) const {
  if (nrows_ != ncols_) return false;
  double scale = 0.0;
  for (double v : values_) scale = std::max(scale, std::abs(v));
  const double tol = rel_tol * scale;
  for (Index i = 0; i < nrows_; ++i) {
    for (Index p = row_offsets_[i]; p < row_offsets_[i + 1]; ++p) {
      const Index j = col_indices_[p];
      if (std::abs(values_[p] - conj(at(j, i))) > tol) return false;
      if (!has_entry(j, i) && std::abs(values_[p]) > tol) return false;
    }
  }
  return true;
}

std::pair<Index, Index> SparseMatrix::bandwidth() const {
  Index kl = 0;
  Index ku = 0;
  for (Index i = 0; i < nrows_; ++i) {
    auto cols = row_cols(i);
    if (cols.empty()) continue;
    kl = std::max(kl, i - cols.front());
    ku = std::max(ku, cols.back() - i);
  }
  return {kl, ku};
}

SparseMatrix SparseMatrix::with_hermitian_hint(bool hint) const {
  SparseMatrix copy = *this;
  copy.hermitian_hint_ = hint;
  return copy;
}

Vector spmv(const SparseMatrix& a, std::span<const double> x) { return a.multiply(x); }

SparseMatrix triple_product(std::span<const Index> rows, const SparseMatrix& a,
                            std::span<const Index> cols) {
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (rows[k] < 0 || rows[k] >= a.nrows())
      throw DimensionError("triple_product: row index out of range");
    if (k > 0 && rows[k - 1] >= rows[k])
      throw DimensionError("triple_product: row indices not strictly increasing");
  }
  for (std::size_t k = 0; k < cols.size(); ++k) {
    if (cols[k] < 0 || cols[k] >= a.ncols())
      throw DimensionError("triple_product: column index out of range");
    if (k > 0 && cols[k - 1] >= cols[k])
      throw DimensionError("triple_product: column indices not strictly increasing");
  }
  std::vector<Index> offsets(rows.size() + 1, 0);
  std::vector<Index> out_cols;
  std::vector<double> out_vals;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto rc = a.row_cols(rows[r]);
    auto rv = a.row_values(rows[r]);
    // Merge the sorted row pattern with the sorted column selection.
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < rc.size() && q < cols.size()) {
      if (rc[p] < cols[q]) {
        ++p;
      } else if (rc[p] > cols[q]) {
        ++q;
      } else {
        out_cols.push_back(static_cast<Index>(q));
        out_vals.push_back(rv[p]);
        ++p;
        ++q;
      }
    }
    offsets[r + 1] = static_cast<Index>(out_cols.size());
  }
  const bool same = rows.size() == cols.size() && std::equal(rows.begin(), rows.end(), cols.begin());
  return SparseMatrix(static_cast<Index>(rows.size()), static_cast<Index>(cols.size()),
                      std::move(offsets), std::move(out_cols), std::move(out_vals),
                      same && a.hermitian_hint());
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.nrows() != b.nrows() || a.ncols() != b.ncols())
    throw DimensionError("add: shape mismatch");
  std::vector<Index> offsets(static_cast<std::size_t>(a.nrows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  for (Index i = 0; i < a.nrows(); ++i) {
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    auto bc = b.row_cols(i);
    auto bv = b.row_values(i);
    std::size_t p = 0;
    std::size_t q = 0;
    while (p < ac.size() || q < bc.size()) {
      if (q == bc.size() || (p < ac.size() && ac[p] < bc[q])) {
        cols.push_back(ac[p]);
        vals.push_back(alpha * av[p++]);
      } else if (p == ac.size() || bc[q] < ac[p]) {
        cols.push_back(bc[q]);
        vals.push_back(beta * bv[q++]);
      } else {
        cols.push_back(ac[p]);
        vals.push_back(alpha * av[p++] + beta * bv[q++]);
      }
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(a.nrows(), a.ncols(), std::move(offsets), std::move(cols),
                      std::move(vals), a.hermitian_hint() && b.hermitian_hint());
}

SparseMatrix symmetric_part(const SparseMatrix& a) {
  if (a.nrows() != a.ncols()) throw DimensionError("symmetric_part: matrix not square");
  SparseMatrix s = add(a, a.transpose(), 0.5, 0.5);
  return s.with_hermitian_hint(true);
}

DenseMatrix multiply(const SparseMatrix& a, const DenseMatrix& b) {
  if (a.ncols() != b.rows()) throw DimensionError("sparse*dense: dimension mismatch");
  DenseMatrix c(a.nrows(), b.cols());
  for (Index j = 0; j < b.cols(); ++j) a.multiply(b.col(j), c.col(j));
  return c;
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.ncols() != b.nrows()) throw DimensionError("sparse*sparse: dimension mismatch");
  std::vector<Index> offsets(static_cast<std::size_t>(a.nrows()) + 1, 0);
  std::vector<Index> cols;
  std::vector<double> vals;
  std::vector<double> acc(static_cast<std::size_t>(b.ncols()), 0.0);
  std::vector<char> used(static_cast<std::size_t>(b.ncols()), 0);
  std::vector<Index> pattern;
  for (Index i = 0; i < a.nrows(); ++i) {
    pattern.clear();
    auto ac = a.row_cols(i);
    auto av = a.row_values(i);
    for (std::size_t p = 0; p < ac.size(); ++p) {
      auto bc = b.row_cols(ac[p]);
      auto bv = b.row_values(ac[p]);
      for (std::size_t q = 0; q < bc.size(); ++q) {
        if (!used[bc[q]]) {
          used[bc[q]] = 1;
          pattern.push_back(bc[q]);
        }
        acc[bc[q]] += av[p] * bv[q];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (Index c : pattern) {
      cols.push_back(c);
      vals.push_back(acc[c]);
      acc[c] = 0.0;
      used[c] = 0;
    }
    offsets[i + 1] = static_cast<Index>(cols.size());
  }
  return SparseMatrix(a.nrows(), b.ncols(), std::move(offsets), std::move(cols), std::move(vals));
}

double frobenius_norm(const SparseMatrix& a) {
  double s = 0.0;
  for (double v : a.values()) s += v * v;
  return std::sqrt(s);
}

}  // namespace schwarz
