#include "schwarz/precond/local_solvers.hpp"

#include <algorithm>
#include <string>

namespace schwarz {

const char* to_string(OneLevelKind k) {
  switch (k) {
    case OneLevelKind::none:
      return "none";
    case OneLevelKind::ras:
      return "ras";
    case OneLevelKind::as:
      return "as";
    case OneLevelKind::soras:
      return "soras";
  }
  return "?";
}

const char* to_string(LocalBackend b) { return b == LocalBackend::exact ? "exact" : "icc"; }

Vector LocalSolvers::solve_local(Index j, std::span<const double> r) const {
  return factors_.at(j).solve(r);
}

Vector LocalSolvers::apply_local(Index j, std::span<const double> r) const {
  if (options_.kind == OneLevelKind::none) throw Error("apply_local: no local solvers");
  const Vector& d = pou_.at(j);
  if (r.size() != d.size()) throw DimensionError("apply_local: size mismatch");
  Vector x(r.begin(), r.end());
  if (options_.kind == OneLevelKind::soras)
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= d[k];
  factors_[j].solve_in_place(x);
  if (options_.kind == OneLevelKind::ras || options_.kind == OneLevelKind::soras)
    for (std::size_t k = 0; k < x.size(); ++k) x[k] *= d[k];
  return x;
}

void LocalSolvers::apply_local(Index j, DenseMatrix& block) const {
  if (options_.kind == OneLevelKind::none) throw Error("apply_local: no local solvers");
  const Vector& d = pou_.at(j);
  if (block.rows() != static_cast<Index>(d.size()))
    throw DimensionError("apply_local: size mismatch");
  auto scale = [&] {
    for (Index c = 0; c < block.cols(); ++c) {
      auto col = block.col(c);
      for (std::size_t k = 0; k < d.size(); ++k) col[k] *= d[k];
    }
  };
  if (options_.kind == OneLevelKind::soras) scale();
  factors_[j].solve_in_place(block);
  if (options_.kind == OneLevelKind::ras || options_.kind == OneLevelKind::soras) scale();
}

void LocalSolvers::apply(std::span<const double> r, std::span<double> out) const {
  if (static_cast<Index>(r.size()) != global_n_ || static_cast<Index>(out.size()) != global_n_)
    throw DimensionError("one-level apply: size mismatch");
  if (options_.kind == OneLevelKind::none) {
    std::copy(r.begin(), r.end(), out.begin());
    return;
  }
  std::fill(out.begin(), out.end(), 0.0);
  for (Index j = 0; j < num_subdomains(); ++j) {
    const Vector local = apply_local(j, restrictions_[j].restrict(r));
    restrictions_[j].prolong_add(local, out);
  }
}

Vector LocalSolvers::apply(std::span<const double> r) const {
  Vector out(r.size());
  apply(r, out);
  return out;
}

LocalSolvers build_local_solvers(const SparseMatrix& a, const Decomposition& dec,
                                 const LocalSolverOptions& options,
                                 const ElementMatrices* elements) {
  LocalSolvers s;
  s.options_ = options;
  s.global_n_ = a.nrows();
  if (options.kind == OneLevelKind::none) return s;
  if (options.source == LocalMatrixSource::robin && elements == nullptr)
    throw Error("build_local_solvers: Robin local matrices need element matrices");
  s.restrictions_ = dec.subdomains;
  s.pou_ = dec.pou;
  const Index J = dec.num_subdomains();
  s.matrices_.reserve(J);
  s.factors_.reserve(J);
  for (Index j = 0; j < J; ++j) {
    const auto& idx = dec.subdomains[j].indices;
    SparseMatrix b;
    if (options.source == LocalMatrixSource::restricted_a) {
      b = triple_product(idx, a, idx);
    } else {
      auto robin = robin_local_matrix(*elements, idx, options.robin_rule);
      s.clamped_edges_ += robin.clamped_edges;
      b = std::move(robin.matrix);
    }
    try {
      if (options.backend == LocalBackend::exact) {
        s.factors_.push_back(band_lu(b));
      } else {
        if (!b.is_hermitian(1e-14))
          throw FactorizationError("incomplete Cholesky needs a symmetric local matrix");
        s.factors_.push_back(icc0(b));
        s.icc_retries_ += s.factors_.back().shifts_used();
      }
    } catch (const FactorizationError& e) {
      throw FactorizationError("subdomain " + std::to_string(j) + ": " + e.what(), e.pivot());
    }
    s.matrices_.push_back(std::move(b));
  }
  return s;
}

}  // namespace schwarz
