#include "schwarz/coarse/extended_geneo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>

#include "blas_lapack.hpp"
#include "schwarz/linalg/eigen.hpp"
#include "schwarz/linalg/factorization.hpp"

namespace schwarz {

LtildeOperator::LtildeOperator(const SparseMatrix& a, const Decomposition& dec,
                               const LocalSolvers& solvers, Index j)
    : j_(j),
      ext_(dec.extended.at(j)),
      a_ext_(triple_product(ext_.indices, a, ext_.indices)),
      a_core_(triple_product(dec.subdomains.at(j).indices, a, ext_.indices)),
      link_(dec.link.at(j)),
      pou_(dec.pou.at(j)),
      pou_ext_(dec.pou_extended.at(j)),
      solvers_(&solvers) {
  if (solvers.kind() == OneLevelKind::none) throw Error("LtildeOperator: no local solvers");
  if (ext_.size() > kDenseCap)
    throw CapacityError("subdomain " + std::to_string(j) + ": extended size " +
                        std::to_string(ext_.size()) + " exceeds the dense cap of " +
                        std::to_string(kDenseCap));
}

void LtildeOperator::apply(std::span<const double> v, std::span<double> out) const {
  if (static_cast<Index>(v.size()) != size() || static_cast<Index>(out.size()) != size())
    throw DimensionError("Ltilde apply: size mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = pou_ext_[i] * v[i];
  const Vector t = a_core_.multiply(v);
  const Vector s = solvers_->apply_local(j_, t);
  for (std::size_t k = 0; k < link_.size(); ++k) out[link_[k]] -= s[k];
}

Vector LtildeOperator::apply(std::span<const double> v) const {
  Vector out(v.size());
  apply(v, out);
  return out;
}

DenseMatrix LtildeOperator::materialize_core_rows() const {
  DenseMatrix x = a_core_.to_dense();
  solvers_->apply_local(j_, x);
  for (double& v : x.values()) v = -v;
  for (std::size_t k = 0; k < link_.size(); ++k)
    x(static_cast<Index>(k), link_[k]) += pou_[k];
  return x;
}

DenseMatrix LtildeOperator::materialize() const {
  const DenseMatrix core = materialize_core_rows();
  DenseMatrix m(size(), size());
  for (Index c = 0; c < size(); ++c)
    for (std::size_t k = 0; k < link_.size(); ++k)
      m(link_[k], c) = core(static_cast<Index>(k), c);
  return m;
}

Vector LtildeOperator::apply_ptilde(std::span<const double> v) const {
  const Vector t = a_core_.multiply(v);
  const Vector y = solvers_->solve_local(j_, t);
  Vector out(static_cast<std::size_t>(size()), 0.0);
  for (std::size_t k = 0; k < link_.size(); ++k) out[link_[k]] = y[k];
  return out;
}

namespace {

Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> dist(0.0, 1.0);
  Vector v(static_cast<std::size_t>(n));
  for (double& x : v) x = dist(rng);
  return v;
}

}  // namespace

double onelevel_error_identity_check(const SparseMatrix& a, const Decomposition& dec,
                                     const LocalSolvers& solvers, int samples,
                                     std::uint64_t seed) {
  const Index n = a.nrows();
  std::vector<LtildeOperator> ops;
  for (Index j = 0; j < dec.num_subdomains(); ++j) ops.emplace_back(a, dec, solvers, j);
  std::mt19937_64 rng(seed);
  double worst = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Vector u = random_vector(rng, n);
    const Vector m1au = solvers.apply(a.multiply(u));
    Vector rhs(static_cast<std::size_t>(n), 0.0);
    for (const auto& op : ops) {
      const Vector local = op.apply(op.extended().restrict(u));
      op.extended().prolong_add(local, rhs);
    }
    double diff = 0.0;
    for (Index i = 0; i < n; ++i) {
      const double d = (u[i] - m1au[i]) - rhs[i];
      diff += d * d;
    }
    worst = std::max(worst, std::sqrt(diff) / norm2(u));
  }
  return worst;
}

GevpMatrices assemble_gevp(const LtildeOperator& op, const SparseMatrix& c,
                           const SparseMatrix& ctilde) {
  const auto& core_idx = op.solvers().restriction(op.subdomain()).indices;
  const DenseMatrix m = op.materialize_core_rows();
  const SparseMatrix c_core = triple_product(core_idx, c, core_idx);
  const DenseMatrix cm = multiply(c_core, m);
  GevpMatrices out;
  out.g = matmul(m, cm, Op::transpose);
  symmetrize(out.g);
  out.ctilde = ctilde.to_dense();
  return out;
}

DenseMatrix assemble_gevp_explicit(GevpForm form, const LtildeOperator& op,
                                   const SparseMatrix& c) {
  const Index j = op.subdomain();
  const LocalSolvers& sol = op.solvers();
  const auto& core_idx = sol.restriction(j).indices;
  const auto& ext_idx = op.extended().indices;
  const Index nc = static_cast<Index>(core_idx.size());
  const Index ne = op.size();
  const Vector& d = op.pou();
  const auto& link = op.link();
  const Factorization& b = sol.factorization(j);
  // R_j A Rtil_j^* as a dense block.
  DenseMatrix rart(nc, ne);
  {
    const DenseMatrix ae = op.a_ext().to_dense();
    for (Index col = 0; col < ne; ++col)
      for (Index k = 0; k < nc; ++k) rart(k, col) = ae(link[k], col);
  }
  auto scale_rows = [&](DenseMatrix& x) {
    for (Index col = 0; col < x.cols(); ++col)
      for (Index k = 0; k < nc; ++k) x(k, col) *= d[k];
  };
  const DenseMatrix c_core = triple_product(core_idx, c, core_idx).to_dense();
  DenseMatrix g;
  switch (form) {
    case GevpForm::ras_small:
    case GevpForm::soras_small:
    case GevpForm::as_small: {
      DenseMatrix k = rart;
      if (form == GevpForm::soras_small) scale_rows(k);
      b.solve_in_place(k);
      for (double& v : k.values()) v = -v;
      for (Index r = 0; r < nc; ++r) k(r, link[r]) += form == GevpForm::as_small ? d[r] : 1.0;
      DenseMatrix inner = c_core;
      if (form != GevpForm::as_small) {
        for (Index col = 0; col < nc; ++col)
          for (Index r = 0; r < nc; ++r) inner(r, col) *= d[r] * d[col];
      }
      g = matmul(k, matmul(inner, k), Op::transpose);
      break;
    }
    case GevpForm::ras_extended: {
      DenseMatrix x = rart;
      b.solve_in_place(x);
      DenseMatrix w = DenseMatrix::identity(ne);
      for (Index col = 0; col < ne; ++col)
        for (Index r = 0; r < nc; ++r) w(link[r], col) -= x(r, col);
      DenseMatrix inner = triple_product(ext_idx, c, ext_idx).to_dense();
      const Vector& dt = op.pou_extended();
      for (Index col = 0; col < ne; ++col)
        for (Index r = 0; r < ne; ++r) inner(r, col) *= dt[r] * dt[col];
      g = matmul(w, matmul(inner, w), Op::transpose);
      break;
    }
  }
  symmetrize(g);
  return g;
}

Index LocalSpectralResult::num_selected() const {
  Index s = y_basis.cols();
  for (char f : selected) s += f ? 1 : 0;
  return s;
}

DenseMatrix LocalSpectralResult::selected_vectors() const {
  const Index n = std::max(vectors.rows(), y_basis.rows());
  DenseMatrix u(n, num_selected());
  Index c = 0;
  for (Index k = 0; k < y_basis.cols(); ++k, ++c)
    std::copy_n(y_basis.col(k).data(), n, u.col(c).data());
  for (std::size_t k = 0; k < selected.size(); ++k)
    if (selected[k]) {
      std::copy_n(vectors.col(static_cast<Index>(k)).data(), n, u.col(c).data());
      ++c;
    }
  return u;
}

std::vector<double> LocalSpectralResult::selected_values() const {
  std::vector<double> v(static_cast<std::size_t>(y_basis.cols()),
                        std::numeric_limits<double>::infinity());
  for (std::size_t k = 0; k < selected.size(); ++k)
    if (selected[k]) v.push_back(eigenvalues[k]);
  return v;
}

Vector LocalSpectralResult::apply_projection(std::span<const double> v,
                                             const DenseMatrix& ctilde) const {
  const Index n = static_cast<Index>(v.size());
  Vector out(v.size(), 0.0);
  if (!kernel_path) {
    const Vector cv = matvec(ctilde, v);
    for (std::size_t k = 0; k < selected.size(); ++k) {
      if (!selected[k]) continue;
      const auto u = vectors.col(static_cast<Index>(k));
      axpy(dot(u, cv), u, out);
    }
    return out;
  }
  const Index total = vectors.cols() + y_basis.cols() + null_basis.cols();
  if (total != n) throw Error("apply_projection: kernel path basis is incomplete");
  DenseMatrix basis(n, n);
  Index c = 0;
  for (const DenseMatrix* part : {&vectors, &y_basis, &null_basis})
    for (Index k = 0; k < part->cols(); ++k, ++c)
      std::copy_n(part->col(k).data(), n, basis.col(c).data());
  Vector coef(v.begin(), v.end());
  dense_lu(basis).solve_in_place(coef);
  for (Index k = 0; k < n; ++k) {
    const bool sel = k < vectors.cols() ? selected[k] != 0 : k < vectors.cols() + y_basis.cols();
    if (sel) axpy(coef[k], basis.col(k), out);
  }
  return out;
}

LocalSpectralResult solve_and_select(const DenseMatrix& g, const DenseMatrix& ctilde,
                                     const SelectOptions& options) {
  if (!(options.tau > 0.0)) throw Error("solve_and_select: tau must be positive");
  const Index n = g.rows();
  if (n > kDenseCap) throw CapacityError("solve_and_select: pencil exceeds the dense cap");
  LocalSpectralResult r;
  r.tau = options.tau;
  const double floor = options.report_floor < 0.0 ? 0.5 * options.tau : options.report_floor;
  try {
    auto pairs = gevp_hpd(g, ctilde, EigRange::above(std::min(floor, options.tau)));
    std::reverse(pairs.begin(), pairs.end());
    r.vectors = DenseMatrix(n, static_cast<Index>(pairs.size()));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      r.eigenvalues.push_back(pairs[k].eigenvalue);
      r.selected.push_back(pairs[k].eigenvalue > options.tau ? 1 : 0);
      std::copy(pairs[k].eigenvector.begin(), pairs[k].eigenvector.end(),
                r.vectors.col(static_cast<Index>(k)).begin());
    }
    return r;
  } catch (const NotPositiveDefinite&) {
    r.kernel_path = true;
  }

  // Split Ctil into range and kernel.
  const auto cpairs = eig_hermitian(ctilde);
  const double cmax = cpairs.empty() ? 0.0 : std::max(0.0, cpairs.back().eigenvalue);
  std::vector<Index> range_ids;
  std::vector<Index> kernel_ids;
  for (Index k = 0; k < static_cast<Index>(cpairs.size()); ++k)
    (cpairs[k].eigenvalue > options.kernel_tol * cmax && cmax > 0.0 ? range_ids : kernel_ids)
        .push_back(k);

  const Index nr = static_cast<Index>(range_ids.size());
  const Index nk = static_cast<Index>(kernel_ids.size());
  DenseMatrix vr(n, nr);  // V_r Lambda_r^{-1/2}
  for (Index k = 0; k < nr; ++k) {
    const auto& p = cpairs[range_ids[k]];
    const double s = 1.0 / std::sqrt(p.eigenvalue);
    for (Index i = 0; i < n; ++i) vr(i, k) = p.eigenvector[i] * s;
  }
  DenseMatrix vk(n, nk);
  for (Index k = 0; k < nk; ++k)
    std::copy(cpairs[kernel_ids[k]].eigenvector.begin(), cpairs[kernel_ids[k]].eigenvector.end(),
              vk.col(k).begin());

  if (nr > 0) {
    DenseMatrix h = matmul(vr, matmul(g, vr), Op::transpose);
    symmetrize(h);
    auto pairs = eig_hermitian(h);
    std::reverse(pairs.begin(), pairs.end());
    double scale = 0.0;
    for (const auto& p : pairs) scale = std::max(scale, std::abs(p.eigenvalue));
    r.vectors = DenseMatrix(n, nr);
    for (Index k = 0; k < nr; ++k) {
      double lambda = pairs[k].eigenvalue;
      if (lambda < 0.0 && lambda > -1e-12 * std::max(1.0, scale)) lambda = 0.0;
      r.eigenvalues.push_back(lambda);
      r.selected.push_back(lambda > options.tau ? 1 : 0);
      const Vector u = matvec(vr, pairs[k].eigenvector);
      std::copy(u.begin(), u.end(), r.vectors.col(k).begin());
    }
  } else {
    r.vectors = DenseMatrix(n, 0);
  }

  if (nk > 0) {
    DenseMatrix h = matmul(vk, matmul(g, vk), Op::transpose);
    symmetrize(h);
    const auto pairs = eig_hermitian(h);
    const double gnorm = frobenius_norm(g);
    std::vector<Index> y_ids;
    std::vector<Index> null_ids;
    for (Index k = 0; k < nk; ++k)
      (gnorm > 0.0 && pairs[k].eigenvalue > options.kernel_tol * gnorm ? y_ids : null_ids)
          .push_back(k);
    auto lift = [&](const std::vector<Index>& ids) {
      DenseMatrix out(n, static_cast<Index>(ids.size()));
      for (std::size_t c = 0; c < ids.size(); ++c) {
        const Vector u = matvec(vk, pairs[ids[c]].eigenvector);
        std::copy(u.begin(), u.end(), out.col(static_cast<Index>(c)).begin());
      }
      return out;
    };
    // Largest G-energy first.
    std::reverse(y_ids.begin(), y_ids.end());
    r.y_basis = lift(y_ids);
    r.null_basis = lift(null_ids);
  } else {
    r.y_basis = DenseMatrix(n, 0);
    r.null_basis = DenseMatrix(n, 0);
  }
  return r;
}

const char* to_string(CoarseColumn::Branch b) {
  switch (b) {
    case CoarseColumn::Branch::extended:
      return "extended";
    case CoarseColumn::Branch::kernel:
      return "kernel";
    case CoarseColumn::Branch::geneo:
      return "geneo";
    case CoarseColumn::Branch::geneo_tau:
      return "geneo2_tau";
    case CoarseColumn::Branch::geneo_gamma:
      return "geneo2_gamma";
  }
  return "?";
}

std::vector<Index> CoarseSpaceMatrix::per_subdomain(Index num_subdomains) const {
  std::vector<Index> count(static_cast<std::size_t>(num_subdomains), 0);
  for (const auto& p : provenance) ++count.at(p.subdomain);
  return count;
}

CoarseSpaceMatrix filter_columns(Index global_n, const std::vector<CandidateBlock>& blocks,
                                 double rank_tol, const SparseMatrix* metric) {
  CoarseSpaceMatrix out;
  out.global_n = global_n;
  Index total = 0;
  for (const auto& b : blocks) total += b.columns.cols();
  out.candidates = total;
  const Index n = global_n;
  if (metric != nullptr && (metric->nrows() != n || metric->ncols() != n))
    throw DimensionError("filter_columns: metric size mismatch");
  // Q is M-orthonormal, MQ = M Q. Z and MZ are updated together.
  DenseMatrix q(n, std::max<Index>(total, 1));
  DenseMatrix mq(n, std::max<Index>(total, 1));
  Index r = 0;
  std::vector<Triplet> trip;
  for (const auto& blk : blocks) {
    const Index s = blk.columns.cols();
    if (s == 0) continue;
    if (blk.columns.rows() != static_cast<Index>(blk.support.size()))
      throw DimensionError("filter_columns: support size mismatch");
    DenseMatrix z(n, s);
    for (Index c = 0; c < s; ++c)
      for (std::size_t k = 0; k < blk.support.size(); ++k)
        z(blk.support[k], c) = blk.columns(static_cast<Index>(k), c);
    DenseMatrix mz = metric != nullptr ? multiply(*metric, z) : z;
    Vector norm0(static_cast<std::size_t>(s));
    for (Index c = 0; c < s; ++c) norm0[c] = std::sqrt(std::max(0.0, dot(z.col(c), mz.col(c))));
    for (int pass = 0; pass < 2 && r > 0; ++pass) {
      DenseMatrix coef(r, s);
      cblas_dgemm(CblasColMajor, CblasTrans, CblasNoTrans, r, s, n, 1.0, mq.data(), n, z.data(),
                  n, 0.0, coef.data(), r);
      cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, s, r, -1.0, q.data(), n,
                  coef.data(), r, 1.0, z.data(), n);
      cblas_dgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, n, s, r, -1.0, mq.data(), n,
                  coef.data(), r, 1.0, mz.data(), n);
    }
    auto mnorm = [&](Index c) { return std::sqrt(std::max(0.0, dot(z.col(c), mz.col(c)))); };
    std::vector<Index> remaining(static_cast<std::size_t>(s));
    std::iota(remaining.begin(), remaining.end(), 0);
    while (!remaining.empty()) {
      std::size_t best = 0;
      double best_ratio = -1.0;
      for (std::size_t k = 0; k < remaining.size(); ++k) {
        const Index c = remaining[k];
        const double ratio = norm0[c] > 0.0 ? mnorm(c) / norm0[c] : 0.0;
        if (ratio > best_ratio) {
          best_ratio = ratio;
          best = k;
        }
      }
      if (!(best_ratio >= rank_tol)) break;
      const Index c = remaining[best];
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
      auto qc = q.col(r);
      auto mqc = mq.col(r);
      const double nrm = mnorm(c);
      for (Index i = 0; i < n; ++i) {
        qc[i] = z(i, c) / nrm;
        mqc[i] = mz(i, c) / nrm;
      }
      ++r;
      for (Index other : remaining)
        for (int pass = 0; pass < 2; ++pass) {
          const double h = dot(mqc, z.col(other));
          axpy(-h, qc, z.col(other));
          axpy(-h, mqc, mz.col(other));
        }
      // Kept columns are the original ones, scaled to unit norm.
      const Index row = static_cast<Index>(out.provenance.size());
      for (std::size_t k = 0; k < blk.support.size(); ++k) {
        const double v = blk.columns(static_cast<Index>(k), c);
        if (v != 0.0) trip.push_back({row, blk.support[k], v / norm0[c]});
      }
      out.provenance.push_back(blk.provenance.at(c));
    }
  }
  out.r0 = SparseMatrix::from_triplets(static_cast<Index>(out.provenance.size()), n,
                                       std::move(trip));
  return out;
}

CoarseSpaceMatrix assemble_Z(const std::vector<LocalSpectralResult>& results,
                             const std::vector<LtildeOperator>& ops, Index global_n,
                             double rank_tol, const SparseMatrix* metric) {
  if (results.size() != ops.size()) throw DimensionError("assemble_Z: result/operator mismatch");
  std::vector<CandidateBlock> blocks;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const auto& res = results[j];
    const auto& op = ops[j];
    CandidateBlock blk;
    blk.subdomain = op.subdomain();
    blk.support = op.extended().indices;
    const DenseMatrix u = res.selected_vectors();
    const auto values = res.selected_values();
    blk.columns = DenseMatrix(op.size(), u.cols());
    for (Index c = 0; c < u.cols(); ++c) {
      op.apply(u.col(c), blk.columns.col(c));
      blk.provenance.push_back({op.subdomain(), values[c],
                                std::isinf(values[c]) ? CoarseColumn::Branch::kernel
                                                      : CoarseColumn::Branch::extended});
    }
    blocks.push_back(std::move(blk));
  }
  return filter_columns(global_n, blocks, rank_tol, metric);
}

namespace {

void require_exact_ras(const LocalSolvers& s, const char* what) {
  if (s.backend() != LocalBackend::exact || s.kind() != OneLevelKind::ras ||
      s.source() != LocalMatrixSource::restricted_a)
    throw PreconditionError(std::string(what) +
                            ": needs exact RAS local solvers with B_j = R_j A R_j^*");
}

}  // namespace

double check_harmonicity(const std::vector<LocalSpectralResult>& results,
                         const std::vector<LtildeOperator>& ops) {
  double worst = 0.0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const auto& op = ops[j];
    require_exact_ras(op.solvers(), "check_harmonicity");
    const DenseMatrix u = results.at(j).selected_vectors();
    for (Index c = 0; c < u.cols(); ++c) {
      const auto uc = u.col(c);
      const Vector pu = op.apply_ptilde(uc);
      Vector w(uc.begin(), uc.end());
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= pu[i];
      const Vector aw = op.a_ext().multiply(w);
      double core = 0.0;
      for (Index k : op.link()) core += aw[k] * aw[k];
      const double denom = norm2(aw);
      if (denom > 0.0) worst = std::max(worst, std::sqrt(core) / denom);
    }
  }
  return worst;
}

double check_harmonic_reformulation(const std::vector<LocalSpectralResult>& results,
                                    const std::vector<LtildeOperator>& ops,
                                    const SparseMatrix& a, const SparseMatrix& c,
                                    const Decomposition& dec) {
  const double an = frobenius_norm(a);
  if (a.nrows() != c.nrows() || frobenius_norm(add(a, c, 1.0, -1.0)) > 1e-14 * an)
    throw PreconditionError("check_harmonic_reformulation: needs C = A");
  if (!a.is_hermitian(1e-14)) throw PreconditionError("check_harmonic_reformulation: A not symmetric");
  if (dec.ctilde.size() != ops.size())
    throw PreconditionError("check_harmonic_reformulation: local matrices missing");
  double worst = 0.0;
  for (std::size_t j = 0; j < ops.size(); ++j) {
    const auto& op = ops[j];
    require_exact_ras(op.solvers(), "check_harmonic_reformulation");
    const auto& ext = op.extended().indices;
    const SparseMatrix expect = triple_product(ext, c, ext);
    if (frobenius_norm(add(expect, dec.ctilde[j], 1.0, -1.0)) > 1e-14 * frobenius_norm(expect))
      throw PreconditionError("check_harmonic_reformulation: needs algebraic local matrices");
    const DenseMatrix u = results.at(j).selected_vectors();
    for (Index k = 0; k < u.cols(); ++k) {
      const Vector pu = op.apply_ptilde(u.col(k));
      worst = std::max(worst, norm2(pu) / norm2(u.col(k)));
    }
  }
  return worst;
}

FilteredEstimate verify_filtered_estimate(const LocalSpectralResult& result,
                                          const LtildeOperator& op, const SparseMatrix& c,
                                          const SparseMatrix& ctilde, double tau, int samples,
                                          std::uint64_t seed) {
  const auto& ext = op.extended().indices;
  const SparseMatrix c_ext = triple_product(ext, c, ext);
  const DenseMatrix ct = ctilde.to_dense();
  std::mt19937_64 rng(seed);
  FilteredEstimate out;
  for (int s = 0; s < samples; ++s) {
    const Vector u = random_vector(rng, op.size());
    const Vector pu = result.apply_projection(u, ct);
    Vector w(u);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] -= pu[i];
    const Vector z = op.apply(w);
    const double lhs = dot(z, c_ext.multiply(z));
    const double rhs = dot(u, ctilde.multiply(u));
    if (lhs > (tau + 1e-8) * rhs) out.holds = false;
    if (rhs > 0.0) out.max_ratio = std::max(out.max_ratio, lhs / rhs);
  }
  return out;
}

ExtendedCoarseSpace build_extended_coarse_space(const SparseMatrix& a, const SparseMatrix& c,
                                                const Decomposition& dec,
                                                const LocalSolvers& solvers,
                                                const SelectOptions& options, double rank_tol) {
  if (dec.ctilde.size() != dec.extended.size())
    throw Error("build_extended_coarse_space: local matrices not built");
  ExtendedCoarseSpace out;
  const Index J = dec.num_subdomains();
  out.operators.reserve(J);
  for (Index j = 0; j < J; ++j) {
    out.operators.emplace_back(a, dec, solvers, j);
    const GevpMatrices gm = assemble_gevp(out.operators.back(), c, dec.ctilde[j]);
    auto res = solve_and_select(gm.g, gm.ctilde, options);
    res.subdomain = j;
    out.spectra.push_back(std::move(res));
  }
  out.z = assemble_Z(out.spectra, out.operators, a.nrows(), rank_tol, &c);
  return out;
}

void write_spectrum_csv(std::ostream& os, const std::vector<LocalSpectralResult>& results) {
  os << "subdomain,eig_index,lambda,selected\n";
  char buf[64];
  for (const auto& r : results) {
    Index idx = 0;
    for (Index k = 0; k < r.y_basis.cols(); ++k, ++idx)
      os << r.subdomain << ',' << idx << ",inf,1\n";
    for (std::size_t k = 0; k < r.eigenvalues.size(); ++k, ++idx) {
      std::snprintf(buf, sizeof buf, "%.17g", r.eigenvalues[k]);
      os << r.subdomain << ',' << idx << ',' << buf << ',' << (r.selected[k] ? 1 : 0) << '\n';
    }
  }
}

void write_spectrum_csv(const std::string& path, const std::vector<LocalSpectralResult>& results) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_spectrum_csv(os, results);
}

}  // namespace schwarz
