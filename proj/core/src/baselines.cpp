#include "schwarz/coarse/baselines.hpp"

#include <algorithm>

#include "schwarz/linalg/eigen.hpp"

namespace schwarz {

namespace {

LocalSpectralResult from_pairs(Index subdomain, double threshold, std::vector<EigPair> pairs,
                               bool above) {
  LocalSpectralResult r;
  r.subdomain = subdomain;
  r.tau = threshold;
  if (above) std::reverse(pairs.begin(), pairs.end());
  const Index n = pairs.empty() ? 0 : static_cast<Index>(pairs.front().eigenvector.size());
  r.vectors = DenseMatrix(n, static_cast<Index>(pairs.size()));
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    const double l = pairs[k].eigenvalue;
    r.eigenvalues.push_back(l);
    r.selected.push_back(above ? (l > threshold ? 1 : 0) : (l < threshold ? 1 : 0));
    std::copy(pairs[k].eigenvector.begin(), pairs[k].eigenvector.end(),
              r.vectors.col(static_cast<Index>(k)).begin());
  }
  return r;
}

// D (R A R^*) D, symmetric part.
DenseMatrix weighted_block(const SparseMatrix& a, const Restriction& sub, const Vector& d) {
  DenseMatrix g = triple_product(sub.indices, a, sub.indices).to_dense();
  const Index n = g.rows();
  for (Index c = 0; c < n; ++c)
    for (Index r = 0; r < n; ++r) g(r, c) *= d[r] * d[c];
  symmetrize(g);
  return g;
}

DenseMatrix neumann_block(const ElementMatrices& el, const Restriction& sub, double eps) {
  NeumannOptions opt;
  opt.robin_eps = eps;
  opt.symmetric_part = true;
  opt.include_physical_robin = true;
  return neumann_matrix(el, sub.indices, opt).to_dense();
}

CandidateBlock block_from(const LocalSpectralResult& res, const Restriction& sub, const Vector& d,
                          CoarseColumn::Branch branch) {
  CandidateBlock blk;
  blk.subdomain = res.subdomain;
  blk.support = sub.indices;
  const DenseMatrix u = res.selected_vectors();
  const auto values = res.selected_values();
  blk.columns = u;
  for (Index c = 0; c < u.cols(); ++c) {
    auto col = blk.columns.col(c);
    for (std::size_t k = 0; k < d.size(); ++k) col[k] *= d[k];
    blk.provenance.push_back({res.subdomain, values[c], branch});
  }
  return blk;
}

void check_size(const Restriction& sub) {
  if (sub.size() > kDenseCap)
    throw CapacityError("baseline: subdomain size exceeds the dense cap");
}

}  // namespace

LocalSpectralResult select_above(Index subdomain, const DenseMatrix& g, const DenseMatrix& b,
                                 double tau) {
  return from_pairs(subdomain, tau, gevp_hpd(g, b, EigRange::above(0.5 * tau)), true);
}

LocalSpectralResult select_below(Index subdomain, const DenseMatrix& g, const DenseMatrix& b,
                                 double gamma) {
  return from_pairs(subdomain, gamma, gevp_hpd(g, b, EigRange::below(gamma)), false);
}

BaselineResult geneo_baseline(const SparseMatrix& a, const Decomposition& dec,
                              const ElementMatrices& elements, double tau, double robin_eps,
                              double rank_tol) {
  const SparseMatrix c = symmetric_part(a);
  BaselineResult out;
  std::vector<CandidateBlock> blocks;
  for (Index j = 0; j < dec.num_subdomains(); ++j) {
    const auto& sub = dec.subdomains[j];
    check_size(sub);
    const DenseMatrix g = weighted_block(a, sub, dec.pou[j]);
    const DenseMatrix an = neumann_block(elements, sub, robin_eps);
    out.spectra.push_back(select_above(j, g, an, tau));
    blocks.push_back(block_from(out.spectra.back(), sub, dec.pou[j], CoarseColumn::Branch::geneo));
  }
  out.z = filter_columns(a.nrows(), blocks, rank_tol, &c);
  return out;
}

BaselineResult geneo2_baseline(const SparseMatrix& a, const Decomposition& dec,
                               const std::vector<SparseMatrix>& b,
                               const ElementMatrices& elements, double tau, double gamma,
                               double robin_eps, double rank_tol) {
  if (static_cast<Index>(b.size()) != dec.num_subdomains())
    throw DimensionError("geneo2_baseline: one local matrix per subdomain expected");
  const SparseMatrix c = symmetric_part(a);
  BaselineResult out;
  std::vector<CandidateBlock> blocks;
  for (Index j = 0; j < dec.num_subdomains(); ++j) {
    const auto& sub = dec.subdomains[j];
    check_size(sub);
    DenseMatrix bj = b[j].to_dense();
    symmetrize(bj);
    const DenseMatrix g = weighted_block(a, sub, dec.pou[j]);
    out.spectra.push_back(select_above(j, g, bj, tau));
    blocks.push_back(
        block_from(out.spectra.back(), sub, dec.pou[j], CoarseColumn::Branch::geneo_tau));
    const DenseMatrix an = neumann_block(elements, sub, robin_eps);
    out.gamma_spectra.push_back(select_below(j, an, bj, gamma));
    blocks.push_back(
        block_from(out.gamma_spectra.back(), sub, dec.pou[j], CoarseColumn::Branch::geneo_gamma));
  }
  out.z = filter_columns(a.nrows(), blocks, rank_tol, &c);
  return out;
}

}  // namespace schwarz
