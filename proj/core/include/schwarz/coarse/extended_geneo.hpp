#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "schwarz/decomp/decomposition.hpp"
#include "schwarz/linalg/dense.hpp"
#include "schwarz/linalg/sparse.hpp"
#include "schwarz/precond/local_solvers.hpp"

namespace schwarz {

/// Local error operator on the extended set:
///   Ltil_j v = Dtil_j v - Q_j^* S_j Q_j Atil_j v,  Atil_j = Rtil_j A Rtil_j^*.
///
/// Keeps a pointer to the solvers, which must outlive the operator.
class LtildeOperator {
 public:
  LtildeOperator(const SparseMatrix& a, const Decomposition& dec, const LocalSolvers& solvers,
                 Index j);

  Index subdomain() const noexcept { return j_; }
  Index size() const noexcept { return a_ext_.nrows(); }

  void apply(std::span<const double> v, std::span<double> out) const;
  Vector apply(std::span<const double> v) const;

  /// Dense Ltil_j (size x size).
  DenseMatrix materialize() const;
  /// Rows of Ltil_j at the positions of N_j (the other rows vanish).
  DenseMatrix materialize_core_rows() const;

  /// P_j v = Q_j^* B_j^{-1} Q_j Atil_j v
  Vector apply_ptilde(std::span<const double> v) const;

  const SparseMatrix& a_ext() const noexcept { return a_ext_; }
  const std::vector<Index>& link() const noexcept { return link_; }
  const Vector& pou() const noexcept { return pou_; }
  const Vector& pou_extended() const noexcept { return pou_ext_; }
  const Restriction& extended() const noexcept { return ext_; }
  const LocalSolvers& solvers() const noexcept { return *solvers_; }

 private:
  Index j_;
  Restriction ext_;
  SparseMatrix a_ext_;
  SparseMatrix a_core_;  // Q_j Atil_j
  std::vector<Index> link_;
  Vector pou_;
  Vector pou_ext_;
  const LocalSolvers* solvers_;
};

/// max over random u of ||(I - sum M_j^{-1} A)u - sum Rtil^* Ltil Rtil u|| / ||u||.
double onelevel_error_identity_check(const SparseMatrix& a, const Decomposition& dec,
                                     const LocalSolvers& solvers, int samples = 20,
                                     std::uint64_t seed = 1);

struct GevpMatrices {
  DenseMatrix g;
  DenseMatrix ctilde;
};

/// G = Ltil^* (Rtil C Rtil^*) Ltil with Ltil densified, symmetrized.
GevpMatrices assemble_gevp(const LtildeOperator& op, const SparseMatrix& c,
                           const SparseMatrix& ctilde);

/// Explicit per-method forms used as cross-checks of assemble_gevp.
enum class GevpForm {
  ras_small,    // K = Q - B^{-1} R A Rtil^*,      G = K^* D (R C R^*) D K
  ras_extended, // W = I - Q^* B^{-1} Q Atil,      G = W^* Dtil (Rtil C Rtil^*) Dtil W
  as_small,     // K = D Q - B^{-1} R A Rtil^*,    G = K^* (R C R^*) K
  soras_small,  // K = Q - B^{-1} D R A Rtil^*,    G = K^* D (R C R^*) D K
};
DenseMatrix assemble_gevp_explicit(GevpForm form, const LtildeOperator& op, const SparseMatrix& c);

struct SelectOptions {
  double tau = 10.0;
  double kernel_tol = 1e-10;
  /// Eigenpairs above this value are computed and reported; defaults to tau/2.
  double report_floor = -1.0;
};

struct LocalSpectralResult {
  Index subdomain = -1;
  double tau = 0.0;
  bool kernel_path = false;
  /// Computed eigenvalues of the (projected) pencil, descending.
  std::vector<double> eigenvalues;
  std::vector<char> selected;
  /// Eigenvectors matching `eigenvalues`, Ctil-orthonormal.
  DenseMatrix vectors;
  /// Kernel path: basis of Y_j (kernel of Ctil outside the kernel of G).
  DenseMatrix y_basis;
  /// Kernel path: basis of ker Ctil intersected with ker G.
  DenseMatrix null_basis;

  Index num_selected() const;
  /// U_j: Y_j first, then eigenvectors with lambda > tau in descending order.
  DenseMatrix selected_vectors() const;
  /// Eigenvalue tag per selected vector (+inf for Y_j).
  std::vector<double> selected_values() const;
  /// Pi_j v: projection on span(U_j) along the unselected eigenvectors.
  /// Needs the full basis in the kernel path.
  Vector apply_projection(std::span<const double> v, const DenseMatrix& ctilde) const;
};

/// Selects lambda > tau, plus Y_j when Ctil is singular.
/// Ctil is treated as definite when its Cholesky factorization succeeds.
LocalSpectralResult solve_and_select(const DenseMatrix& g, const DenseMatrix& ctilde,
                                     const SelectOptions& options);

struct CoarseColumn {
  enum class Branch { extended, kernel, geneo, geneo_tau, geneo_gamma };
  Index subdomain;
  double eigenvalue;
  Branch branch;
};

const char* to_string(CoarseColumn::Branch b);

/// Coarse basis after the rank filter, stored as R_0 (one row per column of Z).
struct CoarseSpaceMatrix {
  Index global_n = 0;
  SparseMatrix r0;
  std::vector<CoarseColumn> provenance;
  Index candidates = 0;

  Index rank() const noexcept { return r0.nrows(); }
  std::vector<Index> per_subdomain(Index num_subdomains) const;
};

/// One subdomain's candidate columns: dense local values on `support`.
struct CandidateBlock {
  Index subdomain = 0;
  std::vector<Index> support;  // sorted global indices
  DenseMatrix columns;         // support.size() x s
  std::vector<CoarseColumn> provenance;
};

/// Blockwise classical Gram-Schmidt with reorthogonalization and pivoting
/// inside each block; drops columns whose residual falls below
/// rank_tol times their norm. Inner product (x, M y) when `metric` is given,
/// Euclidean otherwise. The kept columns are the original ones scaled to unit norm.
CoarseSpaceMatrix filter_columns(Index global_n, const std::vector<CandidateBlock>& blocks,
                                 double rank_tol = 1e-8, const SparseMatrix* metric = nullptr);

/// Z columns Rtil_j^* Ltil_j u for every selected u, then the rank filter.
CoarseSpaceMatrix assemble_Z(const std::vector<LocalSpectralResult>& results,
                             const std::vector<LtildeOperator>& ops, Index global_n,
                             double rank_tol = 1e-8, const SparseMatrix* metric = nullptr);

/// max ||Q Atil w|| / ||Atil w|| with w = (I - P_j)u over selected u. Exact RAS only.
double check_harmonicity(const std::vector<LocalSpectralResult>& results,
                         const std::vector<LtildeOperator>& ops);

/// max ||P_j u|| / ||u|| over selected u. Requires exact RAS, C = A and
/// algebraic Ctil.
double check_harmonic_reformulation(const std::vector<LocalSpectralResult>& results,
                                    const std::vector<LtildeOperator>& ops,
                                    const SparseMatrix& a, const SparseMatrix& c,
                                    const Decomposition& dec);

struct FilteredEstimate {
  bool holds = true;
  /// max of ||Rtil^* Ltil (I - Pi) u||_C^2 / (Ctil u, u)
  double max_ratio = 0.0;
};

/// Checks ||Rtil^* Ltil (I - Pi) u||_C^2 <= (tau + 1e-8)(Ctil u, u) on random u.
FilteredEstimate verify_filtered_estimate(const LocalSpectralResult& result,
                                          const LtildeOperator& op, const SparseMatrix& c,
                                          const SparseMatrix& ctilde, double tau,
                                          int samples = 100, std::uint64_t seed = 7);

struct ExtendedCoarseSpace {
  std::vector<LtildeOperator> operators;
  std::vector<LocalSpectralResult> spectra;
  CoarseSpaceMatrix z;
};

/// Full construction; dec.ctilde must be populated. The rank filter uses the C inner product.
ExtendedCoarseSpace build_extended_coarse_space(const SparseMatrix& a, const SparseMatrix& c,
                                                const Decomposition& dec,
                                                const LocalSolvers& solvers,
                                                const SelectOptions& options,
                                                double rank_tol = 1e-8);

/// CSV with columns subdomain,eig_index,lambda,selected.
void write_spectrum_csv(std::ostream& os, const std::vector<LocalSpectralResult>& results);
void write_spectrum_csv(const std::string& path, const std::vector<LocalSpectralResult>& results);

}  // namespace schwarz
