#pragma once

#include <span>
#include <vector>

#include "schwarz/decomp/decomposition.hpp"
#include "schwarz/linalg/factorization.hpp"
#include "schwarz/mesh_fem/assembly.hpp"

namespace schwarz {

/// `none` is the identity preconditioner (unpreconditioned runs).
enum class OneLevelKind { none, ras, as, soras };
enum class LocalBackend { exact, icc };
enum class LocalMatrixSource { restricted_a, robin };

const char* to_string(OneLevelKind k);
const char* to_string(LocalBackend b);

struct LocalSolverOptions {
  OneLevelKind kind = OneLevelKind::ras;
  LocalBackend backend = LocalBackend::exact;
  LocalMatrixSource source = LocalMatrixSource::restricted_a;
  RobinRule robin_rule = RobinRule::nu_over_sqrt_h();
};

/// Local solvers S_j on the subdomains N_j:
///   ras:   D_j B_j^{-1}
///   as:    B_j^{-1}
///   soras: D_j B_j^{-1} D_j
class LocalSolvers {
 public:
  LocalSolvers() = default;

  OneLevelKind kind() const noexcept { return options_.kind; }
  LocalBackend backend() const noexcept { return options_.backend; }
  LocalMatrixSource source() const noexcept { return options_.source; }
  Index num_subdomains() const noexcept { return static_cast<Index>(restrictions_.size()); }
  Index global_size() const noexcept { return global_n_; }

  /// B_j^{-1} r_j (raw local solve, exact or ICC).
  Vector solve_local(Index j, std::span<const double> r) const;
  /// S_j r_j
  Vector apply_local(Index j, std::span<const double> r) const;
  /// S_j applied to every column.
  void apply_local(Index j, DenseMatrix& block) const;

  /// sum_j R_j^* S_j R_j r, summed in subdomain order.
  void apply(std::span<const double> r, std::span<double> out) const;
  Vector apply(std::span<const double> r) const;

  const SparseMatrix& local_matrix(Index j) const { return matrices_[j]; }
  const Factorization& factorization(Index j) const { return factors_[j]; }
  const Restriction& restriction(Index j) const { return restrictions_[j]; }
  const Vector& pou(Index j) const { return pou_[j]; }
  /// Edges whose convdiff Robin argument was clamped.
  Index clamped_robin_edges() const noexcept { return clamped_edges_; }
  /// Total shifted retries of ICC factorizations.
  int icc_shift_retries() const noexcept { return icc_retries_; }

  friend LocalSolvers build_local_solvers(const SparseMatrix& a, const Decomposition& dec,
                                          const LocalSolverOptions& options,
                                          const ElementMatrices* elements);

 private:
  LocalSolverOptions options_;
  Index global_n_ = 0;
  std::vector<Restriction> restrictions_;
  std::vector<Vector> pou_;
  std::vector<SparseMatrix> matrices_;
  std::vector<Factorization> factors_;
  Index clamped_edges_ = 0;
  int icc_retries_ = 0;
};

/// Builds B_j (restricted A or a Robin matrix) and factorizes it.
/// Throws FactorizationError naming the subdomain on failure.
LocalSolvers build_local_solvers(const SparseMatrix& a, const Decomposition& dec,
                                 const LocalSolverOptions& options,
                                 const ElementMatrices* elements = nullptr);

}  // namespace schwarz
