#pragma once

#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "schwarz/linalg/sparse.hpp"
#include "schwarz/mesh_fem/assembly.hpp"
#include "schwarz/mesh_fem/mesh.hpp"

namespace schwarz {

/// Boolean restriction R given by a sorted list of global indices.
struct Restriction {
  Index global_n = 0;
  std::vector<Index> indices;

  Index size() const noexcept { return static_cast<Index>(indices.size()); }
  /// x|_indices
  Vector restrict(std::span<const double> x) const;
  /// y[indices] += x_local
  void prolong_add(std::span<const double> x_local, std::span<double> y) const;
};

/// Non-overlapping p x q vertex blocks of a structured mesh.
std::vector<Restriction> partition_blocks(const Mesh& mesh, Index p, Index q);

/// Grows every set by `layers` rings of the adjacency graph of A.
std::vector<Restriction> extend_layers(const std::vector<Restriction>& sets, const SparseMatrix& a,
                                       Index layers);

/// One extra adjacency ring.
std::vector<Restriction> build_extended(const std::vector<Restriction>& sets,
                                        const SparseMatrix& a);

/// True iff N_j is contained in the extended set and every row of A indexed
/// by N_j has its stored entries inside the extended set.
bool verify_assumption1(const std::vector<Restriction>& sets,
                        const std::vector<Restriction>& extended, const SparseMatrix& a);

struct PouKind {
  enum class Kind { multiplicity, boundary_vanishing };
  Kind kind = Kind::multiplicity;
  /// Outermost layers with zero weight (boundary_vanishing only).
  Index interior_margin = 0;
  /// Overlap layers the sets were grown by; the ramp reaches 1 on the seed.
  Index overlap = 0;

  static PouKind multiplicity() { return {}; }
  static PouKind boundary_vanishing(Index interior_margin, Index overlap) {
    return {Kind::boundary_vanishing, interior_margin, overlap};
  }
};

/// Diagonals D_j with sum_j R_j^* D_j R_j = I exactly in floating point.
///
/// Weights are normalized and rounded to multiples of 2^-40; the rounding
/// remainder goes to the largest weight of each index, so every partial sum
/// is exact.
std::vector<Vector> build_pou(const std::vector<Restriction>& sets, const SparseMatrix& a,
                              const PouKind& kind);

/// max_i |sum_j (R_j^* D_j R_j)_ii - 1|
double pou_defect(const std::vector<Restriction>& sets, const std::vector<Vector>& pou);

struct Decomposition {
  Index global_n = 0;
  std::vector<Restriction> subdomains;  // N_j
  std::vector<Restriction> extended;    // extended sets
  std::vector<Vector> pou;              // D_j on N_j
  std::vector<Vector> pou_extended;     // Q^* D_j Q on the extended set
  std::vector<std::vector<Index>> link;  // Q_j: position of N_j entries in the extended set
  std::vector<SparseMatrix> ctilde;     // local SPSD matrices, empty until build_ctilde
  Index k0 = 0;
  double k1 = 0.0;
  double k1_combinatorial = 0.0;

  Index num_subdomains() const noexcept { return static_cast<Index>(subdomains.size()); }
};

/// Seeds, overlap growth, extension by one ring, PoU and link maps.
Decomposition build_decomposition(const Mesh& mesh, const SparseMatrix& a, Index p, Index q,
                                  Index overlap, const PouKind& pou);

/// Assembles the decomposition from given sets (N_j), extending by one ring.
Decomposition decomposition_from_sets(std::vector<Restriction> sets, const SparseMatrix& a,
                                      const PouKind& pou);

struct CtildeSource {
  enum class Kind { neumann, algebraic };
  Kind kind = Kind::neumann;
  double robin_eps = 1e-4;

  static CtildeSource neumann(double robin_eps) { return {Kind::neumann, robin_eps}; }
  static CtildeSource algebraic() { return {Kind::algebraic, 0.0}; }
};

/// Neumann kind: symmetric-part Neumann matrices over the extended sets with
/// robin_eps on the artificial boundary. Algebraic kind: extended restriction of C.
std::vector<SparseMatrix> build_ctilde(const Decomposition& dec, const CtildeSource& source,
                                       const ElementMatrices* elements, const SparseMatrix& c);

/// min(max degree + 1, greedy colour count) of the graph linking i and j
/// when the extended restriction of C between them is structurally nonzero.
Index compute_k0(const Decomposition& dec, const SparseMatrix& c);

struct K1Estimate {
  double exact = 0.0;          // lambda_max of (sum R^* Ctil R, C)
  double combinatorial = 0.0;  // max multiplicity of the extended cover
};

K1Estimate estimate_k1(const Decomposition& dec, const SparseMatrix& c);

/// Maximum number of extended sets sharing one index.
Index max_multiplicity(const std::vector<Restriction>& sets, Index global_n);

/// CSV with columns subdomain,global_index,weight.
void write_decomposition_csv(std::ostream& os, const Decomposition& dec);
void write_decomposition_csv(const std::string& path, const Decomposition& dec);

}  // namespace schwarz
