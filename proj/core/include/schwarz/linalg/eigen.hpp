#pragma once

#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "schwarz/linalg/dense.hpp"
#include "schwarz/linalg/sparse.hpp"
#include "schwarz/types.hpp"

namespace schwarz {

struct EigPair {
  double eigenvalue = 0.0;
  Vector eigenvector;
};

/// Which part of a hermitian spectrum to compute.
struct EigRange {
  enum class Kind { all, values, indices };
  Kind kind = Kind::all;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  Index first = 0;  // 0-based, ascending order
  Index last = 0;   // inclusive

  static EigRange all() { return {}; }
  /// Eigenvalues strictly above `v`.
  static EigRange above(double v) {
    return {Kind::values, v, std::numeric_limits<double>::infinity(), 0, 0};
  }
  /// Eigenvalues strictly below `v`.
  static EigRange below(double v) {
    return {Kind::values, -std::numeric_limits<double>::infinity(), v, 0, 0};
  }
  static EigRange largest(Index k) { return {Kind::indices, 0, 0, -k, -1}; }
  static EigRange smallest(Index k) { return {Kind::indices, 0, 0, 0, k - 1}; }
};

/// Eigenpairs of a hermitian matrix, eigenvalues ascending, eigenvectors
/// orthonormal with their largest-magnitude entry positive.
std::vector<EigPair> eig_hermitian(const DenseMatrix& a, EigRange range = EigRange::all());

/// Eigenvalues only, ascending.
Vector eigenvalues_hermitian(const DenseMatrix& a);

/// Generalized pencil G u = lambda Ctil u with G hermitian positive
/// semi-definite and Ctil hermitian positive definite.
///
/// Reduced through Ctil = L L^*. Eigenvalues come back ascending, tiny
/// negative round-off values are clamped to zero, and eigenvectors are
/// Ctil-orthonormal. Throws NotPositiveDefinite if Ctil has no Cholesky factor.
std::vector<EigPair> gevp_hpd(const DenseMatrix& g, const DenseMatrix& ctil,
                              EigRange range = EigRange::all());

/// Applies a linear operator: out = E in.
using LinearMap = std::function<void(std::span<const double>, std::span<double>)>;

/// Columnwise materialization of an n x n operator.
DenseMatrix materialize(const LinearMap& op, Index n);

/// ||E||_C = sqrt(lambda_max(E^* C E, C)) for hermitian positive definite C.
double c_operator_norm(const LinearMap& e, const SparseMatrix& c, Index n);
double c_operator_norm(const DenseMatrix& e, const SparseMatrix& c);

/// Largest matrix order accepted by routines that densify operators.
inline constexpr Index kDenseCap = 3000;

}  // namespace schwarz
