#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "schwarz/decomp/decomposition.hpp"
#include "schwarz/linalg/dense.hpp"
#include "schwarz/linalg/sparse.hpp"
#include "schwarz/mesh_fem/assembly.hpp"
#include "schwarz/mesh_fem/mesh.hpp"

namespace oracle {

using schwarz::DenseMatrix;
using schwarz::Index;
using schwarz::SparseMatrix;
using schwarz::Vector;

Eigen::MatrixXd to_eigen(const DenseMatrix& a);
Eigen::MatrixXd to_eigen(const SparseMatrix& a);
Eigen::VectorXd to_eigen(const Vector& v);
DenseMatrix from_eigen(const Eigen::MatrixXd& a);
Vector from_eigen(const Eigen::VectorXd& v);

/// Cyclic Jacobi, eigenvalues ascending.
Eigen::VectorXd jacobi_eigenvalues(Eigen::MatrixXd a, double tol = 1e-14, int max_sweeps = 100);

/// Eigenvalues of Ctil^{-1} G from a general (non-symmetric) eigensolver, ascending.
Eigen::VectorXd inverse_pencil_eigenvalues(const Eigen::MatrixXd& g, const Eigen::MatrixXd& c);

/// sqrt(lambda_max(C^{-1} E^T C E)) through Eigen's generalized solver.
double c_norm(const Eigen::MatrixXd& e, const Eigen::MatrixXd& c);

Eigen::MatrixXd random_matrix(Index rows, Index cols, std::uint64_t seed);
Eigen::MatrixXd random_spd(Index n, std::uint64_t seed, double shift = 1.0);
/// SPSD of the given rank.
Eigen::MatrixXd random_spsd(Index n, Index rank, std::uint64_t seed);
Eigen::VectorXd random_vector(Index n, std::uint64_t seed);
/// Random sparse matrix with a guaranteed diagonal.
SparseMatrix random_sparse(Index n, double density, std::uint64_t seed, bool symmetric);

/// Small model problem with its decomposition.
struct Fixture {
  std::shared_ptr<const schwarz::Mesh> mesh;
  schwarz::AssembledSystem sys;
  schwarz::Decomposition dec;
};

struct FixtureOptions {
  Index p = 2;
  Index cells = 6;
  Index overlap = 2;
  schwarz::ProblemSpec problem{};
  bool multiplicity_pou = false;
};

Fixture make_fixture(const FixtureOptions& opt = {});

}  // namespace oracle
