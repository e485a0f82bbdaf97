#pragma once

#include <vector>

#include "schwarz/coarse/extended_geneo.hpp"
#include "schwarz/mesh_fem/assembly.hpp"

namespace schwarz {

struct BaselineResult {
  CoarseSpaceMatrix z;
  std::vector<LocalSpectralResult> spectra;        // tau branch
  std::vector<LocalSpectralResult> gamma_spectra;  // GenEO-2 second pencil
};

/// D_j R_j A R_j^* D_j u = lambda A_j^N u on N_j, lambda > tau, columns R_j^* D_j u.
/// A_j^N is the symmetric-part Neumann matrix with robin_eps on the artificial boundary.
BaselineResult geneo_baseline(const SparseMatrix& a, const Decomposition& dec,
                              const ElementMatrices& elements, double tau,
                              double robin_eps = 1e-4, double rank_tol = 1e-8);

/// Pencil 1: D_j R_j A R_j^* D_j u = lambda B_j u, lambda > tau.
/// Pencil 2: A_j^N u = lambda B_j u, lambda < gamma.
/// B_j are the SORAS Robin matrices.
BaselineResult geneo2_baseline(const SparseMatrix& a, const Decomposition& dec,
                               const std::vector<SparseMatrix>& b,
                               const ElementMatrices& elements, double tau, double gamma,
                               double robin_eps = 1e-4, double rank_tol = 1e-8);

/// Dense pencil helper shared by the baselines.
LocalSpectralResult select_above(Index subdomain, const DenseMatrix& g, const DenseMatrix& b,
                                 double tau);
LocalSpectralResult select_below(Index subdomain, const DenseMatrix& g, const DenseMatrix& b,
                                 double gamma);

}  // namespace schwarz
