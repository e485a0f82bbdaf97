#pragma once

#include <cstdint>

#include "schwarz/coarse/extended_geneo.hpp"
#include "schwarz/decomp/decomposition.hpp"
#include "schwarz/precond/two_level.hpp"

namespace schwarz {

struct BoundReport {
  Index k0 = 0;
  double k1 = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  double rho = 0.0;
  double bound = 0.0;  // sigma sqrt(k0 k1 tau)
  double measured_norm = 0.0;  // ||I - M^{-1} A||_C
  /// min over sampled u of (M^{-1} A u, u)_C / ||u||_C^2
  double coercivity = 0.0;
  bool theorem_holds = false;
  bool coercivity_holds = true;  // vacuous when bound >= 1
  bool sigma_lemma_holds = true;

  // Proof chain on random u, each as max of lhs / rhs.
  double chain_k0_ratio = 0.0;   // ||sum z_j||_C^2 / (k0 sum ||z_j||_C^2)
  double chain_tau_ratio = 0.0;  // sum ||z_j||_C^2 / (tau sum (Ctil Rtil u, Rtil u))
  double chain_k1_ratio = 0.0;   // sum (Ctil Rtil u, Rtil u) / (k1 ||u||_C^2)
  bool chain_holds = false;
};

struct TheoremOptions {
  bool exact_k1 = true;
  int samples = 100;
  std::uint64_t seed = 11;
};

/// Dense check of the two-level bound. `space` supplies L~_j and Pi_j for the chain;
/// dec.ctilde must be built from the same C.
BoundReport verify_theorem(const SparseMatrix& a, const SparseMatrix& c, const Decomposition& dec,
                           const TwoLevel& tl, const ExtendedCoarseSpace& space, double tau,
                           const TheoremOptions& options = {});

}  // namespace schwarz
