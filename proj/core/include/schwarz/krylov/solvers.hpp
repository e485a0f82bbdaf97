#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "schwarz/linalg/eigen.hpp"
#include "schwarz/linalg/sparse.hpp"

namespace schwarz {

struct SolveReport {
  Index iterations = 0;
  bool converged = false;
  /// Relative residual, entry 0 is the initial one.
  std::vector<double> history;
  double final_true_residual = 0.0;
  Index coarse_size = 0;
  double wall_time = 0.0;
  /// Fixed point only.
  bool diverged = false;
  std::vector<double> c_error_history;
  double contraction = 0.0;
};

struct SolveResult {
  Vector x;
  SolveReport report;
};

struct GmresOptions {
  double tol = 1e-8;
  Index maxit = 200;
  /// 0 means no restart.
  Index restart = 0;
  double breakdown_tol = 1e-14;
};

/// Right-preconditioned GMRES from a zero initial guess. An empty `m` is the identity.
SolveResult gmres(const SparseMatrix& a, std::span<const double> b, const LinearMap& m,
                  const GmresOptions& options = {});

struct FixedPointOptions {
  double tol = 1e-8;
  Index maxit = 200;
  /// With both set, the C-norm error against `reference` is tracked.
  const SparseMatrix* c = nullptr;
  const Vector* reference = nullptr;
  /// Ratios are not recorded once the error drops below this fraction of the initial error.
  double error_floor = 1e-10;
};

/// u <- u + M^{-1}(b - A u) from u = 0. Stops on error growth by 1e3.
SolveResult fixed_point(const SparseMatrix& a, std::span<const double> b, const LinearMap& m,
                        const FixedPointOptions& options = {});

}  // namespace schwarz
