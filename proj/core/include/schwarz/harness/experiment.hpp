#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "schwarz/coarse/baselines.hpp"
#include "schwarz/coarse/extended_geneo.hpp"
#include "schwarz/decomp/decomposition.hpp"
#include "schwarz/krylov/solvers.hpp"
#include "schwarz/krylov/theorem.hpp"
#include "schwarz/mesh_fem/assembly.hpp"
#include "schwarz/precond/local_solvers.hpp"

namespace schwarz {

enum class CoarseKind { none, extended, geneo, geneo2 };
enum class CChoice { a, symmetric_part };

const char* to_string(CoarseKind k);

struct ExperimentConfig {
  std::string name = "run";
  ProblemSpec problem;
  Index J = 4;
  /// Target vertex count of a non-overlapping subdomain block; the block side is its rounded square root.
  Index dofs_per_subdomain = 1600;
  /// Mesh cells per subdomain side; 0 derives it from dofs_per_subdomain.
  Index cells_per_subdomain = 0;
  Index overlap = 4;
  PouKind::Kind pou = PouKind::Kind::boundary_vanishing;
  /// Negative means overlap / 2.
  Index pou_margin = -1;
  OneLevelKind one_level = OneLevelKind::ras;
  LocalBackend backend = LocalBackend::exact;
  LocalMatrixSource local_matrix = LocalMatrixSource::restricted_a;
  RobinRule robin_rule = RobinRule::nu_over_sqrt_h();
  CoarseKind coarse = CoarseKind::extended;
  double tau = 10.0;
  double gamma = 0.1;
  CChoice c = CChoice::symmetric_part;
  CtildeSource ctilde = CtildeSource::neumann(1e-4);
  double geneo_robin_eps = 1e-4;
  double tol = 1e-8;
  Index maxit = 200;
  Index restart = 0;
  std::uint64_t seed = 1;
  double rank_tol = 1e-8;
  bool verify_bound = false;
  bool exact_k1 = true;

  /// Cells per subdomain side actually used.
  Index subdomain_cells() const;
  Index subdomains_per_side() const;
  /// Vertices per side of the global mesh.
  Index mesh_vertices_per_side() const;
  /// "<name>_J<J>"
  std::string id() const;
  std::string problem_label() const;
};

/// Parses a JSON config. Unknown keys and invalid values raise ConfigError
/// listing every problem found.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// Throws ConfigError listing every invalid field.
void validate(const ExperimentConfig& config);
std::string config_to_json(const ExperimentConfig& config);

/// Everything built for one configuration, before the Krylov solve.
struct Problem {
  ExperimentConfig config;
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const SparseMatrix> a;
  SparseMatrix c;
  Vector f;
  ElementMatrices elements;
  Decomposition dec;
  std::shared_ptr<const LocalSolvers> solvers;
  std::optional<ExtendedCoarseSpace> extended;
  std::optional<BaselineResult> baseline;
  std::shared_ptr<const CoarseOperator> coarse;
  std::shared_ptr<const TwoLevel> preconditioner;  // null for an unpreconditioned run
  double setup_time = 0.0;

  Index coarse_size() const { return coarse ? coarse->dimension() : 0; }
  LinearMap preconditioner_map() const;
  const std::vector<LocalSpectralResult>* spectra() const;
};

/// Mesh, assembly, decomposition, local solvers and coarse space.
Problem build_problem(const ExperimentConfig& config);

struct ExperimentResult {
  ExperimentConfig config;
  SolveReport report;
  Index cs_total = 0;
  double cs_relative = 0.0;
  std::optional<BoundReport> bound;
  Index global_n = 0;
  double setup_time = 0.0;
};

struct RunOptions {
  /// Empty: no artifacts.
  std::string out_dir;
  /// Overrides config.verify_bound when set.
  std::optional<bool> verify_bound;
};

ExperimentResult run(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentResult solve(const Problem& problem, const RunOptions& options = {});

struct SweepEntry {
  Index J = 0;
  std::optional<ExperimentResult> result;
  std::string error;
};

/// One run per J with the per-subdomain size held fixed. Errors are recorded per entry.
std::vector<SweepEntry> weak_scaling_sweep(const ExperimentConfig& base,
                                           const std::vector<Index>& js,
                                           const RunOptions& options = {});

/// CSV columns J,problem,onelevel,backend,coarse,tau,iterations,converged,cs_total,
/// cs_relative,sigma,bound,measured_norm.
void emit_summary(std::ostream& os, const std::vector<ExperimentResult>& results);
void emit_summary(const std::vector<ExperimentResult>& results, const std::string& path);

void write_history_csv(const std::string& path, const SolveReport& report);

/// <out>/<id>.mtx, <id>_rhs.mtx and <id>_coords.txt.
void export_matrix(const ExperimentConfig& config, const std::string& out_dir);

/// Output directory: SCHWARZ_OUT_DIR overrides `fallback`.
std::string resolve_out_dir(const std::string& fallback);
/// Applies SCHWARZ_NUM_THREADS to the BLAS backend when set.
void apply_thread_env();

}  // namespace schwarz
