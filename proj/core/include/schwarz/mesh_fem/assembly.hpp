#pragma once

#include <array>
#include <memory>
#include <span>
#include <vector>

#include "schwarz/linalg/sparse.hpp"
#include "schwarz/mesh_fem/mesh.hpp"

namespace schwarz {

enum class ProblemKind { diffusion, convdiff };
enum class ViscosityKind { constant, contrast };
enum class AdvectionKind { none, constant, rotating };

struct ProblemSpec {
  ProblemKind kind = ProblemKind::diffusion;
  ViscosityKind viscosity = ViscosityKind::constant;
  double nu = 1.0;  // value of the constant field
  double eta = 1e-8;
  AdvectionKind advection = AdvectionKind::none;
  bool supg = true;
  /// Robin coefficient on the bottom edge.
  double robin = 1.0;
};

double viscosity_at(const ProblemSpec& p, double x, double y, double length);
std::array<double, 2> advection_at(const ProblemSpec& p, double x, double y);

/// Element-level pieces of the global operator.
///
/// Triangle blocks are row-major 3x3 in the local vertex order of the
/// triangle. Robin blocks follow mesh.boundary_edges and are zero on the
/// natural (Neumann) part of the boundary.
struct ElementMatrices {
  std::shared_ptr<const Mesh> mesh;
  ProblemSpec problem;
  std::vector<std::array<double, 9>> triangle_blocks;
  std::vector<double> nu;  // per triangle, evaluated at the centroid
  std::vector<double> h;   // longest edge per triangle
  std::vector<std::array<double, 4>> robin_blocks;
};

struct AssembledSystem {
  SparseMatrix a;
  Vector f;
  ElementMatrices elements;
};

/// P1 assembly of -div(nu grad u) + eta u with the bottom Robin condition and f = 1.
AssembledSystem assemble(const ProblemSpec& problem, const Mesh& mesh);

/// Adds the advection term (b . grad u, v) and, when enabled, SUPG stabilization.
AssembledSystem assemble_convdiff(const ProblemSpec& problem, const Mesh& mesh);

/// Dispatches on problem.kind.
AssembledSystem assemble_problem(const ProblemSpec& problem, const Mesh& mesh);

/// |e|/6 [[2,1],[1,2]] for the edge (a, b).
std::array<double, 4> edge_mass(const Mesh& mesh, Index a, Index b);

struct NeumannOptions {
  double robin_eps = 0.0;
  /// Assemble (K + K^*)/2 of every triangle block.
  bool symmetric_part = false;
  /// Keep the physical Robin edge terms of edges lying in the patch.
  bool include_physical_robin = true;
};

/// Sub-assembly over the triangles whose three vertices lie in `dofs`, plus
/// robin_eps times the edge mass on artificial boundary edges (edges of the
/// patch that are interior to the domain). Rows and columns follow `dofs`.
SparseMatrix neumann_matrix(const ElementMatrices& elements, std::span<const Index> dofs,
                            const NeumannOptions& options = {});

struct RobinRule {
  enum class Kind { constant, nu_over_sqrt_h, convdiff };
  Kind kind = Kind::constant;
  double value = 0.0;  // coefficient of the constant rule

  static RobinRule constant(double c) { return {Kind::constant, c}; }
  static RobinRule nu_over_sqrt_h() { return {Kind::nu_over_sqrt_h, 0.0}; }
  static RobinRule convdiff() { return {Kind::convdiff, 0.0}; }
};

struct RobinMatrix {
  SparseMatrix matrix;
  /// Edges where the convdiff rule had a negative argument clamped to zero.
  Index clamped_edges = 0;
};

/// Neumann-style sub-assembly of the full (possibly non-symmetric) blocks with
/// a Robin term on the artificial boundary. h is the edge length, nu the
/// coefficient of the adjacent patch triangle, b is evaluated at the edge midpoint.
RobinMatrix robin_local_matrix(const ElementMatrices& elements, std::span<const Index> dofs,
                               const RobinRule& rule);

}  // namespace schwarz
