#include "schwarz/mesh_fem/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace schwarz {

double viscosity_at(const ProblemSpec& p, double x, double y, double length) {
  if (p.viscosity == ViscosityKind::constant) return p.nu;
  if (y > 0.0 && y < 1.0) {
    if (x > 0.2 * length && x < 0.4 * length) return 1.0 + 1e5;
    if (x > 0.6 * length && x < 0.8 * length) return 1.0 + 1e4;
  }
  return 1.0;
}

std::array<double, 2> advection_at(const ProblemSpec& p, double x, double y) {
  if (p.kind != ProblemKind::convdiff) return {0.0, 0.0};
  switch (p.advection) {
    case AdvectionKind::none:
      return {0.0, 0.0};
    case AdvectionKind::constant:
      return {1.0, 0.0};
    case AdvectionKind::rotating:
      return {(2.0 * y - 1.0) * std::numbers::pi, (2.0 * x - 1.0) * std::numbers::pi};
  }
  return {0.0, 0.0};
}

std::array<double, 4> edge_mass(const Mesh& mesh, Index a, Index b) {
  const auto& pa = mesh.vertices[a];
  const auto& pb = mesh.vertices[b];
  const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
  return {len / 3.0, len / 6.0, len / 6.0, len / 3.0};
}

namespace {

struct TriangleGeometry {
  double area;
  std::array<std::array<double, 2>, 3> grad;  // gradients of the barycentric functions
  std::array<std::array<double, 2>, 3> mid;   // midpoint of the edge opposite vertex k
  std::array<double, 2> centroid;
  double longest_edge;
};

TriangleGeometry geometry(const Mesh& mesh, Index t) {
  const auto& tri = mesh.triangles[t];
  const auto& p0 = mesh.vertices[tri[0]];
  const auto& p1 = mesh.vertices[tri[1]];
  const auto& p2 = mesh.vertices[tri[2]];
  TriangleGeometry g{};
  const double det = (p1[0] - p0[0]) * (p2[1] - p0[1]) - (p2[0] - p0[0]) * (p1[1] - p0[1]);
  g.area = 0.5 * det;
  const std::array<const std::array<double, 2>*, 3> p{&p0, &p1, &p2};
  for (int k = 0; k < 3; ++k) {
    const auto& a = *p[(k + 1) % 3];
    const auto& b = *p[(k + 2) % 3];
    g.grad[k] = {(a[1] - b[1]) / det, (b[0] - a[0]) / det};
    g.mid[k] = {0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
    g.longest_edge = std::max(g.longest_edge, std::hypot(b[0] - a[0], b[1] - a[1]));
  }
  g.centroid = {(p0[0] + p1[0] + p2[0]) / 3.0, (p0[1] + p1[1] + p2[1]) / 3.0};
  return g;
}

// Edge-midpoint quadrature: exact for quadratics. phi_i is 1/2 on the two
// midpoints adjacent to vertex i and 0 on the opposite one.
constexpr double phi_at_mid(int i, int m) { return i == m ? 0.0 : 0.5; }

double supg_tau(double bnorm, double h, double nu) {
  if (bnorm <= 0.0) return 0.0;
  const double pe = bnorm * h / (2.0 * nu);
  return h / (2.0 * bnorm) * std::min(1.0, pe / 3.0);
}

AssembledSystem assemble_impl(const ProblemSpec& problem, const Mesh& mesh, bool advect) {
  AssembledSystem out;
  auto shared = std::make_shared<const Mesh>(mesh);
  ElementMatrices& el = out.elements;
  el.mesh = shared;
  el.problem = problem;
  const Index nt = mesh.num_triangles();
  el.triangle_blocks.resize(static_cast<std::size_t>(nt));
  el.nu.resize(static_cast<std::size_t>(nt));
  el.h.resize(static_cast<std::size_t>(nt));
  out.f.assign(static_cast<std::size_t>(mesh.num_vertices()), 0.0);

  std::vector<Triplet> trip;
  trip.reserve(9 * static_cast<std::size_t>(nt) + 4 * mesh.boundary_edges.size());
  for (Index t = 0; t < nt; ++t) {
    const auto g = geometry(mesh, t);
    const double nu = viscosity_at(problem, g.centroid[0], g.centroid[1], mesh.length);
    el.nu[t] = nu;
    el.h[t] = g.longest_edge;
    std::array<double, 9> blk{};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double stiff =
            nu * g.area * (g.grad[i][0] * g.grad[j][0] + g.grad[i][1] * g.grad[j][1]);
        const double mass = problem.eta * g.area / 12.0 * (i == j ? 2.0 : 1.0);
        blk[3 * i + j] = stiff + mass;
      }
    std::array<double, 3> load{g.area / 3.0, g.area / 3.0, g.area / 3.0};
    if (advect) {
      std::array<std::array<double, 2>, 3> bm;
      for (int m = 0; m < 3; ++m) bm[m] = advection_at(problem, g.mid[m][0], g.mid[m][1]);
      const auto bc = advection_at(problem, g.centroid[0], g.centroid[1]);
      const double tau =
          problem.supg ? supg_tau(std::hypot(bc[0], bc[1]), g.longest_edge, nu) : 0.0;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          double adv = 0.0;
          double stab = 0.0;
          for (int m = 0; m < 3; ++m) {
            const double bgj = bm[m][0] * g.grad[j][0] + bm[m][1] * g.grad[j][1];
            const double bgi = bm[m][0] * g.grad[i][0] + bm[m][1] * g.grad[i][1];
            adv += bgj * phi_at_mid(i, m);
            stab += (bgj + problem.eta * phi_at_mid(j, m)) * bgi;
          }
          blk[3 * i + j] += g.area / 3.0 * (adv + tau * stab);
        }
        load[i] += tau * g.area * (bc[0] * g.grad[i][0] + bc[1] * g.grad[i][1]);
      }
    }
    el.triangle_blocks[t] = blk;
    const auto& tri = mesh.triangles[t];
    for (int i = 0; i < 3; ++i) {
      out.f[tri[i]] += load[i];
      for (int j = 0; j < 3; ++j) trip.push_back({tri[i], tri[j], blk[3 * i + j]});
    }
  }

  el.robin_blocks.resize(mesh.boundary_edges.size());
  for (std::size_t e = 0; e < mesh.boundary_edges.size(); ++e) {
    const auto& be = mesh.boundary_edges[e];
    if (be.tag != BoundaryTag::robin) {
      el.robin_blocks[e] = {0.0, 0.0, 0.0, 0.0};
      continue;
    }
    auto em = edge_mass(mesh, be.v0, be.v1);
    for (double& v : em) v *= problem.robin;
    el.robin_blocks[e] = em;
    trip.push_back({be.v0, be.v0, em[0]});
    trip.push_back({be.v0, be.v1, em[1]});
    trip.push_back({be.v1, be.v0, em[2]});
    trip.push_back({be.v1, be.v1, em[3]});
  }
  const bool symmetric = !advect || problem.advection == AdvectionKind::none;
  out.a = SparseMatrix::from_triplets(mesh.num_vertices(), mesh.num_vertices(), std::move(trip),
                                      symmetric);
  return out;
}

// Position of a domain boundary edge in mesh.boundary_edges, or -1 for an
// edge interior to the domain.
Index boundary_edge_index(const Mesh& mesh, Index a, Index b) {
  const Index nx = mesh.nx;
  const Index ny = mesh.ny;
  const Index ia = a % nx, ja = a / nx, ib = b % nx, jb = b / nx;
  if (ja == jb && std::abs(ia - ib) == 1) {
    if (ja == 0) return std::min(ia, ib);
    if (ja == ny - 1) return (nx - 1) + (ny - 1) + std::min(ia, ib);
  }
  if (ia == ib && std::abs(ja - jb) == 1) {
    if (ia == nx - 1) return (nx - 1) + std::min(ja, jb);
    if (ia == 0) return 2 * (nx - 1) + (ny - 1) + std::min(ja, jb);
  }
  return -1;
}

struct PatchEdge {
  Index a;  // counter-clockwise within `triangle`
  Index b;
  Index triangle;
  int count;
};

struct Patch {
  std::vector<Index> local;  // global -> local, -1 outside
  std::vector<Index> triangles;
  std::vector<PatchEdge> boundary;  // edges with a single patch triangle
};

Patch build_patch(const Mesh& mesh, std::span<const Index> dofs) {
  if (dofs.empty()) throw DimensionError("patch assembly: empty dof set");
  Patch p;
  p.local.assign(static_cast<std::size_t>(mesh.num_vertices()), -1);
  for (std::size_t k = 0; k < dofs.size(); ++k) {
    if (dofs[k] < 0 || dofs[k] >= mesh.num_vertices())
      throw DimensionError("patch assembly: dof out of range");
    if (k > 0 && dofs[k - 1] >= dofs[k])
      throw DimensionError("patch assembly: dofs not strictly increasing");
    p.local[dofs[k]] = static_cast<Index>(k);
  }
  std::unordered_map<std::uint64_t, PatchEdge> edges;
  for (Index t = 0; t < mesh.num_triangles(); ++t) {
    const auto& tri = mesh.triangles[t];
    if (p.local[tri[0]] < 0 || p.local[tri[1]] < 0 || p.local[tri[2]] < 0) continue;
    p.triangles.push_back(t);
    for (int k = 0; k < 3; ++k) {
      const Index a = tri[k];
      const Index b = tri[(k + 1) % 3];
      const auto key = (static_cast<std::uint64_t>(std::min(a, b)) << 32) |
                       static_cast<std::uint32_t>(std::max(a, b));
      auto [it, inserted] = edges.try_emplace(key, PatchEdge{a, b, t, 0});
      ++it->second.count;
    }
  }
  for (const auto& [key, e] : edges)
    if (e.count == 1) p.boundary.push_back(e);
  std::sort(p.boundary.begin(), p.boundary.end(), [](const PatchEdge& x, const PatchEdge& y) {
    return x.triangle != y.triangle ? x.triangle < y.triangle : x.a < y.a;
  });
  return p;
}

void add_edge_block(std::vector<Triplet>& trip, const Patch& p, Index a, Index b,
                    const std::array<double, 4>& blk, double weight) {
  const Index la = p.local[a];
  const Index lb = p.local[b];
  trip.push_back({la, la, weight * blk[0]});
  trip.push_back({la, lb, weight * blk[1]});
  trip.push_back({lb, la, weight * blk[2]});
  trip.push_back({lb, lb, weight * blk[3]});
}

void add_triangles(std::vector<Triplet>& trip, const ElementMatrices& el, const Patch& p,
                   bool symmetric_part) {
  for (Index t : p.triangles) {
    const auto& tri = el.mesh->triangles[t];
    const auto& blk = el.triangle_blocks[t];
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double v =
            symmetric_part ? 0.5 * (blk[3 * i + j] + conj(blk[3 * j + i])) : blk[3 * i + j];
        trip.push_back({p.local[tri[i]], p.local[tri[j]], v});
      }
  }
}

}  // namespace

AssembledSystem assemble(const ProblemSpec& problem, const Mesh& mesh) {
  return assemble_impl(problem, mesh, false);
}

AssembledSystem assemble_convdiff(const ProblemSpec& problem, const Mesh& mesh) {
  if (problem.kind != ProblemKind::convdiff)
    throw Error("assemble_convdiff: problem kind must be convdiff");
  return assemble_impl(problem, mesh, true);
}

AssembledSystem assemble_problem(const ProblemSpec& problem, const Mesh& mesh) {
  return problem.kind == ProblemKind::convdiff ? assemble_convdiff(problem, mesh)
                                               : assemble(problem, mesh);
}

SparseMatrix neumann_matrix(const ElementMatrices& el, std::span<const Index> dofs,
                            const NeumannOptions& options) {
  if (options.robin_eps < 0.0) throw Error("neumann_matrix: robin_eps must be non-negative");
  const Mesh& mesh = *el.mesh;
  const Patch p = build_patch(mesh, dofs);
  std::vector<Triplet> trip;
  add_triangles(trip, el, p, options.symmetric_part);
  for (const auto& e : p.boundary) {
    const Index be = boundary_edge_index(mesh, e.a, e.b);
    if (be >= 0) {
      if (options.include_physical_robin)
        add_edge_block(trip, p, mesh.boundary_edges[be].v0, mesh.boundary_edges[be].v1,
                       el.robin_blocks[be], 1.0);
    } else if (options.robin_eps > 0.0) {
      add_edge_block(trip, p, e.a, e.b, edge_mass(mesh, e.a, e.b), options.robin_eps);
    }
  }
  const auto n = static_cast<Index>(dofs.size());
  const bool sym = options.symmetric_part || el.problem.kind == ProblemKind::diffusion ||
                   el.problem.advection == AdvectionKind::none;
  return SparseMatrix::from_triplets(n, n, std::move(trip), sym);
}

RobinMatrix robin_local_matrix(const ElementMatrices& el, std::span<const Index> dofs,
                               const RobinRule& rule) {
  const Mesh& mesh = *el.mesh;
  const Patch p = build_patch(mesh, dofs);
  RobinMatrix out;
  std::vector<Triplet> trip;
  add_triangles(trip, el, p, false);
  for (const auto& e : p.boundary) {
    const Index be = boundary_edge_index(mesh, e.a, e.b);
    if (be >= 0) {
      add_edge_block(trip, p, mesh.boundary_edges[be].v0, mesh.boundary_edges[be].v1,
                     el.robin_blocks[be], 1.0);
      continue;
    }
    const auto& pa = mesh.vertices[e.a];
    const auto& pb = mesh.vertices[e.b];
    const double len = std::hypot(pb[0] - pa[0], pb[1] - pa[1]);
    double coef = 0.0;
    switch (rule.kind) {
      case RobinRule::Kind::constant:
        coef = rule.value;
        break;
      case RobinRule::Kind::nu_over_sqrt_h:
        coef = el.nu[e.triangle] / std::sqrt(len);
        break;
      case RobinRule::Kind::convdiff: {
        // Outward normal of a counter-clockwise edge a -> b is (dy, -dx)/|e|.
        const double nxo = (pb[1] - pa[1]) / len;
        const double nyo = -(pb[0] - pa[0]) / len;
        const auto b = advection_at(el.problem, 0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1]));
        double arg = b[0] * nxo + b[1] * nyo + 4.0 * el.nu[e.triangle];
        if (arg < 0.0) {
          arg = 0.0;
          ++out.clamped_edges;
        }
        coef = std::sqrt(arg) / (2.0 * std::sqrt(len));
        break;
      }
    }
    if (coef != 0.0) add_edge_block(trip, p, e.a, e.b, edge_mass(mesh, e.a, e.b), coef);
  }
  const auto n = static_cast<Index>(dofs.size());
  const bool sym =
      el.problem.kind == ProblemKind::diffusion || el.problem.advection == AdvectionKind::none;
  out.matrix = SparseMatrix::from_triplets(n, n, std::move(trip), sym);
  return out;
}

}  // namespace schwarz
