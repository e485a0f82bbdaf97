#pragma once

#include <array>
#include <string>
#include <vector>

#include "schwarz/types.hpp"

namespace schwarz {

enum class BoundaryTag { robin, neumann };

struct BoundaryEdge {
  Index v0;
  Index v1;  // v0 -> v1 runs counter-clockwise around the owning triangle
  Index triangle;
  BoundaryTag tag;
};

/// Structured triangulation of (0, length)^2.
///
/// Vertex (i, j) has index i + j*nx. Every cell is split along its
/// lower-left to upper-right diagonal into (v00, v10, v11) and (v00, v11, v01),
/// both counter-clockwise.
struct Mesh {
  Index nx = 0;
  Index ny = 0;
  double length = 1.0;
  std::vector<std::array<double, 2>> vertices;
  std::vector<std::array<Index, 3>> triangles;
  std::vector<BoundaryEdge> boundary_edges;

  Index num_vertices() const noexcept { return static_cast<Index>(vertices.size()); }
  Index num_triangles() const noexcept { return static_cast<Index>(triangles.size()); }
  double triangle_area(Index t) const;
};

Mesh build_mesh(Index nx, Index ny, double length);

/// One "x y" line per vertex, 17 significant digits.
void write_coordinates(const std::string& path, const Mesh& mesh);

}  // namespace schwarz
