#include "schwarz/mesh_fem/mesh.hpp"

#include <cstdio>
#include <fstream>

namespace schwarz {

double Mesh::triangle_area(Index t) const {
  const auto& tri = triangles[t];
  const auto& a = vertices[tri[0]];
  const auto& b = vertices[tri[1]];
  const auto& c = vertices[tri[2]];
  return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) - (c[0] - a[0]) * (b[1] - a[1]));
}

Mesh build_mesh(Index nx, Index ny, double length) {
  if (nx < 2 || ny < 2) throw DimensionError("build_mesh: need at least 2 vertices per side");
  if (!(length > 0.0)) throw DimensionError("build_mesh: side length must be positive");
  Mesh m;
  m.nx = nx;
  m.ny = ny;
  m.length = length;
  const double hx = length / (nx - 1);
  const double hy = length / (ny - 1);
  m.vertices.reserve(static_cast<std::size_t>(nx) * ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i)
      m.vertices.push_back({i == nx - 1 ? length : i * hx, j == ny - 1 ? length : j * hy});

  auto vid = [nx](Index i, Index j) { return i + j * nx; };
  m.triangles.reserve(2 * static_cast<std::size_t>(nx - 1) * (ny - 1));
  for (Index j = 0; j + 1 < ny; ++j) {
    for (Index i = 0; i + 1 < nx; ++i) {
      m.triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      m.triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  auto lower = [nx](Index i, Index j) { return 2 * (i + j * (nx - 1)); };
  for (Index i = 0; i + 1 < nx; ++i)
    m.boundary_edges.push_back({vid(i, 0), vid(i + 1, 0), lower(i, 0), BoundaryTag::robin});
  for (Index j = 0; j + 1 < ny; ++j)
    m.boundary_edges.push_back(
        {vid(nx - 1, j), vid(nx - 1, j + 1), lower(nx - 2, j), BoundaryTag::neumann});
  for (Index i = 0; i + 1 < nx; ++i)
    m.boundary_edges.push_back(
        {vid(i + 1, ny - 1), vid(i, ny - 1), lower(i, ny - 2) + 1, BoundaryTag::neumann});
  for (Index j = 0; j + 1 < ny; ++j)
    m.boundary_edges.push_back({vid(0, j + 1), vid(0, j), lower(0, j) + 1, BoundaryTag::neumann});
  return m;
}

void write_coordinates(const std::string& path, const Mesh& mesh) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw Error("cannot open " + path + " for writing");
  for (const auto& v : mesh.vertices) std::fprintf(f, "%.17g %.17g\n", v[0], v[1]);
  if (std::fclose(f) != 0) throw Error("write failed: " + path);
}

}  // namespace schwarz
