#include "schwarz/decomp/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <fstream>
#include <limits>
#include <set>

#include "schwarz/linalg/eigen.hpp"

namespace schwarz {

Vector Restriction::restrict(std::span<const double> x) const {
  if (static_cast<Index>(x.size()) != global_n) throw DimensionError("restrict: size mismatch");
  Vector out(indices.size());
  for (std::size_t k = 0; k < indices.size(); ++k) out[k] = x[indices[k]];
  return out;
}

void Restriction::prolong_add(std::span<const double> x_local, std::span<double> y) const {
  if (x_local.size() != indices.size() || static_cast<Index>(y.size()) != global_n)
    throw DimensionError("prolong: size mismatch");
  for (std::size_t k = 0; k < indices.size(); ++k) y[indices[k]] += x_local[k];
}

std::vector<Restriction> partition_blocks(const Mesh& mesh, Index p, Index q) {
  if (p < 1 || q < 1) throw DimensionError("partition_blocks: p and q must be positive");
  if (p > mesh.nx - 1 || q > mesh.ny - 1)
    throw DimensionError("partition_blocks: more blocks than cells per side");
  std::vector<Restriction> out(static_cast<std::size_t>(p) * q);
  for (auto& r : out) r.global_n = mesh.num_vertices();
  for (Index j = 0; j < mesh.ny; ++j) {
    const Index bj = std::min<Index>(static_cast<Index>(static_cast<long long>(j) * q / (mesh.ny - 1)), q - 1);
    for (Index i = 0; i < mesh.nx; ++i) {
      const Index bi = std::min<Index>(static_cast<Index>(static_cast<long long>(i) * p / (mesh.nx - 1)), p - 1);
      out[bi + bj * p].indices.push_back(i + j * mesh.nx);
    }
  }
  for (const auto& r : out)
    if (r.indices.empty()) throw DimensionError("partition_blocks: empty block");
  return out;
}

std::vector<Restriction> extend_layers(const std::vector<Restriction>& sets, const SparseMatrix& a,
                                       Index layers) {
  if (layers < 0) throw DimensionError("extend_layers: negative layer count");
  std::vector<Restriction> out;
  out.reserve(sets.size());
  std::vector<char> in(static_cast<std::size_t>(a.nrows()), 0);
  for (const auto& s : sets) {
    if (s.global_n != a.nrows()) throw DimensionError("extend_layers: size mismatch");
    std::vector<Index> current = s.indices;
    for (Index v : current) in[v] = 1;
    std::vector<Index> front = current;
    for (Index l = 0; l < layers; ++l) {
      std::vector<Index> next;
      for (Index v : front)
        for (Index k : a.row_cols(v))
          if (!in[k]) {
            in[k] = 1;
            next.push_back(k);
          }
      current.insert(current.end(), next.begin(), next.end());
      front = std::move(next);
    }
    for (Index v : current) in[v] = 0;
    std::sort(current.begin(), current.end());
    out.push_back({s.global_n, std::move(current)});
  }
  return out;
}

std::vector<Restriction> build_extended(const std::vector<Restriction>& sets,
                                        const SparseMatrix& a) {
  return extend_layers(sets, a, 1);
}

bool verify_assumption1(const std::vector<Restriction>& sets,
                        const std::vector<Restriction>& extended, const SparseMatrix& a) {
  if (sets.size() != extended.size()) return false;
  std::vector<char> in(static_cast<std::size_t>(a.nrows()), 0);
  bool ok = true;
  for (std::size_t j = 0; j < sets.size() && ok; ++j) {
    for (Index v : extended[j].indices) in[v] = 1;
    for (Index v : sets[j].indices) {
      if (!in[v]) ok = false;
      for (Index k : a.row_cols(v))
        if (!in[k]) ok = false;
      if (!ok) break;
    }
    for (Index v : extended[j].indices) in[v] = 0;
  }
  return ok;
}

namespace {

// Graph distance from each member of `set` to the nearest non-member;
// max() when the set is everything reachable.
std::vector<Index> distance_to_complement(const Restriction& set, const SparseMatrix& a,
                                          std::vector<char>& in) {
  const Index inf = std::numeric_limits<Index>::max();
  std::vector<Index> dist(static_cast<std::size_t>(a.nrows()), inf);
  std::deque<Index> queue;
  for (Index v : set.indices) in[v] = 1;
  for (Index v : set.indices)
    for (Index k : a.row_cols(v))
      if (!in[k]) {
        dist[v] = 1;
        queue.push_back(v);
        break;
      }
  while (!queue.empty()) {
    const Index v = queue.front();
    queue.pop_front();
    for (Index k : a.row_cols(v))
      if (in[k] && dist[k] == inf) {
        dist[k] = dist[v] + 1;
        queue.push_back(k);
      }
  }
  std::vector<Index> out(set.indices.size());
  for (std::size_t k = 0; k < set.indices.size(); ++k) out[k] = dist[set.indices[k]];
  for (Index v : set.indices) in[v] = 0;
  return out;
}

}  // namespace

std::vector<Vector> build_pou(const std::vector<Restriction>& sets, const SparseMatrix& a,
                              const PouKind& kind) {
  const Index n = a.nrows();
  std::vector<Vector> raw(sets.size());
  std::vector<char> in(static_cast<std::size_t>(n), 0);
  for (std::size_t j = 0; j < sets.size(); ++j) {
    raw[j].assign(sets[j].indices.size(), 1.0);
    if (kind.kind != PouKind::Kind::boundary_vanishing) continue;
    const auto d = distance_to_complement(sets[j], a, in);
    const double m = static_cast<double>(kind.interior_margin);
    const double ramp = std::max(1.0, static_cast<double>(kind.overlap) + 1.0 - m);
    for (std::size_t k = 0; k < d.size(); ++k)
      raw[j][k] = std::clamp((static_cast<double>(d[k]) - m) / ramp, 0.0, 1.0);
  }
  Vector total(static_cast<std::size_t>(n), 0.0);
  std::vector<Index> best_set(static_cast<std::size_t>(n), -1);
  std::vector<Index> best_pos(static_cast<std::size_t>(n), -1);
  for (std::size_t j = 0; j < sets.size(); ++j)
    for (std::size_t k = 0; k < sets[j].indices.size(); ++k) {
      const Index v = sets[j].indices[k];
      total[v] += raw[j][k];
      if (best_set[v] < 0 || raw[j][k] > raw[best_set[v]][best_pos[v]]) {
        best_set[v] = static_cast<Index>(j);
        best_pos[v] = static_cast<Index>(k);
      }
    }
  for (Index v = 0; v < n; ++v)
    if (!(total[v] > 0.0))
      throw Error("build_pou: index " + std::to_string(v) + " has no positive weight");

  const double grid = std::ldexp(1.0, 40);
  std::vector<Vector> pou(sets.size());
  Vector snapped(static_cast<std::size_t>(n), 0.0);
  for (std::size_t j = 0; j < sets.size(); ++j) {
    pou[j].resize(sets[j].indices.size());
    for (std::size_t k = 0; k < sets[j].indices.size(); ++k) {
      const Index v = sets[j].indices[k];
      const double w = std::round(raw[j][k] / total[v] * grid) / grid;
      pou[j][k] = w;
      snapped[v] += w;  // exact: multiples of 2^-40 below 2
    }
  }
  for (Index v = 0; v < n; ++v) pou[best_set[v]][best_pos[v]] += 1.0 - snapped[v];
  return pou;
}

double pou_defect(const std::vector<Restriction>& sets, const std::vector<Vector>& pou) {
  if (sets.empty()) return 0.0;
  Vector sum(static_cast<std::size_t>(sets.front().global_n), 0.0);
  for (std::size_t j = 0; j < sets.size(); ++j) sets[j].prolong_add(pou[j], sum);
  double d = 0.0;
  for (double s : sum) d = std::max(d, std::abs(s - 1.0));
  return d;
}

Decomposition decomposition_from_sets(std::vector<Restriction> sets, const SparseMatrix& a,
                                      const PouKind& pou) {
  Decomposition dec;
  dec.global_n = a.nrows();
  dec.extended = build_extended(sets, a);
  dec.pou = build_pou(sets, a, pou);
  dec.subdomains = std::move(sets);
  const auto J = dec.subdomains.size();
  dec.link.resize(J);
  dec.pou_extended.resize(J);
  for (std::size_t j = 0; j < J; ++j) {
    const auto& small = dec.subdomains[j].indices;
    const auto& big = dec.extended[j].indices;
    auto& q = dec.link[j];
    q.reserve(small.size());
    std::size_t pos = 0;
    for (Index v : small) {
      while (pos < big.size() && big[pos] < v) ++pos;
      if (pos == big.size() || big[pos] != v)
        throw Error("decomposition: subdomain not contained in its extension");
      q.push_back(static_cast<Index>(pos));
    }
    dec.pou_extended[j].assign(big.size(), 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) dec.pou_extended[j][q[k]] = dec.pou[j][k];
  }
  return dec;
}

Decomposition build_decomposition(const Mesh& mesh, const SparseMatrix& a, Index p, Index q,
                                  Index overlap, const PouKind& pou) {
  auto seeds = partition_blocks(mesh, p, q);
  return decomposition_from_sets(extend_layers(seeds, a, overlap), a, pou);
}

std::vector<SparseMatrix> build_ctilde(const Decomposition& dec, const CtildeSource& source,
                                       const ElementMatrices* elements, const SparseMatrix& c) {
  std::vector<SparseMatrix> out;
  out.reserve(dec.extended.size());
  for (const auto& ext : dec.extended) {
    if (source.kind == CtildeSource::Kind::algebraic) {
      out.push_back(triple_product(ext.indices, c, ext.indices).with_hermitian_hint(true));
    } else {
      if (elements == nullptr) throw Error("build_ctilde: Neumann source needs element matrices");
      NeumannOptions opt;
      opt.robin_eps = source.robin_eps;
      opt.symmetric_part = true;
      out.push_back(neumann_matrix(*elements, ext.indices, opt));
    }
  }
  return out;
}

Index compute_k0(const Decomposition& dec, const SparseMatrix& c) {
  const auto J = static_cast<Index>(dec.extended.size());
  if (J == 0) return 0;
  std::vector<std::vector<Index>> owners(static_cast<std::size_t>(c.nrows()));
  for (Index j = 0; j < J; ++j)
    for (Index v : dec.extended[j].indices) owners[v].push_back(j);
  std::vector<std::set<Index>> adj(static_cast<std::size_t>(J));
  for (Index i = 0; i < J; ++i)
    for (Index r : dec.extended[i].indices)
      for (Index col : c.row_cols(r))
        for (Index j : owners[col])
          if (j != i) adj[i].insert(j);
  std::size_t max_degree = 0;
  for (const auto& s : adj) max_degree = std::max(max_degree, s.size());
  std::vector<Index> colour(static_cast<std::size_t>(J), -1);
  Index colours = 0;
  for (Index i = 0; i < J; ++i) {
    std::vector<char> used(static_cast<std::size_t>(J) + 1, 0);
    for (Index j : adj[i])
      if (colour[j] >= 0) used[colour[j]] = 1;
    Index c0 = 0;
    while (used[c0]) ++c0;
    colour[i] = c0;
    colours = std::max(colours, c0 + 1);
  }
  return std::min(static_cast<Index>(max_degree) + 1, colours);
}

Index max_multiplicity(const std::vector<Restriction>& sets, Index global_n) {
  std::vector<Index> count(static_cast<std::size_t>(global_n), 0);
  for (const auto& s : sets)
    for (Index v : s.indices) ++count[v];
  Index m = 0;
  for (Index v : count) m = std::max(m, v);
  return m;
}

K1Estimate estimate_k1(const Decomposition& dec, const SparseMatrix& c) {
  if (dec.ctilde.size() != dec.extended.size())
    throw Error("estimate_k1: local matrices not built");
  const Index n = dec.global_n;
  if (n > kDenseCap) throw CapacityError("estimate_k1: global size exceeds dense cap");
  DenseMatrix sum(n, n);
  for (std::size_t j = 0; j < dec.extended.size(); ++j) {
    const auto& idx = dec.extended[j].indices;
    const auto& ct = dec.ctilde[j];
    for (Index r = 0; r < ct.nrows(); ++r) {
      auto cols = ct.row_cols(r);
      auto vals = ct.row_values(r);
      for (std::size_t p = 0; p < cols.size(); ++p) sum(idx[r], idx[cols[p]]) += vals[p];
    }
  }
  symmetrize(sum);
  auto top = gevp_hpd(sum, c.to_dense(), EigRange::largest(1));
  K1Estimate k;
  k.exact = top.empty() ? 0.0 : top.back().eigenvalue;
  k.combinatorial = static_cast<double>(max_multiplicity(dec.extended, n));
  return k;
}

void write_decomposition_csv(std::ostream& os, const Decomposition& dec) {
  os << "subdomain,global_index,weight\n";
  char buf[64];
  for (std::size_t j = 0; j < dec.subdomains.size(); ++j)
    for (std::size_t k = 0; k < dec.subdomains[j].indices.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%.17g", dec.pou[j][k]);
      os << j << ',' << dec.subdomains[j].indices[k] << ',' << buf << '\n';
    }
}

void write_decomposition_csv(const std::string& path, const Decomposition& dec) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  write_decomposition_csv(os, dec);
}

}  // namespace schwarz
