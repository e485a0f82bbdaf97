#include <gtest/gtest.h>

#include <algorithm>
#include <set>
#include <sstream>

#include "oracle.hpp"
#include "schwarz/decomp/decomposition.hpp"

using namespace schwarz;

namespace {

SparseMatrix laplace_1d(Index n) {
  std::vector<Triplet> t;
  for (Index i = 0; i < n; ++i) {
    t.push_back({i, i, 2.0});
    if (i > 0) t.push_back({i, i - 1, -1.0});
    if (i + 1 < n) t.push_back({i, i + 1, -1.0});
  }
  return SparseMatrix::from_triplets(n, n, std::move(t), true);
}

Restriction range(Index n, Index lo, Index hi) {
  Restriction r;
  r.global_n = n;
  for (Index i = lo; i <= hi; ++i) r.indices.push_back(i);
  return r;
}

// Brute-force adjacency ring from the dense pattern.
std::set<Index> ring(const Eigen::MatrixXd& a, const std::set<Index>& s) {
  std::set<Index> out = s;
  for (Index i : s)
    for (Index k = 0; k < a.cols(); ++k)
      if (a(i, k) != 0.0) out.insert(k);
  return out;
}

Eigen::MatrixXd prolong(const Restriction& r) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(r.global_n, r.size());
  for (Index k = 0; k < r.size(); ++k) p(r.indices[k], k) = 1.0;
  return p;
}

}  // namespace

TEST(Partition, SingleBlock) {
  const auto m = build_mesh(5, 5, 1.0);
  const auto b = partition_blocks(m, 1, 1);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].size(), 25);
}

TEST(Partition, FourByFourGrid) {
  const auto m = build_mesh(4, 4, 1.0);
  const auto b = partition_blocks(m, 2, 2);
  ASSERT_EQ(b.size(), 4u);
  for (const auto& r : b) EXPECT_EQ(r.size(), 4);
  EXPECT_EQ(b[0].indices, (std::vector<Index>{0, 1, 4, 5}));
}

TEST(Partition, DisjointCover) {
  std::mt19937 gen(3);
  for (int trial = 0; trial < 10; ++trial) {
    const Index nx = 4 + gen() % 20, ny = 4 + gen() % 20;
    const Index p = 1 + gen() % 4, q = 1 + gen() % 4;
    const auto m = build_mesh(nx, ny, 1.0);
    const auto b = partition_blocks(m, p, q);
    ASSERT_EQ(static_cast<Index>(b.size()), p * q);
    std::vector<int> hits(m.num_vertices(), 0);
    for (const auto& r : b) {
      EXPECT_TRUE(std::is_sorted(r.indices.begin(), r.indices.end()));
      for (Index i : r.indices) ++hits[i];
    }
    for (int h : hits) EXPECT_EQ(h, 1);
  }
  EXPECT_THROW(partition_blocks(build_mesh(3, 3, 1.0), 5, 1), Error);
}

TEST(Layers, Examples) {
  const auto a = laplace_1d(10);
  const std::vector<Restriction> seed{range(10, 0, 4)};
  EXPECT_EQ(extend_layers(seed, a, 0)[0].indices, seed[0].indices);
  EXPECT_EQ(extend_layers(seed, a, 1)[0].indices, range(10, 0, 5).indices);
  const std::vector<Restriction> mid{range(10, 2, 3)};
  EXPECT_EQ(build_extended(mid, a)[0].indices, range(10, 1, 4).indices);
  const std::vector<Restriction> d{range(4, 1, 2)};
  EXPECT_EQ(build_extended(d, SparseMatrix::identity(4))[0].indices, d[0].indices);
}

TEST(Layers, MatchesBruteForceRings) {
  const auto a = oracle::random_sparse(40, 0.05, 8, true);
  const auto ad = oracle::to_eigen(a);
  Restriction s;
  s.global_n = 40;
  s.indices = {3, 17, 25};
  const auto grown = extend_layers({s}, a, 2)[0];
  auto ref = ring(ad, ring(ad, {3, 17, 25}));
  EXPECT_EQ(grown.indices, std::vector<Index>(ref.begin(), ref.end()));
  EXPECT_TRUE(std::includes(grown.indices.begin(), grown.indices.end(), s.indices.begin(), s.indices.end()));
}

TEST(Assumption1, Checks) {
  const auto a = laplace_1d(8);
  const std::vector<Restriction> n{range(8, 0, 3), range(8, 4, 7)};
  EXPECT_FALSE(verify_assumption1(n, n, a));
  const std::vector<Restriction> all{range(8, 0, 7), range(8, 0, 7)};
  EXPECT_TRUE(verify_assumption1(n, all, a));
  EXPECT_TRUE(verify_assumption1(n, build_extended(n, a), a));
  const auto f = oracle::make_fixture();
  EXPECT_TRUE(verify_assumption1(f.dec.subdomains, f.dec.extended, f.sys.a));
}

TEST(Assumption1, StructuralIdentity) {
  // R_j A (I - Rt^* Rt) = 0 exactly.
  const auto f = oracle::make_fixture({.p = 3, .cells = 4, .overlap = 2});
  const auto a = oracle::to_eigen(f.sys.a);
  for (Index j = 0; j < f.dec.num_subdomains(); ++j) {
    const Eigen::MatrixXd r = prolong(f.dec.subdomains[j]).transpose();
    const auto rt = prolong(f.dec.extended[j]);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(a.rows(), a.cols());
    EXPECT_EQ((r * a * (id - rt * rt.transpose())).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Pou, SingleSubdomainIsIdentity) {
  const auto a = laplace_1d(6);
  const std::vector<Restriction> one{range(6, 0, 5)};
  for (const auto& kind : {PouKind::multiplicity(), PouKind::boundary_vanishing(1, 2)}) {
    const auto d = build_pou(one, a, kind);
    for (double w : d[0]) EXPECT_EQ(w, 1.0);
  }
}

TEST(Pou, MultiplicityHalves) {
  const auto a = laplace_1d(10);
  const std::vector<Restriction> sets{range(10, 0, 5), range(10, 4, 9)};
  const auto d = build_pou(sets, a, PouKind::multiplicity());
  EXPECT_EQ(d[0][4], 0.5);
  EXPECT_EQ(d[1][0], 0.5);
  EXPECT_EQ(d[0][0], 1.0);
  const std::vector<Restriction> gap{range(10, 0, 3), range(10, 5, 9)};
  EXPECT_THROW(build_pou(gap, a, PouKind::multiplicity()), Error);
}

TEST(Pou, ExactIdentityRandomOverlaps) {
  std::mt19937 gen(5);
  for (int trial = 0; trial < 6; ++trial) {
    oracle::FixtureOptions opt;
    opt.p = 2 + gen() % 3;
    opt.cells = 3 + gen() % 4;
    opt.overlap = 1 + gen() % 3;
    for (bool mult : {false, true}) {
      opt.multiplicity_pou = mult;
      const auto f = oracle::make_fixture(opt);
      std::vector<double> sum(f.dec.global_n, 0.0);
      for (Index j = 0; j < f.dec.num_subdomains(); ++j) {
        const auto& r = f.dec.subdomains[j];
        for (Index k = 0; k < r.size(); ++k) {
          EXPECT_GE(f.dec.pou[j][k], 0.0);
          sum[r.indices[k]] += f.dec.pou[j][k];
        }
      }
      for (double s : sum) EXPECT_EQ(s, 1.0);
      EXPECT_EQ(pou_defect(f.dec.subdomains, f.dec.pou), 0.0);
    }
  }
}

TEST(Pou, BoundaryVanishingProfile) {
  // 1D: seed {0..9}, {10..19}; overlap 4 with margin 2.
  const Index n = 20;
  const auto a = laplace_1d(n);
  auto sets = extend_layers({range(n, 0, 9), range(n, 10, 19)}, a, 4);
  const auto d = build_pou(sets, a, PouKind::boundary_vanishing(2, 4));
  // Subdomain 0 covers 0..13: weight zero on its two outermost layers.
  ASSERT_EQ(sets[0].indices.back(), 13);
  EXPECT_EQ(d[0][13], 0.0);
  EXPECT_EQ(d[0][12], 0.0);
  EXPECT_GT(d[0][11], 0.0);
  EXPECT_EQ(d[0][0], 1.0);
  EXPECT_EQ(d[0][5], 1.0);
  for (Index k = 6; k < 13; ++k) EXPECT_LE(d[0][k], d[0][k - 1]);
}

TEST(Extended, PouAndLinks) {
  const auto f = oracle::make_fixture({.p = 3, .cells = 4, .overlap = 2});
  for (Index j = 0; j < f.dec.num_subdomains(); ++j) {
    const auto& r = f.dec.subdomains[j];
    const auto& rt = f.dec.extended[j];
    const auto& q = f.dec.link[j];
    ASSERT_EQ(static_cast<Index>(q.size()), r.size());
    for (Index k = 0; k < r.size(); ++k) EXPECT_EQ(rt.indices[q[k]], r.indices[k]);
    double total = 0;
    for (double w : f.dec.pou_extended[j]) total += w;
    double core = 0;
    for (double w : f.dec.pou[j]) core += w;
    EXPECT_EQ(total, core);
    for (Index k = 0; k < r.size(); ++k) EXPECT_EQ(f.dec.pou_extended[j][q[k]], f.dec.pou[j][k]);
  }
}

TEST(Ctilde, AlgebraicSingleSubdomain) {
  const auto f = oracle::make_fixture({.p = 1, .cells = 5});
  const auto ct = build_ctilde(f.dec, CtildeSource::algebraic(), nullptr, f.sys.a);
  EXPECT_EQ(oracle::to_eigen(ct[0]), oracle::to_eigen(f.sys.a));
}

TEST(Ctilde, NeumannIsHpd) {
  const auto f = oracle::make_fixture({.p = 2, .cells = 5});
  const auto ct = build_ctilde(f.dec, CtildeSource::neumann(1e-4), &f.sys.elements, f.sys.a);
  for (const auto& c : ct) {
    const auto cd = oracle::to_eigen(c);
    EXPECT_EQ(cd.llt().info(), Eigen::Success);
    EXPECT_EQ((cd - cd.transpose()).norm(), 0.0);
  }
}

TEST(K0, Examples) {
  const auto a = laplace_1d(30);
  const auto one = decomposition_from_sets({range(30, 0, 29)}, a, PouKind::multiplicity());
  EXPECT_EQ(compute_k0(one, a), 1);
  const auto path = decomposition_from_sets({range(30, 0, 9), range(30, 10, 19), range(30, 20, 29)}, a,
                                            PouKind::multiplicity());
  EXPECT_EQ(compute_k0(path, a), 2);
  const auto f = oracle::make_fixture({.p = 2, .cells = 4, .overlap = 1});
  EXPECT_EQ(compute_k0(f.dec, f.sys.a), 4);
}

TEST(K0, SumInequalityRandom) {
  const auto f = oracle::make_fixture({.p = 3, .cells = 4, .overlap = 2});
  const auto c = oracle::to_eigen(f.sys.a);
  const Index k0 = compute_k0(f.dec, f.sys.a);
  EXPECT_LE(k0, f.dec.num_subdomains());
  for (int s = 0; s < 100; ++s) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(c.rows());
    double parts = 0;
    for (Index j = 0; j < f.dec.num_subdomains(); ++j) {
      const Eigen::VectorXd v = prolong(f.dec.extended[j]) *
                                oracle::random_vector(f.dec.extended[j].size(), 1000 * s + j);
      sum += v;
      parts += v.dot(c * v);
    }
    EXPECT_LE(sum.dot(c * sum), k0 * parts * (1 + 1e-12));
  }
}

TEST(K1, Examples) {
  const auto a = laplace_1d(20);
  auto one = decomposition_from_sets({range(20, 0, 19)}, a, PouKind::multiplicity());
  one.ctilde = build_ctilde(one, CtildeSource::algebraic(), nullptr, a);
  EXPECT_NEAR(estimate_k1(one, a).exact, 1.0, 1e-12);

  // Block-diagonal C with disjoint extended sets.
  std::vector<Triplet> t;
  for (Index i = 0; i < 10; ++i) {
    t.push_back({i, i, 2.0});
    if (i % 5) t.push_back({i, i - 1, -1.0});
    if ((i + 1) % 5) t.push_back({i, i + 1, -1.0});
  }
  const auto bd = SparseMatrix::from_triplets(10, 10, std::move(t), true);
  auto two = decomposition_from_sets({range(10, 0, 4), range(10, 5, 9)}, bd, PouKind::multiplicity());
  ASSERT_EQ(two.extended[0].size(), 5);
  two.ctilde = build_ctilde(two, CtildeSource::algebraic(), nullptr, bd);
  EXPECT_NEAR(estimate_k1(two, bd).exact, 1.0, 1e-12);
}

TEST(K1, MatchesDensePencilOracle) {
  const Index n = 24;
  const auto a = laplace_1d(n);
  auto dec = decomposition_from_sets({range(n, 0, 13), range(n, 10, 23)}, a, PouKind::multiplicity());
  dec.ctilde = build_ctilde(dec, CtildeSource::algebraic(), nullptr, a);
  const auto c = oracle::to_eigen(a);
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
  for (Index j = 0; j < 2; ++j) {
    const auto p = prolong(dec.extended[j]);
    s += p * oracle::to_eigen(dec.ctilde[j]) * p.transpose();
  }
  const double ref = oracle::inverse_pencil_eigenvalues(s, c).maxCoeff();
  const auto k1 = estimate_k1(dec, a);
  EXPECT_NEAR(k1.exact, ref, 1e-10 * ref);
  EXPECT_DOUBLE_EQ(k1.combinatorial, 2.0);
  EXPECT_GT(k1.exact, 1.0);
}

TEST(K1, NeumannSplittingHolds) {
  const auto f0 = oracle::make_fixture({.p = 2, .cells = 5, .overlap = 2});
  auto dec = f0.dec;
  dec.ctilde = build_ctilde(dec, CtildeSource::neumann(1e-4), &f0.sys.elements, f0.sys.a);
  const auto k1 = estimate_k1(dec, f0.sys.a);
  // Regularized Neumann matrices: the multiplicity bound holds up to the robin_eps perturbation.
  EXPECT_LE(k1.exact, k1.combinatorial * (1 + 1e-2));
  const auto c = oracle::to_eigen(f0.sys.a);
  for (int s = 0; s < 100; ++s) {
    const auto u = oracle::random_vector(c.rows(), 7 + s);
    double lhs = 0;
    for (Index j = 0; j < dec.num_subdomains(); ++j) {
      const Eigen::VectorXd ru = prolong(dec.extended[j]).transpose() * u;
      lhs += ru.dot(oracle::to_eigen(dec.ctilde[j]) * ru);
    }
    EXPECT_LE(lhs, k1.exact * u.dot(c * u) * (1 + 1e-10));
  }
}

TEST(Decomposition, CsvDump) {
  const auto f = oracle::make_fixture({.p = 2, .cells = 3, .overlap = 1});
  std::ostringstream os;
  write_decomposition_csv(os, f.dec);
  std::istringstream in(os.str());
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line, "subdomain,global_index,weight");
  Index rows = 0;
  while (std::getline(in, line)) ++rows;
  Index expect = 0;
  for (const auto& r : f.dec.subdomains) expect += r.size();
  EXPECT_EQ(rows, expect);
}
