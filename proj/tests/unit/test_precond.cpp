#include <gtest/gtest.h>

#include "oracle.hpp"
#include "schwarz/precond/local_solvers.hpp"
#include "schwarz/precond/two_level.hpp"

using namespace schwarz;

namespace {

Eigen::MatrixXd prolong(const Restriction& r) {
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(r.global_n, r.size());
  for (Index k = 0; k < r.size(); ++k) p(r.indices[k], k) = 1.0;
  return p;
}

Eigen::MatrixXd apply_dense(const std::function<Vector(const Vector&)>& f, Index n) {
  Eigen::MatrixXd m(n, n);
  for (Index k = 0; k < n; ++k) {
    Vector e(n, 0.0);
    e[k] = 1.0;
    m.col(k) = oracle::to_eigen(f(e));
  }
  return m;
}

// Dense one-level oracle from the formula sum_j R_j^* S_j R_j.
Eigen::MatrixXd one_level_oracle(const Eigen::MatrixXd& a, const Decomposition& dec, OneLevelKind kind) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(a.rows(), a.cols());
  for (Index j = 0; j < dec.num_subdomains(); ++j) {
    const auto p = prolong(dec.subdomains[j]);
    const Eigen::MatrixXd bj = p.transpose() * a * p;
    const Eigen::MatrixXd inv = bj.inverse();
    const Eigen::MatrixXd d = oracle::to_eigen(dec.pou[j]).asDiagonal();
    Eigen::MatrixXd s = inv;
    if (kind == OneLevelKind::ras) s = d * inv;
    if (kind == OneLevelKind::soras) s = d * inv * d;
    m += p * s * p.transpose();
  }
  return m;
}

SparseMatrix columns_to_r0(const Eigen::MatrixXd& z) {
  std::vector<Triplet> t;
  for (Index c = 0; c < z.cols(); ++c)
    for (Index r = 0; r < z.rows(); ++r)
      if (z(r, c) != 0.0) t.push_back({c, r, z(r, c)});
  return SparseMatrix::from_triplets(z.cols(), z.rows(), std::move(t));
}

}  // namespace

TEST(OneLevel, SingleSubdomainIsInverse) {
  const auto f = oracle::make_fixture({.p = 1, .cells = 6});
  const auto s = build_local_solvers(f.sys.a, f.dec, {});
  const auto b = oracle::random_vector(f.dec.global_n, 1);
  const Eigen::VectorXd ref = oracle::to_eigen(f.sys.a).ldlt().solve(b);
  const auto y = oracle::to_eigen(s.apply(oracle::from_eigen(b)));
  EXPECT_LE((y - ref).norm(), 1e-10 * ref.norm());
  const auto zero = s.apply(Vector(f.dec.global_n, 0.0));
  for (double v : zero) EXPECT_EQ(v, 0.0);
}

TEST(OneLevel, RasEqualsAsWithUnitWeights) {
  const auto f = oracle::make_fixture({.p = 1, .cells = 5});
  LocalSolverOptions ras, as;
  as.kind = OneLevelKind::as;
  const auto r = oracle::random_vector(f.dec.global_n, 2);
  const auto y1 = build_local_solvers(f.sys.a, f.dec, ras).apply(oracle::from_eigen(r));
  const auto y2 = build_local_solvers(f.sys.a, f.dec, as).apply(oracle::from_eigen(r));
  EXPECT_EQ(y1, y2);
}

TEST(OneLevel, MatchesDenseOracle) {
  for (auto kind : {OneLevelKind::ras, OneLevelKind::as, OneLevelKind::soras}) {
    const auto f = oracle::make_fixture({.p = 2, .cells = 4, .overlap = 2});
    LocalSolverOptions opt;
    opt.kind = kind;
    const auto s = build_local_solvers(f.sys.a, f.dec, opt);
    const auto a = oracle::to_eigen(f.sys.a);
    const auto ref = one_level_oracle(a, f.dec, kind);
    const auto m = apply_dense([&](const Vector& x) { return s.apply(x); }, f.dec.global_n);
    EXPECT_LE((m - ref).norm(), 1e-10 * ref.norm()) << to_string(kind);
  }
}

TEST(OneLevel, RobinLocalMatrices) {
  const auto f = oracle::make_fixture({.p = 2, .cells = 4, .overlap = 2});
  LocalSolverOptions opt;
  opt.kind = OneLevelKind::soras;
  opt.source = LocalMatrixSource::robin;
  const auto s = build_local_solvers(f.sys.a, f.dec, opt, &f.sys.elements);
  for (Index j = 0; j < s.num_subdomains(); ++j) {
    const auto ref = robin_local_matrix(f.sys.elements, f.dec.subdomains[j].indices, opt.robin_rule).matrix;
    EXPECT_EQ(oracle::to_eigen(s.local_matrix(j)), oracle::to_eigen(ref));
  }
  EXPECT_THROW(build_local_solvers(f.sys.a, f.dec, opt, nullptr), Error);
}

TEST(OneLevel, IccBackendUsesIncompleteFactor) {
  const auto f = oracle::make_fixture({.p = 2, .cells = 4, .overlap = 1});
  LocalSolverOptions opt;
  opt.backend = LocalBackend::icc;
  const auto s = build_local_solvers(f.sys.a, f.dec, opt);
  for (Index j = 0; j < s.num_subdomains(); ++j) {
    const auto bj = triple_product(f.dec.subdomains[j].indices, f.sys.a, f.dec.subdomains[j].indices);
    const auto l = oracle::to_eigen(icc0(bj).icc_factor());
    const auto r = oracle::random_vector(bj.nrows(), 10 + j);
    const Eigen::VectorXd ref = (l * l.transpose()).ldlt().solve(r);
    EXPECT_LE((oracle::to_eigen(s.solve_local(j, oracle::from_eigen(r))) - ref).norm(), 1e-10 * ref.norm());
  }
}

TEST(Coarse, FullBasisGivesInverse) {
  const auto f = oracle::make_fixture({.p = 1, .cells = 4});
  const Index n = f.dec.global_n;
  const CoarseOperator c(f.sys.a, SparseMatrix::identity(n));
  const auto a = oracle::to_eigen(f.sys.a);
  const auto m0 = apply_dense([&](const Vector& x) { return c.apply(x); }, n);
  EXPECT_LE((m0 * a - Eigen::MatrixXd::Identity(n, n)).norm(), 1e-10 * n);
  const auto sr = measure_sigma_rho(c, f.sys.a, f.sys.a);
  EXPECT_NEAR(sr.sigma, 0.0, 1e-10);
  EXPECT_NEAR(sr.rho, 0.0, 1e-10);
}

TEST(Coarse, SingleColumnProjection) {
  const auto f = oracle::make_fixture({.p = 1, .cells = 4});
  const Index n = f.dec.global_n;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, 1);
  z(0, 0) = 1.0;
  const CoarseOperator c(f.sys.a, columns_to_r0(z));
  EXPECT_EQ(c.dimension(), 1);
  const auto a = oracle::to_eigen(f.sys.a);
  const auto m0 = apply_dense([&](const Vector& x) { return c.apply(x); }, n);
  const Eigen::MatrixXd p = m0 * a;
  EXPECT_LE((p * p - p).norm(), 1e-12);
  EXPECT_NEAR(m0(0, 0), 1.0 / a(0, 0), 1e-15);
}

TEST(Coarse, SigmaIsOneForProperSpace) {
  const auto f = oracle::make_fixture({.p = 2, .cells = 4});
  const Index n = f.dec.global_n;
  const Eigen::MatrixXd z = oracle::random_matrix(n, 5, 3);
  const CoarseOperator c(f.sys.a, columns_to_r0(z));
  const auto sr = measure_sigma_rho(c, f.sys.a, f.sys.a);
  EXPECT_NEAR(sr.rho, 0.0, 1e-10);
  EXPECT_NEAR(sr.sigma, 1.0, 1e-8);
  EXPECT_TRUE(sr.lemma_holds);
}

TEST(Coarse, SingularThrows) {
  const auto f = oracle::make_fixture({.p = 1, .cells = 3});
  const Index n = f.dec.global_n;
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(n, 2);
  z(1, 0) = z(1, 1) = 1.0;
  EXPECT_THROW(CoarseOperator(f.sys.a, columns_to_r0(z)), PreconditionError);
}

TEST(Coarse, SigmaRhoLemmaNonSymmetric) {
  oracle::FixtureOptions opt{.p = 2, .cells = 4};
  opt.problem.kind = ProblemKind::convdiff;
  opt.problem.advection = AdvectionKind::constant;
  // Diffusion dominated, so that rho < 1.
  opt.problem.nu = 10.0;
  const auto f = oracle::make_fixture(opt);
  const auto c = symmetric_part(f.sys.a);
  const CoarseOperator co(f.sys.a, columns_to_r0(oracle::random_matrix(f.dec.global_n, 4, 9)));
  const auto sr = measure_sigma_rho(co, f.sys.a, c);
  ASSERT_LT(sr.rho, 1.0);
  EXPECT_GT(sr.rho, 0.0);
  EXPECT_NEAR(sr.sigma_bound, 1.0 / (1.0 - sr.rho), 1e-14);
  EXPECT_LE(sr.sigma, sr.sigma_bound + 1e-8);
  EXPECT_TRUE(sr.lemma_holds);
}

TEST(TwoLevel, Degenerate) {
  const auto f = oracle::make_fixture({.p = 2, .cells = 4});
  const Index n = f.dec.global_n;
  auto a = std::make_shared<const SparseMatrix>(f.sys.a);
  auto s = std::make_shared<const LocalSolvers>(build_local_solvers(f.sys.a, f.dec, {}));
  const auto r = oracle::from_eigen(oracle::random_vector(n, 4));

  const TwoLevel empty(a, s, std::make_shared<const CoarseOperator>());
  EXPECT_EQ(empty.apply(r), s->apply(r));
  EXPECT_EQ(empty.coarse_dimension(), 0);

  const TwoLevel full(a, s, std::make_shared<const CoarseOperator>(f.sys.a, SparseMatrix::identity(n)));
  const Eigen::VectorXd ref = oracle::to_eigen(f.sys.a).ldlt().solve(oracle::to_eigen(r));
  EXPECT_LE((oracle::to_eigen(full.apply(r)) - ref).norm(), 1e-10 * ref.norm());
}

TEST(TwoLevel, ErrorOperatorFactorizes) {
  for (auto kind : {OneLevelKind::ras, OneLevelKind::as, OneLevelKind::soras}) {
    const auto f = oracle::make_fixture({.p = 2, .cells = 4, .overlap = 2});
    const Index n = f.dec.global_n;
    LocalSolverOptions opt;
    opt.kind = kind;
    auto a = std::make_shared<const SparseMatrix>(f.sys.a);
    auto s = std::make_shared<const LocalSolvers>(build_local_solvers(f.sys.a, f.dec, opt));
    auto co = std::make_shared<const CoarseOperator>(f.sys.a, columns_to_r0(oracle::random_matrix(n, 6, 12)));
    const TwoLevel tl(a, s, co);
    const auto ad = oracle::to_eigen(f.sys.a);
    const auto m = apply_dense([&](const Vector& x) { return tl.apply(x); }, n);
    const auto m0 = apply_dense([&](const Vector& x) { return co->apply(x); }, n);
    const auto m1 = one_level_oracle(ad, f.dec, kind);
    const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
    for (int k = 0; k < 5; ++k) {
      const auto u = oracle::random_vector(n, 40 + k);
      const Eigen::VectorXd lhs = (id - m * ad) * u;
      const Eigen::VectorXd rhs = (id - m0 * ad) * ((id - m1 * ad) * u);
      EXPECT_LE((lhs - rhs).norm(), 1e-12 * u.norm() * (1 + ad.norm() * m1.norm()));
    }
  }
}
