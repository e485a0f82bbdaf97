#include <gtest/gtest.h>

#include <cmath>

#include "oracle.hpp"
#include "schwarz/coarse/extended_geneo.hpp"
#include "schwarz/krylov/solvers.hpp"
#include "schwarz/krylov/theorem.hpp"

using namespace schwarz;

namespace {

LinearMap dense_map(const Eigen::MatrixXd& m) {
  return [m](std::span<const double> x, std::span<double> y) {
    const Eigen::VectorXd r = m * Eigen::Map<const Eigen::VectorXd>(x.data(), x.size());
    std::copy(r.data(), r.data() + r.size(), y.begin());
  };
}

struct TwoLevelSetup {
  oracle::Fixture f;
  Decomposition dec;
  std::shared_ptr<const LocalSolvers> solvers;
  ExtendedCoarseSpace space;
  std::unique_ptr<TwoLevel> tl;
};

TwoLevelSetup two_level(double tau, OneLevelKind kind = OneLevelKind::ras, double rank_tol = 1e-8) {
  TwoLevelSetup s{oracle::make_fixture({.p = 2, .cells = 5, .overlap = 2}), {}, {}, {}, {}};
  s.dec = s.f.dec;
  s.dec.ctilde = build_ctilde(s.dec, CtildeSource::neumann(1e-4), &s.f.sys.elements, s.f.sys.a);
  s.solvers = std::make_shared<const LocalSolvers>(build_local_solvers(s.f.sys.a, s.dec, {.kind = kind}));
  s.space = build_extended_coarse_space(s.f.sys.a, s.f.sys.a, s.dec, *s.solvers, {.tau = tau}, rank_tol);
  auto a = std::make_shared<const SparseMatrix>(s.f.sys.a);
  s.tl = std::make_unique<TwoLevel>(a, s.solvers, std::make_shared<const CoarseOperator>(s.f.sys.a, s.space.z.r0));
  return s;
}

}  // namespace

TEST(Gmres, IdentityOneIteration) {
  const auto b = oracle::from_eigen(oracle::random_vector(7, 1));
  const auto r = gmres(SparseMatrix::identity(7), b, {});
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
  EXPECT_EQ(r.report.history.front(), 1.0);
  for (int i = 0; i < 7; ++i) EXPECT_NEAR(r.x[i], b[i], 1e-15);
}

TEST(Gmres, TwoByTwoInTwoSteps) {
  const auto a = SparseMatrix::from_triplets(2, 2, {{0, 0, 1}, {0, 1, 5}, {1, 0, -2}, {1, 1, 0.5}});
  const auto r = gmres(a, Vector{1, 2}, {}, {.tol = 1e-12});
  EXPECT_TRUE(r.report.converged);
  EXPECT_LE(r.report.iterations, 2);
  EXPECT_LE(r.report.final_true_residual, 1e-12);
}

TEST(Gmres, MatchesDenseLu) {
  // Well conditioned, so a residual of tol bounds the error by a few tol.
  const Eigen::MatrixXd ad = 5.0 * Eigen::MatrixXd::Identity(30, 30) + oracle::random_matrix(30, 30, 5) / std::sqrt(30.0);
  const auto a = SparseMatrix::from_dense(oracle::from_eigen(ad));
  const auto b = oracle::random_vector(30, 6);
  const Eigen::VectorXd ref = ad.partialPivLu().solve(b);
  for (double tol : {1e-6, 1e-10}) {
    const auto r = gmres(a, oracle::from_eigen(b), {}, {.tol = tol, .maxit = 30});
    ASSERT_TRUE(r.report.converged);
    EXPECT_LE((oracle::to_eigen(r.x) - ref).norm(), 10 * tol * ref.norm());
    EXPECT_LE(r.report.final_true_residual, tol);
  }
}

TEST(Gmres, RightPreconditionedAndRestart) {
  const auto a = oracle::random_sparse(40, 0.1, 9, false);
  const auto ad = oracle::to_eigen(a);
  const auto b = oracle::random_vector(40, 10);
  // Exact preconditioner: one iteration.
  const auto exact = gmres(a, oracle::from_eigen(b), dense_map(ad.inverse()));
  EXPECT_EQ(exact.report.iterations, 1);
  const Eigen::VectorXd ref = ad.partialPivLu().solve(b);
  EXPECT_LE((oracle::to_eigen(exact.x) - ref).norm(), 1e-10 * ref.norm());
  // Restarted run still converges and records monotone Givens estimates per cycle.
  const auto rs = gmres(a, oracle::from_eigen(b), {}, {.tol = 1e-8, .maxit = 400, .restart = 10});
  EXPECT_TRUE(rs.report.converged);
  EXPECT_LE(rs.report.final_true_residual, 1e-8);
  EXPECT_EQ(rs.report.history.size(), static_cast<std::size_t>(rs.report.iterations + 1));
}

TEST(Gmres, ZeroRhsAndMaxit) {
  const auto a = oracle::random_sparse(20, 0.2, 3, false);
  const auto z = gmres(a, Vector(20, 0.0), {});
  EXPECT_TRUE(z.report.converged);
  EXPECT_EQ(z.report.iterations, 0);
  const auto m = gmres(a, oracle::from_eigen(oracle::random_vector(20, 4)), {}, {.tol = 1e-14, .maxit = 3});
  EXPECT_FALSE(m.report.converged);
  EXPECT_EQ(m.report.iterations, 3);
  EXPECT_THROW(gmres(a, Vector(3, 1.0), {}), DimensionError);
}

TEST(FixedPoint, ExactPreconditioner) {
  const auto a = oracle::random_sparse(15, 0.3, 2, false);
  const auto ad = oracle::to_eigen(a);
  const auto b = oracle::random_vector(15, 3);
  const auto r = fixed_point(a, oracle::from_eigen(b), dense_map(ad.inverse()));
  EXPECT_TRUE(r.report.converged);
  EXPECT_EQ(r.report.iterations, 1);
}

TEST(FixedPoint, FlagsDivergence) {
  const auto a = oracle::random_sparse(15, 0.3, 2, false);
  const auto ad = oracle::to_eigen(a);
  const auto b = oracle::random_vector(15, 3);
  // I - 3 A^{-1} A = -2 I doubles the error every step.
  const auto r = fixed_point(a, oracle::from_eigen(b), dense_map(3.0 * ad.inverse()));
  EXPECT_FALSE(r.report.converged);
  EXPECT_TRUE(r.report.diverged);
  EXPECT_LT(r.report.iterations, 200);
}

TEST(FixedPoint, TracksCNormContraction) {
  const auto spd = oracle::random_spd(12, 4, 5.0);
  const auto a = SparseMatrix::from_dense(oracle::from_eigen(spd));
  const auto b = oracle::random_vector(12, 5);
  const Vector ref = oracle::from_eigen(Eigen::VectorXd(spd.llt().solve(b)));
  // Damped Richardson: contraction is ||I - w A||_A.
  const double w = 1.0 / oracle::jacobi_eigenvalues(spd).maxCoeff();
  const auto r = fixed_point(a, oracle::from_eigen(b), dense_map(w * Eigen::MatrixXd::Identity(12, 12)),
                             {.tol = 1e-10, .maxit = 2000, .c = &a, .reference = &ref});
  EXPECT_TRUE(r.report.converged);
  const auto ev = oracle::jacobi_eigenvalues(spd);
  const double rate = 1.0 - w * ev.minCoeff();
  EXPECT_LE(r.report.contraction, rate + 1e-10);
  EXPECT_GT(r.report.contraction, 0.0);
  EXPECT_EQ(r.report.c_error_history.size(), static_cast<std::size_t>(r.report.iterations + 1));
}

TEST(Theorem, HoldsOnSmallDiffusion) {
  auto s = two_level(10.0);
  const auto rep = verify_theorem(s.f.sys.a, s.f.sys.a, s.dec, *s.tl, s.space, 10.0);
  EXPECT_TRUE(rep.theorem_holds);
  EXPECT_LE(rep.measured_norm, rep.bound + 1e-8);
  EXPECT_NEAR(rep.sigma, 1.0, 1e-8);
  EXPECT_NEAR(rep.rho, 0.0, 1e-10);
  EXPECT_NEAR(rep.bound, rep.sigma * std::sqrt(rep.k0 * rep.k1 * rep.tau), 1e-12 * rep.bound);
  EXPECT_TRUE(rep.chain_holds);
  EXPECT_LE(rep.chain_k0_ratio, 1 + 1e-8);
  EXPECT_LE(rep.chain_tau_ratio, 1 + 1e-8);
  EXPECT_LE(rep.chain_k1_ratio, 1 + 1e-8);
}

TEST(Theorem, CoercivityAndContractionBelowOne) {
  for (auto kind : {OneLevelKind::ras, OneLevelKind::as}) {
    // With AS nearly the whole space is selected; the original columns are then too
    // close to dependent for the default filter tolerance.
    auto s = two_level(0.01, kind, kind == OneLevelKind::as ? 1e-2 : 1e-8);
    const auto rep = verify_theorem(s.f.sys.a, s.f.sys.a, s.dec, *s.tl, s.space, 0.01);
    ASSERT_LT(rep.bound, 1.0);
    EXPECT_TRUE(rep.theorem_holds);
    EXPECT_TRUE(rep.coercivity_holds);
    EXPECT_GE(rep.coercivity, 1.0 - rep.bound - 1e-8);
    const auto& a = s.f.sys.a;
    const Vector ref = oracle::from_eigen(Eigen::VectorXd(oracle::to_eigen(a).llt().solve(oracle::to_eigen(s.f.sys.f))));
    const LinearMap m = [&](std::span<const double> x, std::span<double> y) { s.tl->apply(x, y); };
    const auto fp = fixed_point(a, s.f.sys.f, m, {.tol = 1e-12, .maxit = 500, .c = &a, .reference = &ref});
    EXPECT_FALSE(fp.report.diverged);
    EXPECT_LE(fp.report.contraction, rep.bound + 0.05);
  }
}

TEST(Theorem, FullRankCoarseSpace) {
  auto s = two_level(10.0);
  const Index n = s.f.dec.global_n;
  auto full = std::make_shared<const CoarseOperator>(s.f.sys.a, SparseMatrix::identity(n));
  const TwoLevel tl(std::make_shared<const SparseMatrix>(s.f.sys.a), s.solvers, full);
  const auto rep = verify_theorem(s.f.sys.a, s.f.sys.a, s.dec, tl, s.space, 10.0);
  EXPECT_NEAR(rep.measured_norm, 0.0, 1e-10);
  EXPECT_NEAR(rep.sigma, 0.0, 1e-10);
  EXPECT_TRUE(rep.theorem_holds);
}
