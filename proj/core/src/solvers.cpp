#include "schwarz/krylov/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "schwarz/linalg/dense.hpp"

namespace schwarz {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void apply_m(const LinearMap& m, std::span<const double> x, std::span<double> y) {
  if (m)
    m(x, y);
  else
    std::copy(x.begin(), x.end(), y.begin());
}

}  // namespace

SolveResult gmres(const SparseMatrix& a, std::span<const double> b, const LinearMap& m,
                  const GmresOptions& options) {
  if (!(options.tol > 0.0)) throw Error("gmres: tol must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  const Index n = a.nrows();
  if (static_cast<Index>(b.size()) != n) throw DimensionError("gmres: rhs size mismatch");
  SolveResult out;
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  SolveReport& rep = out.report;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    rep.converged = true;
    rep.history = {0.0};
    rep.wall_time = seconds_since(t0);
    return out;
  }
  rep.history.push_back(1.0);
  const Index cycle = options.restart > 0 ? options.restart : options.maxit;

  Vector r(b.begin(), b.end());
  Vector w(static_cast<std::size_t>(n));
  Vector z(static_cast<std::size_t>(n));
  double rel = 1.0;
  while (true) {
    const double beta = norm2(r);
    std::vector<Vector> v;
    v.emplace_back(r);
    for (double& x : v.back()) x /= beta;
    // Hessenberg columns after rotation, Givens pairs, rhs.
    std::vector<Vector> h;
    std::vector<double> cs;
    std::vector<double> sn;
    std::vector<double> g = {beta};
    Index k = 0;
    bool breakdown = false;
    while (k < cycle && rep.iterations < options.maxit) {
      apply_m(m, v[k], z);
      a.multiply(z, w);
      const double wnorm0 = norm2(w);
      Vector hk(static_cast<std::size_t>(k + 2), 0.0);
      for (int pass = 0; pass < 2; ++pass)
        for (Index i = 0; i <= k; ++i) {
          const double hij = dot(v[i], w);
          hk[i] += hij;
          axpy(-hij, v[i], w);
        }
      const double hnext = norm2(w);
      hk[k + 1] = hnext;
      for (Index i = 0; i < k; ++i) {
        const double t = cs[i] * hk[i] + sn[i] * hk[i + 1];
        hk[i + 1] = -sn[i] * hk[i] + cs[i] * hk[i + 1];
        hk[i] = t;
      }
      const double rr = std::hypot(hk[k], hk[k + 1]);
      const double c = rr == 0.0 ? 1.0 : hk[k] / rr;
      const double s = rr == 0.0 ? 0.0 : hk[k + 1] / rr;
      cs.push_back(c);
      sn.push_back(s);
      hk[k] = rr;
      hk[k + 1] = 0.0;
      g.push_back(-s * g[k]);
      g[k] *= c;
      h.push_back(std::move(hk));
      ++k;
      ++rep.iterations;
      rel = std::abs(g[k]) / bnorm;
      rep.history.push_back(rel);
      if (hnext <= options.breakdown_tol * std::max(wnorm0, beta)) {
        breakdown = true;
        break;
      }
      if (rel <= options.tol) break;
      v.emplace_back(w);
      for (double& x : v.back()) x /= hnext;
    }
    // Back substitution for y, then x += M V y.
    Vector y(static_cast<std::size_t>(k), 0.0);
    for (Index i = k - 1; i >= 0; --i) {
      double s = g[i];
      for (Index j = i + 1; j < k; ++j) s -= h[j][i] * y[j];
      y[i] = h[i][i] != 0.0 ? s / h[i][i] : 0.0;
    }
    Vector vy(static_cast<std::size_t>(n), 0.0);
    for (Index i = 0; i < k; ++i) axpy(y[i], v[i], vy);
    apply_m(m, vy, z);
    axpy(1.0, z, out.x);
    a.multiply(out.x, r);
    for (Index i = 0; i < n; ++i) r[i] = b[i] - r[i];
    rel = norm2(r) / bnorm;
    if (rel <= options.tol || rep.iterations >= options.maxit || k == 0) break;
    // Breakdown without convergence means the preconditioned operator is singular.
    if (breakdown && options.restart == 0) break;
  }
  rep.final_true_residual = rel;
  rep.converged = rel <= options.tol;
  rep.wall_time = seconds_since(t0);
  return out;
}

SolveResult fixed_point(const SparseMatrix& a, std::span<const double> b, const LinearMap& m,
                        const FixedPointOptions& options) {
  const auto t0 = std::chrono::steady_clock::now();
  const Index n = a.nrows();
  if (static_cast<Index>(b.size()) != n) throw DimensionError("fixed_point: rhs size mismatch");
  const bool track = options.c != nullptr && options.reference != nullptr;
  SolveResult out;
  out.x.assign(static_cast<std::size_t>(n), 0.0);
  SolveReport& rep = out.report;
  const double bnorm = norm2(b);
  auto c_error = [&](const Vector& x) {
    Vector e(x);
    for (Index i = 0; i < n; ++i) e[i] -= (*options.reference)[i];
    return std::sqrt(std::max(0.0, dot(e, options.c->multiply(e))));
  };
  Vector r(b.begin(), b.end());
  Vector corr(static_cast<std::size_t>(n));
  double rel = bnorm == 0.0 ? 0.0 : 1.0;
  rep.history.push_back(rel);
  double e0 = 0.0;
  if (track) {
    e0 = c_error(out.x);
    rep.c_error_history.push_back(e0);
  }
  while (rel > options.tol && rep.iterations < options.maxit) {
    apply_m(m, r, corr);
    axpy(1.0, corr, out.x);
    a.multiply(out.x, r);
    for (Index i = 0; i < n; ++i) r[i] = b[i] - r[i];
    rel = bnorm == 0.0 ? 0.0 : norm2(r) / bnorm;
    ++rep.iterations;
    rep.history.push_back(rel);
    bool grew = rel > 1e3;
    if (track) {
      const double prev = rep.c_error_history.back();
      const double e = c_error(out.x);
      rep.c_error_history.push_back(e);
      if (prev > options.error_floor * e0) rep.contraction = std::max(rep.contraction, e / prev);
      grew = grew || e > 1e3 * e0;
    }
    if (grew || !std::isfinite(rel)) {
      rep.diverged = true;
      break;
    }
  }
  rep.final_true_residual = rel;
  rep.converged = rel <= options.tol;
  rep.wall_time = seconds_since(t0);
  return out;
}

}  // namespace schwarz
