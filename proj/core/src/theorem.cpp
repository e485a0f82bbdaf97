#include "schwarz/krylov/theorem.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "schwarz/linalg/eigen.hpp"

namespace schwarz {

BoundReport verify_theorem(const SparseMatrix& a, const SparseMatrix& c, const Decomposition& dec,
                           const TwoLevel& tl, const ExtendedCoarseSpace& space, double tau,
                           const TheoremOptions& options) {
  const Index n = a.nrows();
  if (n > kDenseCap) throw CapacityError("verify_theorem: global size exceeds the dense cap");
  const Index J = dec.num_subdomains();
  if (static_cast<Index>(dec.ctilde.size()) != J ||
      static_cast<Index>(space.operators.size()) != J)
    throw Error("verify_theorem: local matrices or coarse space missing");

  BoundReport rep;
  rep.tau = tau;
  rep.k0 = compute_k0(dec, c);
  const K1Estimate k1 = estimate_k1(dec, c);
  rep.k1 = options.exact_k1 ? k1.exact : k1.combinatorial;
  const SigmaRho sr = measure_sigma_rho(tl.coarse(), a, c);
  rep.sigma = sr.sigma;
  rep.rho = sr.rho;
  rep.sigma_lemma_holds = sr.lemma_holds;
  rep.bound = rep.sigma * std::sqrt(static_cast<double>(rep.k0) * rep.k1 * tau);

  const LinearMap e = [&](std::span<const double> x, std::span<double> y) {
    const Vector mx = tl.apply(a.multiply(x));
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = x[i] - mx[i];
  };
  rep.measured_norm = c_operator_norm(e, c, n);
  rep.theorem_holds = rep.measured_norm <= rep.bound + 1e-8;

  std::vector<DenseMatrix> ct;
  ct.reserve(J);
  for (const auto& m : dec.ctilde) ct.push_back(m.to_dense());

  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> dist(0.0, 1.0);
  rep.coercivity = std::numeric_limits<double>::infinity();
  for (int s = 0; s < options.samples; ++s) {
    Vector u(static_cast<std::size_t>(n));
    for (double& x : u) x = dist(rng);
    const Vector cu = c.multiply(u);
    const double unorm2 = dot(u, cu);
    const Vector mau = tl.apply(a.multiply(u));
    rep.coercivity = std::min(rep.coercivity, dot(mau, cu) / unorm2);

    Vector sum(static_cast<std::size_t>(n), 0.0);
    double sum_local = 0.0;
    double sum_ctil = 0.0;
    for (Index j = 0; j < J; ++j) {
      const auto& op = space.operators[j];
      const Vector ru = op.extended().restrict(u);
      const Vector pu = space.spectra[j].apply_projection(ru, ct[j]);
      Vector w(ru);
      for (std::size_t i = 0; i < w.size(); ++i) w[i] -= pu[i];
      const Vector lw = op.apply(w);
      Vector zj(static_cast<std::size_t>(n), 0.0);
      op.extended().prolong_add(lw, zj);
      axpy(1.0, zj, sum);
      sum_local += dot(zj, c.multiply(zj));
      sum_ctil += dot(ru, dec.ctilde[j].multiply(ru));
    }
    const double total = dot(sum, c.multiply(sum));
    if (sum_local > 0.0)
      rep.chain_k0_ratio =
          std::max(rep.chain_k0_ratio, total / (static_cast<double>(rep.k0) * sum_local));
    if (sum_ctil > 0.0)
      rep.chain_tau_ratio = std::max(rep.chain_tau_ratio, sum_local / (tau * sum_ctil));
    rep.chain_k1_ratio = std::max(rep.chain_k1_ratio, sum_ctil / (rep.k1 * unorm2));
  }
  const double slack = 1.0 + 1e-8;
  rep.chain_holds =
      rep.chain_k0_ratio <= slack && rep.chain_tau_ratio <= slack && rep.chain_k1_ratio <= slack;
  rep.coercivity_holds = rep.bound >= 1.0 || rep.coercivity >= 1.0 - rep.bound - 1e-8;
  return rep;
}

}  // namespace schwarz
