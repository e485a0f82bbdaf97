#include "schwarz/harness/experiment.hpp"

#include <cblas.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <set>
#include <sstream>

#include "schwarz/linalg/matrix_market.hpp"

namespace schwarz {

using nlohmann::json;

const char* to_string(CoarseKind k) {
  switch (k) {
    case CoarseKind::none:
      return "none";
    case CoarseKind::extended:
      return "extended";
    case CoarseKind::geneo:
      return "geneo";
    case CoarseKind::geneo2:
      return "geneo2";
  }
  return "?";
}

namespace {

Index isqrt_exact(Index j) {
  auto r = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(j))));
  return r * r == j ? r : -1;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

template <class E>
struct Names {
  std::vector<std::pair<std::string, E>> items;
  std::optional<E> find(const std::string& s) const {
    for (const auto& [k, v] : items)
      if (k == s) return v;
    return std::nullopt;
  }
  std::string name(E e) const {
    for (const auto& [k, v] : items)
      if (v == e) return k;
    return "?";
  }
  std::string list() const {
    std::string out;
    for (const auto& [k, v] : items) out += (out.empty() ? "" : "|") + k;
    return out;
  }
};

const Names<ProblemKind> kProblemKinds{
    {{"diffusion", ProblemKind::diffusion}, {"convdiff", ProblemKind::convdiff}}};
const Names<ViscosityKind> kViscosity{
    {{"constant", ViscosityKind::constant}, {"contrast", ViscosityKind::contrast}}};
const Names<AdvectionKind> kAdvection{{{"none", AdvectionKind::none},
                                       {"constant", AdvectionKind::constant},
                                       {"rotating", AdvectionKind::rotating}}};
const Names<OneLevelKind> kOneLevel{{{"none", OneLevelKind::none},
                                     {"ras", OneLevelKind::ras},
                                     {"as", OneLevelKind::as},
                                     {"soras", OneLevelKind::soras}}};
const Names<LocalBackend> kBackend{{{"exact", LocalBackend::exact}, {"icc", LocalBackend::icc}}};
const Names<LocalMatrixSource> kLocalMatrix{
    {{"restricted_a", LocalMatrixSource::restricted_a}, {"robin", LocalMatrixSource::robin}}};
const Names<CoarseKind> kCoarse{{{"none", CoarseKind::none},
                                 {"extended", CoarseKind::extended},
                                 {"geneo", CoarseKind::geneo},
                                 {"geneo2", CoarseKind::geneo2}}};
const Names<CChoice> kC{{{"A", CChoice::a}, {"symmetric_part", CChoice::symmetric_part}}};
const Names<PouKind::Kind> kPou{{{"multiplicity", PouKind::Kind::multiplicity},
                                 {"boundary_vanishing", PouKind::Kind::boundary_vanishing}}};
const Names<CtildeSource::Kind> kCtilde{
    {{"neumann", CtildeSource::Kind::neumann}, {"algebraic", CtildeSource::Kind::algebraic}}};

class Reader {
 public:
  explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

  void check_keys(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
      if (!allowed.count(it.key())) errors_.push_back(where + it.key() + ": unknown key");
  }

  template <class T>
  void number(const json& obj, const std::string& key, T& out, const std::string& where = "") {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_number()) {
      errors_.push_back(where + key + ": expected a number");
      return;
    }
    if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) {
        errors_.push_back(where + key + ": expected an integer");
        return;
      }
      out = v.get<T>();
    } else {
      out = v.get<T>();
    }
  }

  void boolean(const json& obj, const std::string& key, bool& out, const std::string& where = "") {
    if (!obj.contains(key)) return;
    if (!obj.at(key).is_boolean()) {
      errors_.push_back(where + key + ": expected true or false");
      return;
    }
    out = obj.at(key).get<bool>();
  }

  template <class E>
  void choice(const json& obj, const std::string& key, const Names<E>& names, E& out,
              const std::string& where = "") {
    if (!obj.contains(key)) return;
    const json& v = obj.at(key);
    if (!v.is_string()) {
      errors_.push_back(where + key + ": expected one of " + names.list());
      return;
    }
    const auto e = names.find(v.get<std::string>());
    if (!e) {
      errors_.push_back(where + key + ": '" + v.get<std::string>() + "' is not one of " +
                        names.list());
      return;
    }
    out = *e;
  }

 private:
  std::vector<std::string>& errors_;
};

std::vector<std::string> validation_errors(const ExperimentConfig& c);

void raise(const std::vector<std::string>& errors) {
  if (errors.empty()) return;
  std::string msg = "invalid config:";
  for (const auto& e : errors) msg += "\n  " + e;
  throw ConfigError(msg);
}

}  // namespace

Index ExperimentConfig::subdomains_per_side() const { return isqrt_exact(J); }

Index ExperimentConfig::subdomain_cells() const {
  if (cells_per_subdomain > 0) return cells_per_subdomain;
  // Non-overlapping block of side x side vertices, global nx = side*p + 1.
  const auto side = static_cast<Index>(std::llround(std::sqrt(static_cast<double>(dofs_per_subdomain))));
  return std::max<Index>(2, side);
}

Index ExperimentConfig::mesh_vertices_per_side() const {
  return subdomains_per_side() * subdomain_cells() + 1;
}

std::string ExperimentConfig::id() const { return name + "_J" + std::to_string(J); }

std::string ExperimentConfig::problem_label() const {
  if (problem.kind == ProblemKind::diffusion)
    return problem.viscosity == ViscosityKind::contrast ? "diffusion-heterogeneous"
                                                        : "diffusion-homogeneous";
  return "convdiff-" + kAdvection.name(problem.advection);
}

ExperimentConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  std::vector<std::string> errors;
  Reader rd(errors);
  ExperimentConfig cfg;
  rd.check_keys(doc,
                {"name", "problem", "J", "dofs_per_subdomain", "cells_per_subdomain", "overlap",
                 "pou", "pou_margin", "one_level", "backend", "local_matrix", "robin_rule",
                 "coarse", "tau", "gamma", "c", "ctilde", "ctilde_robin_eps", "geneo_robin_eps",
                 "tol", "maxit", "restart", "seed", "rank_tol", "verify_bound", "k1"},
                "");
  if (doc.contains("name")) {
    if (doc["name"].is_string() && !doc["name"].get<std::string>().empty())
      cfg.name = doc["name"].get<std::string>();
    else
      errors.push_back("name: expected a non-empty string");
  }
  if (doc.contains("problem")) {
    const json& p = doc["problem"];
    if (!p.is_object()) {
      errors.push_back("problem: expected an object");
    } else {
      rd.check_keys(p, {"kind", "viscosity", "nu", "eta", "advection", "supg", "robin"},
                    "problem.");
      rd.choice(p, "kind", kProblemKinds, cfg.problem.kind, "problem.");
      rd.choice(p, "viscosity", kViscosity, cfg.problem.viscosity, "problem.");
      rd.number(p, "nu", cfg.problem.nu, "problem.");
      rd.number(p, "eta", cfg.problem.eta, "problem.");
      rd.choice(p, "advection", kAdvection, cfg.problem.advection, "problem.");
      rd.boolean(p, "supg", cfg.problem.supg, "problem.");
      rd.number(p, "robin", cfg.problem.robin, "problem.");
      if (cfg.problem.kind == ProblemKind::convdiff && !p.contains("advection"))
        cfg.problem.advection = AdvectionKind::rotating;
    }
  }
  rd.number(doc, "J", cfg.J);
  rd.number(doc, "dofs_per_subdomain", cfg.dofs_per_subdomain);
  rd.number(doc, "cells_per_subdomain", cfg.cells_per_subdomain);
  rd.number(doc, "overlap", cfg.overlap);
  rd.choice(doc, "pou", kPou, cfg.pou);
  rd.number(doc, "pou_margin", cfg.pou_margin);
  rd.choice(doc, "one_level", kOneLevel, cfg.one_level);
  rd.choice(doc, "backend", kBackend, cfg.backend);

  const bool convdiff = cfg.problem.kind == ProblemKind::convdiff;
  cfg.local_matrix = cfg.one_level == OneLevelKind::soras || convdiff
                         ? LocalMatrixSource::robin
                         : LocalMatrixSource::restricted_a;
  rd.choice(doc, "local_matrix", kLocalMatrix, cfg.local_matrix);
  cfg.robin_rule = convdiff ? RobinRule::convdiff() : RobinRule::nu_over_sqrt_h();
  if (doc.contains("robin_rule")) {
    const json& r = doc["robin_rule"];
    if (r.is_number())
      cfg.robin_rule = RobinRule::constant(r.get<double>());
    else if (r == "nu_over_sqrt_h")
      cfg.robin_rule = RobinRule::nu_over_sqrt_h();
    else if (r == "convdiff")
      cfg.robin_rule = RobinRule::convdiff();
    else
      errors.push_back("robin_rule: expected a number, nu_over_sqrt_h or convdiff");
  }
  rd.choice(doc, "coarse", kCoarse, cfg.coarse);
  rd.number(doc, "tau", cfg.tau);
  rd.number(doc, "gamma", cfg.gamma);
  rd.choice(doc, "c", kC, cfg.c);
  rd.choice(doc, "ctilde", kCtilde, cfg.ctilde.kind);
  rd.number(doc, "ctilde_robin_eps", cfg.ctilde.robin_eps);
  if (cfg.ctilde.kind == CtildeSource::Kind::algebraic) cfg.ctilde.robin_eps = 0.0;
  rd.number(doc, "geneo_robin_eps", cfg.geneo_robin_eps);
  cfg.tol = cfg.problem.viscosity == ViscosityKind::contrast ? 1e-6 : 1e-8;
  rd.number(doc, "tol", cfg.tol);
  rd.number(doc, "maxit", cfg.maxit);
  rd.number(doc, "restart", cfg.restart);
  if (doc.contains("seed")) {
    if (doc["seed"].is_number_unsigned())
      cfg.seed = doc["seed"].get<std::uint64_t>();
    else
      errors.push_back("seed: expected a non-negative integer");
  }
  rd.number(doc, "rank_tol", cfg.rank_tol);
  rd.boolean(doc, "verify_bound", cfg.verify_bound);
  if (doc.contains("k1")) {
    if (doc["k1"] == "exact")
      cfg.exact_k1 = true;
    else if (doc["k1"] == "combinatorial")
      cfg.exact_k1 = false;
    else
      errors.push_back("k1: expected exact or combinatorial");
  }
  const auto range_errors = validation_errors(cfg);
  errors.insert(errors.end(), range_errors.begin(), range_errors.end());
  raise(errors);
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

void validate(const ExperimentConfig& c) { raise(validation_errors(c)); }

namespace {

std::vector<std::string> validation_errors(const ExperimentConfig& c) {
  std::vector<std::string> e;
  if (c.J < 1 || isqrt_exact(c.J) < 0) e.push_back("J: must be a perfect square >= 1");
  if (c.cells_per_subdomain < 0) e.push_back("cells_per_subdomain: must be >= 0");
  if (c.cells_per_subdomain == 0 && c.dofs_per_subdomain < 4)
    e.push_back("dofs_per_subdomain: must be >= 4");
  if (c.overlap < 0) e.push_back("overlap: must be >= 0");
  if (c.pou_margin > c.overlap) e.push_back("pou_margin: cannot exceed overlap");
  if (!(c.problem.nu > 0.0)) e.push_back("problem.nu: must be positive");
  if (!(c.problem.eta >= 0.0)) e.push_back("problem.eta: must be >= 0");
  if (!(c.problem.robin >= 0.0)) e.push_back("problem.robin: must be >= 0");
  if (!(c.tau > 0.0)) e.push_back("tau: must be positive");
  if (!(c.gamma > 0.0)) e.push_back("gamma: must be positive");
  if (!(c.tol > 0.0)) e.push_back("tol: must be positive");
  if (c.maxit < 1) e.push_back("maxit: must be >= 1");
  if (c.restart < 0) e.push_back("restart: must be >= 0");
  if (!(c.rank_tol > 0.0 && c.rank_tol < 1.0)) e.push_back("rank_tol: must lie in (0, 1)");
  if (!(c.ctilde.robin_eps >= 0.0)) e.push_back("ctilde_robin_eps: must be >= 0");
  if (!(c.geneo_robin_eps > 0.0)) e.push_back("geneo_robin_eps: must be positive");
  if (c.robin_rule.kind == RobinRule::Kind::constant && !(c.robin_rule.value >= 0.0))
    e.push_back("robin_rule: constant must be >= 0");
  const bool convdiff = c.problem.kind == ProblemKind::convdiff;
  if (convdiff) {
    if (c.coarse != CoarseKind::none && c.coarse != CoarseKind::extended)
      e.push_back("coarse: convdiff runs support none or extended only");
    if (c.c == CChoice::a) e.push_back("c: A is not symmetric for convdiff, use symmetric_part");
    if (c.backend == LocalBackend::icc) e.push_back("backend: icc needs symmetric local matrices");
  } else if (c.problem.advection != AdvectionKind::none) {
    e.push_back("problem.advection: only valid for convdiff");
  }
  if (c.robin_rule.kind == RobinRule::Kind::convdiff && !convdiff &&
      c.local_matrix == LocalMatrixSource::robin)
    e.push_back("robin_rule: convdiff rule needs a convdiff problem");
  if (c.coarse != CoarseKind::none && c.one_level == OneLevelKind::none)
    e.push_back("coarse: a coarse space needs a one-level method");
  if (c.verify_bound && c.coarse != CoarseKind::extended)
    e.push_back("verify_bound: only defined for the extended coarse space");
  return e;
}

}  // namespace

std::string config_to_json(const ExperimentConfig& c) {
  json j;
  j["name"] = c.name;
  j["problem"] = {{"kind", kProblemKinds.name(c.problem.kind)},
                  {"viscosity", kViscosity.name(c.problem.viscosity)},
                  {"nu", c.problem.nu},
                  {"eta", c.problem.eta},
                  {"advection", kAdvection.name(c.problem.advection)},
                  {"supg", c.problem.supg},
                  {"robin", c.problem.robin}};
  j["J"] = c.J;
  j["dofs_per_subdomain"] = c.dofs_per_subdomain;
  j["cells_per_subdomain"] = c.cells_per_subdomain;
  j["overlap"] = c.overlap;
  j["pou"] = kPou.name(c.pou);
  j["pou_margin"] = c.pou_margin;
  j["one_level"] = kOneLevel.name(c.one_level);
  j["backend"] = kBackend.name(c.backend);
  j["local_matrix"] = kLocalMatrix.name(c.local_matrix);
  switch (c.robin_rule.kind) {
    case RobinRule::Kind::constant:
      j["robin_rule"] = c.robin_rule.value;
      break;
    case RobinRule::Kind::nu_over_sqrt_h:
      j["robin_rule"] = "nu_over_sqrt_h";
      break;
    case RobinRule::Kind::convdiff:
      j["robin_rule"] = "convdiff";
      break;
  }
  j["coarse"] = kCoarse.name(c.coarse);
  j["tau"] = c.tau;
  j["gamma"] = c.gamma;
  j["c"] = kC.name(c.c);
  j["ctilde"] = kCtilde.name(c.ctilde.kind);
  j["ctilde_robin_eps"] = c.ctilde.robin_eps;
  j["geneo_robin_eps"] = c.geneo_robin_eps;
  j["tol"] = c.tol;
  j["maxit"] = c.maxit;
  j["restart"] = c.restart;
  j["seed"] = c.seed;
  j["rank_tol"] = c.rank_tol;
  j["verify_bound"] = c.verify_bound;
  j["k1"] = c.exact_k1 ? "exact" : "combinatorial";
  return j.dump(2);
}

LinearMap Problem::preconditioner_map() const {
  if (!preconditioner) return {};
  auto p = preconditioner;
  return [p](std::span<const double> x, std::span<double> y) { p->apply(x, y); };
}

const std::vector<LocalSpectralResult>* Problem::spectra() const {
  if (extended) return &extended->spectra;
  if (baseline) return &baseline->spectra;
  return nullptr;
}

Problem build_problem(const ExperimentConfig& config) {
  validate(config);
  const auto t0 = std::chrono::steady_clock::now();
  Problem pb;
  pb.config = config;
  const Index p = config.subdomains_per_side();
  const Index nv = config.mesh_vertices_per_side();
  pb.mesh = std::make_shared<const Mesh>(
      build_mesh(nv, nv, std::sqrt(static_cast<double>(config.J))));
  AssembledSystem sys = assemble_problem(config.problem, *pb.mesh);
  pb.a = std::make_shared<const SparseMatrix>(std::move(sys.a));
  pb.f = std::move(sys.f);
  pb.elements = std::move(sys.elements);
  const SparseMatrix& a = *pb.a;
  pb.c = config.c == CChoice::a ? a : symmetric_part(a);

  const Index margin = config.pou_margin >= 0 ? config.pou_margin : config.overlap / 2;
  const PouKind pou = config.pou == PouKind::Kind::multiplicity
                          ? PouKind::multiplicity()
                          : PouKind::boundary_vanishing(margin, config.overlap);
  pb.dec = build_decomposition(*pb.mesh, a, p, p, config.overlap, pou);

  LocalSolverOptions lo;
  lo.kind = config.one_level;
  lo.backend = config.backend;
  lo.source = config.local_matrix;
  lo.robin_rule = config.robin_rule;
  auto solvers =
      std::make_shared<const LocalSolvers>(build_local_solvers(a, pb.dec, lo, &pb.elements));
  pb.solvers = solvers;

  SparseMatrix r0 = SparseMatrix::from_triplets(0, a.nrows(), {});
  switch (config.coarse) {
    case CoarseKind::none:
      break;
    case CoarseKind::extended: {
      pb.dec.ctilde = build_ctilde(pb.dec, config.ctilde, &pb.elements, pb.c);
      SelectOptions so;
      so.tau = config.tau;
      pb.extended = build_extended_coarse_space(a, pb.c, pb.dec, *solvers, so, config.rank_tol);
      r0 = pb.extended->z.r0;
      break;
    }
    case CoarseKind::geneo:
      pb.baseline = geneo_baseline(a, pb.dec, pb.elements, config.tau, config.geneo_robin_eps,
                                   config.rank_tol);
      r0 = pb.baseline->z.r0;
      break;
    case CoarseKind::geneo2: {
      std::vector<SparseMatrix> b;
      for (Index j = 0; j < pb.dec.num_subdomains(); ++j) {
        if (solvers->source() == LocalMatrixSource::robin)
          b.push_back(solvers->local_matrix(j));
        else
          b.push_back(robin_local_matrix(pb.elements, pb.dec.subdomains[j].indices,
                                         RobinRule::nu_over_sqrt_h())
                          .matrix);
      }
      pb.baseline = geneo2_baseline(a, pb.dec, b, pb.elements, config.tau, config.gamma,
                                    config.geneo_robin_eps, config.rank_tol);
      r0 = pb.baseline->z.r0;
      break;
    }
  }
  pb.coarse = std::make_shared<const CoarseOperator>(a, std::move(r0));
  if (config.one_level != OneLevelKind::none)
    pb.preconditioner = std::make_shared<const TwoLevel>(pb.a, solvers, pb.coarse);
  pb.setup_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return pb;
}

void write_history_csv(const std::string& path, const SolveReport& report) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os << "iteration,relative_residual\n";
  for (std::size_t k = 0; k < report.history.size(); ++k)
    os << k << ',' << fmt(report.history[k]) << '\n';
}

ExperimentResult solve(const Problem& pb, const RunOptions& options) {
  const ExperimentConfig& cfg = pb.config;
  ExperimentResult res;
  res.config = cfg;
  res.global_n = pb.a->nrows();
  res.setup_time = pb.setup_time;
  GmresOptions go;
  go.tol = cfg.tol;
  go.maxit = cfg.maxit;
  go.restart = cfg.restart;
  auto sol = gmres(*pb.a, pb.f, pb.preconditioner_map(), go);
  res.report = std::move(sol.report);
  res.cs_total = pb.coarse_size();
  res.report.coarse_size = res.cs_total;
  res.cs_relative = static_cast<double>(res.cs_total) / static_cast<double>(cfg.J);

  const bool verify = options.verify_bound.value_or(cfg.verify_bound);
  if (verify) {
    if (!pb.extended) throw ConfigError("verify_bound: only defined for the extended coarse space");
    TheoremOptions to;
    to.exact_k1 = cfg.exact_k1;
    to.seed = cfg.seed;
    res.bound = verify_theorem(*pb.a, pb.c, pb.dec, *pb.preconditioner, *pb.extended, cfg.tau, to);
  }

  if (!options.out_dir.empty()) {
    namespace fs = std::filesystem;
    fs::create_directories(options.out_dir);
    const std::string base = (fs::path(options.out_dir) / cfg.id()).string();
    write_history_csv(base + "_history.csv", res.report);
    write_decomposition_csv(base + "_decomposition.csv", pb.dec);
    if (const auto* sp = pb.spectra()) write_spectrum_csv(base + "_spectrum.csv", *sp);
    std::ofstream(base + "_config.json") << config_to_json(cfg) << '\n';
    emit_summary({res}, base + "_summary.csv");
  }
  return res;
}

ExperimentResult run(const ExperimentConfig& config, const RunOptions& options) {
  return solve(build_problem(config), options);
}

std::vector<SweepEntry> weak_scaling_sweep(const ExperimentConfig& base,
                                           const std::vector<Index>& js,
                                           const RunOptions& options) {
  std::vector<SweepEntry> out;
  for (Index J : js) {
    SweepEntry entry;
    entry.J = J;
    ExperimentConfig cfg = base;
    cfg.J = J;
    try {
      entry.result = run(cfg, options);
    } catch (const std::exception& ex) {
      entry.error = ex.what();
    }
    out.push_back(std::move(entry));
  }
  return out;
}

void emit_summary(std::ostream& os, const std::vector<ExperimentResult>& results) {
  os << "J,problem,onelevel,backend,coarse,tau,iterations,converged,cs_total,cs_relative,sigma,"
        "bound,measured_norm\n";
  for (const auto& r : results) {
    const auto& c = r.config;
    os << c.J << ',' << c.problem_label() << ',' << to_string(c.one_level) << ','
       << to_string(c.backend) << ',' << to_string(c.coarse) << ',' << fmt(c.tau) << ','
       << r.report.iterations << ',' << (r.report.converged ? "true" : "false") << ','
       << r.cs_total << ',' << fmt(r.cs_relative) << ',';
    if (r.bound)
      os << fmt(r.bound->sigma) << ',' << fmt(r.bound->bound) << ',' << fmt(r.bound->measured_norm);
    else
      os << ",,";
    os << '\n';
  }
}

void emit_summary(const std::vector<ExperimentResult>& results, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  emit_summary(os, results);
  if (!os) throw Error("failed writing " + path);
}

void export_matrix(const ExperimentConfig& config, const std::string& out_dir) {
  validate(config);
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const std::string base = (fs::path(out_dir) / config.id()).string();
  const Index nv = config.mesh_vertices_per_side();
  const Mesh mesh = build_mesh(nv, nv, std::sqrt(static_cast<double>(config.J)));
  const AssembledSystem sys = assemble_problem(config.problem, mesh);
  write_matrix_market(base + ".mtx", sys.a);
  write_matrix_market_vector(base + "_rhs.mtx", sys.f);
  write_coordinates(base + "_coords.txt", mesh);
}

std::string resolve_out_dir(const std::string& fallback) {
  if (const char* env = std::getenv("SCHWARZ_OUT_DIR"); env != nullptr && *env != '\0') return env;
  return fallback;
}

void apply_thread_env() {
  const char* env = std::getenv("SCHWARZ_NUM_THREADS");
  if (env == nullptr || *env == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(env, &end, 10);
  if (*end != '\0' || n < 1) throw ConfigError("SCHWARZ_NUM_THREADS must be a positive integer");
  openblas_set_num_threads(static_cast<int>(n));
}

}  // namespace schwarz
