#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "schwarz/harness/experiment.hpp"

namespace {

constexpr int kConfigError = 2;
constexpr int kNotConverged = 3;

std::vector<schwarz::Index> parse_j_list(const std::string& s) {
  std::vector<schwarz::Index> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size()) throw schwarz::ConfigError("--J: '" + item + "' is not an integer");
    out.push_back(v);
  }
  return out;
}

void print_result(const schwarz::ExperimentResult& r) {
  std::printf("%s: n=%lld iterations=%lld converged=%s residual=%.3e coarse=%lld (%.2f per subdomain)"
              " setup=%.2fs solve=%.2fs\n",
              r.config.id().c_str(), static_cast<long long>(r.global_n),
              static_cast<long long>(r.report.iterations), r.report.converged ? "yes" : "no",
              r.report.final_true_residual, static_cast<long long>(r.cs_total), r.cs_relative,
              r.setup_time, r.report.wall_time);
  if (r.bound) {
    const auto& b = *r.bound;
    std::printf("  k0=%lld k1=%.6g sigma=%.6g rho=%.6g bound=%.6g measured=%.6g coercivity=%.6g"
                " theorem=%s chain=%s\n",
                static_cast<long long>(b.k0), b.k1, b.sigma, b.rho, b.bound, b.measured_norm,
                b.coercivity, b.theorem_holds ? "holds" : "VIOLATED",
                b.chain_holds ? "holds" : "VIOLATED");
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-level overlapping Schwarz solver lab"};
  app.require_subcommand(1);
  bool strict = false;
  app.add_flag("--strict", strict, "Exit with code 3 when a solve does not converge");

  std::string config_path;
  std::string out_dir;
  bool verify = false;
  auto* run_cmd = app.add_subcommand("run", "Run one experiment");
  run_cmd->add_option("--config", config_path, "JSON config")->required();
  run_cmd->add_flag("--verify-bound", verify, "Check the two-level bound densely");
  run_cmd->add_option("--out", out_dir, "Output directory");
  run_cmd->add_flag("--strict", strict, "Exit with code 3 on non-convergence");

  std::string j_list;
  auto* sweep_cmd = app.add_subcommand("sweep", "Weak-scaling sweep over J");
  sweep_cmd->add_option("--config", config_path, "JSON config")->required();
  sweep_cmd->add_option("--J", j_list, "Comma separated subdomain counts")->required();
  sweep_cmd->add_option("--out", out_dir, "Output directory");
  sweep_cmd->add_flag("--strict", strict, "Exit with code 3 on non-convergence");

  auto* export_cmd = app.add_subcommand("export-matrix", "Write A, f and vertex coordinates");
  export_cmd->add_option("--config", config_path, "JSON config")->required();
  export_cmd->add_option("--out", out_dir, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    schwarz::apply_thread_env();
    if (out_dir.empty()) out_dir = schwarz::resolve_out_dir("results");
    const schwarz::ExperimentConfig cfg = schwarz::load_config(config_path);

    if (*export_cmd) {
      schwarz::export_matrix(cfg, out_dir);
      std::printf("wrote %s/%s.mtx\n", out_dir.c_str(), cfg.id().c_str());
      return 0;
    }
    if (*run_cmd) {
      schwarz::RunOptions opt;
      opt.out_dir = out_dir;
      if (verify) opt.verify_bound = true;
      const auto r = schwarz::run(cfg, opt);
      print_result(r);
      if (r.bound && !(r.bound->theorem_holds && r.bound->chain_holds))
        std::fprintf(stderr, "warning: bound check failed\n");
      return strict && !r.report.converged ? kNotConverged : 0;
    }
    const auto js = parse_j_list(j_list);
    for (auto J : js)
      if (J < 1) throw schwarz::ConfigError("--J: subdomain counts must be positive");
    schwarz::RunOptions opt;
    opt.out_dir = out_dir;
    const auto entries = schwarz::weak_scaling_sweep(cfg, js, opt);
    std::vector<schwarz::ExperimentResult> ok;
    bool all_converged = true;
    bool config_failure = false;
    for (const auto& e : entries) {
      if (e.result) {
        print_result(*e.result);
        all_converged = all_converged && e.result->report.converged;
        ok.push_back(*e.result);
      } else {
        std::fprintf(stderr, "J=%lld failed: %s\n", static_cast<long long>(e.J), e.error.c_str());
        all_converged = false;
        config_failure = config_failure || e.error.rfind("invalid config", 0) == 0;
      }
    }
    std::filesystem::create_directories(out_dir);
    const std::string path =
        (std::filesystem::path(out_dir) / (cfg.name + "_sweep_summary.csv")).string();
    schwarz::emit_summary(ok, path);
    std::printf("summary: %s\n", path.c_str());
    if (config_failure) return kConfigError;
    return strict && !all_converged ? kNotConverged : 0;
  } catch (const schwarz::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
