#include <fstream>
#include <functional>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "czt/errors.hpp"
#include "czt/parallel.hpp"

namespace {

using czt::cli::RunContext;

struct Flags {
  std::string config;
  std::string out = ".";
  std::uint64_t seed = 0;
  int threads = 1;
  double tol = 0.0;
  bool dry_run = false;
};

RunContext load(const Flags& f, CLI::App& sub) {
  RunContext ctx;
  std::ifstream in(f.config);
  if (!in) throw czt::ConfigError("cannot open config file '" + f.config + "'");
  try {
    ctx.config = czt::json::parse(in);
  } catch (const czt::json::exception& e) {
    throw czt::ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!ctx.config.is_object()) throw czt::ConfigError("config must be a JSON object");
  ctx.out = f.out;
  if (sub.count("--seed")) ctx.seed = f.seed;
  if (sub.count("--tol")) {
    if (!(f.tol > 0.0)) throw czt::ConfigError("--tol must be positive");
    ctx.tol = f.tol;
  }
  ctx.dry_run = f.dry_run;
  czt::set_worker_threads(f.threads);
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Calderon-Zygmund toolkit: Whitney coverings, extensions, Campanato seminorms, T1 checks"};
  app.require_subcommand(1);
  Flags flags;
  std::function<int(const RunContext&)> action;
  CLI::App* chosen = nullptr;

  const std::vector<std::tuple<std::string, std::string, std::function<int(const RunContext&)>>> commands = {
      {"whitney", "Build and verify interior/exterior Whitney coverings", czt::cli::run_whitney},
      {"extend", "Extend a field from D to the plane and rasterize it", czt::cli::run_extend},
      {"seminorm", "Campanato seminorm estimate of a field", czt::cli::run_seminorm},
      {"tchi", "Sample the principal value T chi_D on a grid and at probes", czt::cli::run_tchi},
      {"grad-profile", "Gradient profile along the inward normal at the graph origin", czt::cli::run_grad_profile},
      {"t1check", "T1 condition check for a domain, kernel and modulus", czt::cli::run_t1check},
      {"cancellation", "Cancellation of T chi_B over a ball", czt::cli::run_cancellation},
  };
  for (const auto& [name, help, fn] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", flags.config, "JSON run configuration")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", flags.out, "Output directory")->capture_default_str();
    sub->add_option("--seed", flags.seed, "Seed for random samplers (overrides the config)");
    sub->add_option("--threads", flags.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--tol", flags.tol, "Quadrature tolerance (overrides the config)");
    sub->add_flag("--dry-run", flags.dry_run, "Validate the config and print the plan; write nothing");
    sub->callback([&, sub, f = fn] {
      chosen = sub;
      action = f;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : static_cast<int>(czt::ExitCode::kConfig);
  }

  try {
    return action(load(flags, *chosen));
  } catch (const czt::Error& e) {
    std::cerr << "czt " << chosen->get_name() << ": " << e.what() << "\n";
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "czt " << chosen->get_name() << ": internal error: " << e.what() << "\n";
    return static_cast<int>(czt::ExitCode::kInternal);
  }
}
