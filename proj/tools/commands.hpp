#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "czt/io.hpp"

namespace czt::cli {

struct RunContext {
  json config;
  std::filesystem::path out = ".";
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  bool dry_run = false;
};

// Each command returns 0 (pass) or 1 (threshold fail); errors propagate as
// czt::Error and map to their exit codes in main.
int run_whitney(const RunContext& ctx);
int run_extend(const RunContext& ctx);
int run_seminorm(const RunContext& ctx);
int run_tchi(const RunContext& ctx);
int run_grad_profile(const RunContext& ctx);
int run_t1check(const RunContext& ctx);
int run_cancellation(const RunContext& ctx);

}  // namespace czt::cli
