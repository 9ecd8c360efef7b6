#include <array>
#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "czt/domain.hpp"
#include "czt/field.hpp"
#include "czt/kernel.hpp"
#include "czt/moduli.hpp"
#include "czt/seminorm.hpp"
#include "czt/singular.hpp"
#include "czt/whitney.hpp"

namespace {

using namespace czt;

Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

void BM_PvTchiSquare(benchmark::State& state) {
  const Domain d = unit_square();
  const Kernel k = Kernel::beurling_re();
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(pv_tchi(d, k, {0.3, 0.6}, tol).value);
}
BENCHMARK(BM_PvTchiSquare)->Arg(6)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_GradTchiBoundary(benchmark::State& state) {
  const Domain d = Domain::graph_disk(Modulus::power(0.5), 1.0, 0.1);
  const Kernel k = Kernel::beurling_re();
  for (auto _ : state) benchmark::DoNotOptimize(grad_tchi_boundary(d, k, {0.0, 0.05}));
}
BENCHMARK(BM_GradTchiBoundary)->Unit(benchmark::kMillisecond);

void BM_BuildWhitney(benchmark::State& state) {
  const Domain d = Domain::ball({0, 0}, 1.0);
  const int level = -static_cast<int>(state.range(0));
  for (auto _ : state) {
    const WhitneyCovering c = build_whitney(d, CoveringSide::kInterior, level);
    benchmark::DoNotOptimize(c.cubes().size());
  }
}
BENCHMARK(BM_BuildWhitney)->Arg(8)->Arg(10)->Arg(12)->Unit(benchmark::kMillisecond);

void BM_CampanatoSeminorm(benchmark::State& state) {
  const Domain d = unit_square();
  const Modulus m = Modulus::power(0.5);
  const ScalarField f = fields::phi_tau(m, {0.5, 0.5});
  const WhitneyCovering cov = build_whitney(d, CoveringSide::kInterior, -8);
  const std::array<const WhitneyCovering*, 1> covs{&cov};
  SamplerOptions opt;
  opt.random = 200;
  opt.finest_level = -8;
  const CubeSampler s = sample_cubes(d, covs, opt);
  for (auto _ : state) benchmark::DoNotOptimize(campanato_seminorm(f, m, 1, s, 16).sup_ratio);
  state.counters["cubes"] = static_cast<double>(s.cubes.size());
}
BENCHMARK(BM_CampanatoSeminorm)->Unit(benchmark::kMillisecond);

void BM_Tilde(benchmark::State& state) {
  const Modulus m = Modulus::log_power(0.5);
  for (auto _ : state) benchmark::DoNotOptimize(tilde(m)(1e-6));
}
BENCHMARK(BM_Tilde)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
