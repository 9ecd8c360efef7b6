#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "czt/cube.hpp"
#include "czt/field.hpp"
#include "czt/moduli.hpp"
#include "czt/whitney.hpp"

namespace czt {

// Which cubes are admissible: anywhere in the plane, Q inside D, or 2Q
// inside D (the interior seminorm).
enum class CubeRegion { kPlane, kInside, kSeparated };

std::string to_string(CubeRegion r);

struct SamplerOptions {
  CubeRegion region = CubeRegion::kInside;
  int random = 1000;
  std::uint64_t seed = 1;
  int finest_level = -12;
  int coarsest_level = 0;
  // Centers of random cubes; empty selects bbox(D) inflated by half its size.
  Box box;
  // Half of the random cubes are centered near boundary nodes.
  bool boundary_anchored = true;
  bool dilations = true;  // include 9/8 Q for covering cubes when admissible
};

struct CubeSampler {
  std::vector<GeneralCube> cubes;
  std::string descriptor;
};

bool admissible(const Domain& d, CubeRegion r, const GeneralCube& q);

// Covering cubes (and their 9/8 dilations) that are admissible, followed by
// `random` admissible cubes with sides 2^k, k uniform in the level range.
CubeSampler sample_cubes(const Domain& d, std::span<const WhitneyCovering* const> coverings,
                         const SamplerOptions& opt);

struct OscillationRow {
  GeneralCube cube;
  double b = 0.0;    // median (p = 1) or mean (p = 2) of the samples
  double osc = 0.0;  // discrete L^p average of |f - b|
  double ratio = 0.0;
};

struct OscillationReport {
  int p = 1;
  int grid = 32;
  std::vector<OscillationRow> rows;
  double sup_ratio = 0.0;
  std::size_t argmax = 0;
  std::string sampler;
};

// Throws EmptyReport when the sampler is empty.
OscillationReport campanato_seminorm(const ScalarField& f, const Modulus& m, int p, const CubeSampler& sampler,
                                     int grid = 32);

struct LpEquivalence {
  double min_ratio = 1.0;  // min over cubes of osc_2 / osc_1
  double max_ratio = 1.0;  // C_eq
  std::size_t cubes = 0;
};
LpEquivalence lp_equivalence_check(const ScalarField& f, const Modulus& m, const CubeSampler& sampler,
                                   int grid = 32);

struct BlochRow {
  Point x;
  double rho = 0.0;
  double grad = 0.0;
  double ratio = 0.0;
};

struct BlochReport {
  std::vector<BlochRow> rows;
  double sup_ratio = 0.0;
  std::size_t argmax = 0;
};

// Normal-line sweeps at delta = 2^-k (k = 2..max_k) from `anchors` evenly
// spaced boundary nodes, plus `random` interior points with rho above the
// collar 2^-20 diam(D).
std::vector<Point> bloch_probes(const Domain& d, int anchors = 16, int max_k = 20, int random = 1000,
                                std::uint64_t seed = 1);

// Throws CapabilityError when f has no gradient.
BlochReport bloch_seminorm(const ScalarField& f, const Domain& d, const Modulus& m, std::span<const Point> probes);

struct MeanGrowthRow {
  GeneralCube cube;
  double mean_abs = 0.0;  // |f_Q|
  double bound = 0.0;     // int_l^1 w(t)/t dt
  double ratio = 0.0;     // |f_Q| / bound
};

struct MeanGrowthReport {
  std::vector<MeanGrowthRow> rows;
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double constant = 0.0;  // max ratio / seminorm
  // Cubes where the bound fails to grow as l decreases (cubes given in
  // decreasing size order).
  std::vector<std::size_t> monotone_flags;
};

MeanGrowthReport mean_growth_check(const ScalarField& f, const Modulus& m, std::span<const GeneralCube> cubes,
                                   double seminorm, int quad_n = 32);

struct DriftReport {
  std::size_t pairs = 0;
  double max_normalized = 0.0;  // max |f_Q - f_2Q| / (M w(l(2Q)))
  double bound = 16.0;          // 4^d
};

// Nested pairs Q, 2Q for every sampler cube with 2Q inside D and l(2Q) <= 1.
DriftReport telescoping_check(const ScalarField& f, const Domain& d, const Modulus& m, double seminorm,
                              std::span<const GeneralCube> cubes, int quad_n = 32);

// |grad f(x0)| R^3 / int_{B(x0, 2R)} |f - c|, c the mean over the ball. For
// harmonic f this is at most 3 / (7 pi) < 1/pi.
double harmonic_gradient_ratio(const ScalarField& f, Point x0, double r, int radial = 24, int angular = 64);
inline constexpr double kHarmonicBound = 0.31830988618379067;  // 1/pi

}  // namespace czt
