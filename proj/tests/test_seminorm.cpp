#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "czt/errors.hpp"
#include "czt/seminorm.hpp"

using namespace czt;

namespace {

Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

CubeSampler square_sampler(CubeRegion r, int random = 300) {
  static const WhitneyCovering cov = build_whitney(unit_square(), CoveringSide::kInterior, -7);
  const WhitneyCovering* covs[] = {&cov};
  SamplerOptions opt;
  opt.region = r;
  opt.random = random;
  opt.finest_level = -10;
  opt.coarsest_level = -1;
  return sample_cubes(unit_square(), covs, opt);
}

// inf over b of the grid average of |f - b|, by scanning b.
double brute_force_l1(const ScalarField& f, const GeneralCube& q, int n, int steps) {
  std::vector<double> v;
  const Box b = q.box();
  const double h = q.side / n;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) v.push_back(f({b.lo.x + (i + 0.5) * h, b.lo.y + (j + 0.5) * h}));
  }
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  double best = 1e300;
  for (int s = 0; s <= steps; ++s) {
    const double c = lo + (hi - lo) * s / steps;
    double acc = 0.0;
    for (double x : v) acc += std::abs(x - c);
    best = std::min(best, acc / static_cast<double>(v.size()));
  }
  return best;
}

}  // namespace

TEST(Sampler, RespectsRegions) {
  const Domain d = unit_square();
  for (CubeRegion r : {CubeRegion::kInside, CubeRegion::kSeparated}) {
    const CubeSampler s = square_sampler(r);
    EXPECT_FALSE(s.cubes.empty());
    for (const auto& q : s.cubes) {
      const Box b = (r == CubeRegion::kInside ? q : dilate(q, 2.0)).box();
      EXPECT_TRUE(b.lo.x > 0 && b.lo.y > 0 && b.hi.x < 1 && b.hi.y < 1);
      EXPECT_LE(q.side, 1.0);
    }
  }
  const CubeSampler a = square_sampler(CubeRegion::kInside);
  const CubeSampler b = square_sampler(CubeRegion::kInside);
  ASSERT_EQ(a.cubes.size(), b.cubes.size());
  EXPECT_EQ(a.descriptor, b.descriptor);
}

TEST(Campanato, ConstantHasZeroSeminorm) {
  const CubeSampler s = square_sampler(CubeRegion::kInside, 100);
  for (const Modulus& m : {Modulus::constant(), Modulus::power(0.5), Modulus::log_power(0.5)}) {
    for (int p : {1, 2}) EXPECT_EQ(campanato_seminorm(fields::constant(2.0), m, p, s).sup_ratio, 0.0);
  }
}

TEST(Campanato, LinearMatchesBruteForceInfimum) {
  const ScalarField f = fields::coordinate(0);
  const Modulus m = Modulus::power(0.999);
  const CubeSampler s = square_sampler(CubeRegion::kInside, 50);
  const OscillationReport rep = campanato_seminorm(f, m, 1, s);
  double largest = 0.0;
  for (const auto& row : rep.rows) largest = std::max(largest, row.cube.side);
  EXPECT_DOUBLE_EQ(rep.rows[rep.argmax].cube.side, largest);
  for (std::size_t k = 0; k < rep.rows.size(); k += 150) {
    const auto& row = rep.rows[k];
    EXPECT_NEAR(row.osc, row.cube.side / 4, 1e-12 * row.cube.side);
    const double bf = brute_force_l1(f, row.cube, 256, 500);
    EXPECT_NEAR(row.osc, bf, 2e-3 * row.cube.side);
  }
}

TEST(Campanato, MedianIsOptimalForL1) {
  const ScalarField f = fields::phi_tau(Modulus::power(0.5), {0.3, 0.6});
  const CubeSampler s = square_sampler(CubeRegion::kInside, 100);
  const OscillationReport rep = campanato_seminorm(f, Modulus::power(0.5), 1, s);
  for (std::size_t k = 0; k < rep.rows.size(); k += 13) {
    const auto& row = rep.rows[k];
    for (double shift : {-1e-3, 1e-3, 0.05}) {
      double acc = 0.0;
      const Box b = row.cube.box();
      const double h = row.cube.side / 32;
      for (int i = 0; i < 32; ++i) {
        for (int j = 0; j < 32; ++j) acc += std::abs(f({b.lo.x + (i + 0.5) * h, b.lo.y + (j + 0.5) * h}) - row.b - shift);
      }
      EXPECT_LE(row.osc, acc / 1024 + 1e-15);
    }
  }
}

TEST(Campanato, PhiHasFiniteSeminorm) {
  for (const Modulus& m : {Modulus::constant(), Modulus::power(0.5)}) {
    const ScalarField f = fields::phi_tau(m, {0.5, 0.5});
    const OscillationReport rep = campanato_seminorm(f, m, 1, square_sampler(CubeRegion::kInside));
    EXPECT_GT(rep.sup_ratio, 0.1);
    EXPECT_LT(rep.sup_ratio, 10.0);
  }
}

TEST(Campanato, GridRefinementIsStable) {
  const Modulus m = Modulus::constant();
  const ScalarField f = fields::phi_tau(m, {0.5, 0.5});
  const CubeSampler s = square_sampler(CubeRegion::kInside, 200);
  const double a = campanato_seminorm(f, m, 1, s, 32).sup_ratio;
  const double b = campanato_seminorm(f, m, 1, s, 64).sup_ratio;
  EXPECT_LT(std::abs(a - b) / b, 0.05);
}

TEST(Campanato, EmptySamplerThrows) {
  EXPECT_THROW(campanato_seminorm(fields::constant(1), Modulus::constant(), 1, CubeSampler{}), EmptyReport);
}

TEST(LpEquivalence, PowerMeanAndBoundedRatio) {
  const CubeSampler s = square_sampler(CubeRegion::kInside, 200);
  const auto c = lp_equivalence_check(fields::constant(1.0), Modulus::constant(), s);
  EXPECT_EQ(c.min_ratio, 1.0);
  EXPECT_EQ(c.max_ratio, 1.0);
  const auto e = lp_equivalence_check(fields::phi_tau(Modulus::constant(), {0.5, 0.5}), Modulus::constant(), s);
  EXPECT_GE(e.min_ratio, 1.0 - 1e-12);
  EXPECT_LE(e.max_ratio, 10.0);
}

TEST(Bloch, LogDistanceOnBallIsOne) {
  const Domain ball = Domain::ball({0, 0}, 1.0);
  ScalarField f;
  f.value = [](Point p) { return -std::log(1.0 - norm(p)); };
  f.gradient = [](Point p) {
    const double r = norm(p);
    return p * (1.0 / (r * (1.0 - r)));
  };
  const auto probes = bloch_probes(ball, 12, 20, 500);
  const BlochReport rep = bloch_seminorm(f, ball, Modulus::constant(), probes);
  EXPECT_GT(rep.rows.size(), 500u);
  for (const auto& row : rep.rows) EXPECT_NEAR(row.ratio, 1.0, 1e-9);
}

TEST(Bloch, ConstantAndCapability) {
  const Domain d = unit_square();
  const auto probes = bloch_probes(d, 4, 10, 50);
  EXPECT_EQ(bloch_seminorm(fields::constant(1.0), d, Modulus::constant(), probes).sup_ratio, 0.0);
  ScalarField no_grad;
  no_grad.value = [](Point) { return 0.0; };
  EXPECT_THROW(bloch_seminorm(no_grad, d, Modulus::constant(), probes), CapabilityError);
}

TEST(Bloch, ImbedsIntoCampanato) {
  const Domain d = unit_square();
  const Modulus m = Modulus::power(0.5);
  const ScalarField f = fields::phi_tau(m, {0.5, -0.1});
  const double b = bloch_seminorm(f, d, m, bloch_probes(d)).sup_ratio;
  const double c = campanato_seminorm(f, m, 1, square_sampler(CubeRegion::kSeparated)).sup_ratio;
  EXPECT_GT(b, 0.0);
  EXPECT_LE(c, 4.0 * b);
}

TEST(MeanGrowth, BoundedFunctionRatiosVanish) {
  std::vector<GeneralCube> cubes;
  for (int k = 2; k <= 14; ++k) cubes.push_back({{0.5, 0.5}, std::ldexp(1.0, -k)});
  const auto rep = mean_growth_check(fields::coordinate(0), Modulus::constant(), cubes, 1.0);
  EXPECT_TRUE(rep.monotone_flags.empty());
  EXPECT_LT(rep.rows.back().ratio, rep.rows.front().ratio);
  EXPECT_LT(rep.max_ratio, 1.0);
}

TEST(MeanGrowth, PhiMatchesDiniBound) {
  const Modulus m = Modulus::constant();
  std::vector<GeneralCube> cubes;
  for (int k = 2; k <= 14; ++k) cubes.push_back({{0.0, 0.0}, std::ldexp(1.0, -k)});
  const auto rep = mean_growth_check(fields::phi_tau(m, {0, 0}), m, cubes, 1.0);
  EXPECT_GT(rep.min_ratio, 0.5);
  EXPECT_LT(rep.max_ratio / rep.min_ratio, 10.0);
}

TEST(Drift, TelescopingBound) {
  const Domain d = unit_square();
  for (const Modulus& m : {Modulus::constant(), Modulus::power(0.5)}) {
    const ScalarField f = fields::phi_tau(m, {0.5, 0.5});
    const CubeSampler s = square_sampler(CubeRegion::kInside, 300);
    const double M = campanato_seminorm(f, m, 1, s).sup_ratio;
    const DriftReport r = telescoping_check(f, d, m, M, s.cubes);
    EXPECT_GT(r.pairs, 50u);
    EXPECT_LE(r.max_normalized, r.bound);
  }
}

TEST(Harmonic, ReverseImbedding) {
  ScalarField quad;
  quad.value = [](Point p) { return p.x * p.x - p.y * p.y; };
  quad.gradient = [](Point p) { return Vec2{2 * p.x, -2 * p.y}; };
  const Point a{2.0, 0.3};
  ScalarField lg;
  lg.value = [a](Point p) { return std::log(distance(p, a)); };
  lg.gradient = [a](Point p) { return (p - a) / norm2(p - a); };
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (int i = 0; i < 50; ++i) {
    const Point x{u(rng), u(rng)};
    for (double r : {0.01, 0.05, 0.2}) {
      EXPECT_LE(harmonic_gradient_ratio(quad, x, r), kHarmonicBound);
      EXPECT_LE(harmonic_gradient_ratio(lg, x, r), kHarmonicBound);
    }
  }
}
