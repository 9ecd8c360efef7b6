#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "czt/errors.hpp"
#include "czt/extension.hpp"

using namespace czt;

namespace {

Domain notched_square() {
  return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0.55, 1}, {0.55, 0.6}, {0.45, 0.6}, {0.45, 1}, {0, 1}});
}

const ExtensionSetup& notched_setup() {
  static const ExtensionSetup s = make_extension_setup(notched_square(), -10);
  return s;
}

std::vector<Point> exterior_points(const ExtendedField& ef, int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const Box h = ef.support_hull();
  std::uniform_real_distribution<double> ux(h.lo.x, h.hi.x);
  std::uniform_real_distribution<double> uy(h.lo.y, h.hi.y);
  std::vector<Point> pts;
  while (static_cast<int>(pts.size()) < n) {
    const Point p{ux(rng), uy(rng)};
    if (ef.domain().signed_distance(p) > 0.01) pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST(CubeMean, ConstantAndLinear) {
  EXPECT_NEAR(cube_mean(fields::constant(3.5), GeneralCube{{0.2, -0.4}, 0.3}), 3.5, 1e-14);
  EXPECT_NEAR(cube_mean(fields::coordinate(0), GeneralCube{{0.5, 0.5}, 1.0}), 0.5, 1e-14);
  ScalarField quad;
  quad.value = [](Point p) { return p.x * p.x + 3 * p.y * p.y; };
  // Richardson removes the h^2 term of the midpoint rule exactly for quadratics.
  EXPECT_NEAR(cube_mean(quad, GeneralCube{{0.5, 0.5}, 1.0}, 8), 1.0 / 3 + 1.0, 1e-14);
}

TEST(CubeMean, PhiAtCenterGrowsLikeLog) {
  // Mean of -log|x| over [-a, a]^2 is log(1/a) + (3 - pi/2 - log 2) / 2.
  const double c0 = (3.0 - std::numbers::pi / 2 - std::log(2.0)) / 2;
  const ScalarField phi = fields::phi_tau(Modulus::constant(), {0.0, 0.0});
  for (int k = 2; k <= 14; k += 3) {
    const double l = std::ldexp(1.0, -k);
    const double exact = std::log(2.0 / l) + c0;
    EXPECT_NEAR(cube_mean(phi, GeneralCube{{0.0, 0.0}, l}), exact, 5e-3) << l;
  }
}

TEST(CubeMean, PoisonedSample) {
  ScalarField bad;
  bad.value = [](Point p) { return p.x > 0.5 ? std::nan("") : 0.0; };
  EXPECT_THROW(cube_mean(bad, GeneralCube{{0.5, 0.5}, 1.0}), PoisonedValue);
}

TEST(Extension, ConstantExtendsToOneWhereCovered) {
  const auto& s = notched_setup();
  const ExtendedField ef = extend(fields::constant(1.0), s);
  std::mt19937_64 rng(2);
  const auto cubes = s.exterior->cubes();
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (std::size_t k = 0; k < cubes.size(); k += 3) {
    const DyadicCube& q = cubes[k];
    if (q.side() > s.cutoff / 2) continue;
    const Point x{q.lo().x + u(rng) * q.side(), q.lo().y + u(rng) * q.side()};
    EXPECT_NEAR(ef(x), 1.0, 1e-12);
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Extension, AgreesWithBaseInsideDomain) {
  const auto& s = notched_setup();
  const ScalarField f = fields::phi_tau(Modulus::power(0.5), {0.27, 0.27});
  const ExtendedField ef = extend(f, s);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const Point p{u(rng), u(rng)};
    if (!ef.domain().contains(p)) continue;
    EXPECT_EQ(ef(p), f(p));
  }
}

TEST(Extension, CompactSupportAndLocality) {
  const auto& s = notched_setup();
  const ExtendedField ef = extend(fields::coordinate(0), s);
  const Box h = ef.support_hull();
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-3.0, 4.0);
  int outside = 0;
  while (outside < 1000) {
    const Point p{u(rng), u(rng)};
    if (h.contains(p)) continue;
    EXPECT_EQ(ef(p), 0.0);
    ++outside;
  }
  const WhitneyCheck chk = verify_whitney(*s.exterior);
  for (const Point p : exterior_points(ef, 1000, 8)) EXPECT_LE(ef.terms_at(p), chk.overlap_max);
}

TEST(Extension, GradientMatchesFiniteDifferences) {
  const auto& s = notched_setup();
  const ExtendedField ef = extend(fields::phi_tau(Modulus::constant(), {0.7, 0.3}), s);
  const ScalarField g = ef.as_field();
  for (const Point p : exterior_points(ef, 300, 10)) {
    // The steps switch over 0.1 l(Q), so the difference step must be small.
    const double h = 1e-8;
    const Vec2 fd{(g({p.x + h, p.y}) - g({p.x - h, p.y})) / (2 * h), (g({p.x, p.y + h}) - g({p.x, p.y - h})) / (2 * h)};
    const Vec2 an = ef.gradient(p);
    EXPECT_NEAR(an.x, fd.x, 1e-4 * std::max(1.0, norm(an)));
    EXPECT_NEAR(an.y, fd.y, 1e-4 * std::max(1.0, norm(an)));
  }
}

TEST(Extension, ReflectedMeansAreMeansOfInteriorCubes) {
  const auto& s = notched_setup();
  const ScalarField f = fields::coordinate(1);
  const ExtendedField ef = extend(f, s);
  for (std::size_t i = 0; i < s.exterior->size(); i += 11) {
    const auto r = ef.reflection()[i];
    if (r < 0) {
      EXPECT_TRUE(std::isnan(ef.reflected_mean(i)));
      continue;
    }
    EXPECT_NEAR(ef.reflected_mean(i), s.interior->cubes()[static_cast<std::size_t>(r)].center().y, 1e-13);
  }
}

TEST(Extension, Lemma2OscillationTransfer) {
  const auto& s = notched_setup();
  for (const ScalarField& f : {fields::coordinate(0), fields::phi_tau(Modulus::constant(), {0.27, 0.27})}) {
    const Lemma2Report rep = lemma2_check(extend(f, s), 4, 16);
    EXPECT_GT(rep.c, 0) << f.label;
    EXPECT_FALSE(rep.rows.empty());
    EXPECT_LE(rep.C, kLemma2Bound);
  }
}
