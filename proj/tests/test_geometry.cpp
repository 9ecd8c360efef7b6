#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "czt/cube.hpp"
#include "czt/domain.hpp"
#include "czt/errors.hpp"

using namespace czt;

namespace {

constexpr double kPi = std::numbers::pi;

Domain unit_square() { return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

Domain notched_square() {
  return Domain::polygon({{0, 0}, {1, 0}, {1, 1}, {0.55, 1}, {0.55, 0.6}, {0.45, 0.6}, {0.45, 1}, {0, 1}});
}

Domain sqrt_disk(double c0 = 0.1) { return Domain::graph_disk(Modulus::power(0.5), c0, 0.1); }

int winding_number(std::span<const Point> v, Point p) {
  double total = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const Vec2 a = v[i] - p;
    const Vec2 b = v[(i + 1) % v.size()] - p;
    total += std::atan2(cross(a, b), dot(a, b));
  }
  return static_cast<int>(std::lround(total / (2.0 * kPi)));
}

// Dense sampling of the boundary, independent of the projection code.
double sampled_distance(const Domain& d, Point p, int per_piece) {
  double best = 1e300;
  for (const auto& pc : d.pieces()) {
    for (int i = 0; i <= per_piece; ++i) best = std::min(best, distance(p, pc.point(static_cast<double>(i) / per_piece)));
  }
  return best;
}

}  // namespace

TEST(Cube, Dilate) {
  const GeneralCube q{{0.0, 0.0}, 1.0};
  EXPECT_EQ(dilate(q, 1.0).side, 1.0);
  EXPECT_EQ(dilate(q, 2.0).side, 2.0);
  EXPECT_EQ(dilate(q, 2.0).center, q.center);
  EXPECT_DOUBLE_EQ(dilate(q, 9.0 / 8.0).side, 1.125);
}

TEST(Cube, DyadicArithmetic) {
  const DyadicCube c{-3, 5, -2};
  EXPECT_EQ(c.side(), 0.125);
  EXPECT_EQ(c.lo().x, 0.625);
  EXPECT_EQ(c.lo().y, -0.25);
  for (int q = 0; q < 4; ++q) EXPECT_EQ(c.child(q).parent(), c);
  EXPECT_EQ(DyadicCube::containing(c.center(), -3), c);
  EXPECT_TRUE(c.contains(c.lo()));
  EXPECT_FALSE(c.contains(c.lo() + Vec2{c.side(), 0.0}));
  const DyadicCube n{-3, -1, -1};
  EXPECT_EQ(n.parent(), (DyadicCube{-2, -1, -1}));
}

TEST(Domain, SignedDistanceExamples) {
  EXPECT_DOUBLE_EQ(Domain::ball({0, 0}, 1).signed_distance({0, 0}), -1.0);
  EXPECT_DOUBLE_EQ(unit_square().signed_distance({0.5, 0.25}), -0.25);
  const double sd = sqrt_disk().signed_distance({0.0, 0.01});
  EXPECT_LT(sd, 0.0);
  EXPECT_NEAR(sd, -0.01, 0.0015);
}

TEST(Domain, SignedDistanceMatchesDenseSampling) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.1, 1.1);
  for (const Domain& d : {Domain::ball({0.5, 0.5}, 0.4), notched_square(), sqrt_disk(), sqrt_disk(2.0)}) {
    const Box bb = d.bounding_box().inflated(0.05);
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
    std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);
    for (int k = 0; k < 40; ++k) {
      const Point p{ux(rng), uy(rng)};
      const double oracle = sampled_distance(d, p, 250000);
      EXPECT_NEAR(std::abs(d.signed_distance(p)), oracle, 1e-6) << d.describe() << " " << p.x << "," << p.y;
    }
  }
}

TEST(Domain, ContainsAgreesWithSignedDistance) {
  std::mt19937_64 rng(11);
  for (const Domain& d : {Domain::ball({0, 0}, 1), notched_square(), sqrt_disk()}) {
    const Box bb = d.bounding_box().inflated(0.1);
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
    std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);
    int checked = 0;
    for (int k = 0; k < 3000; ++k) {
      const Point p{ux(rng), uy(rng)};
      const double sd = d.signed_distance(p);
      if (std::abs(sd) < 1e-9) continue;
      EXPECT_EQ(d.contains(p), sd < 0.0);
      ++checked;
    }
    EXPECT_GT(checked, 2900);
  }
}

TEST(Domain, PolygonMembershipMatchesWindingNumber) {
  const Domain d = notched_square();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.2, 1.2);
  for (int k = 0; k < 10000; ++k) {
    const Point p{u(rng), u(rng)};
    EXPECT_EQ(d.contains(p), winding_number(d.vertices(), p) != 0);
  }
}

TEST(Domain, PolygonValidation) {
  EXPECT_THROW(Domain::polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), GeometryError);
  EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}}), GeometryError);
  EXPECT_THROW(Domain::polygon({{0, 0}, {1, 0}, {2, 0}}), GeometryError);
  const Domain cw = Domain::polygon({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
  EXPECT_GT(cross(cw.vertices()[1] - cw.vertices()[0], cw.vertices()[2] - cw.vertices()[1]), 0.0);
  EXPECT_DOUBLE_EQ(cw.area(), 1.0);
}

TEST(Domain, Metadata) {
  const Domain sq = unit_square();
  EXPECT_NEAR(sq.lipschitz_delta(), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(sq.window_size(), 0.5);
  const Domain b = Domain::ball({0, 0}, 1);
  EXPECT_DOUBLE_EQ(b.window_size(), 0.5);
  EXPECT_NEAR(b.lipschitz_delta(), 1.0 / std::sqrt(15.0), 1e-12);
  const Domain g = sqrt_disk();
  EXPECT_DOUBLE_EQ(g.window_size(), 0.1);
  EXPECT_LT(g.lipschitz_delta(), 1.0);
}

TEST(Domain, BoundaryQuadrature) {
  const Domain ball = Domain::ball({0, 0}, 1);
  for (int r : {4, 6}) {
    double len = 0.0;
    for (const auto& n : ball.boundary_quadrature(r)) len += n.weight;
    EXPECT_NEAR(len / (2.0 * kPi), 1.0, 1e-6);
  }
  double len = 0.0;
  for (const auto& n : unit_square().boundary_quadrature(3)) len += n.weight;
  EXPECT_NEAR(len, 4.0, 1e-13);

  for (const Domain& d : {ball, notched_square(), sqrt_disk()}) {
    Vec2 flux{0.0, 0.0};
    for (const auto& n : d.boundary_quadrature(5)) {
      flux += n.normal * n.weight;
      EXPECT_NEAR(norm(n.normal), 1.0, 1e-14);
    }
    EXPECT_LT(norm(flux), 1e-8) << d.describe();
    for (const auto& pc : d.pieces()) {
      for (double s : {0.1, 0.5, 0.9}) EXPECT_NEAR(dot(pc.normal(s), pc.tangent(s)), 0.0, 1e-12);
    }
  }
}

TEST(Domain, NormalsPointOutward) {
  for (const Domain& d : {Domain::ball({0.3, 0.2}, 0.5), notched_square(), sqrt_disk()}) {
    for (const auto& n : d.boundary_quadrature(3)) {
      EXPECT_FALSE(d.contains(n.x + n.normal * 1e-7));
      EXPECT_TRUE(d.contains(n.x - n.normal * 1e-7));
    }
  }
}

TEST(Domain, GraphDiskAreaMatchesSampling) {
  const Domain d = sqrt_disk();
  const double rd = 0.5;
  // Base disk plus the signed area between the graph and the lower arc.
  double extra = 0.0;
  const int n = 200000;
  const double r1 = 0.2;
  for (int i = 0; i < n; ++i) {
    const double x = -r1 + 2.0 * r1 * (i + 0.5) / n;
    extra += (rd - std::sqrt(rd * rd - x * x) - d.graph_shape()->A(x)) * 2.0 * r1 / n;
  }
  EXPECT_NEAR(d.area(), kPi * rd * rd + extra, 1e-9);
}

TEST(Domain, GraphDiskSaturatesCurvatureBound) {
  const Domain d = sqrt_disk(0.3);
  const GraphDiskShape& g = *d.graph_shape();
  EXPECT_EQ(g.A(0.0), 0.0);
  EXPECT_EQ(g.dA(0.0), 0.0);
  for (int k = 0; k < 1000; ++k) {
    const double lx = std::log(0x1p-30) + (std::log(0.1) - std::log(0x1p-30)) * k / 1000.0;
    const double x = std::exp(lx);
    for (double s : {-1.0, 1.0}) {
      EXPECT_LE(std::abs(g.A(s * x)), 0.3 * x * std::sqrt(x) * (1.0 + 1e-12));
    }
  }
  // Derivative against central differences on the blend region.
  for (double x : {0.05, 0.12, 0.15, 0.19, -0.13}) {
    const double h = 1e-6;
    EXPECT_NEAR(g.dA(x), (g.A(x + h) - g.A(x - h)) / (2 * h), 1e-7);
  }
}

TEST(Domain, BoxDistance) {
  const Domain sq = unit_square();
  EXPECT_NEAR(sq.distance_to_boundary(Box{{0.375, 0.375}, {0.625, 0.625}}), 0.375, 1e-15);
  EXPECT_EQ(sq.classify(Box{{0.375, 0.375}, {0.625, 0.625}}), BoxClass::kInside);
  EXPECT_EQ(sq.classify(Box{{0.9, 0.4}, {1.1, 0.6}}), BoxClass::kCut);
  EXPECT_EQ(sq.classify(Box{{1.5, 0.4}, {1.7, 0.6}}), BoxClass::kOutside);
  const Domain b = Domain::ball({0, 0}, 1);
  EXPECT_NEAR(b.distance_to_boundary(Box{{-0.1, -0.1}, {0.1, 0.1}}), 1.0 - std::sqrt(0.02), 1e-15);
  const Domain g = sqrt_disk();
  const Box box{{-0.01, 0.05}, {0.01, 0.07}};
  double oracle = 1e300;
  for (const auto& pc : g.pieces()) {
    for (int i = 0; i <= 200000; ++i) oracle = std::min(oracle, box.distance_to(pc.point(i / 200000.0)));
  }
  EXPECT_NEAR(g.distance_to_boundary(box), oracle, 1e-8);
}

TEST(Window, BallBottom) {
  const Domain b = Domain::ball({0, 0}, 1);
  const Window w = b.window_at({0.0, -1.0});
  EXPECT_NEAR(w.e2.x, 0.0, 1e-12);
  EXPECT_NEAR(w.e2.y, 1.0, 1e-12);
  for (std::size_t k = 0; k < w.u.size(); ++k) {
    EXPECT_NEAR(w.a[k], 1.0 - std::sqrt(1.0 - w.u[k] * w.u[k]), 1e-12);
  }
  EXPECT_TRUE(w.slope_ok);
}

TEST(Window, SquareEdgeIsFlat) {
  const Window w = unit_square().window_at({0.5, 0.0});
  for (double a : w.a) EXPECT_NEAR(a, 0.0, 1e-12);
  EXPECT_TRUE(w.slope_ok);
}

TEST(Window, SquareCornerUsesBisector) {
  const Window w = unit_square().window_at({1.0, 1.0});
  EXPECT_NEAR(w.max_slope, 1.0, 1e-9);
  EXPECT_TRUE(w.slope_ok);
}

TEST(Window, GraphDiskOrigin) {
  const Window w = sqrt_disk().window_at({0.0, 0.0});
  const std::size_t mid = w.u.size() / 2;
  EXPECT_NEAR(w.u[mid], 0.0, 1e-15);
  EXPECT_NEAR(w.a[mid], 0.0, 1e-12);
  EXPECT_NEAR((w.a[mid + 1] - w.a[mid - 1]) / (w.u[mid + 1] - w.u[mid - 1]), 0.0, 1e-12);
  EXPECT_TRUE(w.slope_ok);
}

TEST(Window, OffBoundaryAnchorRejected) {
  EXPECT_THROW(unit_square().window_at({0.5, 0.5}), DomainError);
}
