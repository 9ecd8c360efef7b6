#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "czt/domain.hpp"
#include "czt/field.hpp"
#include "czt/kernel.hpp"

namespace czt {

inline constexpr std::size_t kDefaultCellBudget = 1'000'000;
inline constexpr double kDefaultPvTol = 1e-8;
// pv_tchi needs rho(y) >= this.
inline constexpr double kPvFloor = 0x1p-20;

struct PvResult {
  double value = 0.0;
  double error = 0.0;  // summed cell error estimates
  std::size_t cells = 0;
};

// Integral of g over D minus the square [y - r, y + r]^2 (nothing removed
// when r <= 0), by a quadtree rooted at a square centered at y. Inside
// cells use tensor Gauss rules, cut cells integrate along lines through the
// cell between exact boundary crossings. Cells are refined by largest error
// until the sum of error estimates is below tol. Throws QuadratureFailure
// when more than `budget` cells are needed.
PvResult integrate_domain(const Domain& d, const std::function<double(Point)>& g, Point y, double r, double tol,
                          std::size_t budget = kDefaultCellBudget);

// PV int_D K(y - x) dx for y in D. The PV over the square of half-width
// r = radius_fraction * rho(y) centered at y reduces to the closed angular
// term Kernel::square_correction(); the rest is a proper integral.
PvResult pv_tchi(const Domain& d, const Kernel& k, Point y, double tol = kDefaultPvTol,
                 double radius_fraction = 0.5, std::size_t budget = kDefaultCellBudget);

// int_D K(y - x) dx for y outside the closure of D.
PvResult pv_tchi_exterior(const Domain& d, const Kernel& k, Point y, double tol = kDefaultPvTol,
                          std::size_t budget = kDefaultCellBudget);

// Independent evaluation through the boundary: with P' = Omega(. + pi),
// T chi_D(y) = int_{boundary} P(theta) / |x - y| (e_theta . nu) dS.
double pv_tchi_flux(const Domain& d, const Kernel& k, Point y, double tol = 1e-10);

// grad T chi_D(y) = -int_{boundary} K(y - x) nu dS for even kernels. The
// boundary pieces start from 2^refinement panels, split geometrically
// toward the point nearest y, then adaptively to relative 1e-10.
Vec2 grad_tchi_boundary(const Domain& d, const Kernel& k, Point y, int refinement = 3);

struct CancellationReport {
  std::vector<Point> probes;
  std::vector<double> values;
  double max_abs = 0.0;
};

// Probes with rho >= radius / 10 drawn from a fixed seed.
std::vector<Point> ball_probes(const Domain& ball, int count, std::uint64_t seed = 1);
CancellationReport cancellation_report(const Domain& ball, const Kernel& k, const std::vector<Point>& probes,
                                       double tol = kDefaultPvTol);

// PV int_D f(x) K(y - x) dx = f(y) T chi_D(y) + int_D (f(x) - f(y)) K(y - x) dx.
// The second integral is proper when f is Dini continuous at y; failure to
// converge near y raises RoughnessError.
PvResult restricted_apply(const Domain& d, const Kernel& k, const ScalarField& f, Point y,
                          double tol = kDefaultPvTol, std::size_t budget = kDefaultCellBudget);

}  // namespace czt
