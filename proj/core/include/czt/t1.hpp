#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "czt/domain.hpp"
#include "czt/field.hpp"
#include "czt/kernel.hpp"
#include "czt/moduli.hpp"
#include "czt/seminorm.hpp"
#include "czt/singular.hpp"

namespace czt {

struct NodeFailure {
  Point node;
  std::string message;
};

// Samples of T chi_D on a grid_n x grid_n node grid over the square hull of
// bbox(D). Nodes farther than 1.5 h outside D are not evaluated. Nodes outside
// D or inside the collar rho < 2^-10 diam take the value at a point pushed to
// collar depth from their boundary projection, so bilinear interpolation
// stays meaningful up to the boundary.
class TchiGrid {
 public:
  TchiGrid(const Domain& d, const Kernel& k, int grid_n, double tol);

  // (T chi_D) chi_D: bilinear inside D, 0 outside.
  double value(Point p) const;
  // grad T chi_D(p) from the boundary formula for even kernels, 0 outside D.
  Vec2 gradient(Point p) const;
  ScalarField as_field() const;

  int grid_n() const { return n_; }
  double spacing() const { return h_; }
  double collar() const { return collar_; }
  double tol() const { return tol_; }
  Point node(int i, int j) const { return {lo_.x + i * h_, lo_.y + j * h_}; }
  double node_value(int i, int j) const { return values_[static_cast<std::size_t>(j) * n_ + i]; }
  std::size_t evaluated() const { return evaluated_; }
  const std::vector<NodeFailure>& failures() const { return failures_; }
  const Domain& domain() const { return d_; }
  const Kernel& kernel() const { return k_; }

 private:
  Domain d_;
  Kernel k_;
  int n_;
  double tol_;
  Point lo_;
  double h_;
  double collar_;
  std::vector<double> values_;
  std::size_t evaluated_ = 0;
  std::vector<NodeFailure> failures_;
};

// Throws ConfigError when grid_n < 64.
std::shared_ptr<const TchiGrid> tchi_field(const Domain& d, const Kernel& k, int grid_n, double tol = 1e-6);

struct BlochProfileRow {
  double delta = 0.0;
  Point y;
  double grad = 0.0;   // |grad T chi_D(y)|
  double ratio = 0.0;  // grad * delta / w(delta)
};

struct BlochProfile {
  std::vector<BlochProfileRow> rows;
  std::vector<double> skipped;  // deltas below the PV floor
  double max_ratio = 0.0;
  double min_ratio = 0.0;
  double spread = 0.0;  // max / min
  double slope = 0.0;   // least squares of log ratio against log delta
};

// y_delta = delta along the inward normal at the graph origin.
BlochProfile bloch_profile(const Domain& d, const Kernel& k, const Modulus& m, const std::vector<double>& deltas,
                           int refinement = 3);
// n values log-spaced on [lo, hi].
std::vector<double> log_spaced(double lo, double hi, int n);

double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y);

struct T1Options {
  int grid_n = 128;
  double tol = 1e-6;
  int p = 1;
  int cube_grid = 32;
  // Finest cube level; 0 picks the smallest level with 2^k >= 4 h for a
  // 128-node grid so that grid refinements see the same cubes.
  int finest_level = 0;
  int coarsest_level = -1;
  int random = 400;
  std::uint64_t seed = 1;
  double threshold = 100.0;
  double slope_floor = -0.1;
  bool tilde = true;  // seminorm under tilde(m) (false: under m)
  int bloch_points = 12;
  double bloch_lo = 1e-4;
  double bloch_hi = 1e-1;
};

struct LevelMax {
  int level = 0;
  double max_ratio = 0.0;
  std::size_t cubes = 0;
};

struct T1Verdict {
  double sup_ratio = 0.0;
  double threshold = 0.0;
  double noise_floor = 0.0;
  double trend_slope = 0.0;
  double slope_floor = 0.0;
  std::size_t trend_cubes = 0;
  bool bounded = false;
  bool no_trend = false;
  bool pass = false;
  std::vector<LevelMax> levels;
};

// Aggregates a seminorm report: per-level maxima, least-squares trend of
// log ratio against log side over the cubes of the two finest levels, and
// the verdict. Oscillations at or below noise_floor (the PV tolerance of the
// sampled field) count as zero. Pure function of its arguments.
T1Verdict t1_verdict(const OscillationReport& rep, double threshold, double slope_floor, double noise_floor);

struct T1Report {
  std::string domain;
  std::string kernel;
  std::string modulus;
  std::string seminorm_modulus;
  T1Options options;
  double grid_spacing = 0.0;
  double collar = 0.0;
  std::size_t grid_evaluations = 0;
  std::vector<NodeFailure> failures;
  OscillationReport seminorm;
  BlochProfile bloch;  // graph disks with even kernels only
  std::string bloch_note;
  T1Verdict verdict;
};

T1Report t1_check(const Domain& d, const Kernel& k, const Modulus& m, const T1Options& opt = {});
// Same, reusing a sampled field.
T1Report t1_check(const TchiGrid& field, const Modulus& m, const T1Options& opt = {});

struct NecessityRow {
  double ell = 0.0;
  double phi_mean = 0.0;     // (phi_tau chi_D)_Q
  double dini_lower = 0.0;   // int_ell^1 w(t)/t dt
  double mean_ratio = 0.0;   // phi_mean / dini_lower
  double tchi_osc = 0.0;     // (1/|Q|) int_Q |T chi_D - b_Q|, b_Q the median
  double tchi_ratio = 0.0;   // tchi_osc / tilde w(ell)
};

struct NecessityTable {
  Point tau;
  std::vector<NecessityRow> rows;
  double min_mean_ratio = 0.0;
  double max_mean_ratio = 0.0;
};

// Cubes centered at tau with the given sides; each must satisfy 2Q in D
// (ConfigError otherwise). T chi_D is sampled directly by pv_tchi on an
// n x n midpoint grid per cube.
NecessityTable necessity_demo(const Domain& d, const Kernel& k, const Modulus& m, Point tau,
                              const std::vector<double>& sides, int n = 16, double tol = 1e-7);

}  // namespace czt
