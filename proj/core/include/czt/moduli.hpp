#pragma once

#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "czt/point.hpp"

namespace czt {

enum class ModulusFamily { kConstant, kPower, kLogPower, kTabulated };

std::string to_string(ModulusFamily f);

/// A modulus of continuity on (0, 1].
///
/// Built-in families carry closed forms; a tabulated modulus is a monotone
/// table on a logarithmic grid evaluated by power-law (log-log linear)
/// interpolation. Every modulus stores an exponent eps and a constant C such
/// that w(s)/s^eps <= C w(t)/t^eps for t < s.
///
/// LogPower(a) is log^{-a}(1/t) for t <= 1/e. On [1/e, 1] it continues as
/// 1 + k log(e t) with k = 2a/(1-a), which keeps it continuous and
/// nondecreasing while preserving the value of the integral of w(t)/t over
/// [1/e, 1] that the raw function has.
class Modulus {
 public:
  static Modulus constant();
  static Modulus power(double alpha);
  static Modulus log_power(double alpha);
  /// Samples (t_i, w_i) with 0 < t_0 < ... < t_n and 0 < w_0 <= ... <= w_n.
  /// The table covers (0, t_n]; below t_0 it extends as the first power-law
  /// segment. The almost-decreasing constant is measured on the samples.
  static Modulus tabulated(std::vector<double> t, std::vector<double> w, double epsilon = 0.5);

  ModulusFamily family() const { return family_; }
  double alpha() const { return alpha_; }
  double epsilon() const { return epsilon_; }
  double almost_decreasing_constant() const { return c_eps_; }
  /// Largest admissible argument (1 for closed forms, last node for tables).
  double domain_max() const;
  bool is_tabulated() const { return family_ == ModulusFamily::kTabulated; }

  /// w(x); throws DomainError outside (0, domain_max()].
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }
  /// Logarithmic derivative x w'(x) / w(x) (one-sided at table nodes).
  double log_slope(double x) const;

  std::span<const double> sample_t() const;
  std::span<const double> sample_w() const;
  std::string describe() const;

  // Exact integral of w(t)/t over [x, domain_max()] for tables (piecewise
  // power-law antiderivative); used by dini_integral.
  double table_tail_integral(double x) const;

 private:
  struct Table;
  Modulus() = default;

  ModulusFamily family_ = ModulusFamily::kConstant;
  double alpha_ = 0.0;
  double epsilon_ = 0.5;
  double c_eps_ = 1.0;
  std::shared_ptr<const Table> table_;
};

/// Measured sup over sampled t < s of (w(s)/s^eps) / (w(t)/t^eps) on a
/// log grid of `points` nodes spanning [2^-40, domain_max].
double almost_decreasing_ratio(const Modulus& m, double eps, int points = 2048);

/// Returns human-readable violations of the modulus invariants (empty when
/// all hold): monotone on a 256-point log grid, vanishing at 0+ unless
/// constant, and the stored almost-decreasing pair.
std::vector<std::string> check_modulus(const Modulus& m);

/// Integral of w(t)/t over [x, 1] for 0 < x < 1. Closed forms for the
/// built-in families, exact piecewise integration for tables.
double dini_integral(const Modulus& m, double x);

/// Same integral by adaptive Gauss-Kronrod in log t (relative tolerance
/// 1e-10). Independent of the closed forms; throws QuadratureFailure.
double dini_integral_quadrature(const Modulus& m, double x, double rel_tol = 1e-10);

enum class DiniVerdict { kConvergent, kDivergent, kInconclusive };

struct DiniProbe {
  DiniVerdict verdict = DiniVerdict::kInconclusive;
  std::vector<double> lower_limits;
  std::vector<double> values;        // dini_integral at each lower limit
  std::vector<double> increment_ratios;
  bool is_dini() const { return verdict == DiniVerdict::kConvergent; }
};

/// Probes the Dini integral at lower limits 2^-5, 2^-10, ... down to
/// probe_floor and classifies the tail: geometric decay of the increments is
/// convergent, non-decaying or slowing increments are divergent.
DiniProbe is_dini(const Modulus& m, double probe_floor = 0x1p-40);

/// The smoothed modulus w(x) / int_x^1 w(t)/t dt, tabulated on `nodes`
/// log-spaced points of [2^-40, 1 - margin].
Modulus tilde(const Modulus& m, double margin = 0x1p-10, int nodes = 16384);

/// Radial extremal function: int_{|t|}^1 w(u)/u du inside the unit ball,
/// 0 outside. At t = 0 returns the (possibly infinite) limit.
double extremal_phi(const Modulus& m, Point t);

}  // namespace czt
