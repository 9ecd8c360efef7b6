#pragma once

#include <string>
#include <vector>

#include "czt/point.hpp"

namespace czt {

// Homogeneous kernel K(x) = Omega(x/|x|) / |x|^2 in the plane. Omega is held
// as a Fourier series in the angle with zero mean.
class Kernel {
 public:
  // Omega = -cos(2 theta)/pi and -sin(2 theta)/pi.
  static Kernel beurling_re();
  static Kernel beurling_im();
  // Omega = x_i x_j / |x|^2 - delta_ij / 2, i, j in {1, 2}.
  static Kernel riesz(int i, int j);
  // beurling_re | beurling_im | riesz11 | riesz12 | riesz22.
  static Kernel by_name(const std::string& name);
  // Omega sampled at theta_k = 2 pi k / N, N >= 256. The sample mean is
  // removed and reported by projection().
  static Kernel from_samples(const std::vector<double>& omega, std::string name);

  const std::string& name() const { return name_; }
  int dimension() const { return 2; }
  bool even() const { return even_; }
  bool tabulated() const { return tabulated_; }

  double omega(double theta) const;
  double omega(Vec2 dir) const;
  // K(x); throws DomainError at x = 0.
  double operator()(Vec2 x) const;
  // K(x) without the zero check.
  double eval(Vec2 x) const {
    if (second_harmonic_) {
      const double r2 = x.x * x.x + x.y * x.y;
      return (a2_ * (x.x * x.x - x.y * x.y) + b2_ * 2.0 * x.x * x.y) / (r2 * r2);
    }
    return eval_series(x);
  }

  // Primitive P of Omega (P' = Omega) with zero mean.
  double primitive(double theta) const;
  // int_0^{2 pi} Omega by a 4096-point periodic trapezoid rule.
  double spherical_mean() const;
  // |mean| removed from user samples (0 for built-ins).
  double projection() const { return projection_; }
  // Max |Omega_{k+1} - Omega_k| / (2 pi / N) over user samples (0 for built-ins).
  double lipschitz_bound() const { return lipschitz_; }
  // -int Omega(theta + pi) log max(|cos theta|, |sin theta|) d theta: the
  // principal value of int K(y - x) over a square centered at y.
  double square_correction() const { return square_correction_; }
  bool pure_second_harmonic() const { return second_harmonic_; }

  const std::vector<double>& cos_coefficients() const { return a_; }
  const std::vector<double>& sin_coefficients() const { return b_; }

 private:
  Kernel(std::string name, std::vector<double> a, std::vector<double> b);
  double eval_series(Vec2 x) const;

  std::string name_;
  std::vector<double> a_;  // a_[n] multiplies cos(n theta), a_[0] = 0
  std::vector<double> b_;
  bool even_ = true;
  bool tabulated_ = false;
  bool second_harmonic_ = false;
  double a2_ = 0.0;
  double b2_ = 0.0;
  double projection_ = 0.0;
  double lipschitz_ = 0.0;
  double square_correction_ = 0.0;
};

}  // namespace czt
