#include "czt/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "czt/errors.hpp"
#include "czt/quadrature.hpp"

namespace czt {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

Kernel::Kernel(std::string name, std::vector<double> a, std::vector<double> b)
    : name_(std::move(name)), a_(std::move(a)), b_(std::move(b)) {
  const std::size_t n = std::max(a_.size(), b_.size());
  a_.resize(n, 0.0);
  b_.resize(n, 0.0);
  if (n > 0) {
    a_[0] = 0.0;
    b_[0] = 0.0;
  }
  double big = 0.0;
  for (std::size_t k = 0; k < n; ++k) big = std::max({big, std::abs(a_[k]), std::abs(b_[k])});
  if (!(big > 0.0) || !std::isfinite(big)) throw ConfigError("kernel " + name_ + " has no nonzero harmonic");
  // Drop negligible harmonics so evaluation stays cheap.
  while (a_.size() > 1 && std::abs(a_.back()) <= 1e-15 * big && std::abs(b_.back()) <= 1e-15 * big) {
    a_.pop_back();
    b_.pop_back();
  }
  even_ = true;
  second_harmonic_ = a_.size() == 3;
  for (std::size_t k = 1; k < a_.size(); ++k) {
    if (k % 2 == 1 && (std::abs(a_[k]) > 1e-12 * big || std::abs(b_[k]) > 1e-12 * big)) even_ = false;
    if (k != 2 && (a_[k] != 0.0 || b_[k] != 0.0)) second_harmonic_ = false;
  }
  if (second_harmonic_) {
    a2_ = a_[2];
    b2_ = b_[2];
  }
  if (std::abs(spherical_mean()) > 1e-10) throw ConfigError("kernel " + name_ + " does not have zero spherical mean");

  // Principal value over a square: integrate octant by octant, where the
  // log factor is smooth.
  double corr = 0.0;
  const GaussRule& g = gauss_legendre(48);
  for (int o = 0; o < 8; ++o) {
    const double lo = -kPi / 4 + o * kPi / 4;
    const double h = kPi / 8;
    for (std::size_t i = 0; i < g.nodes.size(); ++i) {
      const double th = lo + h * (g.nodes[i] + 1.0);
      const double m = std::max(std::abs(std::cos(th)), std::abs(std::sin(th)));
      corr -= h * g.weights[i] * omega(th + kPi) * std::log(m);
    }
  }
  square_correction_ = second_harmonic_ ? 0.0 : corr;
}

Kernel Kernel::beurling_re() { return Kernel("beurling_re", {0.0, 0.0, -1.0 / kPi}, {0.0, 0.0, 0.0}); }

Kernel Kernel::beurling_im() { return Kernel("beurling_im", {0.0, 0.0, 0.0}, {0.0, 0.0, -1.0 / kPi}); }

Kernel Kernel::riesz(int i, int j) {
  if (i > j) std::swap(i, j);
  if (i == 1 && j == 1) return Kernel("riesz11", {0.0, 0.0, 0.5}, {0.0, 0.0, 0.0});
  if (i == 2 && j == 2) return Kernel("riesz22", {0.0, 0.0, -0.5}, {0.0, 0.0, 0.0});
  if (i == 1 && j == 2) return Kernel("riesz12", {0.0, 0.0, 0.0}, {0.0, 0.0, 0.5});
  throw ConfigError("riesz indices must be in {1, 2}");
}

Kernel Kernel::by_name(const std::string& name) {
  if (name == "beurling_re") return beurling_re();
  if (name == "beurling_im") return beurling_im();
  if (name == "riesz11") return riesz(1, 1);
  if (name == "riesz12") return riesz(1, 2);
  if (name == "riesz22") return riesz(2, 2);
  throw ConfigError("unknown kernel '" + name + "'");
}

Kernel Kernel::from_samples(const std::vector<double>& omega, std::string name) {
  const std::size_t n = omega.size();
  if (n < 256) throw ConfigError("tabulated kernel needs at least 256 samples");
  for (double v : omega) {
    if (!std::isfinite(v)) throw ConfigError("tabulated kernel has a non-finite sample");
  }
  double mean = 0.0;
  for (double v : omega) mean += v;
  mean /= static_cast<double>(n);
  const std::size_t harmonics = (n - 1) / 2;
  std::vector<double> a(harmonics + 1, 0.0);
  std::vector<double> b(harmonics + 1, 0.0);
  for (std::size_t h = 1; h <= harmonics; ++h) {
    double sa = 0.0;
    double sb = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double th = 2.0 * kPi * static_cast<double>(h * k % n) / static_cast<double>(n);
      sa += omega[k] * std::cos(th);
      sb += omega[k] * std::sin(th);
    }
    a[h] = 2.0 * sa / static_cast<double>(n);
    b[h] = 2.0 * sb / static_cast<double>(n);
  }
  double scale = 0.0;
  for (double v : omega) scale = std::max(scale, std::abs(v));
  for (std::size_t h = 1; h <= harmonics; ++h) {
    if (std::abs(a[h]) <= 1e-13 * scale) a[h] = 0.0;
    if (std::abs(b[h]) <= 1e-13 * scale) b[h] = 0.0;
  }
  Kernel k(std::move(name), std::move(a), std::move(b));
  k.tabulated_ = true;
  k.projection_ = std::abs(mean);
  double lip = 0.0;
  for (std::size_t i = 0; i < n; ++i) lip = std::max(lip, std::abs(omega[(i + 1) % n] - omega[i]));
  k.lipschitz_ = lip / (2.0 * kPi / static_cast<double>(n));
  return k;
}

double Kernel::omega(double theta) const {
  // cos(n theta), sin(n theta) by rotation.
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double c = 1.0;
  double s = 0.0;
  double sum = 0.0;
  for (std::size_t n = 1; n < a_.size(); ++n) {
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
    sum += a_[n] * c + b_[n] * s;
  }
  return sum;
}

double Kernel::omega(Vec2 dir) const { return omega(std::atan2(dir.y, dir.x)); }

double Kernel::operator()(Vec2 x) const {
  if (x.x == 0.0 && x.y == 0.0) throw DomainError("kernel " + name_ + " is singular at 0");
  return eval(x);
}

double Kernel::eval_series(Vec2 x) const { return omega(std::atan2(x.y, x.x)) / norm2(x); }

double Kernel::primitive(double theta) const {
  const double c1 = std::cos(theta);
  const double s1 = std::sin(theta);
  double c = 1.0;
  double s = 0.0;
  double sum = 0.0;
  for (std::size_t n = 1; n < a_.size(); ++n) {
    const double cn = c * c1 - s * s1;
    s = s * c1 + c * s1;
    c = cn;
    sum += (a_[n] * s - b_[n] * c) / static_cast<double>(n);
  }
  return sum;
}

double Kernel::spherical_mean() const {
  const int n = 4096;
  double s = 0.0;
  for (int k = 0; k < n; ++k) s += omega(2.0 * kPi * k / n);
  return s * 2.0 * kPi / n;
}

}  // namespace czt
