#include <gtest/gtest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <numbers>

#include "czt/errors.hpp"
#include "czt/moduli.hpp"

using namespace czt;

namespace {

// Independent oracle: tanh-sinh in s = log t, split at the log-power knot.
double dini_oracle(const Modulus& m, double x) {
  boost::math::quadrature::tanh_sinh<double> ts;
  auto f = [&](double s) { return m(std::min(1.0, std::exp(s))); };
  const double a = std::log(x);
  if (a < -1.0) return ts.integrate(f, a, -1.0) + ts.integrate(f, -1.0, 0.0);
  return ts.integrate(f, a, 0.0);
}

std::vector<Modulus> builtins() {
  return {Modulus::constant(),       Modulus::power(0.3),      Modulus::power(0.5),
          Modulus::power(0.9),       Modulus::log_power(0.0),  Modulus::log_power(0.5),
          Modulus::log_power(0.8)};
}

}  // namespace

TEST(Modulus, EvalExamples) {
  EXPECT_EQ(Modulus::constant()(0.5), 1.0);
  EXPECT_DOUBLE_EQ(Modulus::power(0.5)(0.25), 0.5);
  EXPECT_NEAR(Modulus::log_power(0.5)(std::exp(-4.0)), 0.5, 1e-15);
}

TEST(Modulus, LogPowerMatchesTabulatedVariant) {
  const Modulus m = Modulus::log_power(0.5);
  std::vector<double> t;
  std::vector<double> w;
  const int n = 4096;
  for (int i = 0; i < n; ++i) {
    t.push_back(std::exp(std::log(0x1p-40) * (1.0 - static_cast<double>(i) / (n - 1))));
    w.push_back(m(t.back()));
  }
  const Modulus tab = Modulus::tabulated(t, w, 0.5);
  EXPECT_NEAR(tab(std::exp(-4.0)), 0.5, 1e-6);
  for (double x : {1e-9, 1e-5, 0.01, 0.2, 0.7}) EXPECT_NEAR(tab(x) / m(x), 1.0, 1e-5) << x;
}

TEST(Modulus, DomainErrors) {
  const Modulus m = Modulus::power(0.5);
  EXPECT_THROW(m(0.0), DomainError);
  EXPECT_THROW(m(-1.0), DomainError);
  EXPECT_THROW(m(1.5), DomainError);
  EXPECT_NO_THROW(m(1.0));
  EXPECT_THROW(Modulus::power(1.0), DomainError);
  EXPECT_THROW(Modulus::log_power(1.0), DomainError);
  EXPECT_THROW(Modulus::tabulated({0.1, 0.05}, {1.0, 2.0}), DomainError);
  EXPECT_THROW(Modulus::tabulated({0.1, 0.2}, {2.0, 1.0}), DomainError);
}

TEST(Modulus, InvariantsHoldForBuiltins) {
  for (const Modulus& m : builtins()) {
    const auto v = check_modulus(m);
    EXPECT_TRUE(v.empty()) << m.describe() << ": " << (v.empty() ? "" : v.front());
    EXPECT_GE(m.almost_decreasing_constant(), 1.0);
  }
  EXPECT_EQ(Modulus::power(0.4).almost_decreasing_constant(), 1.0);
  EXPECT_DOUBLE_EQ(Modulus::power(0.4).epsilon(), 0.7);
}

TEST(Modulus, PowerAlmostDecreasingForAnyEpsAboveAlpha) {
  const Modulus m = Modulus::power(0.4);
  for (double eps : {0.41, 0.6, 0.99}) EXPECT_LE(almost_decreasing_ratio(m, eps), 1.0 + 1e-12);
}

TEST(Modulus, LogPowerIsContinuousAndMonotoneAcrossKnot) {
  for (double a : {0.0, 0.3, 0.5, 0.9}) {
    const Modulus m = Modulus::log_power(a);
    const double knot = std::exp(-1.0);
    EXPECT_NEAR(m(knot * (1 - 1e-12)), m(knot * (1 + 1e-12)), 1e-10);
    double prev = 0.0;
    for (int i = 1; i <= 1000; ++i) {
      const double v = m(i / 1000.0);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Dini, ClosedFormsMatchIndependentQuadrature) {
  for (const Modulus& m : builtins()) {
    for (double x : {0x1p-30, 1e-6, 0.01, 0.2, 0.3, 0.5, 0.9}) {
      const double closed = dini_integral(m, x);
      EXPECT_NEAR(closed, dini_oracle(m, x), 1e-10 * std::max(1.0, closed)) << m.describe() << " " << x;
      EXPECT_NEAR(closed, dini_integral_quadrature(m, x), 1e-10 * std::max(1.0, closed));
    }
  }
}

TEST(Dini, Examples) {
  EXPECT_NEAR(dini_integral(Modulus::constant(), 0.125), std::log(8.0), 1e-15);
  EXPECT_NEAR(dini_integral(Modulus::power(0.5), 0.25), 1.0, 1e-15);
  const double x = 1e-8;
  const double l = std::log(1.0 / x);
  EXPECT_NEAR(dini_integral(Modulus::log_power(0.5), x), std::sqrt(l) / 0.5, 1e-12);
}

TEST(Dini, TabulatedMatchesQuadrature) {
  std::vector<double> t;
  std::vector<double> w;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(std::pow(2.0, -20.0 + 0.2 * i));
    w.push_back(std::sqrt(t.back()) * (1.0 + 0.1 * std::sin(i)));
  }
  for (std::size_t i = 1; i < w.size(); ++i) w[i] = std::max(w[i], w[i - 1]);
  const Modulus m = Modulus::tabulated(t, w, 0.75);
  for (double x : {1e-7, 1e-3, 0.3}) {
    EXPECT_NEAR(dini_integral(m, x), dini_integral_quadrature(m, x, 1e-12), 1e-9);
  }
}

TEST(Dini, MonotoneInLowerLimit) {
  for (const Modulus& m : builtins()) {
    double prev = 0.0;
    for (int k = 1; k <= 200; ++k) {
      const double x = 1.0 - std::pow(2.0, -10.0) - (1.0 - std::pow(2.0, -10.0)) * k / 201.0;
      const double v = dini_integral(m, x);
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(Dini, Probe) {
  EXPECT_EQ(is_dini(Modulus::power(0.5)).verdict, DiniVerdict::kConvergent);
  EXPECT_EQ(is_dini(Modulus::power(0.1)).verdict, DiniVerdict::kConvergent);
  EXPECT_EQ(is_dini(Modulus::constant()).verdict, DiniVerdict::kDivergent);
  EXPECT_EQ(is_dini(Modulus::log_power(0.5)).verdict, DiniVerdict::kDivergent);
  const DiniProbe p = is_dini(Modulus::constant());
  EXPECT_EQ(p.lower_limits.size(), p.values.size());
  EXPECT_FALSE(p.values.empty());
}

TEST(Tilde, ClosedForms) {
  const Modulus c = tilde(Modulus::constant());
  for (int k = 2; k <= 30; ++k) {
    const double x = std::ldexp(1.0, -k);
    EXPECT_NEAR(c(x) * std::log(1.0 / x), 1.0, 1e-6) << x;
  }
  for (double a : {0.25, 0.5, 0.75}) {
    const Modulus p = tilde(Modulus::power(a));
    for (int k = 2; k <= 30; ++k) {
      const double x = std::ldexp(1.0, -k);
      const double exact = a * std::pow(x, a) / (1.0 - std::pow(x, a));
      EXPECT_NEAR(p(x) / exact, 1.0, 1e-6) << a << " " << x;
    }
  }
  for (double a : {0.0, 0.5}) {
    const Modulus l = tilde(Modulus::log_power(a));
    for (int k = 2; k <= 30; ++k) {
      const double x = std::ldexp(1.0, -k);
      EXPECT_NEAR(l(x) * std::log(1.0 / x) / (1.0 - a), 1.0, 1e-6) << a << " " << x;
    }
  }
}

TEST(Tilde, SatisfiesModulusInvariants) {
  for (const Modulus& m : builtins()) {
    const Modulus t = tilde(m);
    EXPECT_TRUE(t.is_tabulated());
    EXPECT_TRUE(check_modulus(t).empty()) << m.describe();
  }
}

TEST(Tilde, PowerRatioTendsToAlpha) {
  const Modulus t = tilde(Modulus::power(0.5));
  EXPECT_NEAR(t(0x1p-30) / std::pow(0x1p-30, 0.5), 0.5, 1e-4);
  EXPECT_GT(t(0x1p-10) / std::pow(0x1p-10, 0.5), t(0x1p-30) / std::pow(0x1p-30, 0.5));
}

TEST(Tilde, LogPowerFamilyCollapse) {
  const Modulus a = tilde(Modulus::log_power(0.0));
  const Modulus b = tilde(Modulus::log_power(0.5));
  // The analytic ratio is exactly 1 / (1 - 0.5) = 2 on this range.
  for (int k = 2; k <= 30; ++k) {
    const double x = std::ldexp(1.0, -k);
    const double r = a(x) / b(x);
    EXPECT_GE(r, 0.5);
    EXPECT_LE(r, 2.0 * (1.0 + 1e-6));
  }
}

TEST(Tilde, RejectsBadArguments) {
  EXPECT_THROW(tilde(Modulus::constant(), 0.0), DomainError);
  EXPECT_THROW(tilde(Modulus::constant(), 0x1p-10, 100), DomainError);
}

TEST(Phi, Examples) {
  const Modulus c = Modulus::constant();
  EXPECT_NEAR(extremal_phi(c, {0.5, 0.0}), std::log(2.0), 1e-15);
  EXPECT_NEAR(extremal_phi(c, {0.3, 0.4}), std::log(2.0), 1e-15);
  EXPECT_EQ(extremal_phi(Modulus::power(0.5), {1.5, 0.0}), 0.0);
  EXPECT_EQ(extremal_phi(c, {0.0, 1.0}), 0.0);
  EXPECT_NEAR(extremal_phi(Modulus::power(0.5), {0.0, 0.25}), 1.0, 1e-15);
  EXPECT_EQ(extremal_phi(Modulus::power(0.5), {0.0, 0.0}), 2.0);
  EXPECT_TRUE(std::isinf(extremal_phi(c, {0.0, 0.0})));
}

TEST(Phi, ContinuousAtUnitSphere) {
  const double r = 1.0 - std::ldexp(1.0, -20);
  for (const Modulus& m : builtins()) {
    EXPECT_LE(std::abs(extremal_phi(m, {r, 0.0})), dini_integral(m, r) * (1.0 + 1e-12));
    EXPECT_LE(extremal_phi(m, {r, 0.0}), 2e-6 * m(1.0));
  }
}
