#include "czt/moduli.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/quadrature.hpp"

namespace czt {

namespace {

constexpr double kLogKnot = 1.0;  // log(1/t0) with t0 = 1/e

// (expm1(z) / z) with the removable singularity handled.
double expm1_over(double z) { return std::abs(z) < 1e-12 ? 1.0 + 0.5 * z : std::expm1(z) / z; }

}  // namespace

struct Modulus::Table {
  std::vector<double> t;
  std::vector<double> w;
  std::vector<double> log_t;
  std::vector<double> slope;  // power-law exponent of segment i
  std::vector<double> tail;   // int_{t_i}^{t_n} w(t)/t dt
  bool uniform = false;
  double dlog = 0.0;

  std::size_t segment(double log_x) const {
    const std::size_t n = t.size();
    if (n < 2) return 0;
    std::size_t i;
    if (uniform) {
      const double k = std::floor((log_x - log_t.front()) / dlog);
      i = static_cast<std::size_t>(std::clamp(k, 0.0, static_cast<double>(n - 2)));
      while (i > 0 && log_x < log_t[i]) --i;
      while (i + 2 < n && log_x >= log_t[i + 1]) ++i;
    } else {
      auto it = std::upper_bound(log_t.begin(), log_t.end(), log_x);
      i = static_cast<std::size_t>(std::max<std::ptrdiff_t>(it - log_t.begin() - 1, 0));
      i = std::min(i, n - 2);
    }
    return i;
  }

  double eval(double x) const {
    if (t.size() == 1) return w[0];
    const double lx = std::log(x);
    const std::size_t i = segment(lx);
    return w[i] * std::exp(slope[i] * (lx - log_t[i]));
  }

  // int_a^b w(t)/t dt on segment i (a, b inside the segment's extent).
  double segment_integral(std::size_t i, double log_a, double log_b) const {
    const double p = slope.empty() ? 0.0 : slope[i];
    const double wa = w[i] * std::exp(p * (log_a - log_t[i]));
    const double len = log_b - log_a;
    return wa * len * expm1_over(p * len);
  }

  double tail_from(double x) const {
    const double lx = std::log(x);
    if (t.size() == 1) return w[0] * (log_t[0] - lx);
    if (lx >= log_t.back()) return 0.0;
    if (lx < log_t.front()) {
      return segment_integral(0, lx, log_t.front()) + tail.front();
    }
    const std::size_t i = segment(lx);
    return segment_integral(i, lx, log_t[i + 1]) + tail[i + 1];
  }
};

std::string to_string(ModulusFamily f) {
  switch (f) {
    case ModulusFamily::kConstant:
      return "constant";
    case ModulusFamily::kPower:
      return "power";
    case ModulusFamily::kLogPower:
      return "log_power";
    case ModulusFamily::kTabulated:
      return "tabulated";
  }
  return "unknown";
}

Modulus Modulus::constant() {
  Modulus m;
  m.family_ = ModulusFamily::kConstant;
  m.epsilon_ = 0.5;
  m.c_eps_ = 1.0;
  return m;
}

Modulus Modulus::power(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw DomainError("power modulus needs alpha in (0, 1)");
  Modulus m;
  m.family_ = ModulusFamily::kPower;
  m.alpha_ = alpha;
  m.epsilon_ = 0.5 * (1.0 + alpha);
  m.c_eps_ = 1.0;
  return m;
}

Modulus Modulus::log_power(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("log-power modulus needs alpha in [0, 1)");
  Modulus m;
  m.family_ = ModulusFamily::kLogPower;
  m.alpha_ = alpha;
  m.epsilon_ = 0.5;
  m.c_eps_ = 1.0;
  // Empirical constant on the grid, padded by a rounding margin.
  m.c_eps_ = std::max(1.0, almost_decreasing_ratio(m, m.epsilon_)) * (1.0 + 1e-9);
  return m;
}

Modulus Modulus::tabulated(std::vector<double> t, std::vector<double> w, double epsilon) {
  if (t.empty() || t.size() != w.size()) {
    throw DomainError("tabulated modulus needs matching, non-empty sample vectors");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw DomainError("epsilon must lie in (0, 1)");
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!(t[i] > 0.0 && t[i] <= 1.0)) throw DomainError("tabulated abscissae must lie in (0, 1]");
    if (!(w[i] > 0.0) || !std::isfinite(w[i])) {
      throw DomainError("tabulated values must be positive and finite");
    }
    if (i > 0 && !(t[i] > t[i - 1])) throw DomainError("tabulated abscissae must increase");
    if (i > 0 && w[i] < w[i - 1]) throw DomainError("tabulated values must be nondecreasing");
  }
  auto table = std::make_shared<Table>();
  table->t = std::move(t);
  table->w = std::move(w);
  const std::size_t n = table->t.size();
  table->log_t.resize(n);
  for (std::size_t i = 0; i < n; ++i) table->log_t[i] = std::log(table->t[i]);
  table->slope.assign(n > 1 ? n - 1 : 0, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    table->slope[i] = (std::log(table->w[i + 1]) - std::log(table->w[i])) /
                      (table->log_t[i + 1] - table->log_t[i]);
  }
  if (n > 2) {
    const double d = (table->log_t.back() - table->log_t.front()) / static_cast<double>(n - 1);
    bool uniform = true;
    for (std::size_t i = 1; i < n && uniform; ++i) {
      uniform = std::abs(table->log_t[i] - table->log_t[i - 1] - d) <= 1e-9 * std::abs(d);
    }
    table->uniform = uniform;
    table->dlog = d;
  }
  table->tail.assign(n, 0.0);
  for (std::size_t i = n - 1; i-- > 0;) {
    table->tail[i] = table->tail[i + 1] + table->segment_integral(i, table->log_t[i], table->log_t[i + 1]);
  }

  Modulus m;
  m.family_ = ModulusFamily::kTabulated;
  m.epsilon_ = epsilon;
  m.table_ = std::move(table);
  m.c_eps_ = std::max(1.0, almost_decreasing_ratio(m, epsilon)) * (1.0 + 1e-9);
  return m;
}

double Modulus::domain_max() const { return table_ ? table_->t.back() : 1.0; }

double Modulus::operator()(double x) const {
  if (!(x > 0.0) || x > domain_max()) {
    std::ostringstream os;
    os << "modulus argument " << x << " outside (0, " << domain_max() << "]";
    throw DomainError(os.str());
  }
  switch (family_) {
    case ModulusFamily::kConstant:
      return 1.0;
    case ModulusFamily::kPower:
      return std::pow(x, alpha_);
    case ModulusFamily::kLogPower: {
      const double log_inv = -std::log(x);
      if (log_inv >= kLogKnot) return std::pow(log_inv, -alpha_);
      const double k = 2.0 * alpha_ / (1.0 - alpha_);
      return 1.0 + k * (kLogKnot - log_inv);
    }
    case ModulusFamily::kTabulated:
      return table_->eval(x);
  }
  return 0.0;
}

double Modulus::log_slope(double x) const {
  (void)(*this)(x);  // domain check
  switch (family_) {
    case ModulusFamily::kConstant:
      return 0.0;
    case ModulusFamily::kPower:
      return alpha_;
    case ModulusFamily::kLogPower: {
      const double log_inv = -std::log(x);
      if (log_inv >= kLogKnot) return alpha_ / log_inv;
      const double k = 2.0 * alpha_ / (1.0 - alpha_);
      return k / (*this)(x);
    }
    case ModulusFamily::kTabulated: {
      if (table_->slope.empty()) return 0.0;
      return table_->slope[table_->segment(std::log(x))];
    }
  }
  return 0.0;
}

std::span<const double> Modulus::sample_t() const {
  return table_ ? std::span<const double>(table_->t) : std::span<const double>();
}

std::span<const double> Modulus::sample_w() const {
  return table_ ? std::span<const double>(table_->w) : std::span<const double>();
}

std::string Modulus::describe() const {
  std::ostringstream os;
  os << to_string(family_);
  if (family_ == ModulusFamily::kPower || family_ == ModulusFamily::kLogPower) {
    os << "(alpha=" << alpha_ << ")";
  } else if (family_ == ModulusFamily::kTabulated) {
    os << "(" << table_->t.size() << " nodes)";
  }
  return os.str();
}

double Modulus::table_tail_integral(double x) const {
  if (!table_) throw DomainError("table_tail_integral on a closed-form modulus");
  return table_->tail_from(x);
}

double almost_decreasing_ratio(const Modulus& m, double eps, int points) {
  const double lo = std::log(0x1p-40);
  const double hi = std::log(m.domain_max());
  double min_g = std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (int i = 0; i < points; ++i) {
    const double lx = lo + (hi - lo) * i / (points - 1);
    const double x = std::min(std::exp(lx), m.domain_max());
    const double g = m(x) / std::pow(x, eps);
    if (i > 0) worst = std::max(worst, g / min_g);
    min_g = std::min(min_g, g);
  }
  return worst;
}

std::vector<std::string> check_modulus(const Modulus& m) {
  std::vector<std::string> out;
  const int n = 256;
  const double lo = std::log(0x1p-40);
  const double hi = std::log(m.domain_max());
  double prev = -1.0;
  for (int i = 0; i < n; ++i) {
    const double x = std::min(std::exp(lo + (hi - lo) * i / (n - 1)), m.domain_max());
    const double v = m(x);
    if (v < prev * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "not nondecreasing near x=" << x;
      out.push_back(os.str());
    }
    prev = v;
  }
  if (m.family() == ModulusFamily::kLogPower && m.alpha() > 0.0) {
    // log^-a decays too slowly for a fixed-factor test at 2^-40; require
    // strict decay along 2^-10, 2^-20, 2^-40 instead.
    if (!(m(0x1p-40) < m(0x1p-20) && m(0x1p-20) < m(0x1p-10))) {
      out.emplace_back("does not vanish at 0+");
    }
  } else if (m.family() != ModulusFamily::kConstant && m.family() != ModulusFamily::kLogPower) {
    const double half = std::min(0.5, m.domain_max());
    if (!(m(0x1p-40) < m(half) / 10.0)) out.emplace_back("does not vanish at 0+");
  }
  const double ratio = almost_decreasing_ratio(m, m.epsilon());
  if (ratio > m.almost_decreasing_constant()) {
    std::ostringstream os;
    os << "almost-decreasing constant " << m.almost_decreasing_constant()
       << " below measured ratio " << ratio;
    out.push_back(os.str());
  }
  return out;
}

double dini_integral(const Modulus& m, double x) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("dini_integral needs 0 < x < 1");
  switch (m.family()) {
    case ModulusFamily::kConstant:
      return -std::log(x);
    case ModulusFamily::kPower: {
      const double a = m.alpha();
      // (1 - x^a) / a without cancellation for x near 1.
      return -std::expm1(a * std::log(x)) / a;
    }
    case ModulusFamily::kLogPower: {
      const double a = m.alpha();
      const double log_inv = -std::log(x);
      if (log_inv >= kLogKnot) return std::pow(log_inv, 1.0 - a) / (1.0 - a);
      const double k = 2.0 * a / (1.0 - a);
      const double u = kLogKnot - log_inv;  // log(e x) in [0, 1)
      return (1.0 - u) + 0.5 * k * (1.0 - u * u);
    }
    case ModulusFamily::kTabulated:
      if (m.domain_max() < 1.0) {
        throw DomainError("dini_integral needs the tabulated modulus on [x, 1]");
      }
      return m.table_tail_integral(x);
  }
  return 0.0;
}

double dini_integral_quadrature(const Modulus& m, double x, double rel_tol) {
  if (!(x > 0.0 && x < 1.0)) throw DomainError("dini_integral needs 0 < x < 1");
  if (m.domain_max() < 1.0) throw DomainError("dini_integral needs the modulus on [x, 1]");
  auto integrand = [&m](double s) { return m(std::min(1.0, std::exp(s))); };
  const double a = std::log(x);
  // Split at the log-power knot so the kink sits on an interval boundary.
  if (m.family() == ModulusFamily::kLogPower && a < -kLogKnot) {
    return integrate_adaptive(integrand, a, -kLogKnot, rel_tol, 0.0, 20000).value +
           integrate_adaptive(integrand, -kLogKnot, 0.0, rel_tol, 0.0, 20000).value;
  }
  if (m.is_tabulated()) {
    // Integrate node-to-node so every kink is an interval boundary.
    const auto t = m.sample_t();
    double sum = 0.0;
    double left = a;
    for (double node : t) {
      const double ln = std::log(node);
      if (ln <= left) continue;
      sum += integrate_adaptive(integrand, left, ln, rel_tol, 0.0, 2000).value;
      left = ln;
    }
    if (left < 0.0) sum += integrate_adaptive(integrand, left, 0.0, rel_tol, 0.0, 2000).value;
    return sum;
  }
  return integrate_adaptive(integrand, a, 0.0, rel_tol, 0.0, 20000).value;
}

DiniProbe is_dini(const Modulus& m, double probe_floor) {
  DiniProbe probe;
  for (int k = 1;; ++k) {
    const double x = std::ldexp(1.0, -5 * k);
    if (x < probe_floor * (1.0 - 1e-12)) break;
    probe.lower_limits.push_back(x);
    probe.values.push_back(dini_integral(m, x));
  }
  const std::size_t n = probe.values.size();
  if (n < 4) return probe;
  std::vector<double> inc;
  for (std::size_t i = 1; i < n; ++i) inc.push_back(probe.values[i] - probe.values[i - 1]);
  for (std::size_t i = 1; i < inc.size(); ++i) {
    probe.increment_ratios.push_back(inc[i - 1] > 0.0 ? inc[i] / inc[i - 1] : 0.0);
  }
  const auto& r = probe.increment_ratios;
  const double rmax = *std::max_element(r.begin(), r.end());
  const double rmin = *std::min_element(r.begin(), r.end());
  if (rmax >= 1.0 - 1e-9) {
    probe.verdict = DiniVerdict::kDivergent;
  } else if (rmax <= 0.97 && rmax - rmin <= 0.02) {
    probe.verdict = DiniVerdict::kConvergent;
  } else if (r.back() > r.front() + 0.02) {
    // Increments decay ever more slowly: sub-geometric, unbounded growth.
    probe.verdict = DiniVerdict::kDivergent;
  } else {
    probe.verdict = DiniVerdict::kInconclusive;
  }
  return probe;
}

Modulus tilde(const Modulus& m, double margin, int nodes) {
  if (!(margin > 0.0 && margin < 1.0)) throw DomainError("tilde margin must lie in (0, 1)");
  if (nodes < 512) throw DomainError("tilde needs at least 512 nodes");
  const double lo = std::log(0x1p-40);
  const double hi = std::log(1.0 - margin);
  std::vector<double> t(nodes);
  std::vector<double> w(nodes);
  for (int i = 0; i < nodes; ++i) {
    const double x = i + 1 == nodes ? 1.0 - margin : std::exp(lo + (hi - lo) * i / (nodes - 1));
    const double den = dini_integral(m, x);
    if (!(den > 1e-300)) throw OverflowError("tilde denominator underflow");
    t[i] = x;
    w[i] = m(x) / den;
    if (i > 0 && w[i] < w[i - 1] * (1.0 - 1e-12)) {
      std::ostringstream os;
      os << "tilde of " << m.describe() << " is not monotone near x=" << x;
      throw Error(ExitCode::kInternal, os.str());
    }
    if (i > 0) w[i] = std::max(w[i], w[i - 1]);  // rounding only; checked above
  }
  return Modulus::tabulated(std::move(t), std::move(w), m.epsilon());
}

double extremal_phi(const Modulus& m, Point t) {
  const double r = norm(t);
  if (r >= 1.0) return 0.0;
  if (r > 0.0) return dini_integral(m, r);
  switch (m.family()) {
    case ModulusFamily::kPower:
      return 1.0 / m.alpha();
    case ModulusFamily::kTabulated: {
      const auto tt = m.sample_t();
      const auto ww = m.sample_w();
      if (tt.size() >= 2 && ww[1] > ww[0]) {
        const double p = std::log(ww[1] / ww[0]) / std::log(tt[1] / tt[0]);
        return m.table_tail_integral(tt[0]) + ww[0] / p;
      }
      return std::numeric_limits<double>::infinity();
    }
    default:
      return std::numeric_limits<double>::infinity();
  }
}

}  // namespace czt
