#include "czt/seminorm.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/extension.hpp"
#include "czt/parallel.hpp"
#include "czt/quadrature.hpp"

namespace czt {

namespace {

constexpr double kFinestSide = 0x1p-20;

std::vector<double> grid_samples(const ScalarField& f, const GeneralCube& q, int n) {
  const Box b = q.box();
  const double h = q.side / n;
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double s = f({b.lo.x + (i + 0.5) * h, b.lo.y + (j + 0.5) * h});
      if (!std::isfinite(s)) throw PoisonedValue("non-finite sample of " + f.label);
      v.push_back(s);
    }
  }
  return v;
}

double median(std::vector<double> v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double hi = v[mid];
  if (v.size() % 2 == 1) return hi;
  const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

struct Osc {
  double b;
  double osc;
};

Osc oscillation(const std::vector<double>& v, int p) {
  double b = 0.0;
  if (p == 1) {
    b = median(v);
  } else {
    for (double s : v) b += s;
    b /= static_cast<double>(v.size());
  }
  double acc = 0.0;
  for (double s : v) acc += p == 1 ? std::abs(s - b) : (s - b) * (s - b);
  acc /= static_cast<double>(v.size());
  return {b, p == 1 ? acc : std::sqrt(acc)};
}

}  // namespace

std::string to_string(CubeRegion r) {
  switch (r) {
    case CubeRegion::kPlane: return "plane";
    case CubeRegion::kInside: return "inside";
    case CubeRegion::kSeparated: return "separated";
  }
  return "?";
}

bool admissible(const Domain& d, CubeRegion r, const GeneralCube& q) {
  if (!(q.side >= kFinestSide && q.side <= 1.0)) return false;
  switch (r) {
    case CubeRegion::kPlane: return true;
    case CubeRegion::kInside: return d.classify(q.box()) == BoxClass::kInside;
    case CubeRegion::kSeparated: return d.classify(dilate(q, 2.0).box()) == BoxClass::kInside;
  }
  return false;
}

CubeSampler sample_cubes(const Domain& d, std::span<const WhitneyCovering* const> coverings,
                         const SamplerOptions& opt) {
  CubeSampler out;
  std::size_t from_cov = 0;
  std::size_t dilated = 0;
  for (const WhitneyCovering* cov : coverings) {
    for (const auto& c : cov->cubes()) {
      if (admissible(d, opt.region, c.general())) {
        out.cubes.push_back(c.general());
        ++from_cov;
      }
      if (opt.dilations) {
        const GeneralCube g = dilate(c, 9.0 / 8.0);
        if (admissible(d, opt.region, g)) {
          out.cubes.push_back(g);
          ++dilated;
        }
      }
    }
  }
  Box box = opt.box;
  if (box.empty()) {
    const Box bb = d.bounding_box();
    box = bb.inflated(0.5 * std::max(bb.width(), bb.height()));
  }
  const auto nodes = d.boundary_quadrature(2);
  std::mt19937_64 rng(opt.seed);
  std::uniform_int_distribution<int> level(opt.finest_level, opt.coarsest_level);
  std::uniform_real_distribution<double> ux(box.lo.x, box.hi.x);
  std::uniform_real_distribution<double> uy(box.lo.y, box.hi.y);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_int_distribution<std::size_t> node(0, nodes.size() - 1);
  std::size_t random = 0;
  for (long attempt = 0; random < static_cast<std::size_t>(std::max(0, opt.random)) &&
                         attempt < 200L * std::max(1, opt.random);
       ++attempt) {
    const double side = std::ldexp(1.0, level(rng));
    Point c;
    if (opt.boundary_anchored && attempt % 2 == 0) {
      const Point a = nodes[node(rng)].x;
      c = {a.x + unit(rng) * side, a.y + unit(rng) * side};
    } else {
      c = {ux(rng), uy(rng)};
    }
    const GeneralCube q{c, side};
    if (!admissible(d, opt.region, q)) continue;
    out.cubes.push_back(q);
    ++random;
  }
  std::ostringstream os;
  os << "region=" << to_string(opt.region) << " covering=" << from_cov << " dilated=" << dilated
     << " random=" << random << " levels=[" << opt.finest_level << "," << opt.coarsest_level << "] seed=" << opt.seed;
  out.descriptor = os.str();
  return out;
}

OscillationReport campanato_seminorm(const ScalarField& f, const Modulus& m, int p, const CubeSampler& sampler,
                                     int grid) {
  if (p != 1 && p != 2) throw ConfigError("campanato_seminorm supports p = 1 or p = 2");
  if (sampler.cubes.empty()) throw EmptyReport("no admissible cube for the Campanato estimate");
  OscillationReport rep;
  rep.p = p;
  rep.grid = grid;
  rep.sampler = sampler.descriptor;
  rep.rows.resize(sampler.cubes.size());
  parallel_for(sampler.cubes.size(), [&](std::size_t k) {
    const GeneralCube& q = sampler.cubes[k];
    const Osc o = oscillation(grid_samples(f, q, grid), p);
    rep.rows[k] = {q, o.b, o.osc, o.osc / m(q.side)};
  });
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    if (rep.rows[k].ratio > rep.sup_ratio) {
      rep.sup_ratio = rep.rows[k].ratio;
      rep.argmax = k;
    }
  }
  return rep;
}

LpEquivalence lp_equivalence_check(const ScalarField& f, const Modulus& m, const CubeSampler& sampler, int grid) {
  (void)m;
  LpEquivalence out;
  std::vector<double> ratio(sampler.cubes.size(), 1.0);
  parallel_for(sampler.cubes.size(), [&](std::size_t k) {
    const auto v = grid_samples(f, sampler.cubes[k], grid);
    const double o1 = oscillation(v, 1).osc;
    const double o2 = oscillation(v, 2).osc;
    ratio[k] = o1 > 0.0 ? o2 / o1 : 1.0;
  });
  if (!ratio.empty()) {
    out.min_ratio = *std::min_element(ratio.begin(), ratio.end());
    out.max_ratio = *std::max_element(ratio.begin(), ratio.end());
  }
  out.cubes = ratio.size();
  return out;
}

std::vector<Point> bloch_probes(const Domain& d, int anchors, int max_k, int random, std::uint64_t seed) {
  const Box bb = d.bounding_box();
  const double floor = 0x1p-20 * std::hypot(bb.width(), bb.height());
  std::vector<Point> out;
  const auto nodes = d.boundary_quadrature(2);
  for (int a = 0; a < anchors; ++a) {
    const auto& n = nodes[(nodes.size() * (2 * static_cast<std::size_t>(a) + 1)) / (2 * static_cast<std::size_t>(anchors))];
    for (int k = 2; k <= max_k; ++k) {
      const Point x = n.x - n.normal * std::ldexp(1.0, -k);
      if (d.contains(x) && -d.signed_distance(x) > floor) out.push_back(x);
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
  std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);
  int got = 0;
  for (long attempt = 0; got < random && attempt < 100L * std::max(1, random); ++attempt) {
    const Point x{ux(rng), uy(rng)};
    if (!d.contains(x) || -d.signed_distance(x) <= floor) continue;
    out.push_back(x);
    ++got;
  }
  return out;
}

BlochReport bloch_seminorm(const ScalarField& f, const Domain& d, const Modulus& m, std::span<const Point> probes) {
  if (!f.has_gradient()) throw CapabilityError("Bloch seminorm of " + f.label + " needs a gradient");
  BlochReport rep;
  std::vector<BlochRow> rows(probes.size());
  std::vector<char> keep(probes.size(), 0);
  parallel_for(probes.size(), [&](std::size_t k) {
    const Point x = probes[k];
    const double rho = -d.signed_distance(x);
    if (!(rho > 0.0) || rho > m.domain_max()) return;
    const double g = norm(f.gradient(x));
    rows[k] = {x, rho, g, g * rho / m(rho)};
    keep[k] = 1;
  });
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!keep[k]) continue;
    rep.rows.push_back(rows[k]);
    if (rows[k].ratio > rep.sup_ratio) {
      rep.sup_ratio = rows[k].ratio;
      rep.argmax = rep.rows.size() - 1;
    }
  }
  return rep;
}

MeanGrowthReport mean_growth_check(const ScalarField& f, const Modulus& m, std::span<const GeneralCube> cubes,
                                   double seminorm, int quad_n) {
  MeanGrowthReport rep;
  rep.rows.resize(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t k) {
    const double mean = std::abs(cube_mean(f, cubes[k], quad_n));
    const double bound = dini_integral(m, cubes[k].side);
    rep.rows[k] = {cubes[k], mean, bound, bound > 0.0 ? mean / bound : 0.0};
  });
  if (!rep.rows.empty()) {
    rep.min_ratio = rep.rows.front().ratio;
    rep.max_ratio = rep.rows.front().ratio;
  }
  for (std::size_t k = 0; k < rep.rows.size(); ++k) {
    rep.min_ratio = std::min(rep.min_ratio, rep.rows[k].ratio);
    rep.max_ratio = std::max(rep.max_ratio, rep.rows[k].ratio);
    if (k > 0 && rep.rows[k].cube.side < rep.rows[k - 1].cube.side && rep.rows[k].bound < rep.rows[k - 1].bound) {
      rep.monotone_flags.push_back(k);
    }
  }
  rep.constant = seminorm > 0.0 ? rep.max_ratio / seminorm : 0.0;
  return rep;
}

DriftReport telescoping_check(const ScalarField& f, const Domain& d, const Modulus& m, double seminorm,
                              std::span<const GeneralCube> cubes, int quad_n) {
  DriftReport rep;
  std::vector<double> vals(cubes.size(), -1.0);
  parallel_for(cubes.size(), [&](std::size_t k) {
    const GeneralCube q2 = dilate(cubes[k], 2.0);
    if (q2.side > 1.0 || d.classify(q2.box()) != BoxClass::kInside) return;
    const double drift = std::abs(cube_mean(f, cubes[k], quad_n) - cube_mean(f, q2, quad_n));
    const double scale = seminorm * m(q2.side);
    vals[k] = scale > 0.0 ? drift / scale : (drift > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
  });
  for (double v : vals) {
    if (v < 0.0) continue;
    ++rep.pairs;
    rep.max_normalized = std::max(rep.max_normalized, v);
  }
  return rep;
}

double harmonic_gradient_ratio(const ScalarField& f, Point x0, double r, int radial, int angular) {
  if (!f.has_gradient()) throw CapabilityError("harmonic check of " + f.label + " needs a gradient");
  const GaussRule& g = gauss_legendre(radial);
  std::vector<double> vals;
  std::vector<double> wts;
  const double big = 2.0 * r;
  for (int i = 0; i < radial; ++i) {
    const double rr = 0.5 * big * (g.nodes[i] + 1.0);
    const double wr = 0.5 * big * g.weights[i] * rr;
    for (int j = 0; j < angular; ++j) {
      const double th = 2.0 * std::numbers::pi * j / angular;
      vals.push_back(f({x0.x + rr * std::cos(th), x0.y + rr * std::sin(th)}));
      wts.push_back(wr * 2.0 * std::numbers::pi / angular);
    }
  }
  double area = 0.0;
  double c = 0.0;
  for (std::size_t k = 0; k < vals.size(); ++k) {
    area += wts[k];
    c += wts[k] * vals[k];
  }
  c /= area;
  double dev = 0.0;
  for (std::size_t k = 0; k < vals.size(); ++k) dev += wts[k] * std::abs(vals[k] - c);
  const double grad = norm(f.gradient(x0));
  if (dev == 0.0) return grad == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return grad * r * r * r / dev;
}

}  // namespace czt
