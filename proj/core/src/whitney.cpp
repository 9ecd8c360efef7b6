#include "czt/whitney.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/parallel.hpp"

namespace czt {

namespace {

std::string name(const DyadicCube& c) {
  std::ostringstream os;
  os << "(" << c.level << "," << c.i << "," << c.j << ")";
  return os.str();
}

std::int64_t cell_floor(double x, int level) { return static_cast<std::int64_t>(std::floor(std::ldexp(x, -level))); }

enum class Action : std::uint8_t { kDiscard, kAccept, kSplit };

}  // namespace

std::string to_string(CoveringSide s) { return s == CoveringSide::kInterior ? "interior" : "exterior"; }

std::span<const std::size_t> WhitneyCovering::at_level(int level) const {
  if (level < min_level_ || level > max_level_ || by_level_.empty()) return {};
  return by_level_[static_cast<std::size_t>(level - min_level_)];
}

std::optional<std::size_t> WhitneyCovering::find(const DyadicCube& c) const {
  const auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<std::size_t> WhitneyCovering::locate(Point p) const {
  for (int lvl = min_level_; lvl <= max_level_; ++lvl) {
    if (at_level(lvl).empty()) continue;
    if (auto hit = find(DyadicCube::containing(p, lvl))) return hit;
  }
  return std::nullopt;
}

double WhitneyCovering::covered_area() const {
  double s = 0.0;
  for (const auto& c : cubes_) s += c.area();
  return s;
}

WhitneyCovering build_whitney(const Domain& d, CoveringSide side, int min_level) {
  const bool interior = side == CoveringSide::kInterior;
  Box region = d.bounding_box();
  if (!interior) {
    const Point c{0.5 * (region.lo.x + region.hi.x), 0.5 * (region.lo.y + region.hi.y)};
    const double h = 1.5 * std::max(region.width(), region.height());
    region = {{c.x - h, c.y - h}, {c.x + h, c.y + h}};
  }
  const double size = std::max(region.width(), region.height());
  const int top = static_cast<int>(std::ceil(std::log2(size)));
  if (top < min_level) throw DegenerateDomain("domain smaller than the finest Whitney level");

  std::vector<DyadicCube> frontier;
  for (std::int64_t i = cell_floor(region.lo.x, top); i <= cell_floor(region.hi.x, top); ++i) {
    for (std::int64_t j = cell_floor(region.lo.y, top); j <= cell_floor(region.hi.y, top); ++j) {
      frontier.push_back({top, i, j});
    }
  }

  WhitneyCovering cov(d);
  cov.side_ = side;
  cov.min_level_ = min_level;
  std::vector<std::pair<DyadicCube, double>> accepted;
  while (!frontier.empty()) {
    std::vector<Action> act(frontier.size());
    std::vector<double> dist(frontier.size());
    parallel_for(frontier.size(), [&](std::size_t k) {
      const DyadicCube& q = frontier[k];
      const double dd = d.distance_to_boundary(q.box());
      dist[k] = dd;
      const bool can_split = q.level > min_level;
      if (dd <= 0.0) {
        act[k] = can_split ? Action::kSplit : Action::kDiscard;
        return;
      }
      if (d.contains(q.center()) != interior) {
        act[k] = Action::kDiscard;
        return;
      }
      const double diam = q.diameter();
      if (diam <= dd) {
        if (dd <= 4.0 * diam) {
          act[k] = Action::kAccept;
        } else {
          act[k] = interior && can_split ? Action::kSplit : Action::kDiscard;
        }
        return;
      }
      act[k] = can_split ? Action::kSplit : Action::kDiscard;
    });
    std::vector<DyadicCube> next;
    for (std::size_t k = 0; k < frontier.size(); ++k) {
      if (act[k] == Action::kAccept) accepted.emplace_back(frontier[k], dist[k]);
      if (act[k] == Action::kSplit) {
        for (int q = 0; q < 4; ++q) next.push_back(frontier[k].child(q));
      }
    }
    frontier = std::move(next);
  }
  if (accepted.empty()) throw DegenerateDomain("Whitney construction accepted no cubes");

  std::sort(accepted.begin(), accepted.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  cov.cubes_.reserve(accepted.size());
  cov.dist_.reserve(accepted.size());
  for (const auto& [c, dd] : accepted) {
    cov.cubes_.push_back(c);
    cov.dist_.push_back(dd);
  }
  cov.max_level_ = cov.cubes_.back().level;
  cov.by_level_.resize(static_cast<std::size_t>(cov.max_level_ - min_level + 1));
  cov.index_.reserve(cov.cubes_.size() * 2);
  for (std::size_t k = 0; k < cov.cubes_.size(); ++k) {
    cov.index_.emplace(cov.cubes_[k], k);
    cov.by_level_[static_cast<std::size_t>(cov.cubes_[k].level - min_level)].push_back(k);
  }

  // Neighbour lists: each cube looks for same-size or larger cubes whose
  // closures meet its closure; smaller ones find it from their side.
  const std::size_t n = cov.cubes_.size();
  std::vector<std::vector<std::size_t>> found(n);
  parallel_for(n, [&](std::size_t k) {
    const DyadicCube& q = cov.cubes_[k];
    const Box qb = q.box();
    for (int lvl = q.level; lvl <= cov.max_level_; ++lvl) {
      if (cov.at_level(lvl).empty()) continue;
      for (std::int64_t i = cell_floor(qb.lo.x, lvl) - 1; i <= cell_floor(qb.hi.x, lvl); ++i) {
        for (std::int64_t j = cell_floor(qb.lo.y, lvl) - 1; j <= cell_floor(qb.hi.y, lvl); ++j) {
          const DyadicCube c{lvl, i, j};
          const auto it = cov.index_.find(c);
          if (it == cov.index_.end() || it->second == k) continue;
          if (lvl == q.level && it->second < k) continue;
          if (qb.intersects(c.box())) found[k].push_back(it->second);
        }
      }
    }
  });
  cov.neighbors_.assign(n, {});
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m : found[k]) {
      cov.neighbors_[k].push_back(m);
      cov.neighbors_[m].push_back(k);
    }
  }
  for (auto& v : cov.neighbors_) std::sort(v.begin(), v.end());
  return cov;
}

bool WhitneyCheck::ok() const { return total_violations() == 0; }

std::size_t WhitneyCheck::total_violations() const {
  std::size_t s = 0;
  for (const auto& v : violations) s += v.size();
  return s;
}

WhitneyCheck verify_whitney(const WhitneyCovering& cov, std::uint64_t seed, int samples) {
  WhitneyCheck out;
  const Domain& d = cov.domain();
  const bool interior = cov.side() == CoveringSide::kInterior;
  const auto cubes = cov.cubes();

  // 1: dyadic by construction; check each cube is in the region.
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    if (cov.distance(k) <= 0.0 || d.contains(cubes[k].center()) != interior) {
      out.violations[0].push_back(name(cubes[k]) + " not in region");
    }
  }
  // 2: disjoint interiors; no ancestor of a cube is also a cube.
  for (const auto& c : cubes) {
    for (DyadicCube a = c.parent(); a.level <= cov.max_level(); a = a.parent()) {
      if (cov.find(a)) {
        out.violations[1].push_back(name(c) + " inside " + name(a));
        break;
      }
    }
  }
  // 3: coverage up to the collar.
  out.covered_area = cov.covered_area();
  out.collar_width = 4.0 * std::numbers::sqrt2 * std::ldexp(1.0, cov.min_level());
  const double w = out.collar_width;
  std::mt19937_64 rng(seed);
  if (interior) {
    out.deficit = d.area() - out.covered_area;
    out.collar_bound =
        w * d.perimeter() + 2.0 * std::numbers::pi * w * w * static_cast<double>(d.feature_points().size() + 1);
    if (out.deficit > out.collar_bound) out.violations[2].push_back("uncovered area exceeds collar bound");
    if (out.deficit < -1e-9 * std::max(1.0, d.area())) out.violations[2].push_back("covered area exceeds |D|");
  } else {
    const Box bb = d.bounding_box();
    const double size = std::max(bb.width(), bb.height());
    const Box probe = bb.inflated(0.5 * size);
    std::uniform_real_distribution<double> ux(probe.lo.x, probe.hi.x);
    std::uniform_real_distribution<double> uy(probe.lo.y, probe.hi.y);
    const double lo = 0.5 * w * (1.0 + 1e-9);
    const double hi = 0.5 * size;
    for (int s = 0; s < samples; ++s) {
      const Point p{ux(rng), uy(rng)};
      const double sd = d.signed_distance(p);
      if (sd < lo || sd > hi) continue;
      ++out.samples;
      if (!cov.locate(p)) {
        ++out.uncovered_samples;
        if (out.violations[2].size() < 20) {
          std::ostringstream os;
          os << "uncovered exterior point (" << p.x << ", " << p.y << ") at distance " << sd;
          out.violations[2].push_back(os.str());
        }
      }
    }
  }
  // 4: diam <= dist <= 4 diam.
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    const double diam = cubes[k].diameter();
    const double dd = cov.distance(k);
    if (dd < diam * (1.0 - 1e-12) || dd > 4.0 * diam * (1.0 + 1e-12)) {
      out.violations[3].push_back(name(cubes[k]) + " distance out of [diam, 4 diam]");
    }
  }
  // 5: neighbouring side lengths within a factor 2.
  for (std::size_t k = 0; k < cubes.size(); ++k) {
    for (std::size_t m : cov.neighbors(k)) {
      if (m < k) continue;
      if (std::abs(cubes[k].level - cubes[m].level) > 1) {
        out.violations[4].push_back(name(cubes[k]) + " ~ " + name(cubes[m]));
      }
    }
  }
  // 6: bounded overlap of 10Q at cube centers and random points.
  std::vector<Point> pts;
  const std::size_t stride = std::max<std::size_t>(1, cubes.size() / 20000);
  for (std::size_t k = 0; k < cubes.size(); k += stride) pts.push_back(cubes[k].center());
  {
    const Box bb = d.bounding_box().inflated(interior ? 0.0 : 0.25 * std::max(d.bounding_box().width(), d.bounding_box().height()));
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
    std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);
    for (int s = 0; s < samples; ++s) pts.push_back({ux(rng), uy(rng)});
  }
  std::vector<int> counts(pts.size());
  parallel_for(pts.size(), [&](std::size_t k) {
    int c = 0;
    cov.for_each_dilated(pts[k], 10.0, cov.min_level(), cov.max_level(), [&](std::size_t) { ++c; });
    counts[k] = c;
  });
  for (std::size_t k = 0; k < pts.size(); ++k) {
    out.overlap_max = std::max(out.overlap_max, counts[k]);
    if (counts[k] > kOverlapBound && out.violations[5].size() < 20) {
      std::ostringstream os;
      os << "N10 = " << counts[k] << " at (" << pts[k].x << ", " << pts[k].y << ")";
      out.violations[5].push_back(os.str());
    }
  }
  return out;
}

std::size_t reflected_cube(const WhitneyCovering& interior, const DyadicCube& q) {
  const Domain& d = interior.domain();
  const Box qb = q.box();
  const double dq = d.distance_to_boundary(qb);
  const double radius = 2.0 * dq;
  const double limit = radius * (1.0 + 1e-12);
  const Box search = qb.inflated(radius);
  const Point qc = q.center();
  for (int lvl = interior.max_level(); lvl >= interior.min_level(); --lvl) {
    const auto list = interior.at_level(lvl);
    if (list.empty()) continue;
    std::optional<std::size_t> best;
    double best_d = 0.0;
    auto consider = [&](std::size_t k) {
      const DyadicCube& r = interior.cubes()[k];
      if (qb.distance_to(r.box()) > limit) return;
      const Point rc = r.center();
      const double cd = distance(qc, rc);
      if (!best) {
        best = k;
        best_d = cd;
        return;
      }
      const Point bc = interior.cubes()[*best].center();
      if (cd < best_d || (cd == best_d && (rc.x < bc.x || (rc.x == bc.x && rc.y < bc.y)))) {
        best = k;
        best_d = cd;
      }
    };
    const std::int64_t i0 = cell_floor(search.lo.x, lvl);
    const std::int64_t i1 = cell_floor(search.hi.x, lvl);
    const std::int64_t j0 = cell_floor(search.lo.y, lvl);
    const std::int64_t j1 = cell_floor(search.hi.y, lvl);
    const double cells = static_cast<double>(i1 - i0 + 1) * static_cast<double>(j1 - j0 + 1);
    if (cells <= static_cast<double>(list.size())) {
      for (std::int64_t i = i0; i <= i1; ++i) {
        for (std::int64_t j = j0; j <= j1; ++j) {
          if (auto k = interior.find({lvl, i, j})) consider(*k);
        }
      }
    } else {
      for (std::size_t k : list) consider(k);
    }
    if (best) return *best;
  }
  throw ReflectionFailure("no interior cube within 2 dist(Q, boundary) of " + name(q));
}

std::vector<std::int64_t> build_reflection(const WhitneyCovering& interior, const WhitneyCovering& exterior,
                                           double cutoff) {
  const auto cubes = exterior.cubes();
  std::vector<std::int64_t> out(cubes.size(), -1);
  parallel_for(cubes.size(), [&](std::size_t k) {
    if (cubes[k].side() > cutoff) return;
    out[k] = static_cast<std::int64_t>(reflected_cube(interior, cubes[k]));
  });
  return out;
}

int vertical_line_count(const WhitneyCovering& cov, const Window& w, int level, int lines) {
  const double h = w.half_size;
  Box frame;
  for (double su : {-h, h}) {
    for (double sv : {-h, h}) {
      const Point p = w.to_world(su, sv);
      frame.lo = {std::min(frame.lo.x, p.x), std::min(frame.lo.y, p.y)};
      frame.hi = {std::max(frame.hi.x, p.x), std::max(frame.hi.y, p.y)};
    }
  }
  std::vector<Box> boxes;
  for (std::size_t k : cov.at_level(level)) {
    const Box b = cov.cubes()[k].box();
    if (!b.intersects(frame)) continue;
    const Point near = cov.domain().project(cov.cubes()[k].center()).x;
    const Vec2 loc = w.to_local(near);
    if (std::abs(loc.x) > h || std::abs(loc.y) > h) continue;
    boxes.push_back(b.inflated(-1e-9 * cov.cubes()[k].side()));
  }
  int best = 0;
  for (int l = 0; l < lines; ++l) {
    const double u = -h + (l + 0.5) * 2.0 * h / lines;
    const Point a = w.to_world(u, -h);
    const Point b = w.to_world(u, h);
    int c = 0;
    for (const Box& bx : boxes) {
      if (segment_box_distance(a, b, bx) <= 0.0) ++c;
    }
    best = std::max(best, c);
  }
  return best;
}

PartitionOfUnity::PartitionOfUnity(std::shared_ptr<const WhitneyCovering> exterior) : cov_(std::move(exterior)) {
  const auto cubes = cov_->cubes();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.55, 0.55);
  const std::size_t stride = std::max<std::size_t>(1, cubes.size() / 2000);
  std::vector<Term> terms;
  for (std::size_t k = 0; k < cubes.size(); k += stride) {
    const DyadicCube& q = cubes[k];
    const Point c = q.center();
    const double s = q.side();
    for (int r = 0; r < 4; ++r) {
      terms = evaluate({c.x + u(rng) * s, c.y + u(rng) * s});
      for (const Term& t : terms) c_psi_ = std::max(c_psi_, norm(t.gradient) * cubes[t.cube].side());
    }
  }
}

double PartitionOfUnity::step(double t) {
  t = std::abs(t);
  if (t <= kPlateau) return 1.0;
  if (t >= kSupport) return 0.0;
  const double x = (kSupport - t) / (kSupport - kPlateau);
  const double f = std::exp(-1.0 / x);
  const double g = std::exp(-1.0 / (1.0 - x));
  return f / (f + g);
}

double PartitionOfUnity::step_derivative(double t) {
  const double sgn = t < 0.0 ? -1.0 : 1.0;
  t = std::abs(t);
  if (t <= kPlateau || t >= kSupport) return 0.0;
  const double x = (kSupport - t) / (kSupport - kPlateau);
  const double f = std::exp(-1.0 / x);
  const double g = std::exp(-1.0 / (1.0 - x));
  const double df = f / (x * x);
  const double dg = -g / ((1.0 - x) * (1.0 - x));
  const double ds = (df * g - f * dg) / ((f + g) * (f + g));
  return -sgn * ds / (kSupport - kPlateau);
}

double PartitionOfUnity::bump(std::size_t cube, Point x) const {
  const DyadicCube& q = cov_->cubes()[cube];
  const Point c = q.center();
  const double h = 0.5 * q.side();
  return step((x.x - c.x) / h) * step((x.y - c.y) / h);
}

void PartitionOfUnity::bumps_at(Point x, std::vector<Term>& out) const {
  out.clear();
  int lo = cov_->min_level();
  int hi = cov_->max_level();
  if (auto home = cov_->locate(x)) {
    const int l = cov_->cubes()[*home].level;
    lo = l - 2;
    hi = l + 2;
  }
  cov_->for_each_dilated(x, kSupport, lo, hi, [&](std::size_t k) {
    const DyadicCube& q = cov_->cubes()[k];
    const Point c = q.center();
    const double h = 0.5 * q.side();
    const double tx = (x.x - c.x) / h;
    const double ty = (x.y - c.y) / h;
    const double sx = step(tx);
    const double sy = step(ty);
    const double b = sx * sy;
    if (b <= 0.0) return;
    out.push_back({k, b, {step_derivative(tx) * sy / h, sx * step_derivative(ty) / h}});
  });
}

std::vector<PartitionOfUnity::Term> PartitionOfUnity::evaluate(Point x) const {
  std::vector<Term> raw;
  bumps_at(x, raw);
  double s = 0.0;
  Vec2 g{0.0, 0.0};
  for (const Term& t : raw) {
    s += t.value;
    g += t.gradient;
  }
  if (s <= 0.0) return {};
  for (Term& t : raw) {
    t.gradient = (t.gradient * s - g * t.value) / (s * s);
    t.value /= s;
  }
  return raw;
}

double PartitionOfUnity::denominator(Point x) const {
  std::vector<Term> raw;
  bumps_at(x, raw);
  double s = 0.0;
  for (const Term& t : raw) s += t.value;
  return s;
}

double PartitionOfUnity::verify(std::uint64_t seed, int samples) const {
  const auto cubes = cov_->cubes();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, cubes.size() - 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    const DyadicCube& q = cubes[pick(rng)];
    const Point a = q.lo();
    const Point x{a.x + u(rng) * q.side(), a.y + u(rng) * q.side()};
    const double den = denominator(x);
    worst = std::min(worst, den);
    if (den < 1e-12) {
      std::ostringstream os;
      os << "partition denominator " << den << " at (" << x.x << ", " << x.y << ")";
      throw PartitionGap(os.str());
    }
  }
  return worst;
}

}  // namespace czt
