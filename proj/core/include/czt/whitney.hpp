#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "czt/cube.hpp"
#include "czt/domain.hpp"

namespace czt {

enum class CoveringSide { kInterior, kExterior };

std::string to_string(CoveringSide s);

class WhitneyCovering {
 public:
  CoveringSide side() const { return side_; }
  int min_level() const { return min_level_; }
  int max_level() const { return max_level_; }
  const Domain& domain() const { return domain_; }

  // Sorted by (level, i, j).
  std::span<const DyadicCube> cubes() const { return cubes_; }
  std::size_t size() const { return cubes_.size(); }
  // dist(Q, boundary) for cube i.
  double distance(std::size_t i) const { return dist_[i]; }
  std::span<const std::size_t> at_level(int level) const;

  std::optional<std::size_t> find(const DyadicCube& c) const;
  // Cube containing p (semi-open membership).
  std::optional<std::size_t> locate(Point p) const;
  // Calls f(index) for every cube Q with p in the closed cube factor*Q.
  // Levels are restricted to [level_lo, level_hi].
  template <class F>
  void for_each_dilated(Point p, double factor, int level_lo, int level_hi, F&& f) const {
    const int reach = static_cast<int>(std::ceil(0.5 * factor - 0.5)) + 1;
    for (int lvl = std::max(level_lo, min_level_); lvl <= std::min(level_hi, max_level_); ++lvl) {
      if (at_level(lvl).empty()) continue;
      const DyadicCube home = DyadicCube::containing(p, lvl);
      const double half = 0.5 * factor * std::ldexp(1.0, lvl);
      for (int di = -reach; di <= reach; ++di) {
        for (int dj = -reach; dj <= reach; ++dj) {
          const DyadicCube c{lvl, home.i + di, home.j + dj};
          const auto it = index_.find(c);
          if (it == index_.end()) continue;
          const Point ctr = c.center();
          if (std::abs(p.x - ctr.x) <= half && std::abs(p.y - ctr.y) <= half) f(it->second);
        }
      }
    }
  }

  // Cubes whose closures meet (Definition-3 neighbours).
  std::span<const std::size_t> neighbors(std::size_t i) const { return neighbors_[i]; }

  double covered_area() const;

 private:
  friend WhitneyCovering build_whitney(const Domain& d, CoveringSide side, int min_level);

  explicit WhitneyCovering(Domain d) : domain_(std::move(d)) {}

  Domain domain_;
  CoveringSide side_ = CoveringSide::kInterior;
  int min_level_ = 0;
  int max_level_ = 0;
  std::vector<DyadicCube> cubes_;
  std::vector<double> dist_;
  std::unordered_map<DyadicCube, std::size_t, DyadicCubeHash> index_;
  std::vector<std::vector<std::size_t>> by_level_;  // offset by min_level_
  std::vector<std::vector<std::size_t>> neighbors_;
};

// Greedy dyadic construction: starting from the dyadic cubes that cover the
// bounding box (3x inflated for the exterior), accept a cube lying in the
// region when diam(Q) <= dist(Q, boundary), otherwise subdivide down to
// min_level. Cubes farther than 4 diam from the boundary are discarded
// (exterior collar). Throws DegenerateDomain when nothing is accepted.
WhitneyCovering build_whitney(const Domain& d, CoveringSide side, int min_level);

struct WhitneyCheck {
  // Violations of items 1..6; each entry names the offending cube(s).
  std::array<std::vector<std::string>, 6> violations;
  int overlap_max = 0;  // N10: max number of 10Q containing a sample point
  double covered_area = 0.0;
  double deficit = 0.0;       // interior: |D| - covered area
  double collar_width = 0.0;  // 2 sqrt(2) 2^min_level ... see collar_bound
  double collar_bound = 0.0;
  std::size_t uncovered_samples = 0;  // exterior: band points not covered
  std::size_t samples = 0;

  bool ok() const;
  std::size_t total_violations() const;
};

// Upper bound used for item 6; the construction gives N10 well below it.
inline constexpr int kOverlapBound = 1000;

WhitneyCheck verify_whitney(const WhitneyCovering& cov, std::uint64_t seed = 1, int samples = 4000);

// Maximal interior cube with dist(q, Q~) <= 2 dist(q, boundary); ties go to
// the smaller center distance, then to the lexicographically smaller center.
// Throws ReflectionFailure when no interior cube qualifies.
std::size_t reflected_cube(const WhitneyCovering& interior, const DyadicCube& q);

// reflection[i] is the interior index reflected from exterior cube i, or -1
// when l(Q_i) > cutoff.
std::vector<std::int64_t> build_reflection(const WhitneyCovering& interior,
                                           const WhitneyCovering& exterior, double cutoff);

// Max over `lines` vertical lines of the window frame of the number of
// cubes of the given level meeting the line inside the window. Only cubes
// whose nearest boundary point lies in the window frame are counted.
int vertical_line_count(const WhitneyCovering& cov, const Window& w, int level, int lines = 257);

// Smooth partition of unity over an exterior covering. Each bump is a
// product of 1-D steps equal to 1 on Q and vanishing outside 1.1 Q; the
// steps are built from exp(-1/t).
class PartitionOfUnity {
 public:
  static constexpr double kPlateau = 1.0;  // relative half-width where b_Q = 1
  static constexpr double kSupport = 1.1;  // relative half-width of supp b_Q

  explicit PartitionOfUnity(std::shared_ptr<const WhitneyCovering> exterior);

  struct Term {
    std::size_t cube;
    double value;
    Vec2 gradient;
  };
  // Nonzero psi_Q(x) with gradients; empty when x is uncovered.
  std::vector<Term> evaluate(Point x) const;
  double denominator(Point x) const;

  // 1-D step and bump profile, exposed for tests.
  static double step(double t);
  static double step_derivative(double t);
  double bump(std::size_t cube, Point x) const;

  // sup |grad psi_Q| l(Q) measured on samples during construction.
  double gradient_constant() const { return c_psi_; }
  const WhitneyCovering& covering() const { return *cov_; }

  // Throws PartitionGap if the denominator drops below 1e-12 at any of
  // `samples` random points inside covering cubes; returns the minimum seen.
  double verify(std::uint64_t seed = 1, int samples = 10000) const;

 private:
  void bumps_at(Point x, std::vector<Term>& out) const;

  std::shared_ptr<const WhitneyCovering> cov_;
  double c_psi_ = 0.0;
};

}  // namespace czt
