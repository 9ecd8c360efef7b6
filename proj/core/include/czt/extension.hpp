#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "czt/cube.hpp"
#include "czt/field.hpp"
#include "czt/whitney.hpp"

namespace czt {

// Tensor midpoint rule with quad_n^2 nodes, Richardson-extrapolated against
// the (quad_n/2)^2 rule. Throws PoisonedValue on a non-finite sample.
double cube_mean(const ScalarField& f, const GeneralCube& q, int quad_n = 32);
inline double cube_mean(const ScalarField& f, const DyadicCube& q, int quad_n = 32) {
  return cube_mean(f, q.general(), quad_n);
}

// (1/|Q|) int_Q |f - c| by the tensor midpoint rule.
double cube_deviation(const ScalarField& f, const GeneralCube& q, double c, int quad_n = 32);

// f~ = f chi_D + sum_{Q in W', l(Q) <= R} psi_Q f_{Q~}.
class ExtendedField {
 public:
  ExtendedField(ScalarField f, std::shared_ptr<const WhitneyCovering> interior,
                std::shared_ptr<const WhitneyCovering> exterior, std::shared_ptr<const PartitionOfUnity> pu,
                double cutoff, int quad_n = 32);

  double operator()(Point x) const { return value(x); }
  double value(Point x) const;
  // Gradient on D' (sum of grad psi_Q f_{Q~}); inside D uses f's gradient if present.
  Vec2 gradient(Point x) const;
  // Number of bumps with l(Q) <= R that are nonzero at x.
  int terms_at(Point x) const;

  const Domain& domain() const { return interior_->domain(); }
  double cutoff() const { return cutoff_; }
  // Union of the closed 5/4 Q boxes with l(Q) <= R, together with bbox(D).
  const Box& support_hull() const { return hull_; }
  std::span<const std::int64_t> reflection() const { return reflection_; }
  // f_{Q~} for exterior cube i (NaN when l(Q_i) > R).
  double reflected_mean(std::size_t i) const { return means_[i]; }
  const ScalarField& base() const { return f_; }
  const WhitneyCovering& interior() const { return *interior_; }
  const WhitneyCovering& exterior() const { return *exterior_; }

  ScalarField as_field() const;

 private:
  ScalarField f_;
  std::shared_ptr<const WhitneyCovering> interior_;
  std::shared_ptr<const WhitneyCovering> exterior_;
  std::shared_ptr<const PartitionOfUnity> pu_;
  double cutoff_;
  std::vector<std::int64_t> reflection_;
  std::vector<double> means_;
  Box hull_;
};

// Convenience: builds both coverings (exterior two levels finer, see
// ExtensionSetup), the partition and the extension with cutoff R
// (R <= 0 selects the domain's window size).
struct ExtensionSetup {
  std::shared_ptr<const WhitneyCovering> interior;
  std::shared_ptr<const WhitneyCovering> exterior;
  std::shared_ptr<const PartitionOfUnity> pu;
  double cutoff = 0.0;
};
ExtensionSetup make_extension_setup(const Domain& d, int min_level, double cutoff = 0.0);
ExtendedField extend(ScalarField f, const ExtensionSetup& s, int quad_n = 32);

struct Lemma2Row {
  DyadicCube cube;
  double lhs = 0.0;  // int_Q |f~ - f~_Q|
  double rhs = 0.0;  // sum over S in W, S in cQ, of int_{9/8 S} |f - f_{9/8 S}|
  double ratio = 0.0;
};

struct Lemma2Report {
  int c = 0;        // smallest dilation in {2, 4, 8} that verified, 0 if none
  double C = 0.0;   // max lhs / rhs for that c
  double r0 = 0.0;  // cubes with l(Q) < r0 were tested
  std::vector<int> tried;
  std::vector<double> constants;  // C per tried c
  std::vector<Lemma2Row> rows;    // rows for the reported c
};

inline constexpr double kLemma2Bound = 50.0;

// Tests boundary-straddling dyadic cubes at `per_level` boundary anchors on
// each level between the window scale and 2^(min_level + 4).
Lemma2Report lemma2_check(const ExtendedField& ef, int per_level = 6, int quad_n = 32);

}  // namespace czt
