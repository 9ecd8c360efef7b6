#include "czt/extension.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <sstream>

#include "czt/errors.hpp"
#include "czt/parallel.hpp"

namespace czt {

namespace {

double midpoint_mean(const ScalarField& f, const GeneralCube& q, int n) {
  const Box b = q.box();
  const double h = q.side / n;
  double s = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = b.lo.x + (i + 0.5) * h;
    for (int j = 0; j < n; ++j) {
      const Point p{x, b.lo.y + (j + 0.5) * h};
      const double v = f(p);
      if (!std::isfinite(v)) {
        std::ostringstream os;
        os << "non-finite sample of " << f.label << " at (" << p.x << ", " << p.y << ")";
        throw PoisonedValue(os.str());
      }
      s += v;
    }
  }
  return s / (static_cast<double>(n) * n);
}

}  // namespace

double cube_mean(const ScalarField& f, const GeneralCube& q, int quad_n) {
  if (!(q.side > 0.0)) throw DomainError("cube_mean needs a cube with positive side");
  if (quad_n < 2) throw ConfigError("cube_mean needs quad_n >= 2");
  const double fine = midpoint_mean(f, q, quad_n);
  const double coarse = midpoint_mean(f, q, quad_n / 2);
  const double ratio = static_cast<double>(quad_n) / (quad_n / 2);
  const double r2 = ratio * ratio;
  return (r2 * fine - coarse) / (r2 - 1.0);
}

double cube_deviation(const ScalarField& f, const GeneralCube& q, double c, int quad_n) {
  const Box b = q.box();
  const double h = q.side / quad_n;
  double s = 0.0;
  for (int i = 0; i < quad_n; ++i) {
    for (int j = 0; j < quad_n; ++j) s += std::abs(f({b.lo.x + (i + 0.5) * h, b.lo.y + (j + 0.5) * h}) - c);
  }
  return s / (static_cast<double>(quad_n) * quad_n);
}

ExtendedField::ExtendedField(ScalarField f, std::shared_ptr<const WhitneyCovering> interior,
                             std::shared_ptr<const WhitneyCovering> exterior,
                             std::shared_ptr<const PartitionOfUnity> pu, double cutoff, int quad_n)
    : f_(std::move(f)),
      interior_(std::move(interior)),
      exterior_(std::move(exterior)),
      pu_(std::move(pu)),
      cutoff_(cutoff) {
  if (interior_->side() != CoveringSide::kInterior || exterior_->side() != CoveringSide::kExterior) {
    throw ConfigError("extend needs an interior and an exterior covering");
  }
  reflection_ = build_reflection(*interior_, *exterior_, cutoff_);
  // One mean per distinct reflected cube.
  std::vector<std::size_t> targets;
  for (auto r : reflection_) {
    if (r >= 0) targets.push_back(static_cast<std::size_t>(r));
  }
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  std::vector<double> vals(targets.size());
  parallel_for(targets.size(), [&](std::size_t k) { vals[k] = cube_mean(f_, interior_->cubes()[targets[k]], quad_n); });
  means_.assign(reflection_.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < reflection_.size(); ++i) {
    if (reflection_[i] < 0) continue;
    const auto it = std::lower_bound(targets.begin(), targets.end(), static_cast<std::size_t>(reflection_[i]));
    means_[i] = vals[static_cast<std::size_t>(it - targets.begin())];
  }
  hull_ = domain().bounding_box();
  for (std::size_t i = 0; i < reflection_.size(); ++i) {
    if (reflection_[i] < 0) continue;
    const Box b = dilate(exterior_->cubes()[i], 1.25).box();
    hull_.lo = {std::min(hull_.lo.x, b.lo.x), std::min(hull_.lo.y, b.lo.y)};
    hull_.hi = {std::max(hull_.hi.x, b.hi.x), std::max(hull_.hi.y, b.hi.y)};
  }
}

double ExtendedField::value(Point x) const {
  if (domain().contains(x)) return f_(x);
  double s = 0.0;
  for (const auto& t : pu_->evaluate(x)) {
    if (reflection_[t.cube] >= 0) s += t.value * means_[t.cube];
  }
  return s;
}

Vec2 ExtendedField::gradient(Point x) const {
  if (domain().contains(x)) {
    if (!f_.has_gradient()) throw CapabilityError("base field " + f_.label + " has no gradient");
    return f_.gradient(x);
  }
  Vec2 g{0.0, 0.0};
  for (const auto& t : pu_->evaluate(x)) {
    if (reflection_[t.cube] >= 0) g += t.gradient * means_[t.cube];
  }
  return g;
}

int ExtendedField::terms_at(Point x) const {
  int c = 0;
  for (const auto& t : pu_->evaluate(x)) c += reflection_[t.cube] >= 0 ? 1 : 0;
  return c;
}

ScalarField ExtendedField::as_field() const {
  auto self = std::make_shared<const ExtendedField>(*this);
  ScalarField out;
  out.value = [self](Point p) { return self->value(p); };
  if (f_.has_gradient()) out.gradient = [self](Point p) { return self->gradient(p); };
  out.support_hint = hull_;
  out.label = "ext(" + f_.label + ")";
  return out;
}

ExtensionSetup make_extension_setup(const Domain& d, int min_level, double cutoff) {
  ExtensionSetup s;
  s.interior = std::make_shared<const WhitneyCovering>(build_whitney(d, CoveringSide::kInterior, min_level));
  s.exterior = std::make_shared<const WhitneyCovering>(build_whitney(d, CoveringSide::kExterior, min_level + 2));
  s.pu = std::make_shared<const PartitionOfUnity>(s.exterior);
  s.cutoff = cutoff > 0.0 ? cutoff : d.window_size();
  return s;
}

ExtendedField extend(ScalarField f, const ExtensionSetup& s, int quad_n) {
  return ExtendedField(std::move(f), s.interior, s.exterior, s.pu, s.cutoff, quad_n);
}

Lemma2Report lemma2_check(const ExtendedField& ef, int per_level, int quad_n) {
  const Domain& d = ef.domain();
  const WhitneyCovering& wint = ef.interior();
  Lemma2Report rep;
  rep.r0 = d.window_size();
  const auto nodes = d.boundary_quadrature(2);
  const int top = static_cast<int>(std::ceil(std::log2(rep.r0))) - 1;
  const int bottom = ef.exterior().min_level() + 2;
  std::vector<DyadicCube> cubes;
  for (int lvl = top; lvl >= bottom; --lvl) {
    std::set<DyadicCube> seen;
    for (int k = 0; k < per_level; ++k) {
      const std::size_t idx = (nodes.size() * (2 * k + 1)) / (2 * per_level);
      const DyadicCube q = DyadicCube::containing(nodes[idx].x, lvl);
      if (seen.count(q) || d.classify(q.box()) != BoxClass::kCut) continue;
      seen.insert(q);
      cubes.push_back(q);
    }
  }
  if (cubes.empty()) {
    throw EmptyReport("lemma2_check: no boundary cubes between the window scale and level " +
                      std::to_string(bottom) + "; use a finer covering");
  }
  const ScalarField ft = ef.as_field();
  std::vector<double> lhs(cubes.size());
  parallel_for(cubes.size(), [&](std::size_t k) {
    const GeneralCube g = cubes[k].general();
    const int n = 2 * quad_n;
    double mean = 0.0;
    {
      const Box b = g.box();
      const double h = g.side / n;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) mean += ft({b.lo.x + (i + 0.5) * h, b.lo.y + (j + 0.5) * h});
      }
      mean /= static_cast<double>(n) * n;
    }
    lhs[k] = cube_deviation(ft, g, mean, n) * g.area();
  });

  // Oscillation of f over 9/8 S, once per interior cube that is needed.
  std::vector<double> osc(wint.size(), -1.0);
  auto s_osc = [&](std::size_t i) {
    if (osc[i] < 0.0) {
      const GeneralCube s = dilate(wint.cubes()[i], 9.0 / 8.0);
      const int n = std::max(8, quad_n / 2);
      osc[i] = cube_deviation(ef.base(), s, cube_mean(ef.base(), s, n), n) * s.area();
    }
    return osc[i];
  };

  for (int c : {2, 4, 8}) {
    rep.tried.push_back(c);
    std::vector<Lemma2Row> rows;
    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < cubes.size(); ++k) {
      const Box cq = dilate(cubes[k], c).box();
      double rhs = 0.0;
      for (std::size_t i = 0; i < wint.size(); ++i) {
        const Box sb = wint.cubes()[i].box();
        if (sb.lo.x >= cq.lo.x && sb.hi.x <= cq.hi.x && sb.lo.y >= cq.lo.y && sb.hi.y <= cq.hi.y) rhs += s_osc(i);
      }
      Lemma2Row row{cubes[k], lhs[k], rhs, 0.0};
      const double tiny = 1e-13 * cubes[k].area();
      if (rhs > tiny) {
        row.ratio = lhs[k] / rhs;
      } else if (lhs[k] > tiny) {
        row.ratio = std::numeric_limits<double>::infinity();
      }
      worst = std::max(worst, row.ratio);
      if (!(row.ratio <= kLemma2Bound)) ok = false;
      rows.push_back(row);
    }
    rep.constants.push_back(worst);
    if (ok && rep.c == 0) {
      rep.c = c;
      rep.C = worst;
      rep.rows = std::move(rows);
      break;
    }
    if (c == 8 && rep.c == 0) rep.rows = std::move(rows);
  }
  return rep;
}

}  // namespace czt
