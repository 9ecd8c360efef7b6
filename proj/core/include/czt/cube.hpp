#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <functional>

#include "czt/point.hpp"

namespace czt {

// Cube with arbitrary center and side; the target of dilations sQ.
struct GeneralCube {
  Point center;
  double side = 1.0;

  Box box() const {
    const double h = 0.5 * side;
    return {{center.x - h, center.y - h}, {center.x + h, center.y + h}};
  }
  double diameter() const { return side * std::sqrt(2.0); }
  double area() const { return side * side; }
};

// Semi-open dyadic cube [i 2^k, (i+1) 2^k) x [j 2^k, (j+1) 2^k).
struct DyadicCube {
  int level = 0;
  std::int64_t i = 0;
  std::int64_t j = 0;

  double side() const { return std::ldexp(1.0, level); }
  double diameter() const { return side() * std::sqrt(2.0); }
  double area() const { return side() * side(); }
  Point lo() const { return {std::ldexp(static_cast<double>(i), level), std::ldexp(static_cast<double>(j), level)}; }
  Point center() const {
    return {std::ldexp(static_cast<double>(i) + 0.5, level), std::ldexp(static_cast<double>(j) + 0.5, level)};
  }
  Box box() const {
    const Point a = lo();
    const double s = side();
    return {a, {a.x + s, a.y + s}};
  }
  GeneralCube general() const { return {center(), side()}; }

  DyadicCube parent() const { return {level + 1, floor_div(i), floor_div(j)}; }
  DyadicCube child(int q) const { return {level - 1, 2 * i + (q & 1), 2 * j + ((q >> 1) & 1)}; }
  // Semi-open membership.
  bool contains(Point p) const {
    const Point a = lo();
    const double s = side();
    return p.x >= a.x && p.x < a.x + s && p.y >= a.y && p.y < a.y + s;
  }

  auto operator<=>(const DyadicCube&) const = default;

  static DyadicCube containing(Point p, int level) {
    return {level, static_cast<std::int64_t>(std::floor(std::ldexp(p.x, -level))),
            static_cast<std::int64_t>(std::floor(std::ldexp(p.y, -level)))};
  }

 private:
  static std::int64_t floor_div(std::int64_t v) { return v >= 0 ? v / 2 : -((-v + 1) / 2); }
};

inline GeneralCube dilate(const GeneralCube& q, double s) { return {q.center, q.side * s}; }
inline GeneralCube dilate(const DyadicCube& q, double s) { return dilate(q.general(), s); }

struct DyadicCubeHash {
  std::size_t operator()(const DyadicCube& c) const noexcept {
    std::uint64_t h = static_cast<std::uint64_t>(c.level) * 0x9E3779B97F4A7C15ULL;
    h ^= static_cast<std::uint64_t>(c.i) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    h ^= static_cast<std::uint64_t>(c.j) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace czt
