#include "czt/io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numbers>

#include "czt/errors.hpp"

namespace czt {

void throw_config_missing(const std::string& key) { throw ConfigError("config: missing key '" + key + "'"); }

void throw_config_type(const std::string& key, const std::string& what) {
  throw ConfigError("config: bad value for '" + key + "': " + what);
}

json to_json(const Modulus& m) {
  json j;
  j["family"] = to_string(m.family());
  switch (m.family()) {
    case ModulusFamily::kConstant:
      break;
    case ModulusFamily::kPower:
    case ModulusFamily::kLogPower:
      j["alpha"] = m.alpha();
      break;
    case ModulusFamily::kTabulated:
      j["t"] = std::vector<double>(m.sample_t().begin(), m.sample_t().end());
      j["w"] = std::vector<double>(m.sample_w().begin(), m.sample_w().end());
      j["epsilon"] = m.epsilon();
      break;
  }
  return j;
}

Modulus modulus_from_json(const json& j) {
  if (j.is_string()) return modulus_from_json(json{{"family", j}});
  const auto family = required<std::string>(j, "family");
  if (family == "constant") return Modulus::constant();
  if (family == "power") return Modulus::power(required<double>(j, "alpha"));
  if (family == "log_power") return Modulus::log_power(required<double>(j, "alpha"));
  if (family == "tabulated") {
    return Modulus::tabulated(required<std::vector<double>>(j, "t"), required<std::vector<double>>(j, "w"),
                              optional<double>(j, "epsilon", 0.5));
  }
  throw ConfigError("config: unknown modulus family '" + family + "'");
}

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigError("config: a point is an array [x, y], got " + j.dump());
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

json to_json(const Domain& d) {
  json j;
  switch (d.kind()) {
    case DomainKind::kBall:
      j["type"] = "ball";
      j["center"] = {d.ball_center().x, d.ball_center().y};
      j["radius"] = d.ball_radius();
      break;
    case DomainKind::kPolygon: {
      j["type"] = "polygon";
      json v = json::array();
      for (Point p : d.vertices()) v.push_back({p.x, p.y});
      j["vertices"] = v;
      break;
    }
    case DomainKind::kGraphDisk: {
      const GraphDiskShape& g = *d.graph_shape();
      j["type"] = "graph_disk";
      j["modulus"] = to_json(g.modulus());
      j["c0"] = g.c0();
      j["r0"] = g.r0();
      j["disk_radius"] = g.disk_radius();
      break;
    }
  }
  return j;
}

Domain domain_from_json(const json& j) {
  const auto type = required<std::string>(j, "type");
  if (type == "ball") {
    return Domain::ball(point_from_json(optional<json>(j, "center", json{0.0, 0.0})), required<double>(j, "radius"));
  }
  if (type == "polygon") {
    const json& v = j.contains("vertices") ? j.at("vertices") : json();
    if (!v.is_array()) throw_config_missing("vertices");
    std::vector<Point> pts;
    for (const auto& p : v) pts.push_back(point_from_json(p));
    return Domain::polygon(std::move(pts));
  }
  if (type == "graph_disk") {
    if (!j.contains("modulus")) throw_config_missing("modulus");
    return Domain::graph_disk(modulus_from_json(j.at("modulus")), required<double>(j, "c0"),
                              required<double>(j, "r0"), optional<double>(j, "disk_radius", 0.5));
  }
  throw ConfigError("config: unknown domain type '" + type + "'");
}

json to_json(const Kernel& k) {
  json j;
  j["name"] = k.name();
  if (k.tabulated()) {
    constexpr int n = 256;
    std::vector<double> s(n);
    for (int i = 0; i < n; ++i) s[i] = k.omega(2.0 * std::numbers::pi * i / n);
    j["samples"] = s;
  }
  return j;
}

Kernel kernel_from_json(const json& j) {
  if (j.is_string()) return Kernel::by_name(j.get<std::string>());
  const auto name = required<std::string>(j, "name");
  if (j.contains("samples")) return Kernel::from_samples(required<std::vector<double>>(j, "samples"), name);
  return Kernel::by_name(name);
}

std::string format_double(double v) {
  std::array<char, 32> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::ostream& os, const std::string& schema, std::vector<std::string> columns, int version)
    : os_(os), columns_(columns.size()) {
  os_ << "# czt-csv schema=" << schema << " version=" << version << "\n";
  for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
  os_ << "\n";
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw ConfigError("csv: row width does not match the header");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) os_ << ',';
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, double>) {
            os_ << format_double(c);
          } else if constexpr (std::is_same_v<T, long long>) {
            os_ << c;
          } else {
            os_ << c;
          }
        },
        cells[i]);
  }
  os_ << '\n';
  ++rows_;
}

}  // namespace czt
