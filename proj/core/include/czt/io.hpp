#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

#include "czt/domain.hpp"
#include "czt/kernel.hpp"
#include "czt/moduli.hpp"

namespace czt {

using json = nlohmann::json;

// {"family":"constant"}, {"family":"power","alpha":0.5},
// {"family":"log_power","alpha":0.5},
// {"family":"tabulated","t":[...],"w":[...],"epsilon":0.5}.
json to_json(const Modulus& m);
Modulus modulus_from_json(const json& j);

// {"type":"ball","center":[x,y],"radius":r},
// {"type":"polygon","vertices":[[x,y],...]},
// {"type":"graph_disk","modulus":{...},"c0":c,"r0":r,"disk_radius":R}.
json to_json(const Domain& d);
Domain domain_from_json(const json& j);

// "beurling_re" or {"name":"beurling_re"}, or a sampled profile
// {"name":"mine","samples":[...]} (at least 256 equispaced angles).
json to_json(const Kernel& k);
Kernel kernel_from_json(const json& j);

Point point_from_json(const json& j);

[[noreturn]] void throw_config_missing(const std::string& key);
[[noreturn]] void throw_config_type(const std::string& key, const std::string& what);

// Throws ConfigError naming the key when it is missing or has the wrong type.
template <class T>
T required(const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw_config_missing(key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw_config_type(key, e.what());
  }
}

template <class T>
T optional(const json& j, const std::string& key, T fallback) {
  if (!j.is_object() || !j.contains(key) || j.at(key).is_null()) return fallback;
  return required<T>(j, key);
}

// Shortest decimal that reads back as v (std::to_chars).
std::string format_double(double v);

// Versioned CSV: a "# czt-csv schema=<name> version=<v>" line, the column
// names, then rows. Doubles are written with format_double.
class CsvWriter {
 public:
  using Cell = std::variant<double, long long, std::string>;

  CsvWriter(std::ostream& os, const std::string& schema, std::vector<std::string> columns, int version = 1);
  void row(const std::vector<Cell>& cells);
  std::size_t rows() const { return rows_; }

 private:
  std::ostream& os_;
  std::size_t columns_;
  std::size_t rows_ = 0;
};

}  // namespace czt
