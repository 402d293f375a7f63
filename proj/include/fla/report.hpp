#ifndef FLA_REPORT_HPP
#define FLA_REPORT_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fla/expr.hpp"

namespace fla {

struct CheckRecord {
  std::string id;       // stable machine identifier
  std::string anchor;   // human-readable identity being checked
  double residual{0.0};
  double tolerance{0.0};
  bool pass{false};
};

struct TensorDump {
  std::string id;
  std::vector<std::string> labels;              // one per component
  std::vector<std::vector<double>> values;      // [point][component]
};

struct Report {
  std::string scenario;
  std::string command;
  std::uint64_t seed{0};
  std::vector<Point> points;
  std::vector<CheckRecord> checks;
  std::vector<TensorDump> dumps;

  bool all_pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
};

/// JSON with a fixed key order and all numbers printed with 17 significant
/// digits, so identical reports serialize byte-identically.
std::string emit_json(const Report& rep);

/// Human summary table.
std::string emit_text(const Report& rep);

}  // namespace fla

#endif  // FLA_REPORT_HPP
