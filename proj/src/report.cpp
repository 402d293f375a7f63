#include "fla/report.hpp"

#include <cstdio>
#include <sstream>

namespace fla {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void json_string(std::ostream& os, const std::string& s) {
  os << '"';
  for (char c : s) {
    switch (c) {
      case '"': os << "\\\""; break;
      case '\\': os << "\\\\"; break;
      case '\n': os << "\\n"; break;
      case '\t': os << "\\t"; break;
      default: os << c;
    }
  }
  os << '"';
}

void json_array(std::ostream& os, const std::vector<double>& v) {
  os << '[';
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) os << ',';
    os << num(v[i]);
  }
  os << ']';
}

}  // namespace

std::string emit_json(const Report& rep) {
  std::ostringstream os;
  os << "{\"scenario\":";
  json_string(os, rep.scenario);
  os << ",\"command\":";
  json_string(os, rep.command);
  os << ",\"seed\":" << rep.seed;

  os << ",\"points\":[";
  for (std::size_t i = 0; i < rep.points.size(); ++i) {
    if (i) os << ',';
    os << "{\"x\":";
    json_array(os, rep.points[i].x);
    os << ",\"y\":";
    json_array(os, rep.points[i].y);
    os << '}';
  }
  os << ']';

  os << ",\"checks\":[";
  for (std::size_t i = 0; i < rep.checks.size(); ++i) {
    const auto& c = rep.checks[i];
    if (i) os << ',';
    os << "{\"id\":";
    json_string(os, c.id);
    os << ",\"anchor\":";
    json_string(os, c.anchor);
    os << ",\"residual\":" << num(c.residual);
    os << ",\"tolerance\":" << num(c.tolerance);
    os << ",\"pass\":" << (c.pass ? "true" : "false") << '}';
  }
  os << ']';

  os << ",\"dumps\":[";
  for (std::size_t i = 0; i < rep.dumps.size(); ++i) {
    const auto& d = rep.dumps[i];
    if (i) os << ',';
    os << "{\"id\":";
    json_string(os, d.id);
    os << ",\"labels\":[";
    for (std::size_t k = 0; k < d.labels.size(); ++k) {
      if (k) os << ',';
      json_string(os, d.labels[k]);
    }
    os << "],\"values\":[";
    for (std::size_t k = 0; k < d.values.size(); ++k) {
      if (k) os << ',';
      json_array(os, d.values[k]);
    }
    os << "]}";
  }
  os << ']';

  os << ",\"pass\":" << (rep.all_pass() ? "true" : "false") << '}';
  return os.str();
}

std::string emit_text(const Report& rep) {
  std::ostringstream os;
  os << "scenario: " << rep.scenario << "\ncommand:  " << rep.command
     << "\nseed:     " << rep.seed << "\npoints:   " << rep.points.size() << "\n\n";
  std::size_t width = 4;
  for (const auto& c : rep.checks) width = std::max(width, c.id.size());
  for (const auto& c : rep.checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.id;
    os << std::string(width - c.id.size() + 2, ' ');
    char buf[80];
    std::snprintf(buf, sizeof(buf), "residual=%-13.6g tol=%-10.3g", c.residual, c.tolerance);
    os << buf << "  " << c.anchor << '\n';
  }
  for (const auto& d : rep.dumps) {
    os << "\ndump " << d.id << ":\n";
    for (std::size_t p = 0; p < d.values.size(); ++p) {
      os << "  point " << p << ":";
      for (std::size_t k = 0; k < d.values[p].size(); ++k) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), " %s=%.6g", d.labels[k].c_str(), d.values[p][k]);
        os << buf;
      }
      os << '\n';
    }
  }
  os << '\n' << (rep.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES PRESENT") << '\n';
  return os.str();
}

}  // namespace fla
