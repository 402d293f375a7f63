#include "fla/scenario.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace fla {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

std::string unquote(const std::string& v) {
  if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.substr(1, v.size() - 2);
  return v;
}

std::vector<int> key_indices(const std::string& key, std::size_t expected, int line_no,
                             const std::string& origin) {
  std::vector<int> out;
  std::stringstream ss(key);
  std::string part;
  std::getline(ss, part, '.');  // base name
  while (std::getline(ss, part, '.')) {
    try {
      out.push_back(std::stoi(part));
    } catch (const std::exception&) {
      throw ScenarioError(origin + ":" + std::to_string(line_no) +
                          ": malformed index in key '" + key + "'");
    }
  }
  if (out.size() != expected)
    throw ScenarioError(origin + ":" + std::to_string(line_no) + ": key '" + key +
                        "' expects " + std::to_string(expected) + " indices");
  return out;
}

struct RawEntry {
  std::string section;
  std::string key;
  std::string value;
  int line_no;
};

}  // namespace

Scenario parse_scenario(const std::string& text, const std::string& origin) {
  std::vector<RawEntry> entries;
  std::vector<std::string> sections_seen;
  {
    std::stringstream ss(text);
    std::string line, section;
    int line_no = 0;
    while (std::getline(ss, line)) {
      ++line_no;
      const std::string bare = trim(strip_comment(line));
      if (bare.empty()) continue;
      if (bare.front() == '[') {
        if (bare.back() != ']')
          throw ScenarioError(origin + ":" + std::to_string(line_no) + ": malformed section header");
        section = trim(bare.substr(1, bare.size() - 2));
        sections_seen.push_back(section);
        continue;
      }
      const auto eq = bare.find('=');
      if (eq == std::string::npos)
        throw ScenarioError(origin + ":" + std::to_string(line_no) + ": expected key = value");
      entries.push_back({section, trim(bare.substr(0, eq)), trim(bare.substr(eq + 1)), line_no});
    }
  }

  Scenario sc;

  // First pass: header values, so dimensions are known before expressions.
  for (const auto& e : entries) {
    if (!e.section.empty()) continue;
    if (e.key == "name") sc.name = unquote(e.value);
    else if (e.key == "m") sc.dims.m = std::stoi(e.value);
    else if (e.key == "n") sc.dims.n = std::stoi(e.value);
    else
      throw ScenarioError(origin + ":" + std::to_string(e.line_no) + ": unknown top-level key '" +
                          e.key + "'");
  }
  if (sc.dims.m <= 0 || sc.dims.n <= 0)
    throw ScenarioError(origin + ": scenario must declare positive dimensions m and n");

  const int m = sc.dims.m, n = sc.dims.n;
  auto parse_field = [&](const RawEntry& e) -> Expr {
    try {
      return parse_expr(unquote(e.value), sc.dims);
    } catch (const ParseError& pe) {
      throw ScenarioError(origin + ":" + std::to_string(e.line_no) + ": in field '" + e.key +
                          "' at offset " + std::to_string(pe.offset) + ": " + pe.what());
    }
  };

  std::vector<std::vector<Expr>> rho(static_cast<std::size_t>(m),
                                     std::vector<Expr>(static_cast<std::size_t>(n)));
  auto L = std::vector<std::vector<std::vector<Expr>>>(
      static_cast<std::size_t>(n),
      std::vector<std::vector<Expr>>(static_cast<std::size_t>(n),
                                     std::vector<Expr>(static_cast<std::size_t>(n))));
  auto Gamma = L;
  // An empty section still declares its block (a zero connection or zero
  // horizontal endomorphism is meaningful).
  bool has_gamma = false;
  for (const auto& s : sections_seen) {
    if (s == "connection") has_gamma = true;
    if (s == "horizontal") sc.has_horizontal = true;
    if (s == "semispray") sc.has_semispray = true;
  }
  sc.semispray.assign(static_cast<std::size_t>(n), Expr());
  sc.horizontal.assign(static_cast<std::size_t>(n),
                       std::vector<Expr>(static_cast<std::size_t>(n)));

  auto check_range = [&](const RawEntry& e, int idx, int limit) {
    if (idx < 1 || idx > limit)
      throw ScenarioError(origin + ":" + std::to_string(e.line_no) + ": index " +
                          std::to_string(idx) + " out of range in field '" + e.key + "'");
  };

  for (const auto& e : entries) {
    if (e.section.empty()) continue;
    if (e.section == "algebroid") {
      if (e.key.rfind("rho.", 0) == 0) {
        const auto idx = key_indices(e.key, 2, e.line_no, origin);
        check_range(e, idx[0], m);
        check_range(e, idx[1], n);
        rho[idx[0] - 1][idx[1] - 1] = parse_field(e);
      } else if (e.key.rfind("L.", 0) == 0) {
        const auto idx = key_indices(e.key, 3, e.line_no, origin);
        for (int k : idx) check_range(e, k, n);
        L[idx[0] - 1][idx[1] - 1][idx[2] - 1] = parse_field(e);
      } else {
        throw ScenarioError(origin + ":" + std::to_string(e.line_no) +
                            ": unknown algebroid key '" + e.key + "'");
      }
    } else if (e.section == "finsler") {
      if (e.key != "F")
        throw ScenarioError(origin + ":" + std::to_string(e.line_no) + ": unknown finsler key '" +
                            e.key + "'");
      sc.finsler_f = parse_field(e);
    } else if (e.section == "semispray") {
      const auto idx = key_indices(e.key, 1, e.line_no, origin);
      check_range(e, idx[0], n);
      sc.semispray[idx[0] - 1] = parse_field(e);
      sc.has_semispray = true;
    } else if (e.section == "horizontal") {
      const auto idx = key_indices(e.key, 2, e.line_no, origin);
      check_range(e, idx[0], n);
      check_range(e, idx[1], n);
      sc.horizontal[idx[0] - 1][idx[1] - 1] = parse_field(e);
      sc.has_horizontal = true;
    } else if (e.section == "connection") {
      const auto idx = key_indices(e.key, 3, e.line_no, origin);
      for (int k : idx) check_range(e, k, n);
      Gamma[idx[0] - 1][idx[1] - 1][idx[2] - 1] = parse_field(e);
      has_gamma = true;
    } else if (e.section == "scalars") {
      sc.scalars[e.key] = parse_field(e);
    } else if (e.section == "sampling") {
      if (e.key == "seed") sc.sampling.seed = std::stoull(e.value);
      else if (e.key == "points") sc.sampling.count = std::stoi(e.value);
      else if (e.key == "box") sc.sampling.box = std::stod(e.value);
      else if (e.key == "y_min") sc.sampling.y_min = std::stod(e.value);
      else if (e.key == "y_max") sc.sampling.y_max = std::stod(e.value);
      else
        throw ScenarioError(origin + ":" + std::to_string(e.line_no) + ": unknown sampling key '" +
                            e.key + "'");
    } else if (e.section == "tolerances") {
      if (e.key == "identity") {
        sc.tol.identity_abs = std::stod(e.value);
        sc.tol.identity_rel = sc.tol.identity_abs;
      } else if (e.key == "sym_vs_fd") {
        sc.tol.sym_vs_fd_rel = std::stod(e.value);
      } else {
        throw ScenarioError(origin + ":" + std::to_string(e.line_no) +
                            ": unknown tolerance key '" + e.key + "'");
      }
    } else {
      throw ScenarioError(origin + ":" + std::to_string(e.line_no) + ": unknown section '" +
                          e.section + "'");
    }
  }

  try {
    sc.algebroid = make_algebroid(m, n, std::move(rho), std::move(L), /*strict=*/false);
  } catch (const AlgebroidValidationError& err) {
    throw ScenarioError(origin + ": " + err.what());
  }
  if (has_gamma) {
    try {
      sc.gamma = make_linear_connection(n, std::move(Gamma));
    } catch (const AlgebroidValidationError& err) {
      throw ScenarioError(origin + ": " + err.what());
    }
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str(), path);
}

}  // namespace fla
