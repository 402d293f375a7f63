#ifndef FLA_SCENARIO_HPP
#define FLA_SCENARIO_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "fla/algebroid.hpp"
#include "fla/ichijyo.hpp"
#include "fla/sampling.hpp"
#include "fla/tolerances.hpp"

namespace fla {

struct ScenarioError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A scenario file: sectioned key-value text declaring the algebroid data and
/// any of the optional blocks. Expressions are quoted strings over the
/// variables x1..xm, y1..yn; indexed keys look like rho.1.2, L.3.1.2,
/// B.2.1, Gamma.2.1.3, S.1 (all indices 1-based).
struct Scenario {
  std::string name;
  Dims dims{0, 0};

  LieAlgebroid algebroid;

  std::optional<Expr> finsler_f;
  std::vector<Expr> semispray;                      // n components, if present
  std::vector<std::vector<Expr>> horizontal;        // B[upper][lower], if present
  std::optional<LinearConnectionE> gamma;
  std::map<std::string, Expr> scalars;              // f, ftilde, phi

  bool has_semispray{false};
  bool has_horizontal{false};

  SampleSpec sampling;
  Tolerances tol;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& origin = "<string>");

}  // namespace fla

#endif  // FLA_SCENARIO_HPP
