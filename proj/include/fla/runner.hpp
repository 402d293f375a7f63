#ifndef FLA_RUNNER_HPP
#define FLA_RUNNER_HPP

#include <optional>
#include <string>

#include "fla/report.hpp"
#include "fla/scenario.hpp"

namespace fla {

enum class Command {
  verify_algebroid,
  verify_finsler,
  spray,
  barthel,
  endo_report,
  connection,
  douglas,
  berwald_derivative,
  classify,
  identity_suite,
};

struct RunOptions {
  std::string kind;  // connection: berwald-type|yano-type|berwald|cartan|
                     //   chern-rund|hashiguchi|ichijyo
                     // classify: generalized-berwald|berwald|minkowski|wagner
  bool torsion{false};
  bool curvature{false};
  bool ricci{false};
  std::optional<std::string> projective;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> tol;
};

Command parse_command(const std::string& name);
std::string command_name(Command cmd);

/// Runs a command against a scenario and assembles the report. Throws
/// ScenarioError when a required block is missing and propagates domain and
/// singular-matrix errors from evaluation.
Report run(Command cmd, const Scenario& sc, const RunOptions& opt = {});

}  // namespace fla

#endif  // FLA_RUNNER_HPP
