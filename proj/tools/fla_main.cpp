#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "fla/runner.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Finsler geometry on Lie algebroids: compute and verify the "
               "derived geometric objects of a scenario"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string format = "text";
  std::string out_path;
  std::string kind;
  std::string projective;
  bool want_torsion = false, want_curvature = false, want_ricci = false;
  std::optional<std::uint64_t> seed;
  std::optional<int> points;
  std::optional<double> tol;

  // Environment defaults; explicit flags take precedence.
  if (const char* env = std::getenv("FLA_SEED")) seed = std::strtoull(env, nullptr, 10);
  if (const char* env = std::getenv("FLA_TOL")) tol = std::strtod(env, nullptr);

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", scenario_path, "scenario file")->required();
    sub->add_option("--seed", seed, "sample-point seed");
    sub->add_option("--points", points, "number of sample points");
    sub->add_option("--tol", tol, "identity tolerance");
    sub->add_option("--format", format, "json|text")->check(CLI::IsMember({"json", "text"}));
    sub->add_option("--out", out_path, "write the report to a file");
  };

  const std::vector<std::string> names = {
      "verify-algebroid", "verify-finsler", "spray",    "barthel",        "endo-report",
      "connection",       "douglas",        "classify", "berwald-derivative", "identity-suite"};
  for (const auto& name : names) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub);
    if (name == "connection") {
      sub->add_option("--kind", kind, "berwald-type|yano-type|berwald|cartan|chern-rund|"
                                      "hashiguchi|ichijyo")
          ->required();
      sub->add_flag("--torsion", want_torsion, "dump torsion components");
      sub->add_flag("--curvature", want_curvature, "dump curvature components");
      sub->add_flag("--ricci", want_ricci, "dump the mixed Ricci tensor");
    } else if (name == "classify") {
      sub->add_option("--kind", kind, "generalized-berwald|berwald|minkowski|wagner")
          ->required();
    } else if (name == "douglas") {
      sub->add_option("--projective", projective,
                      "projective-change factor to test invariance against");
    }
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const CLI::App* sub = app.get_subcommands().front();
    const fla::Command cmd = fla::parse_command(sub->get_name());
    const fla::Scenario sc = fla::load_scenario(scenario_path);

    fla::RunOptions opt;
    opt.kind = kind;
    opt.torsion = want_torsion;
    opt.curvature = want_curvature;
    opt.ricci = want_ricci;
    if (!projective.empty()) opt.projective = projective;
    opt.seed = seed;
    opt.points = points;
    opt.tol = tol;

    const fla::Report rep = fla::run(cmd, sc, opt);
    const std::string payload = format == "json" ? fla::emit_json(rep) : fla::emit_text(rep);
    if (!out_path.empty()) {
      std::ofstream out(out_path, std::ios::binary);
      if (!out) {
        std::cerr << "error: cannot open output file " << out_path << "\n";
        return 2;
      }
      out << payload;
      if (format == "json") out << '\n';
    } else {
      std::cout << payload;
      if (format == "json") std::cout << '\n';
    }
    return rep.all_pass() ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
