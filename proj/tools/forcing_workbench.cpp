#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "forcing/cli.hpp"

int main(int argc, char** argv) {
  forcing::CliOptions o;
  std::string format = "human";
  std::size_t depth = 0;

  CLI::App app{"Audits of finite forcing algebras, embeddings, iterations and model traces"};
  app.add_option("--workspace", o.workspace, "workspace file (JSON)")->required();
  app.add_option("--command", o.exec.command, "complete, retraction-laws, bvm-audit, twostep-iso, iterate, "
                                              "sg-audit, gallery or verify-all")
      ->capture_default_str();
  app.add_option("--seed", o.exec.seed, "seed for sampled audits")->capture_default_str();
  auto* depth_opt = app.add_option("--depth", depth, "depth for iteration and gallery audits");
  app.add_option("--format", format, "human or json")->check(CLI::IsMember({"human", "json"}))->capture_default_str();
  app.add_option("--exhaustive-max-atoms", o.exec.exhaustive_max_atoms,
                 "enumerate all elements when the target has at most this many atoms")
      ->capture_default_str();
  app.add_flag("--timings", o.timings, "include wall-clock seconds in JSON reports");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (*depth_opt) o.exec.depth = depth;
  o.format = format == "json" ? forcing::ReportFormat::Json : forcing::ReportFormat::Human;
  return forcing::run_cli(o, std::cout, std::cerr);
}
