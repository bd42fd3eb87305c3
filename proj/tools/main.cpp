#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "porous/config.hpp"
#include "porous/driver.hpp"
#include "porous/log.hpp"

namespace {

int run(const std::string& subcommand, const std::string& config_path,
        const porous::DispatchOptions& opts_in) {
  std::ifstream in(config_path);
  if (!in) {
    porous::log::error("cannot read config file '" + config_path + "'");
    return 2;
  }
  std::ostringstream buf;
  buf << in.rdbuf();

  porous::RunConfig cfg;
  try {
    cfg = porous::parse_config(buf.str());
  } catch (const porous::ConfigError& e) {
    std::fprintf(stderr, "%s\n", e.what());
    return 2;
  }

  porous::DispatchOptions opts = opts_in;
  opts.config_dir =
      std::filesystem::path(config_path).parent_path().string();
  if (opts.config_dir.empty()) opts.config_dir = ".";
  return porous::dispatch(subcommand, cfg, opts);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Darcy / Darcy-Brinkman porous-media flow, adjoint sensitivities of "
      "the total dissipation rate, and dissipation-driven material design"};
  app.require_subcommand(1);

  std::string config_path;
  porous::DispatchOptions opts;

  const std::vector<std::string> subcommands = {
      "solve",    "adjoint",  "sensitivity", "classify",
      "optimize", "table1",   "verify"};
  const std::vector<std::string> descriptions = {
      "solve the forward problem and write the fields",
      "solve the adjoint problem of the total dissipation rate",
      "compute the sensitivity density and the gradient triple check",
      "report which boundary-value-problem class the configuration is in",
      "run the material-design extremization",
      "run all eight design scenarios on the canonical problem pair",
      "run the gradient triple check and the randomized sign suite"};

  for (std::size_t s = 0; s < subcommands.size(); ++s) {
    CLI::App* sub = app.add_subcommand(subcommands[s], descriptions[s]);
    sub->add_option("--config", config_path, "JSON run configuration")
        ->required();
    sub->add_option("--out", opts.out_dir, "output directory")
        ->capture_default_str();
    sub->add_option("--format", opts.format, "field format: csv | vtk")
        ->check(CLI::IsMember({"csv", "vtk"}))
        ->capture_default_str();
    sub->add_option("--seed", opts.seed, "seed for randomized verify suites")
        ->capture_default_str();
    sub->add_option("--threads", opts.threads,
                    "concurrent solves for finite-difference gradients")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }

  CLI11_PARSE(app, argc, argv);
  return run(app.get_subcommands().front()->get_name(), config_path, opts);
}
