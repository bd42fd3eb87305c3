#pragma once

#include <cstdint>
#include <string>

#include "porous/config.hpp"

namespace porous {

struct DispatchOptions {
  std::string out_dir = "out";
  std::string format = "csv";  // csv | vtk
  std::uint64_t seed = 0;      // randomized verify suites
  int threads = 1;             // concurrent FD solves
  std::string config_dir = ".";  // base for relative paths in the config
};

/// Runs one subcommand against a validated configuration and writes its
/// artifacts under out_dir. Returns the process exit code: 0 success,
/// 2 configuration error, 3 compatibility violation, 4 solver
/// non-convergence, 5 internal invariant failure. No artifact is written
/// before validation and compatibility checks pass.
int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const DispatchOptions& opts);

}  // namespace porous
