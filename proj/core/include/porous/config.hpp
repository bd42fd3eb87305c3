#pragma once

#include <optional>
#include <string>
#include <vector>

#include "porous/design.hpp"
#include "porous/grid.hpp"

namespace porous {

enum class ModelKind { Darcy, BrinkmanMain, BrinkmanTraction };

struct PermeabilityConfig {
  enum class Kind { Uniform, Inline, File };
  Kind kind = Kind::Uniform;
  double uniform = 1.0;
  std::vector<double> values;
  std::string file;
};

struct BodyForceConfig {
  enum class Kind { None, Vector, Potential };
  Kind kind = Kind::None;
  double bx = 0.0, by = 0.0;                // vector form (per unit mass, scaled by rho)
  std::optional<double> potential_uniform;  // potential form
  std::vector<double> potential_values;
};

struct BoundaryConfig {
  BcKind kind = BcKind::Pressure;
  Profile primary;
  Profile secondary;
};

struct DesignBlock {
  Scenario scenario;
  int max_iterations = 200;
  double move_limit = 0.2;
};

/// Schema-validated run configuration. Unknown keys are rejected; all
/// violations are reported together, each with its field path.
struct RunConfig {
  ModelKind model = ModelKind::Darcy;
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  double mu = 1.0;
  double rho = 1.0;
  PermeabilityConfig permeability;
  BodyForceConfig body_force;
  BoundaryConfig left, right, bottom, top;
  std::optional<DesignBlock> design;
  double solver_tolerance = 1e-10;
  int solver_max_iterations = 0;
};

/// Parses and validates UTF-8 JSON text. Throws ConfigError carrying every
/// schema violation found (syntax errors report the parse position).
RunConfig parse_config(const std::string& json_text);

/// Builds the forward problem. Permeability files are resolved relative to
/// base_dir; file problems surface as ConfigError.
AnyProblem build_problem(const RunConfig& cfg,
                         const std::string& base_dir = ".");

const char* to_string(ModelKind kind);

}  // namespace porous
