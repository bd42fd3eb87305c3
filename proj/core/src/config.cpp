#include "porous/config.hpp"

#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <set>
#include <string>

#include "porous/output.hpp"

namespace porous {

namespace {

using nlohmann::json;

class Validator {
 public:
  std::vector<std::string> violations;

  void fail(const std::string& path, const std::string& msg) {
    violations.push_back(path + ": " + msg);
  }

  bool require_object(const json& j, const std::string& path) {
    if (!j.is_object()) {
      fail(path, "must be an object");
      return false;
    }
    return true;
  }

  void check_keys(const json& j, const std::string& path,
                  const std::set<std::string>& allowed) {
    if (!j.is_object()) return;
    for (const auto& item : j.items()) {
      if (allowed.find(item.key()) == allowed.end()) {
        fail(path.empty() ? item.key() : path + "." + item.key(),
             "unknown key");
      }
    }
  }

  std::optional<double> number(const json& j, const std::string& path) {
    if (!j.is_number()) {
      fail(path, "must be a number");
      return std::nullopt;
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return v;
  }

  std::optional<int> integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) {
      fail(path, "must be an integer");
      return std::nullopt;
    }
    return j.get<int>();
  }

  std::optional<Profile> profile(const json& j, const std::string& path,
                                 int expected_len) {
    if (j.is_number()) {
      return Profile(j.get<double>());
    }
    if (j.is_array()) {
      std::vector<double> values;
      for (const auto& e : j) {
        if (!e.is_number()) {
          fail(path, "profile entries must be numbers");
          return std::nullopt;
        }
        values.push_back(e.get<double>());
      }
      if (expected_len > 0 &&
          static_cast<int>(values.size()) != expected_len) {
        fail(path, "profile has " + std::to_string(values.size()) +
                       " entries, side has " + std::to_string(expected_len) +
                       " faces");
        return std::nullopt;
      }
      return Profile(std::move(values));
    }
    fail(path, "must be a number or an array of numbers");
    return std::nullopt;
  }
};

BoundaryConfig parse_boundary(Validator& v, const json& j,
                              const std::string& path, ModelKind model,
                              int side_faces) {
  BoundaryConfig bc;
  if (!v.require_object(j, path)) return bc;
  if (!j.contains("type") || !j.at("type").is_string()) {
    v.fail(path + ".type", "required string");
    return bc;
  }
  const std::string type = j.at("type").get<std::string>();

  auto get_profile = [&](const char* key, bool required) {
    if (!j.contains(key)) {
      if (required) v.fail(path + "." + key, "required");
      return Profile(0.0);
    }
    auto p = v.profile(j.at(key), path + "." + key, side_faces);
    return p ? *p : Profile(0.0);
  };

  if (type == "pressure") {
    if (model == ModelKind::BrinkmanTraction) {
      v.fail(path + ".type",
             "pressure conditions are not available under the traction form");
    }
    bc.kind = BcKind::Pressure;
    v.check_keys(j, path, {"type", "value", "tangential"});
    bc.primary = get_profile("value", true);
    if (j.contains("tangential") && model == ModelKind::Darcy) {
      v.fail(path + ".tangential",
             "tangential velocity data applies to the Brinkman model only");
    }
    bc.secondary = get_profile("tangential", false);
  } else if (type == "normal_velocity") {
    if (model != ModelKind::Darcy) {
      v.fail(path + ".type",
             "normal_velocity applies to the Darcy model only (use velocity)");
    }
    bc.kind = BcKind::NormalVelocity;
    v.check_keys(j, path, {"type", "value"});
    bc.primary = get_profile("value", true);
  } else if (type == "velocity") {
    if (model == ModelKind::Darcy) {
      v.fail(path + ".type",
             "velocity (both components) applies to the Brinkman model only "
             "(use normal_velocity)");
    }
    bc.kind = BcKind::FullVelocity;
    v.check_keys(j, path, {"type", "vx", "vy"});
    bc.primary = get_profile("vx", true);
    bc.secondary = get_profile("vy", true);
  } else if (type == "traction") {
    if (model != ModelKind::BrinkmanTraction) {
      v.fail(path + ".type",
             "traction conditions require model brinkman_traction");
    }
    bc.kind = BcKind::Traction;
    v.check_keys(j, path, {"type", "tx", "ty"});
    bc.primary = get_profile("tx", true);
    bc.secondary = get_profile("ty", true);
  } else {
    v.fail(path + ".type", "unknown boundary type '" + type + "'");
  }
  return bc;
}

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Darcy: return "darcy";
    case ModelKind::BrinkmanMain: return "brinkman";
    default: return "brinkman_traction";
  }
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError({std::string("JSON syntax: ") + e.what()});
  }

  Validator v;
  RunConfig cfg;
  if (!v.require_object(j, "")) throw ConfigError(std::move(v.violations));
  v.check_keys(j, "",
               {"model", "grid", "fluid", "permeability", "body_force",
                "boundaries", "design", "solver"});

  // model
  if (!j.contains("model") || !j.at("model").is_string()) {
    v.fail("model", "required string: darcy | brinkman | brinkman_traction");
  } else {
    const std::string m = j.at("model").get<std::string>();
    if (m == "darcy") {
      cfg.model = ModelKind::Darcy;
    } else if (m == "brinkman") {
      cfg.model = ModelKind::BrinkmanMain;
    } else if (m == "brinkman_traction") {
      cfg.model = ModelKind::BrinkmanTraction;
    } else {
      v.fail("model", "unknown model '" + m + "'");
    }
  }

  // grid
  if (!j.contains("grid")) {
    v.fail("grid", "required block");
  } else if (v.require_object(j.at("grid"), "grid")) {
    const json& gj = j.at("grid");
    v.check_keys(gj, "grid", {"nx", "ny", "lx", "ly"});
    for (const char* key : {"nx", "ny"}) {
      if (!gj.contains(key)) {
        v.fail(std::string("grid.") + key, "required");
        continue;
      }
      auto n = v.integer(gj.at(key), std::string("grid.") + key);
      if (n && *n < 1) v.fail(std::string("grid.") + key, "must be >= 1");
      if (n) (std::string(key) == "nx" ? cfg.nx : cfg.ny) = *n;
    }
    for (const char* key : {"lx", "ly"}) {
      if (!gj.contains(key)) {
        v.fail(std::string("grid.") + key, "required");
        continue;
      }
      auto x = v.number(gj.at(key), std::string("grid.") + key);
      if (x && !(*x > 0.0)) {
        v.fail(std::string("grid.") + key, "must be positive");
      }
      if (x) (std::string(key) == "lx" ? cfg.lx : cfg.ly) = *x;
    }
  }

  // fluid
  if (!j.contains("fluid")) {
    v.fail("fluid", "required block");
  } else if (v.require_object(j.at("fluid"), "fluid")) {
    const json& fj = j.at("fluid");
    v.check_keys(fj, "fluid", {"mu", "rho"});
    if (!fj.contains("mu")) {
      v.fail("fluid.mu", "required");
    } else if (auto mu = v.number(fj.at("mu"), "fluid.mu")) {
      if (!(*mu > 0.0)) {
        v.fail("fluid.mu", "must be positive");
      } else {
        cfg.mu = *mu;
      }
    }
    if (fj.contains("rho")) {
      if (auto rho = v.number(fj.at("rho"), "fluid.rho")) {
        if (!(*rho > 0.0)) {
          v.fail("fluid.rho", "must be positive");
        } else {
          cfg.rho = *rho;
        }
      }
    }
  }

  // permeability
  if (!j.contains("permeability")) {
    v.fail("permeability", "required block");
  } else if (v.require_object(j.at("permeability"), "permeability")) {
    const json& kj = j.at("permeability");
    v.check_keys(kj, "permeability", {"uniform", "values", "file"});
    const int given = static_cast<int>(kj.contains("uniform")) +
                      static_cast<int>(kj.contains("values")) +
                      static_cast<int>(kj.contains("file"));
    if (given != 1) {
      v.fail("permeability",
             "exactly one of uniform | values | file is required");
    } else if (kj.contains("uniform")) {
      cfg.permeability.kind = PermeabilityConfig::Kind::Uniform;
      if (auto x = v.number(kj.at("uniform"), "permeability.uniform")) {
        if (!(*x > 0.0)) {
          v.fail("permeability.uniform", "must be positive");
        } else {
          cfg.permeability.uniform = *x;
        }
      }
    } else if (kj.contains("values")) {
      cfg.permeability.kind = PermeabilityConfig::Kind::Inline;
      if (!kj.at("values").is_array()) {
        v.fail("permeability.values", "must be an array");
      } else {
        for (const auto& e : kj.at("values")) {
          if (!e.is_number() || !(e.get<double>() > 0.0)) {
            v.fail("permeability.values", "entries must be positive numbers");
            break;
          }
          cfg.permeability.values.push_back(e.get<double>());
        }
        if (cfg.nx > 0 && cfg.ny > 0 &&
            static_cast<int>(cfg.permeability.values.size()) !=
                cfg.nx * cfg.ny) {
          v.fail("permeability.values",
                 "needs nx*ny = " + std::to_string(cfg.nx * cfg.ny) +
                     " entries, got " +
                     std::to_string(cfg.permeability.values.size()));
        }
      }
    } else {
      cfg.permeability.kind = PermeabilityConfig::Kind::File;
      if (!kj.at("file").is_string()) {
        v.fail("permeability.file", "must be a path string");
      } else {
        cfg.permeability.file = kj.at("file").get<std::string>();
      }
    }
  }

  // body force (optional)
  if (j.contains("body_force")) {
    const json& bj = j.at("body_force");
    if (v.require_object(bj, "body_force")) {
      v.check_keys(bj, "body_force",
                   {"kind", "bx", "by", "uniform", "values"});
      const std::string kind =
          bj.contains("kind") && bj.at("kind").is_string()
              ? bj.at("kind").get<std::string>()
              : (v.fail("body_force.kind",
                        "required string: none | vector | potential"),
                 std::string("none"));
      if (kind == "none") {
        cfg.body_force.kind = BodyForceConfig::Kind::None;
      } else if (kind == "vector") {
        cfg.body_force.kind = BodyForceConfig::Kind::Vector;
        for (const char* key : {"bx", "by"}) {
          if (!bj.contains(key)) {
            v.fail(std::string("body_force.") + key, "required");
            continue;
          }
          if (auto x = v.number(bj.at(key), std::string("body_force.") + key)) {
            (std::string(key) == "bx" ? cfg.body_force.bx
                                      : cfg.body_force.by) = *x;
          }
        }
      } else if (kind == "potential") {
        cfg.body_force.kind = BodyForceConfig::Kind::Potential;
        const bool has_uniform = bj.contains("uniform");
        const bool has_values = bj.contains("values");
        if (has_uniform == has_values) {
          v.fail("body_force", "potential needs exactly one of uniform | values");
        } else if (has_uniform) {
          if (auto x = v.number(bj.at("uniform"), "body_force.uniform")) {
            cfg.body_force.potential_uniform = *x;
          }
        } else {
          if (!bj.at("values").is_array()) {
            v.fail("body_force.values", "must be an array");
          } else {
            for (const auto& e : bj.at("values")) {
              if (!e.is_number()) {
                v.fail("body_force.values", "entries must be numbers");
                break;
              }
              cfg.body_force.potential_values.push_back(e.get<double>());
            }
            if (cfg.nx > 0 && cfg.ny > 0 &&
                static_cast<int>(cfg.body_force.potential_values.size()) !=
                    cfg.nx * cfg.ny) {
              v.fail("body_force.values",
                     "needs nx*ny entries (cell potential)");
            }
          }
        }
      } else {
        v.fail("body_force.kind", "unknown kind '" + kind + "'");
      }
    }
  }

  // boundaries
  if (!j.contains("boundaries")) {
    v.fail("boundaries", "required block");
  } else if (v.require_object(j.at("boundaries"), "boundaries")) {
    const json& bj = j.at("boundaries");
    v.check_keys(bj, "boundaries", {"left", "right", "bottom", "top"});
    struct SideEntry {
      const char* name;
      BoundaryConfig* target;
      int faces;
    };
    const SideEntry sides[4] = {{"left", &cfg.left, cfg.ny},
                                {"right", &cfg.right, cfg.ny},
                                {"bottom", &cfg.bottom, cfg.nx},
                                {"top", &cfg.top, cfg.nx}};
    for (const auto& s : sides) {
      if (!bj.contains(s.name)) {
        v.fail(std::string("boundaries.") + s.name, "required");
        continue;
      }
      *s.target = parse_boundary(v, bj.at(s.name),
                                 std::string("boundaries.") + s.name,
                                 cfg.model, s.faces);
    }
  }

  // design (optional)
  if (j.contains("design")) {
    const json& dj = j.at("design");
    if (v.require_object(dj, "design")) {
      v.check_keys(dj, "design",
                   {"sense", "bound", "volume_fraction", "k_low", "k_high",
                    "q", "max_iterations", "move_limit", "filter"});
      DesignBlock block;
      if (!dj.contains("sense") || !dj.at("sense").is_string()) {
        v.fail("design.sense", "required string: maximize | minimize");
      } else {
        const std::string s = dj.at("sense").get<std::string>();
        if (s == "maximize") {
          block.scenario.sense = Scenario::Sense::Maximize;
        } else if (s == "minimize") {
          block.scenario.sense = Scenario::Sense::Minimize;
        } else {
          v.fail("design.sense", "unknown sense '" + s + "'");
        }
      }
      if (!dj.contains("bound") || !dj.at("bound").is_string()) {
        v.fail("design.bound", "required string: high | low");
      } else {
        const std::string b = dj.at("bound").get<std::string>();
        if (b == "high") {
          block.scenario.bounded_material = Scenario::Bound::HighPermeability;
        } else if (b == "low") {
          block.scenario.bounded_material = Scenario::Bound::LowPermeability;
        } else {
          v.fail("design.bound", "unknown bound '" + b + "'");
        }
      }
      auto design_number = [&](const char* key, double* out, bool required) {
        if (!dj.contains(key)) {
          if (required) v.fail(std::string("design.") + key, "required");
          return;
        }
        if (auto x = v.number(dj.at(key), std::string("design.") + key)) {
          *out = *x;
        }
      };
      design_number("volume_fraction", &block.scenario.volume_fraction, true);
      design_number("k_low", &block.scenario.k_low, true);
      design_number("k_high", &block.scenario.k_high, true);
      design_number("q", &block.scenario.q, false);
      design_number("move_limit", &block.move_limit, false);
      if (dj.contains("filter")) {
        if (!dj.at("filter").is_boolean()) {
          v.fail("design.filter", "must be a boolean");
        } else {
          block.scenario.smoothing_filter = dj.at("filter").get<bool>();
        }
      }
      if (dj.contains("max_iterations")) {
        if (auto n = v.integer(dj.at("max_iterations"),
                               "design.max_iterations")) {
          if (*n < 1) {
            v.fail("design.max_iterations", "must be >= 1");
          } else {
            block.max_iterations = *n;
          }
        }
      }
      if (!(block.scenario.volume_fraction > 0.0 &&
            block.scenario.volume_fraction < 1.0)) {
        v.fail("design.volume_fraction", "must lie in (0,1)");
      }
      if (!(block.scenario.k_low > 0.0)) {
        v.fail("design.k_low", "must be positive");
      } else if (!(block.scenario.k_high > block.scenario.k_low)) {
        v.fail("design.k_high", "must exceed k_low");
      }
      if (!(block.scenario.q > 0.0)) v.fail("design.q", "must be positive");
      if (!(block.move_limit > 0.0 && block.move_limit <= 1.0)) {
        v.fail("design.move_limit", "must lie in (0,1]");
      }
      cfg.design = block;
    }
  }

  // solver (optional)
  if (j.contains("solver")) {
    const json& sj = j.at("solver");
    if (v.require_object(sj, "solver")) {
      v.check_keys(sj, "solver", {"tolerance", "max_iterations"});
      if (sj.contains("tolerance")) {
        if (auto t = v.number(sj.at("tolerance"), "solver.tolerance")) {
          if (!(*t > 0.0)) {
            v.fail("solver.tolerance", "must be positive");
          } else {
            cfg.solver_tolerance = *t;
          }
        }
      }
      if (sj.contains("max_iterations")) {
        if (auto n = v.integer(sj.at("max_iterations"),
                               "solver.max_iterations")) {
          if (*n < 0) {
            v.fail("solver.max_iterations", "must be >= 0");
          } else {
            cfg.solver_max_iterations = *n;
          }
        }
      }
    }
  }

  if (!v.violations.empty()) throw ConfigError(std::move(v.violations));
  return cfg;
}

AnyProblem build_problem(const RunConfig& cfg, const std::string& base_dir) {
  const StaggeredGrid grid = make_grid(cfg.nx, cfg.ny, cfg.lx, cfg.ly);

  CellField k(grid);
  switch (cfg.permeability.kind) {
    case PermeabilityConfig::Kind::Uniform:
      for (double& v : k.values) v = cfg.permeability.uniform;
      break;
    case PermeabilityConfig::Kind::Inline:
      k.values = cfg.permeability.values;
      break;
    case PermeabilityConfig::Kind::File: {
      const std::filesystem::path path =
          std::filesystem::path(base_dir) / cfg.permeability.file;
      try {
        k = read_cell_field_csv(path.string(), grid);
      } catch (const Error& e) {
        throw ConfigError({std::string("permeability.file: ") + e.what()});
      }
      for (double v : k.values) {
        if (!(v > 0.0)) {
          throw ConfigError(
              {"permeability.file: field contains nonpositive values"});
        }
      }
      break;
    }
  }

  BodyForce body;
  switch (cfg.body_force.kind) {
    case BodyForceConfig::Kind::None:
      body = BodyForce::none();
      break;
    case BodyForceConfig::Kind::Vector: {
      FaceField f(grid);
      for (double& v : f.x) v = cfg.rho * cfg.body_force.bx;
      for (double& v : f.y) v = cfg.rho * cfg.body_force.by;
      body = BodyForce::face_vector(std::move(f));
      break;
    }
    case BodyForceConfig::Kind::Potential: {
      CellField psi(grid);
      if (cfg.body_force.potential_uniform) {
        for (double& v : psi.values) v = *cfg.body_force.potential_uniform;
      } else {
        psi.values = cfg.body_force.potential_values;
      }
      body = BodyForce::from_potential(std::move(psi));
      break;
    }
  }

  BoundarySpec bc;
  bc.left = SideBc{cfg.left.kind, cfg.left.primary, cfg.left.secondary};
  bc.right = SideBc{cfg.right.kind, cfg.right.primary, cfg.right.secondary};
  bc.bottom = SideBc{cfg.bottom.kind, cfg.bottom.primary, cfg.bottom.secondary};
  bc.top = SideBc{cfg.top.kind, cfg.top.primary, cfg.top.secondary};

  SolverOptions solver;
  solver.tolerance = cfg.solver_tolerance;
  solver.max_iterations = cfg.solver_max_iterations;

  if (cfg.model == ModelKind::Darcy) {
    DarcyProblem pb;
    pb.grid = grid;
    pb.k = std::move(k);
    pb.mu = cfg.mu;
    pb.body_force = std::move(body);
    pb.bc = bc;
    pb.solver = solver;
    validate_darcy_problem(pb);
    return pb;
  }
  BrinkmanProblem pb;
  pb.grid = grid;
  pb.k = std::move(k);
  pb.mu = cfg.mu;
  pb.body_force = std::move(body);
  pb.bc = bc;
  pb.form = cfg.model == ModelKind::BrinkmanMain
                ? BrinkmanProblem::Form::Main
                : BrinkmanProblem::Form::Traction;
  pb.solver = solver;
  validate_brinkman_problem(pb);
  return pb;
}

}  // namespace porous
