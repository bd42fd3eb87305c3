#include <doctest.h>

#include <string>

#include "porous/config.hpp"
#include "test_util.hpp"

using namespace porous;

namespace {

const char* kMinimalDarcy = R"json({
  "model": "darcy",
  "grid": {"nx": 8, "ny": 1, "lx": 1.0, "ly": 1.0},
  "fluid": {"mu": 1.0},
  "permeability": {"uniform": 1.0},
  "boundaries": {
    "left":   {"type": "pressure", "value": 1.0},
    "right":  {"type": "pressure", "value": 0.0},
    "bottom": {"type": "normal_velocity", "value": 0.0},
    "top":    {"type": "normal_velocity", "value": 0.0}
  }
})json";

bool mentions(const ConfigError& e, const std::string& needle) {
  for (const auto& v : e.violations()) {
    if (v.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string replace_once(std::string text, const std::string& from,
                         const std::string& to) {
  const auto pos = text.find(from);
  REQUIRE(pos != std::string::npos);
  text.replace(pos, from.size(), to);
  return text;
}

}  // namespace

TEST_CASE("minimal config parses with defaults") {
  const RunConfig cfg = parse_config(kMinimalDarcy);
  CHECK(cfg.model == ModelKind::Darcy);
  CHECK(cfg.nx == 8);
  CHECK(cfg.solver_tolerance == doctest::Approx(1e-10));
  CHECK(cfg.solver_max_iterations == 0);
  CHECK(cfg.rho == doctest::Approx(1.0));
  CHECK(!cfg.design.has_value());

  const AnyProblem pb = build_problem(cfg);
  CHECK(std::holds_alternative<DarcyProblem>(pb));
  CHECK(classify_bvp(pb).tag == ClassTag::B);
}

TEST_CASE("missing boundaries block is named") {
  const std::string text = R"json({
    "model": "darcy",
    "grid": {"nx": 4, "ny": 4, "lx": 1.0, "ly": 1.0},
    "fluid": {"mu": 1.0},
    "permeability": {"uniform": 1.0}
  })json";
  CHECK_THROWS_WITH_AS(parse_config(text),
                       doctest::Contains("boundaries"), ConfigError);
}

TEST_CASE("negative viscosity reports the field path") {
  const std::string text = replace_once(kMinimalDarcy, "\"mu\": 1.0", "\"mu\": -1.0");
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(mentions(e, "fluid.mu"));
  }
}

TEST_CASE("all violations are reported together") {
  const std::string text = R"json({
    "model": "warp-drive",
    "grid": {"nx": 0, "ny": 4, "lx": 1.0, "ly": -2.0},
    "fluid": {"mu": -1.0},
    "permeability": {"uniform": 0.0},
    "boundaries": {
      "left":   {"type": "pressure", "value": 1.0},
      "right":  {"type": "pressure", "value": 0.0},
      "bottom": {"type": "normal_velocity", "value": 0.0},
      "top":    {"type": "normal_velocity", "value": 0.0}
    }
  })json";
  try {
    parse_config(text);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(e.violations().size() >= 5);
    CHECK(mentions(e, "model"));
    CHECK(mentions(e, "grid.nx"));
    CHECK(mentions(e, "grid.ly"));
    CHECK(mentions(e, "fluid.mu"));
    CHECK(mentions(e, "permeability.uniform"));
  }
}

TEST_CASE("unknown keys are rejected at every level") {
  std::string text = kMinimalDarcy;
  text.insert(text.find("\"grid\""), "\"warp\": 1, ");
  CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("unknown key"),
                       ConfigError);

  std::string text2 = kMinimalDarcy;
  text2.insert(text2.find("\"nx\""), "\"cells\": 8, ");
  CHECK_THROWS_WITH_AS(parse_config(text2), doctest::Contains("grid.cells"),
                       ConfigError);
}

TEST_CASE("syntax errors are a config error") {
  CHECK_THROWS_AS(parse_config("{ not json"), ConfigError);
}

TEST_CASE("boundary types must match the model") {
  // full-velocity data under the Darcy model
  const std::string text =
      replace_once(kMinimalDarcy, "{\"type\": \"normal_velocity\", \"value\": 0.0}",
                   "{\"type\": \"velocity\", \"vx\": 0.0, \"vy\": 0.0}");
  CHECK_THROWS_WITH_AS(parse_config(text),
                       doctest::Contains("boundaries.bottom.type"),
                       ConfigError);

  // traction under the main brinkman form
  const std::string brinkman = R"json({
    "model": "brinkman",
    "grid": {"nx": 4, "ny": 4, "lx": 1.0, "ly": 1.0},
    "fluid": {"mu": 1.0},
    "permeability": {"uniform": 1.0},
    "boundaries": {
      "left":   {"type": "traction", "tx": 1.0, "ty": 0.0},
      "right":  {"type": "pressure", "value": 0.0},
      "bottom": {"type": "velocity", "vx": 0.0, "vy": 0.0},
      "top":    {"type": "velocity", "vx": 0.0, "vy": 0.0}
    }
  })json";
  CHECK_THROWS_WITH_AS(parse_config(brinkman),
                       doctest::Contains("boundaries.left.type"), ConfigError);
}

TEST_CASE("tabulated boundary profiles must match the side face count") {
  const std::string text =
      replace_once(kMinimalDarcy, "\"value\": 1.0", "\"value\": [1.0, 2.0]");
  // left side has ny = 1 face
  CHECK_THROWS_WITH_AS(parse_config(text),
                       doctest::Contains("boundaries.left.value"),
                       ConfigError);
}

TEST_CASE("inline permeability needs nx*ny entries") {
  const std::string text = replace_once(kMinimalDarcy, "{\"uniform\": 1.0}",
                                        "{\"values\": [1.0, 2.0]}");
  CHECK_THROWS_WITH_AS(parse_config(text),
                       doctest::Contains("permeability.values"), ConfigError);
}

TEST_CASE("design block validation") {
  std::string text = kMinimalDarcy;
  const std::string design = R"json(,
  "design": {"sense": "maximize", "bound": "high", "volume_fraction": 0.4,
             "k_low": 1e-4, "k_high": 1.0})json";
  text.insert(text.rfind('}'), design);
  const RunConfig cfg = parse_config(text);
  REQUIRE(cfg.design.has_value());
  CHECK(cfg.design->scenario.q == doctest::Approx(8.0));
  CHECK(cfg.design->max_iterations == 200);
  CHECK(cfg.design->move_limit == doctest::Approx(0.2));

  const std::string bad =
      replace_once(text, "\"volume_fraction\": 0.4", "\"volume_fraction\": 1.4");
  CHECK_THROWS_WITH_AS(parse_config(bad),
                       doctest::Contains("design.volume_fraction"),
                       ConfigError);
}

TEST_CASE("potential body force builds a class-C-eligible problem") {
  // compatible through-flow with a potential force
  std::string text =
      replace_once(kMinimalDarcy, "{\"type\": \"pressure\", \"value\": 1.0}",
                   "{\"type\": \"normal_velocity\", \"value\": -1.0}");
  text = replace_once(text, "{\"type\": \"pressure\", \"value\": 0.0}",
                      "{\"type\": \"normal_velocity\", \"value\": 1.0}");
  text.insert(text.rfind('}'),
              R"json(, "body_force": {"kind": "potential", "uniform": 3.0})json");
  const RunConfig cfg = parse_config(text);
  const AnyProblem pb = build_problem(cfg);
  CHECK(classify_bvp(pb).tag == ClassTag::C);
}
