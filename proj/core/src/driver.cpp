#include "porous/driver.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <random>
#include <string>

#include "porous/adjoint.hpp"
#include "porous/dissipation.hpp"
#include "porous/log.hpp"
#include "porous/output.hpp"

namespace porous {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << j.dump(2) << "\n";
}

json diagnostics_json(const SolveDiagnostics& d) {
  return json{{"momentum_residual", d.momentum_residual},
              {"continuity_residual", d.continuity_residual},
              {"iterations", d.iterations},
              {"gauge_pinned", d.gauge_pinned}};
}

struct Workspace {
  const RunConfig& cfg;
  const DispatchOptions& opts;
  AnyProblem problem;
  fs::path out;

  Workspace(const RunConfig& c, const DispatchOptions& o)
      : cfg(c), opts(o), problem(build_problem(c, o.config_dir)), out(o.out_dir) {}

  void ensure_out() const { fs::create_directories(out); }

  void write_flow(const std::string& stem, const FaceField& v,
                  const CellField& p) const {
    const StaggeredGrid& g = grid_of(problem);
    if (opts.format == "vtk") {
      write_vtk((out / (stem + ".vtk")).string(), g, p, v, stem);
      return;
    }
    write_cell_field_csv((out / (stem + "_pressure.csv")).string(), g, p);
    write_face_field_csv((out / (stem + "_velocity.csv")).string(), g, v);
  }
};

AdjointSolution solve_adjoint(const AnyProblem& pb, const FlowSolution& fwd) {
  if (const auto* d = std::get_if<DarcyProblem>(&pb)) {
    return solve_adjoint_darcy(*d, fwd);
  }
  return solve_adjoint_brinkman(std::get<BrinkmanProblem>(pb), fwd);
}

GradientReport make_gradient_report(const AnyProblem& pb, int threads) {
  if (const auto* d = std::get_if<DarcyProblem>(&pb)) {
    return gradient_report(*d, threads);
  }
  return gradient_report(std::get<BrinkmanProblem>(pb), threads);
}

// Rejects all-velocity boundary data whose net flux violates the discrete
// compatibility condition, before any artifact is written.
void guard_compatibility(const AnyProblem& pb) {
  const StaggeredGrid& g = grid_of(pb);
  const BoundarySpec& bc = std::visit(
      [](const auto& p) -> const BoundarySpec& { return p.bc; }, pb);
  bool all_velocity = true;
  for (Side s : kSides) {
    const BcKind k = bc.side(s).kind;
    all_velocity &= (k == BcKind::NormalVelocity || k == BcKind::FullVelocity);
  }
  if (!all_velocity) return;
  const double flux = check_compatibility(g, bc);
  const double tol = compatibility_tolerance(g, bc);
  if (std::abs(flux) > tol) {
    throw CompatibilityError(
        "prescribed boundary velocities have net flux " +
            std::to_string(flux) + " (tolerance " + std::to_string(tol) + ")",
        flux);
  }
}

// Smooth multiplicative log-perturbation of the permeability field, used by
// the randomized verify suites.
CellField randomized_permeability(const StaggeredGrid& g, const CellField& k0,
                                  std::mt19937_64& rng) {
  constexpr double kPi = 3.14159265358979323846;
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 2.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  struct Mode {
    double a, fx, fy, px, py;
  };
  Mode modes[3];
  for (Mode& m : modes) {
    m = {amp(rng), freq(rng), freq(rng), phase(rng), phase(rng)};
  }
  CellField s(g);
  double smax = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double v = 0.0;
      for (const Mode& m : modes) {
        v += m.a * std::sin(m.fx * kPi * g.cell_x(i) + m.px) *
             std::sin(m.fy * kPi * g.cell_y(j) + m.py);
      }
      s[g.cell(i, j)] = v;
      smax = std::max(smax, std::abs(v));
    }
  }
  CellField k = k0;
  if (smax > 0.0) {
    for (int c = 0; c < g.num_cells(); ++c) {
      k[c] *= std::exp(0.5 * s[c] / smax);
    }
  }
  return k;
}

int run_solve(Workspace& ws) {
  guard_compatibility(ws.problem);
  const FlowSolution sol = solve(ws.problem);
  ws.ensure_out();
  ws.write_flow("solution", sol.v, sol.p);
  write_json(ws.out / "diagnostics.json", diagnostics_json(sol.diagnostics));
  return 0;
}

int run_adjoint(Workspace& ws) {
  guard_compatibility(ws.problem);
  const FlowSolution fwd = solve(ws.problem);
  const AdjointSolution adj = solve_adjoint(ws.problem, fwd);
  ws.ensure_out();
  ws.write_flow("adjoint", adj.lambda_v, adj.lambda_p);
  write_json(ws.out / "diagnostics.json",
             json{{"forward", diagnostics_json(fwd.diagnostics)},
                  {"adjoint", diagnostics_json(adj.diagnostics)}});
  return 0;
}

int run_sensitivity(Workspace& ws) {
  guard_compatibility(ws.problem);
  const StaggeredGrid& g = grid_of(ws.problem);
  const FlowSolution fwd = solve(ws.problem);
  const AdjointSolution adj = solve_adjoint(ws.problem, fwd);
  const SensitivityField density = std::visit(
      [&](const auto& p) {
        return sensitivity_field(p.grid, p.k, p.mu, fwd.v, adj);
      },
      ws.problem);
  const GradientReport rep = make_gradient_report(ws.problem, ws.opts.threads);

  ws.ensure_out();
  write_cell_field_csv((ws.out / "sensitivity_density.csv").string(), g,
                       density.density);
  write_cell_field_csv((ws.out / "adjoint_gradient.csv").string(), g,
                       rep.adjoint_gradient);
  write_cell_field_csv((ws.out / "discrete_gradient.csv").string(), g,
                       rep.discrete_gradient);
  write_cell_field_csv((ws.out / "fd_gradient.csv").string(), g,
                       rep.fd_gradient);
  write_json(ws.out / "gradient_report.json",
             json{{"adjoint_vs_fd", rep.adjoint_vs_fd},
                  {"discrete_vs_fd", rep.discrete_vs_fd},
                  {"adjoint_vs_discrete", rep.adjoint_vs_discrete},
                  {"fields",
                   {"adjoint_gradient.csv", "discrete_gradient.csv",
                    "fd_gradient.csv"}}});
  return 0;
}

int run_classify(Workspace& ws) {
  guard_compatibility(ws.problem);
  const BvpClass cls = classify_bvp(ws.problem);
  json j{{"class", to_string(cls.tag)},
         {"model", to_string(cls.form)},
         {"notes", cls.notes}};
  const BoundarySpec& bc = std::visit(
      [](const auto& p) -> const BoundarySpec& { return p.bc; }, ws.problem);
  bool all_velocity = true;
  for (Side s : kSides) {
    const BcKind k = bc.side(s).kind;
    all_velocity &= (k == BcKind::NormalVelocity || k == BcKind::FullVelocity);
  }
  if (all_velocity) {
    j["net_flux"] = check_compatibility(grid_of(ws.problem), bc);
  }
  ws.ensure_out();
  write_json(ws.out / "class.json", j);
  return 0;
}

json design_state_json(const DesignState& state) {
  return json{{"verdict", to_string(state.verdict)},
              {"iterations", state.iterations},
              {"converged", state.converged},
              {"bounded_fraction", state.bounded_fraction},
              {"constraint_active", state.constraint_active},
              {"objective_history", state.objective_history}};
}

int run_optimize(Workspace& ws) {
  if (!ws.cfg.design) {
    throw ConfigError({"design: block required by the optimize subcommand"});
  }
  guard_compatibility(ws.problem);
  const DesignBlock& block = *ws.cfg.design;
  const DesignState state = optimize(ws.problem, block.scenario,
                                     block.max_iterations, block.move_limit);
  ws.ensure_out();
  write_cell_field_csv((ws.out / "design_gamma.csv").string(),
                       grid_of(ws.problem), state.design.gamma);
  write_json(ws.out / "design.json", design_state_json(state));
  return 0;
}

// Velocity-driven canonical counterpart on the same grid and fluid: unit
// inflow at the left, impermeable walls, zero pressure (or traction) outlet.
AnyProblem canonical_cd_problem(const AnyProblem& base) {
  AnyProblem cd = base;
  if (auto* d = std::get_if<DarcyProblem>(&cd)) {
    d->body_force = BodyForce::none();
    d->bc.left = SideBc{BcKind::NormalVelocity, Profile(-1.0), Profile(0.0)};
    d->bc.right = SideBc{BcKind::Pressure, Profile(0.0), Profile(0.0)};
    d->bc.bottom = SideBc{BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
    d->bc.top = SideBc{BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
    return cd;
  }
  auto& b = std::get<BrinkmanProblem>(cd);
  b.body_force = BodyForce::none();
  const BcKind outlet = b.form == BrinkmanProblem::Form::Main
                            ? BcKind::Pressure
                            : BcKind::Traction;
  b.bc.left = SideBc{BcKind::FullVelocity, Profile(1.0), Profile(0.0)};
  b.bc.right = SideBc{outlet, Profile(0.0), Profile(0.0)};
  b.bc.bottom = SideBc{BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  b.bc.top = SideBc{BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  return cd;
}

int run_table1_cmd(Workspace& ws) {
  if (!ws.cfg.design) {
    throw ConfigError({"design: block required by the table1 subcommand"});
  }
  guard_compatibility(ws.problem);
  const DesignBlock& block = *ws.cfg.design;
  Table1Params params;
  params.volume_fraction = block.scenario.volume_fraction;
  params.k_low = block.scenario.k_low;
  params.k_high = block.scenario.k_high;
  params.q = block.scenario.q;
  params.max_iters = block.max_iterations;
  params.move_limit = block.move_limit;

  const AnyProblem cd = canonical_cd_problem(ws.problem);
  const Table1Result result = porous::run_table1(ws.problem, cd, params);

  json cells = json::array();
  bool all_match = true;
  for (int bound_low = 0; bound_low < 2; ++bound_low) {
    for (int sense_min = 0; sense_min < 2; ++sense_min) {
      for (int group_cd = 0; group_cd < 2; ++group_cd) {
        const Table1Cell& cell = result.cells[bound_low][sense_min][group_cd];
        const bool expect_trivial =
            table1_expected_trivial(bound_low != 0, sense_min != 0,
                                    group_cd != 0);
        const bool is_trivial =
            cell.state.verdict != DesignVerdict::Nontrivial;
        bool match = expect_trivial == is_trivial;
        if (expect_trivial) {
          match = match && cell.state.verdict ==
                               table1_expected_trivial_verdict(bound_low != 0);
        }
        all_match = all_match && match;
        cells.push_back(
            json{{"bound", bound_low ? "low_permeability" : "high_permeability"},
                 {"sense", sense_min ? "minimize" : "maximize"},
                 {"problem", group_cd ? "velocity_driven" : "pressure_driven"},
                 {"expected_trivial", expect_trivial},
                 {"matches_expected", match},
                 {"result", design_state_json(cell.state)}});
      }
    }
  }
  ws.ensure_out();
  write_json(ws.out / "table1.json",
             json{{"cells", cells}, {"matches_expected_pattern", all_match}});
  return all_match ? 0 : 5;
}

int run_verify(Workspace& ws) {
  guard_compatibility(ws.problem);
  const StaggeredGrid& g = grid_of(ws.problem);

  const GradientReport rep = make_gradient_report(ws.problem, ws.opts.threads);
  const bool triple_pass = rep.discrete_vs_fd <= 1e-6;

  const BvpClass cls = classify_bvp(ws.problem);
  const bool signed_class = cls.tag != ClassTag::General;
  const bool expect_nonneg =
      cls.tag == ClassTag::A || cls.tag == ClassTag::B;

  std::mt19937_64 rng(ws.opts.seed);
  const int instances = 20;
  double min_component = 0.0, max_component = 0.0;
  bool sign_pass = true;
  if (signed_class) {
    min_component = std::numeric_limits<double>::infinity();
    max_component = -std::numeric_limits<double>::infinity();
    const CellField& k0 = permeability_of(ws.problem);
    for (int inst = 0; inst < instances; ++inst) {
      AnyProblem local =
          with_permeability(ws.problem, randomized_permeability(g, k0, rng));
      const FlowSolution sol = solve(local);
      const CellField grad = discrete_gradient(local, sol);
      for (double v : grad.values) {
        min_component = std::min(min_component, v);
        max_component = std::max(max_component, v);
      }
    }
    sign_pass = expect_nonneg ? (min_component >= -1e-12)
                              : (max_component <= 1e-12);
  }

  ws.ensure_out();
  json j{{"seed", ws.opts.seed},
         {"gradient_triple_check",
          {{"adjoint_vs_fd", rep.adjoint_vs_fd},
           {"discrete_vs_fd", rep.discrete_vs_fd},
           {"adjoint_vs_discrete", rep.adjoint_vs_discrete},
           {"tolerance", 1e-6},
           {"pass", triple_pass}}},
         {"sign_suite",
          {{"class", to_string(cls.tag)},
           {"applicable", signed_class},
           {"instances", signed_class ? instances : 0},
           {"min_component", signed_class ? min_component : 0.0},
           {"max_component", signed_class ? max_component : 0.0},
           {"pass", sign_pass}}}};
  j["pass"] = triple_pass && sign_pass;
  write_json(ws.out / "verify.json", j);
  if (!(triple_pass && sign_pass)) {
    log::error("verify: checks failed (see verify.json)");
    return 5;
  }
  return 0;
}

}  // namespace

int dispatch(const std::string& subcommand, const RunConfig& cfg,
             const DispatchOptions& opts) {
  try {
    Workspace ws(cfg, opts);
    if (subcommand == "solve") return run_solve(ws);
    if (subcommand == "adjoint") return run_adjoint(ws);
    if (subcommand == "sensitivity") return run_sensitivity(ws);
    if (subcommand == "classify") return run_classify(ws);
    if (subcommand == "optimize") return run_optimize(ws);
    if (subcommand == "table1") return run_table1_cmd(ws);
    if (subcommand == "verify") return run_verify(ws);
    log::error("unknown subcommand '" + subcommand + "'");
    return 2;
  } catch (const ConfigError& e) {
    log::error(e.what());
    return 2;
  } catch (const CompatibilityError& e) {
    log::error(e.what());
    return 3;
  } catch (const ConvergenceError& e) {
    log::error(e.what());
    return 4;
  } catch (const InvariantError& e) {
    log::error(e.what());
    return 5;
  } catch (const InputError& e) {
    log::error(e.what());
    return 2;
  } catch (const std::exception& e) {
    log::error(std::string("internal error: ") + e.what());
    return 5;
  }
}

}  // namespace porous
