#include "porous/brinkman.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <string>

#include "porous/classify.hpp"
#include "porous/log.hpp"
#include "saddle.hpp"
#include "strain_stencil.hpp"

namespace porous {

void validate_brinkman_problem(const BrinkmanProblem& pb) {
  if (pb.grid.nx < 1 || pb.grid.ny < 1 || !(pb.grid.hx > 0.0) ||
      !(pb.grid.hy > 0.0)) {
    throw InputError("brinkman: grid not initialized (use make_grid)");
  }
  if (!(pb.mu > 0.0) || !std::isfinite(pb.mu)) {
    throw InputError("brinkman: viscosity must be positive");
  }
  validate_cell_field(pb.grid, pb.k, "brinkman permeability");
  for (double v : pb.k.values) {
    if (!(v > 0.0)) throw InputError("brinkman: permeability must be positive");
  }
  validate_boundary_spec(pb.grid, pb.bc);
  const BcKind pressure_like = pb.form == BrinkmanProblem::Form::Main
                                   ? BcKind::Pressure
                                   : BcKind::Traction;
  for (Side s : kSides) {
    const BcKind kind = pb.bc.side(s).kind;
    if (kind != pressure_like && kind != BcKind::FullVelocity) {
      throw InputError(
          pb.form == BrinkmanProblem::Form::Main
              ? "brinkman (main form): boundary kinds are restricted to "
                "Pressure/FullVelocity"
              : "brinkman (traction form): boundary kinds are restricted to "
                "Traction/FullVelocity");
    }
  }
  if (!pb.continuity_source.values.empty()) {
    validate_cell_field(pb.grid, pb.continuity_source, "continuity source");
  }
}

FlowSolution solve_brinkman(const BrinkmanProblem& pb) {
  validate_brinkman_problem(pb);
  const StaggeredGrid& g = pb.grid;

  bool all_velocity = true;
  for (Side s : kSides) {
    all_velocity &= pb.bc.side(s).kind == BcKind::FullVelocity;
  }
  if (all_velocity) {
    const double flux = check_compatibility(g, pb.bc);
    const double tol = compatibility_tolerance(g, pb.bc);
    if (std::abs(flux) > tol) {
      throw CompatibilityError(
          "brinkman: prescribed boundary velocities have net flux " +
              std::to_string(flux) + " (tolerance " + std::to_string(tol) +
              ")",
          flux);
    }
  }

  detail::SaddleSystem sys = detail::assemble_brinkman(pb);
  const Eigen::VectorXd x =
      detail::refined_lu_solve(sys.M, sys.rhs, "brinkman");

  FlowSolution sol;
  sol.v = FaceField(g);
  sol.p = CellField(g);
  for (int f = 0; f < g.num_x_faces(); ++f) sol.v.x[f] = x[sys.u_dof(f)];
  for (int f = 0; f < g.num_y_faces(); ++f) sol.v.y[f] = x[sys.v_dof(f)];
  for (int c = 0; c < g.num_cells(); ++c) sol.p[c] = x[sys.p_dof(c)];
  sol.diagnostics.gauge_pinned = sys.gauged;
  sol.diagnostics.iterations = 0;

  const Eigen::VectorXd res = sys.M * x - sys.rhs;
  double mom_max = 0.0;
  for (int r = 0; r < sys.nu + sys.nv; ++r) {
    mom_max = std::max(mom_max, std::abs(res[r]));
  }
  sol.diagnostics.momentum_residual = mom_max;
  CellField div = divergence(g, sol.v);
  double div_max = 0.0;
  for (int c = 0; c < g.num_cells(); ++c) {
    const double src = pb.continuity_source.values.empty()
                           ? 0.0
                           : pb.continuity_source[c];
    div_max = std::max(div_max, std::abs(div[c] - src));
  }
  sol.diagnostics.continuity_residual = div_max;

  const double rhs_scale = std::max(1.0, sys.rhs.lpNorm<Eigen::Infinity>());
  double v_scale = 0.0;
  for (double v : sol.v.x) v_scale = std::max(v_scale, std::abs(v));
  for (double v : sol.v.y) v_scale = std::max(v_scale, std::abs(v));
  const double div_scale =
      std::max(1.0, v_scale / std::min(g.hx, g.hy));
  if (mom_max > pb.solver.tolerance * rhs_scale ||
      div_max > pb.solver.tolerance * div_scale) {
    throw ConvergenceError("brinkman: residuals exceed tolerance (momentum " +
                           std::to_string(mom_max) + ", continuity " +
                           std::to_string(div_max) + ")");
  }
  log::debug("brinkman solve: momentum residual " + std::to_string(mom_max) +
             ", continuity residual " + std::to_string(div_max));
  return sol;
}

StrainField strain_rate(const StaggeredGrid& g, const FaceField& v) {
  validate_face_field(g, v, "strain_rate");
  const std::size_t n = static_cast<std::size_t>(g.num_cells());
  StrainField d;
  d.xx.assign(n, 0.0);
  d.yy.assign(n, 0.0);
  d.xy.assign(n, 0.0);

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t c = static_cast<std::size_t>(g.cell(i, j));
      detail::for_each_strain_coef(
          g, i, j,
          [&](detail::StrainComp comp, bool x_face, int f, double coef) {
            const double value = x_face ? v.x[f] : v.y[f];
            switch (comp) {
              case detail::StrainComp::XX: d.xx[c] += coef * value; break;
              case detail::StrainComp::YY: d.yy[c] += coef * value; break;
              case detail::StrainComp::XY: d.xy[c] += coef * value; break;
            }
          });
    }
  }
  return d;
}

}  // namespace porous
