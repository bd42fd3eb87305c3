#include "porous/adjoint.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>

#include "saddle.hpp"

namespace porous {

namespace {

BoundarySpec homogeneous_like(const BoundarySpec& bc) {
  BoundarySpec out = bc;
  for (Side s : kSides) {
    out.side(s).primary = Profile(0.0);
    out.side(s).secondary = Profile(0.0);
  }
  return out;
}

}  // namespace

AdjointSolution solve_adjoint_darcy(const DarcyProblem& pb,
                                    const FlowSolution& forward) {
  validate_darcy_problem(pb);
  validate_face_field(pb.grid, forward.v, "adjoint forward velocity");
  validate_cell_field(pb.grid, forward.p, "adjoint forward pressure");

  const FaceField kf = face_permeability(pb.grid, pb.k);
  FaceField pseudo(pb.grid);
  for (int f = 0; f < pb.grid.num_x_faces(); ++f) {
    pseudo.x[f] = pb.mu * forward.v.x[f] / kf.x[f];
  }
  for (int f = 0; f < pb.grid.num_y_faces(); ++f) {
    pseudo.y[f] = pb.mu * forward.v.y[f] / kf.y[f];
  }

  DarcyProblem adj = pb;
  adj.body_force = BodyForce::face_vector(std::move(pseudo));
  adj.bc = homogeneous_like(pb.bc);
  adj.continuity_source = CellField{};

  const FlowSolution sol = solve_darcy(adj);
  AdjointSolution out;
  out.lambda_v = sol.v;
  out.lambda_p = sol.p;
  out.source = AdjointSolution::Source::Numerical;
  out.diagnostics = sol.diagnostics;
  return out;
}

AdjointSolution solve_adjoint_brinkman(const BrinkmanProblem& pb,
                                       const FlowSolution& forward) {
  validate_brinkman_problem(pb);
  const StaggeredGrid& g = pb.grid;
  validate_face_field(g, forward.v, "adjoint forward velocity");
  validate_cell_field(g, forward.p, "adjoint forward pressure");

  // The adjoint operator equals the forward operator (boundary data do not
  // enter the matrix coefficients); its load is the momentum rows' velocity
  // part re-evaluated on the forward solution. This is the discrete form of
  // the pseudo body force mu v/k - mu lap(v) plus the boundary pseudo
  // pressure loading -n.(2 mu D[v])n, stencil for stencil.
  detail::SaddleSystem sys = detail::assemble_brinkman(pb);
  const Eigen::VectorXd x_vel =
      detail::pack_state(sys, g, forward.v, CellField(g));

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(sys.size());
  for (int r = 0; r < sys.nu + sys.nv; ++r) {
    if (sys.is_dirichlet[static_cast<std::size_t>(r)]) continue;
    rhs[r] = sys.momentum_vel[static_cast<std::size_t>(r)].eval(x_vel);
  }

  const Eigen::VectorXd x =
      detail::refined_lu_solve(sys.M, rhs, "brinkman adjoint");

  AdjointSolution out;
  out.lambda_v = FaceField(g);
  out.lambda_p = CellField(g);
  for (int f = 0; f < g.num_x_faces(); ++f) out.lambda_v.x[f] = x[sys.u_dof(f)];
  for (int f = 0; f < g.num_y_faces(); ++f) out.lambda_v.y[f] = x[sys.v_dof(f)];
  for (int c = 0; c < g.num_cells(); ++c) out.lambda_p[c] = x[sys.p_dof(c)];
  out.source = AdjointSolution::Source::Numerical;
  out.diagnostics.gauge_pinned = sys.gauged;

  const Eigen::VectorXd res = sys.M * x - rhs;
  double mom_max = 0.0;
  for (int r = 0; r < sys.nu + sys.nv; ++r) {
    mom_max = std::max(mom_max, std::abs(res[r]));
  }
  out.diagnostics.momentum_residual = mom_max;
  const CellField div = divergence(g, out.lambda_v);
  double div_max = 0.0;
  for (double d : div.values) div_max = std::max(div_max, std::abs(d));
  out.diagnostics.continuity_residual = div_max;

  const double scale = std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
  if (mom_max > pb.solver.tolerance * scale) {
    throw ConvergenceError("brinkman adjoint: residual exceeds tolerance");
  }
  return out;
}

AdjointSolution analytical_adjoint(const StaggeredGrid& g, ClassTag cls,
                                   const FlowSolution& forward,
                                   const std::optional<CellField>& psi) {
  validate_face_field(g, forward.v, "analytical_adjoint velocity");
  validate_cell_field(g, forward.p, "analytical_adjoint pressure");

  AdjointSolution out;
  out.source = AdjointSolution::Source::AnalyticalClass;
  switch (cls) {
    case ClassTag::A:
    case ClassTag::B:
      out.lambda_v = forward.v;
      out.lambda_p = CellField(g, 0.0);
      return out;
    case ClassTag::C: {
      if (!psi) {
        throw InputError(
            "analytical_adjoint: class C requires the body-force potential");
      }
      validate_cell_field(g, *psi, "analytical_adjoint potential");
      out.lambda_v = FaceField(g, 0.0);
      out.lambda_p = CellField(g);
      for (int c = 0; c < g.num_cells(); ++c) {
        out.lambda_p[c] = -forward.p[c] - (*psi)[c];
      }
      const double m = mean(out.lambda_p);
      for (double& v : out.lambda_p.values) v -= m;  // mean-zero gauge
      return out;
    }
    case ClassTag::D:
      out.lambda_v = FaceField(g, 0.0);
      out.lambda_p = CellField(g);
      for (int c = 0; c < g.num_cells(); ++c) {
        out.lambda_p[c] = -forward.p[c];
      }
      return out;
    default:
      throw NotAnalyticallySolvableError(
          "analytical_adjoint: no closed form outside classes A-D");
  }
}

}  // namespace porous
