#include "porous/darcy.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "porous/classify.hpp"
#include "porous/log.hpp"
#include "saddle.hpp"

namespace porous {

namespace {

using Triplet = Eigen::Triplet<double>;
using SpMat = Eigen::SparseMatrix<double>;

// One face of a cell as seen from the continuity equation: sign is +1 for
// the east/north face, -1 for west/south; area is the transverse length.
struct CellFace {
  double sign;
  double area;
  double delta;      // center-to-center (interior) or h/2 (pressure boundary)
  double kf;
  double bf;         // rho b component at the face
  int neighbor;      // interior: adjacent cell id, else -1
  Side side;         // valid for boundary faces
  int side_index;    // face index along that side
  bool boundary;
};

void for_each_cell_face(const StaggeredGrid& g, const FaceField& kf,
                        const FaceField& bf, int i, int j,
                        const std::function<void(const CellFace&)>& fn) {
  // west
  {
    CellFace f{-1.0, g.hy, g.hx, kf.x[g.xface(i, j)], bf.x[g.xface(i, j)],
               -1, Side::Left, j, i == 0};
    if (i == 0) {
      f.delta = 0.5 * g.hx;
    } else {
      f.neighbor = g.cell(i - 1, j);
    }
    fn(f);
  }
  // east
  {
    CellFace f{+1.0, g.hy, g.hx, kf.x[g.xface(i + 1, j)],
               bf.x[g.xface(i + 1, j)], -1, Side::Right, j, i == g.nx - 1};
    if (i == g.nx - 1) {
      f.delta = 0.5 * g.hx;
    } else {
      f.neighbor = g.cell(i + 1, j);
    }
    fn(f);
  }
  // south
  {
    CellFace f{-1.0, g.hx, g.hy, kf.y[g.yface(i, j)], bf.y[g.yface(i, j)],
               -1, Side::Bottom, i, j == 0};
    if (j == 0) {
      f.delta = 0.5 * g.hy;
    } else {
      f.neighbor = g.cell(i, j - 1);
    }
    fn(f);
  }
  // north
  {
    CellFace f{+1.0, g.hx, g.hy, kf.y[g.yface(i, j + 1)],
               bf.y[g.yface(i, j + 1)], -1, Side::Top, i, j == g.ny - 1};
    if (j == g.ny - 1) {
      f.delta = 0.5 * g.hy;
    } else {
      f.neighbor = g.cell(i, j + 1);
    }
    fn(f);
  }
}

}  // namespace

void validate_darcy_problem(const DarcyProblem& pb) {
  if (pb.grid.nx < 1 || pb.grid.ny < 1 || !(pb.grid.hx > 0.0) ||
      !(pb.grid.hy > 0.0)) {
    throw InputError("darcy: grid not initialized (use make_grid)");
  }
  if (!(pb.mu > 0.0) || !std::isfinite(pb.mu)) {
    throw InputError("darcy: viscosity must be positive");
  }
  validate_cell_field(pb.grid, pb.k, "darcy permeability");
  for (double v : pb.k.values) {
    if (!(v > 0.0)) throw InputError("darcy: permeability must be positive");
  }
  validate_boundary_spec(pb.grid, pb.bc);
  for (Side s : kSides) {
    const BcKind kind = pb.bc.side(s).kind;
    if (kind != BcKind::Pressure && kind != BcKind::NormalVelocity) {
      throw InputError(
          "darcy: boundary kinds are restricted to Pressure/NormalVelocity");
    }
  }
  if (!pb.continuity_source.values.empty()) {
    validate_cell_field(pb.grid, pb.continuity_source, "continuity source");
  }
}

bool has_pressure_side(const BoundarySpec& bc) {
  for (Side s : kSides) {
    if (bc.side(s).kind == BcKind::Pressure) return true;
  }
  return false;
}

FlowSolution solve_darcy(const DarcyProblem& pb) {
  validate_darcy_problem(pb);
  const StaggeredGrid& g = pb.grid;
  const int n = g.num_cells();
  const FaceField kf = face_permeability(g, pb.k);
  const FaceField bf = body_force_faces(g, pb.body_force);
  const bool pure_velocity = !has_pressure_side(pb.bc);

  if (pure_velocity) {
    const double flux = check_compatibility(g, pb.bc);
    const double tol = compatibility_tolerance(g, pb.bc);
    if (std::abs(flux) > tol) {
      throw CompatibilityError(
          "darcy: prescribed boundary velocities have net flux " +
              std::to_string(flux) + " (tolerance " + std::to_string(tol) + ")",
          flux);
    }
  }

  // Continuity of the eliminated velocity, scaled by cell area:
  //   sum over faces of sign * area * v_f = source * cell area.
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(5 * n));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(pure_velocity ? n + 1 : n);

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      if (!pb.continuity_source.values.empty()) {
        rhs[c] += pb.continuity_source[c] * g.cell_area();
      }
      for_each_cell_face(g, kf, bf, i, j, [&](const CellFace& f) {
        if (f.boundary) {
          const SideBc& sb = pb.bc.side(f.side);
          if (sb.kind == BcKind::NormalVelocity) {
            // v_f = sign * v_n (outward-positive data)
            rhs[c] -= f.area * sb.primary.at(f.side_index);
            return;
          }
          const double t = f.area * f.kf / (pb.mu * f.delta);
          trips.emplace_back(c, c, t);
          rhs[c] += t * sb.primary.at(f.side_index);
          rhs[c] -= f.sign * f.area * (f.kf / pb.mu) * f.bf;
          return;
        }
        const double t = f.area * f.kf / (pb.mu * f.delta);
        trips.emplace_back(c, c, t);
        trips.emplace_back(c, f.neighbor, -t);
        rhs[c] -= f.sign * f.area * (f.kf / pb.mu) * f.bf;
      });
    }
  }

  Eigen::VectorXd p_vec(n);
  int iterations = 0;

  const bool use_direct =
      !pb.solver.force_iterative && n <= pb.solver.direct_cell_limit;
  if (pure_velocity) {
    if (use_direct) {
      // Bordered system enforcing the mean-zero gauge exactly: the extra
      // unknown multiplies the constant mode, the extra equation is
      // sum p_c * area = 0.
      for (int c = 0; c < n; ++c) {
        trips.emplace_back(c, n, g.cell_area());
        trips.emplace_back(n, c, g.cell_area());
      }
      SpMat a(n + 1, n + 1);
      a.setFromTriplets(trips.begin(), trips.end());
      const Eigen::VectorXd sol = detail::refined_lu_solve(a, rhs, "darcy");
      p_vec = sol.head(n);
    } else {
      SpMat a(n, n);
      a.setFromTriplets(trips.begin(), trips.end());
      Eigen::VectorXd r = rhs.head(n);
      r.array() -= r.mean();  // project the incompatible residual out
      Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg(a);
      cg.setTolerance(1e-12);
      cg.setMaxIterations(pb.solver.max_iterations > 0
                              ? pb.solver.max_iterations
                              : 10 * n);
      p_vec = cg.solve(r);
      if (cg.info() != Eigen::Success) {
        throw ConvergenceError("darcy: CG failed after " +
                               std::to_string(cg.iterations()) +
                               " iterations");
      }
      iterations = static_cast<int>(cg.iterations());
      p_vec.array() -= p_vec.mean();
    }
  } else {
    SpMat a(n, n);
    a.setFromTriplets(trips.begin(), trips.end());
    if (use_direct) {
      Eigen::SimplicialLDLT<SpMat> ldlt(a);
      if (ldlt.info() != Eigen::Success) {
        throw ConvergenceError("darcy: LDLT factorization failed");
      }
      p_vec = ldlt.solve(rhs);
    } else {
      Eigen::ConjugateGradient<SpMat, Eigen::Lower | Eigen::Upper> cg(a);
      cg.setTolerance(1e-12);
      cg.setMaxIterations(pb.solver.max_iterations > 0
                              ? pb.solver.max_iterations
                              : 10 * n);
      p_vec = cg.solve(rhs);
      if (cg.info() != Eigen::Success) {
        throw ConvergenceError("darcy: CG failed after " +
                               std::to_string(cg.iterations()) +
                               " iterations");
      }
      iterations = static_cast<int>(cg.iterations());
    }
  }

  FlowSolution sol;
  sol.p.values.assign(p_vec.data(), p_vec.data() + n);
  sol.v = FaceField(g);
  const CellField& p = sol.p;

  // v_f = (k_f/mu)(rho b_f - (grad p)_f); prescribed faces take their data.
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      const int f = g.xface(i, j);
      const double gp = (p[g.cell(i, j)] - p[g.cell(i - 1, j)]) / g.hx;
      sol.v.x[f] = (kf.x[f] / pb.mu) * (bf.x[f] - gp);
    }
    if (pb.bc.left.kind == BcKind::Pressure) {
      const int f = g.xface(0, j);
      const double gp =
          (p[g.cell(0, j)] - pb.bc.left.primary.at(j)) / (0.5 * g.hx);
      sol.v.x[f] = (kf.x[f] / pb.mu) * (bf.x[f] - gp);
    } else {
      sol.v.x[g.xface(0, j)] = -pb.bc.left.primary.at(j);
    }
    if (pb.bc.right.kind == BcKind::Pressure) {
      const int f = g.xface(g.nx, j);
      const double gp =
          (pb.bc.right.primary.at(j) - p[g.cell(g.nx - 1, j)]) / (0.5 * g.hx);
      sol.v.x[f] = (kf.x[f] / pb.mu) * (bf.x[f] - gp);
    } else {
      sol.v.x[g.xface(g.nx, j)] = pb.bc.right.primary.at(j);
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) {
      const int f = g.yface(i, j);
      const double gp = (p[g.cell(i, j)] - p[g.cell(i, j - 1)]) / g.hy;
      sol.v.y[f] = (kf.y[f] / pb.mu) * (bf.y[f] - gp);
    }
    if (pb.bc.bottom.kind == BcKind::Pressure) {
      const int f = g.yface(i, 0);
      const double gp =
          (p[g.cell(i, 0)] - pb.bc.bottom.primary.at(i)) / (0.5 * g.hy);
      sol.v.y[f] = (kf.y[f] / pb.mu) * (bf.y[f] - gp);
    } else {
      sol.v.y[g.yface(i, 0)] = -pb.bc.bottom.primary.at(i);
    }
    if (pb.bc.top.kind == BcKind::Pressure) {
      const int f = g.yface(i, g.ny);
      const double gp =
          (pb.bc.top.primary.at(i) - p[g.cell(i, g.ny - 1)]) / (0.5 * g.hy);
      sol.v.y[f] = (kf.y[f] / pb.mu) * (bf.y[f] - gp);
    } else {
      sol.v.y[g.yface(i, g.ny)] = pb.bc.top.primary.at(i);
    }
  }

  sol.diagnostics.iterations = iterations;
  sol.diagnostics.gauge_pinned = pure_velocity;

  const auto [r_mom, r_div] = residuals_darcy(pb, sol);
  double mom_max = 0.0, div_max = 0.0;
  for (double r : r_mom.x) mom_max = std::max(mom_max, std::abs(r));
  for (double r : r_mom.y) mom_max = std::max(mom_max, std::abs(r));
  for (double r : r_div.values) div_max = std::max(div_max, std::abs(r));
  sol.diagnostics.momentum_residual = mom_max;
  sol.diagnostics.continuity_residual = div_max;

  double v_scale = 0.0;
  for (double v : sol.v.x) v_scale = std::max(v_scale, std::abs(v));
  for (double v : sol.v.y) v_scale = std::max(v_scale, std::abs(v));
  const double h_min = std::min(g.hx, g.hy);
  const double mom_scale =
      std::max(1.0, pb.mu * v_scale / *std::min_element(pb.k.values.begin(),
                                                        pb.k.values.end()));
  const double div_scale = std::max(1.0, v_scale / h_min);
  if (mom_max > pb.solver.tolerance * mom_scale ||
      div_max > pb.solver.tolerance * div_scale) {
    throw ConvergenceError(
        "darcy: residuals exceed tolerance (momentum " +
        std::to_string(mom_max) + ", continuity " + std::to_string(div_max) +
        ")");
  }
  log::debug("darcy solve: momentum residual " + std::to_string(mom_max) +
             ", continuity residual " + std::to_string(div_max));
  return sol;
}

std::pair<FaceField, CellField> residuals_darcy(const DarcyProblem& pb,
                                                const FlowSolution& sol) {
  validate_darcy_problem(pb);
  const StaggeredGrid& g = pb.grid;
  validate_face_field(g, sol.v, "darcy residual velocity");
  validate_cell_field(g, sol.p, "darcy residual pressure");

  const FaceField kf = face_permeability(g, pb.k);
  const FaceField bf = body_force_faces(g, pb.body_force);
  const BoundaryGradient gp = gradient(g, sol.p, pb.bc);

  FaceField r_mom(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int f = g.xface(i, j);
      if (gp.x_defined[static_cast<std::size_t>(f)] != 0u) {
        r_mom.x[f] =
            pb.mu / kf.x[f] * sol.v.x[f] + gp.values.x[f] - bf.x[f];
      } else {
        const Side s = (i == 0) ? Side::Left : Side::Right;
        r_mom.x[f] =
            sol.v.x[f] - outward_sign(s) * pb.bc.side(s).primary.at(j);
      }
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 0; j <= g.ny; ++j) {
      const int f = g.yface(i, j);
      if (gp.y_defined[static_cast<std::size_t>(f)] != 0u) {
        r_mom.y[f] =
            pb.mu / kf.y[f] * sol.v.y[f] + gp.values.y[f] - bf.y[f];
      } else {
        const Side s = (j == 0) ? Side::Bottom : Side::Top;
        r_mom.y[f] =
            sol.v.y[f] - outward_sign(s) * pb.bc.side(s).primary.at(i);
      }
    }
  }

  CellField r_div = divergence(g, sol.v);
  if (!pb.continuity_source.values.empty()) {
    for (int c = 0; c < g.num_cells(); ++c) {
      r_div[c] -= pb.continuity_source[c];
    }
  }
  return {std::move(r_mom), std::move(r_div)};
}

}  // namespace porous
