#pragma once

// Internal first-order (velocity + pressure) assembly shared by the Brinkman
// solver, the Brinkman adjoint, and the exact discrete-gradient path. Not
// part of the installed API.

#include <Eigen/Sparse>
#include <vector>

#include "porous/brinkman.hpp"
#include "porous/darcy.hpp"
#include "porous/flow.hpp"

namespace porous::detail {

/// Linear combination of global dofs plus a data constant. Momentum rows
/// keep their velocity part separate so the adjoint pseudo-load can be
/// re-evaluated on the forward solution with the exact same stencil.
struct LinComb {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  void add(int dof, double coef) { terms.emplace_back(dof, coef); }
  void add_scaled(const LinComb& other, double scale) {
    for (const auto& [dof, coef] : other.terms) terms.emplace_back(dof, coef * scale);
    constant += other.constant * scale;
  }
  double eval(const Eigen::VectorXd& x) const {
    double s = constant;
    for (const auto& [dof, coef] : terms) s += coef * x[dof];
    return s;
  }
};

/// Dof/equation layout: x-face velocities, then y-face velocities, then cell
/// pressures, then (pure-velocity problems) one gauge multiplier. Equation
/// rows use the same indices: momentum at face dofs, continuity at pressure
/// dofs, the mean-zero constraint at the gauge dof.
struct SaddleSystem {
  Eigen::SparseMatrix<double> M;
  Eigen::VectorXd rhs;
  int nu = 0, nv = 0, np = 0;
  bool gauged = false;

  /// Velocity-dof part (plus ghost-data constant) of each momentum row;
  /// empty for Dirichlet rows. Size nu + nv when populated.
  std::vector<LinComb> momentum_vel;

  /// True where the momentum row prescribes the velocity dof directly.
  std::vector<bool> is_dirichlet;

  int size() const { return nu + nv + np + (gauged ? 1 : 0); }
  int u_dof(int f) const { return f; }
  int v_dof(int f) const { return nu + f; }
  int p_dof(int c) const { return nu + nv + c; }
};

/// Darcy equations in first-order form (used by the gradient path only; the
/// forward Darcy solve eliminates velocity instead).
SaddleSystem assemble_darcy_first_order(const DarcyProblem& pb);

/// Darcy-Brinkman saddle system with ghost-eliminated tangential conditions.
SaddleSystem assemble_brinkman(const BrinkmanProblem& pb);

/// Packs a velocity/pressure pair into the system's dof vector (gauge 0).
Eigen::VectorXd pack_state(const SaddleSystem& sys, const StaggeredGrid& g,
                           const FaceField& v, const CellField& p);

/// Sparse LU with a few iterative-refinement passes; throws ConvergenceError
/// if the factorization fails. `what` labels error messages.
Eigen::VectorXd refined_lu_solve(const Eigen::SparseMatrix<double>& m,
                                 const Eigen::VectorXd& rhs, const char* what);

}  // namespace porous::detail
