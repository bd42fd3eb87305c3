#pragma once

#include <utility>

#include "porous/flow.hpp"
#include "porous/grid.hpp"

namespace porous {

/// Darcy flow problem: mu/k v + grad p = rho b, div v = 0, with pressure or
/// normal-velocity data on each side.
struct DarcyProblem {
  StaggeredGrid grid;
  CellField k;       // permeability, > 0
  double mu = 1.0;   // viscosity, > 0
  BodyForce body_force;
  BoundarySpec bc;   // kinds restricted to Pressure / NormalVelocity
  SolverOptions solver;

  /// Optional prescribed continuity source (div v = source). Empty means
  /// zero. Used by manufactured-solution verification; not part of the
  /// physical model and not reachable from run configurations.
  CellField continuity_source;
};

/// Throws InputError if shapes, signs, or boundary kinds are invalid.
void validate_darcy_problem(const DarcyProblem& pb);

/// True if any side carries a Pressure condition.
bool has_pressure_side(const BoundarySpec& bc);

/// Solves the Darcy problem by eliminating the face velocities,
/// v_f = (k_f/mu)(rho b_f - (grad p)_f), and solving the resulting
/// five-point pressure system. Prescribed normal velocities are imposed
/// directly on boundary faces. Pure-velocity problems are checked for
/// discrete compatibility and returned in the mean-zero pressure gauge.
///
/// Throws CompatibilityError, ConvergenceError, or InputError.
FlowSolution solve_darcy(const DarcyProblem& pb);

/// Discrete residuals of both equations for independent verification.
/// Momentum residual at velocity-prescribed boundary faces reports the
/// boundary-condition mismatch v_f - v_f^p instead (no momentum equation
/// is posed there). Continuity residual is div v minus any source.
std::pair<FaceField, CellField> residuals_darcy(const DarcyProblem& pb,
                                                const FlowSolution& sol);

}  // namespace porous
