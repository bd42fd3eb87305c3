#pragma once

#include "porous/flow.hpp"
#include "porous/grid.hpp"

namespace porous {

/// Darcy-Brinkman problem: mu/k v + grad p - div[2 mu D[v]] = rho b,
/// div v = 0. Two boundary-condition statements are supported:
///
///   Main      normal stress n.(-pI + 2 mu D[v])n = -p^p plus a prescribed
///             tangential velocity on Pressure sides; FullVelocity elsewhere
///   Traction  full traction (-pI + 2 mu D[v])n = t^p on Traction sides;
///             FullVelocity elsewhere
struct BrinkmanProblem {
  enum class Form { Main, Traction };

  StaggeredGrid grid;
  CellField k;
  double mu = 1.0;
  BodyForce body_force;
  BoundarySpec bc;
  Form form = Form::Main;
  SolverOptions solver;

  /// Optional continuity source for manufactured-solution verification,
  /// as in DarcyProblem.
  CellField continuity_source;
};

void validate_brinkman_problem(const BrinkmanProblem& pb);

/// Assembles and solves the coupled velocity-pressure saddle-point system
/// with the viscous term discretized as the component-wise vector Laplacian
/// and tangential boundary data imposed through ghost reflection.
/// Pure-velocity problems are compatibility-checked and returned in the
/// mean-zero pressure gauge.
FlowSolution solve_brinkman(const BrinkmanProblem& pb);

/// Symmetric velocity gradient D[v] sampled at cell centers. Normal
/// derivatives come straight from the adjacent faces; cross derivatives use
/// central differences of face-interpolated components (one-sided along the
/// boundary rows and columns).
struct StrainField {
  std::vector<double> xx, yy, xy;
};
StrainField strain_rate(const StaggeredGrid& g, const FaceField& v);

}  // namespace porous
