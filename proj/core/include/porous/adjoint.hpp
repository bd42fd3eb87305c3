#pragma once

#include <optional>

#include "porous/brinkman.hpp"
#include "porous/classify.hpp"
#include "porous/darcy.hpp"
#include "porous/flow.hpp"

namespace porous {

/// Adjoint pair (Lambda, lambda) of the total-dissipation objective.
struct AdjointSolution {
  enum class Source { Numerical, AnalyticalClass };
  FaceField lambda_v;  // Lambda, divergence-free adjoint velocity
  CellField lambda_p;  // lambda, adjoint pressure
  Source source = Source::Numerical;
  SolveDiagnostics diagnostics;
};

/// Solves the Darcy adjoint problem by reusing the forward solver with the
/// pseudo body force mu v/k (sampled at faces with the same harmonic face
/// permeability as the forward solve, so the class A/B identity Lambda = v
/// is discretely exact) and homogeneous boundary data of the same kinds:
/// lambda = 0 on pressure sides, Lambda.n = 0 on velocity sides.
AdjointSolution solve_adjoint_darcy(const DarcyProblem& pb,
                                    const FlowSolution& forward);

/// Solves the Darcy-Brinkman adjoint problem: same saddle operator, body
/// force mu v/k - mu lap(v), pseudo pressure loading -n.(2 mu D[v])n with
/// zero tangential data on pressure sides (traction form: traction data
/// 2 mu D[v] n), Lambda = 0 on velocity sides. The load is evaluated with
/// the forward solver's own stencils, making the four class solutions
/// discretely exact.
AdjointSolution solve_adjoint_brinkman(const BrinkmanProblem& pb,
                                       const FlowSolution& forward);

/// The closed-form class adjoints: A/B -> (v, 0); C -> (0, -p - psi) in the
/// mean-zero gauge; D -> (0, -p). psi is required exactly for class C.
/// Throws NotAnalyticallySolvableError for General.
AdjointSolution analytical_adjoint(const StaggeredGrid& g, ClassTag cls,
                                   const FlowSolution& forward,
                                   const std::optional<CellField>& psi =
                                       std::nullopt);

}  // namespace porous
