#pragma once

#include <functional>

#include "porous/adjoint.hpp"
#include "porous/brinkman.hpp"
#include "porous/darcy.hpp"
#include "porous/grid.hpp"

namespace porous {

/// Total dissipation rate of the Darcy model: integral of mu/k |v|^2 with
/// |v|^2 formed by averaging each face component to the cell center and then
/// squaring. The same closure is shared with the sensitivity density so the
/// continuous and discrete gradients refer to one functional.
double total_dissipation_darcy(const StaggeredGrid& g, const CellField& k,
                               double mu, const FaceField& v);

/// Darcy-Brinkman dissipation: adds 2 mu D[v]:D[v] from strain_rate.
double total_dissipation_brinkman(const StaggeredGrid& g, const CellField& k,
                                  double mu, const FaceField& v);

/// Sensitivity of the total dissipation rate to the permeability field,
/// as a per-area density: mu/k^2 v.(2 Lambda - v) under the shared
/// face-to-center closure.
struct SensitivityField {
  CellField density;
};
SensitivityField sensitivity_field(const StaggeredGrid& g, const CellField& k,
                                   double mu, const FaceField& v,
                                   const AdjointSolution& adjoint);

/// Directional derivative sum of density * dk * cell area.
double directional_derivative(const StaggeredGrid& g,
                              const SensitivityField& s, const CellField& dk);

/// Exact gradient of the discrete objective Phi_h(k): solves the transposed
/// first-order system with right-hand side -dPhi/d(state) and assembles the
/// explicit permeability partials plus the adjoint-weighted drag-coefficient
/// derivatives through the harmonic face-permeability chain rule. Returns
/// dPhi/dk_c per cell (multiply by nothing; divide by cell area for the
/// density form).
CellField discrete_gradient(const DarcyProblem& pb, const FlowSolution& sol);
CellField discrete_gradient(const BrinkmanProblem& pb,
                            const FlowSolution& sol);

/// Central-difference oracle with step max(k_c, 1) * eps^(1/3) per cell.
/// The objective is re-evaluated on perturbed permeability fields; cells may
/// be processed concurrently when threads > 1.
CellField fd_gradient(const StaggeredGrid& g, const CellField& k,
                      const std::function<double(const CellField&)>& objective,
                      int threads = 1);

/// FD of the full solve-then-dissipation map for each model.
CellField fd_gradient(const DarcyProblem& pb, int threads = 1);
CellField fd_gradient(const BrinkmanProblem& pb, int threads = 1);

/// The gradient triple check: continuous-adjoint route, exact discrete
/// route, and the FD oracle, with pairwise relative max-norm errors.
struct GradientReport {
  CellField adjoint_gradient;   // density * cell area, numerical adjoint
  CellField discrete_gradient;  // exact transpose route
  CellField fd_gradient;        // oracle
  double adjoint_vs_fd = 0.0;
  double discrete_vs_fd = 0.0;
  double adjoint_vs_discrete = 0.0;
};
GradientReport gradient_report(const DarcyProblem& pb, int threads = 1);
GradientReport gradient_report(const BrinkmanProblem& pb, int threads = 1);

/// max |a-b| / max(max |ref|, floor)
double relative_max_error(const CellField& a, const CellField& b);

}  // namespace porous
