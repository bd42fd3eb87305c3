#pragma once

#include "porous/grid.hpp"

namespace porous {

/// Body force rho*b entering the momentum balance. Either sampled directly
/// at faces, or given as a cell potential psi with rho*b = -grad psi (the
/// form required for Class C problems).
struct BodyForce {
  enum class Kind { None, FaceVector, Potential };
  Kind kind = Kind::None;
  FaceField vector;
  CellField potential;

  static BodyForce none() { return {}; }
  static BodyForce face_vector(FaceField f) {
    BodyForce b;
    b.kind = Kind::FaceVector;
    b.vector = std::move(f);
    return b;
  }
  static BodyForce from_potential(CellField psi) {
    BodyForce b;
    b.kind = Kind::Potential;
    b.potential = std::move(psi);
    return b;
  }
};

/// Samples rho*b at faces. Potential form: -grad psi by two-point interior
/// differences; boundary faces copy the adjacent interior difference (used
/// only where a momentum equation is posed on a boundary face).
FaceField body_force_faces(const StaggeredGrid& g, const BodyForce& b);

struct SolverOptions {
  double tolerance = 1e-10;  // residual acceptance threshold
  int max_iterations = 0;    // iterative cap; 0 = 10 * cell count
  /// Cell count above which the Darcy solve switches from a sparse direct
  /// factorization to conjugate gradients.
  int direct_cell_limit = 256 * 256;
  bool force_iterative = false;
};

struct SolveDiagnostics {
  double momentum_residual = 0.0;    // max norm of the discrete momentum residual
  double continuity_residual = 0.0;  // max norm of div v (minus any source)
  int iterations = 0;                // 0 for direct factorizations
  bool gauge_pinned = false;         // true when mean(p) = 0 was imposed
};

/// Velocity/pressure pair produced by the forward solvers; the adjoint
/// solvers reuse the same shape for (Lambda, lambda).
struct FlowSolution {
  FaceField v;
  CellField p;
  SolveDiagnostics diagnostics;
};

}  // namespace porous
