#include "porous/flow.hpp"

namespace porous {

FaceField body_force_faces(const StaggeredGrid& g, const BodyForce& b) {
  switch (b.kind) {
    case BodyForce::Kind::None:
      return FaceField(g);
    case BodyForce::Kind::FaceVector: {
      validate_face_field(g, b.vector, "body force");
      return b.vector;
    }
    case BodyForce::Kind::Potential:
      break;
  }
  validate_cell_field(g, b.potential, "body force potential");
  const CellField& psi = b.potential;
  FaceField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      out.x[g.xface(i, j)] =
          -(psi[g.cell(i, j)] - psi[g.cell(i - 1, j)]) / g.hx;
    }
    if (g.nx >= 2) {
      out.x[g.xface(0, j)] =
          -(psi[g.cell(1, j)] - psi[g.cell(0, j)]) / g.hx;
      out.x[g.xface(g.nx, j)] =
          -(psi[g.cell(g.nx - 1, j)] - psi[g.cell(g.nx - 2, j)]) / g.hx;
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) {
      out.y[g.yface(i, j)] =
          -(psi[g.cell(i, j)] - psi[g.cell(i, j - 1)]) / g.hy;
    }
    if (g.ny >= 2) {
      out.y[g.yface(i, 0)] = -(psi[g.cell(i, 1)] - psi[g.cell(i, 0)]) / g.hy;
      out.y[g.yface(i, g.ny)] =
          -(psi[g.cell(i, g.ny - 1)] - psi[g.cell(i, g.ny - 2)]) / g.hy;
    }
  }
  return out;
}

}  // namespace porous
