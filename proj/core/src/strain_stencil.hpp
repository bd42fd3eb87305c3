#pragma once

// Shared stencil of the cell-centered strain-rate components, used both to
// evaluate D[v] and to scatter its transpose in the discrete gradient. Keep
// the two in exact sync by construction.

#include "porous/grid.hpp"

namespace porous::detail {

enum class StrainComp { XX, YY, XY };

/// Enumerates the linear map from face values to the strain components of
/// cell (i,j): fn(component, is_x_face, face_index, coefficient).
template <typename F>
void for_each_strain_coef(const StaggeredGrid& g, int i, int j, F&& fn) {
  // D_xx = du/dx, exact from the cell's own faces
  fn(StrainComp::XX, true, g.xface(i + 1, j), 1.0 / g.hx);
  fn(StrainComp::XX, true, g.xface(i, j), -1.0 / g.hx);
  // D_yy = dv/dy
  fn(StrainComp::YY, false, g.yface(i, j + 1), 1.0 / g.hy);
  fn(StrainComp::YY, false, g.yface(i, j), -1.0 / g.hy);

  // D_xy = (du/dy + dv/dx)/2 from face-averaged components, one-sided in
  // the first and last rows/columns.
  auto ubar = [&](int ci, int cj, double w, F& f) {
    f(StrainComp::XY, true, g.xface(ci, cj), 0.5 * w);
    f(StrainComp::XY, true, g.xface(ci + 1, cj), 0.5 * w);
  };
  auto vbar = [&](int ci, int cj, double w, F& f) {
    f(StrainComp::XY, false, g.yface(ci, cj), 0.5 * w);
    f(StrainComp::XY, false, g.yface(ci, cj + 1), 0.5 * w);
  };

  // second-order one-sided rows where the centered stencil leaves the grid
  if (g.ny > 2) {
    if (j == 0) {
      ubar(i, 0, -0.75 / g.hy, fn);
      ubar(i, 1, 1.0 / g.hy, fn);
      ubar(i, 2, -0.25 / g.hy, fn);
    } else if (j == g.ny - 1) {
      ubar(i, j, 0.75 / g.hy, fn);
      ubar(i, j - 1, -1.0 / g.hy, fn);
      ubar(i, j - 2, 0.25 / g.hy, fn);
    } else {
      ubar(i, j + 1, 0.25 / g.hy, fn);
      ubar(i, j - 1, -0.25 / g.hy, fn);
    }
  } else if (g.ny == 2) {
    if (j == 0) {
      ubar(i, 1, 0.5 / g.hy, fn);
      ubar(i, 0, -0.5 / g.hy, fn);
    } else {
      ubar(i, j, 0.5 / g.hy, fn);
      ubar(i, j - 1, -0.5 / g.hy, fn);
    }
  }
  if (g.nx > 2) {
    if (i == 0) {
      vbar(0, j, -0.75 / g.hx, fn);
      vbar(1, j, 1.0 / g.hx, fn);
      vbar(2, j, -0.25 / g.hx, fn);
    } else if (i == g.nx - 1) {
      vbar(i, j, 0.75 / g.hx, fn);
      vbar(i - 1, j, -1.0 / g.hx, fn);
      vbar(i - 2, j, 0.25 / g.hx, fn);
    } else {
      vbar(i + 1, j, 0.25 / g.hx, fn);
      vbar(i - 1, j, -0.25 / g.hx, fn);
    }
  } else if (g.nx == 2) {
    if (i == 0) {
      vbar(1, j, 0.5 / g.hx, fn);
      vbar(0, j, -0.5 / g.hx, fn);
    } else {
      vbar(i, j, 0.5 / g.hx, fn);
      vbar(i - 1, j, -0.5 / g.hx, fn);
    }
  }
}

}  // namespace porous::detail
