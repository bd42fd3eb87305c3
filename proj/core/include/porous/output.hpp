#pragma once

#include <string>

#include "porous/grid.hpp"

namespace porous {

/// CSV cell field: header i,j,x,y,value; scientific notation with 17
/// significant digits (bit-exact round trip through read_cell_field_csv).
void write_cell_field_csv(const std::string& path, const StaggeredGrid& g,
                          const CellField& f);

/// CSV face field interpolated to cell centers: header
/// i,j,x,y,component,value with component in {x, y}.
void write_face_field_csv(const std::string& path, const StaggeredGrid& g,
                          const FaceField& f);

CellField read_cell_field_csv(const std::string& path, const StaggeredGrid& g);

/// Legacy ASCII VTK STRUCTURED_POINTS over the cell centers, with the
/// pressure as SCALARS and the cell-centered velocity as VECTORS.
void write_vtk(const std::string& path, const StaggeredGrid& g,
               const CellField& pressure, const FaceField& velocity,
               const std::string& title = "porous-adjoint fields");

}  // namespace porous
