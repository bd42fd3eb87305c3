#include "porous/grid.hpp"

#include <cmath>
#include <string>

namespace porous {

StaggeredGrid make_grid(int nx, int ny, double lx, double ly) {
  if (nx < 1 || ny < 1) {
    throw InputError("make_grid: cell counts must be >= 1, got nx=" +
                     std::to_string(nx) + " ny=" + std::to_string(ny));
  }
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw InputError("make_grid: domain extents must be positive and finite");
  }
  StaggeredGrid g;
  g.nx = nx;
  g.ny = ny;
  g.lx = lx;
  g.ly = ly;
  g.hx = lx / nx;
  g.hy = ly / ny;
  return g;
}

int side_face_count(const StaggeredGrid& g, Side s) {
  return (s == Side::Left || s == Side::Right) ? g.ny : g.nx;
}

double side_face_area(const StaggeredGrid& g, Side s) {
  return (s == Side::Left || s == Side::Right) ? g.hy : g.hx;
}

double full_velocity_normal(Side s, const SideBc& bc, int i) {
  switch (s) {
    case Side::Left: return -bc.primary.at(i);
    case Side::Right: return bc.primary.at(i);
    case Side::Bottom: return -bc.secondary.at(i);
    default: return bc.secondary.at(i);
  }
}

namespace {

void validate_profile(const StaggeredGrid& g, Side s, const Profile& p,
                      const char* what) {
  const int n = side_face_count(g, s);
  if (p.tabulated() && p.table_size() != n) {
    throw InputError(std::string("boundary profile (") + what + "): table has " +
                     std::to_string(p.table_size()) + " entries, side has " +
                     std::to_string(n) + " faces");
  }
  for (int i = 0; i < n; ++i) {
    if (!std::isfinite(p.at(i))) {
      throw InputError(std::string("boundary profile (") + what +
                       "): non-finite value");
    }
  }
}

}  // namespace

void validate_boundary_spec(const StaggeredGrid& g, const BoundarySpec& bc) {
  for (Side s : kSides) {
    const SideBc& sb = bc.side(s);
    validate_profile(g, s, sb.primary, "primary");
    validate_profile(g, s, sb.secondary, "secondary");
  }
}

void validate_cell_field(const StaggeredGrid& g, const CellField& f,
                         const char* what) {
  if (f.size() != g.num_cells()) {
    throw InputError(std::string(what) + ": cell field has " +
                     std::to_string(f.size()) + " values, grid has " +
                     std::to_string(g.num_cells()) + " cells");
  }
  for (double v : f.values) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(what) + ": non-finite value in cell field");
    }
  }
}

void validate_face_field(const StaggeredGrid& g, const FaceField& f,
                         const char* what) {
  if (static_cast<int>(f.x.size()) != g.num_x_faces() ||
      static_cast<int>(f.y.size()) != g.num_y_faces()) {
    throw InputError(std::string(what) + ": face field shape mismatch");
  }
  for (double v : f.x) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(what) + ": non-finite x-face value");
    }
  }
  for (double v : f.y) {
    if (!std::isfinite(v)) {
      throw InputError(std::string(what) + ": non-finite y-face value");
    }
  }
}

CellField divergence(const StaggeredGrid& g, const FaceField& v) {
  validate_face_field(g, v, "divergence");
  CellField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double dudx =
          (v.x[g.xface(i + 1, j)] - v.x[g.xface(i, j)]) / g.hx;
      const double dvdy =
          (v.y[g.yface(i, j + 1)] - v.y[g.yface(i, j)]) / g.hy;
      out[g.cell(i, j)] = dudx + dvdy;
    }
  }
  return out;
}

BoundaryGradient gradient(const StaggeredGrid& g, const CellField& p,
                          const BoundarySpec& bc) {
  validate_cell_field(g, p, "gradient");
  validate_boundary_spec(g, bc);

  BoundaryGradient out;
  out.values = FaceField(g);
  out.x_defined.assign(static_cast<std::size_t>(g.num_x_faces()), 1);
  out.y_defined.assign(static_cast<std::size_t>(g.num_y_faces()), 1);

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 1; i < g.nx; ++i) {
      out.values.x[g.xface(i, j)] =
          (p[g.cell(i, j)] - p[g.cell(i - 1, j)]) / g.hx;
    }
    // one-sided closure over h/2 at pressure boundaries
    if (bc.left.kind == BcKind::Pressure) {
      out.values.x[g.xface(0, j)] =
          (p[g.cell(0, j)] - bc.left.primary.at(j)) / (0.5 * g.hx);
    } else {
      out.x_defined[static_cast<std::size_t>(g.xface(0, j))] = 0;
    }
    if (bc.right.kind == BcKind::Pressure) {
      out.values.x[g.xface(g.nx, j)] =
          (bc.right.primary.at(j) - p[g.cell(g.nx - 1, j)]) / (0.5 * g.hx);
    } else {
      out.x_defined[static_cast<std::size_t>(g.xface(g.nx, j))] = 0;
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    for (int j = 1; j < g.ny; ++j) {
      out.values.y[g.yface(i, j)] =
          (p[g.cell(i, j)] - p[g.cell(i, j - 1)]) / g.hy;
    }
    if (bc.bottom.kind == BcKind::Pressure) {
      out.values.y[g.yface(i, 0)] =
          (p[g.cell(i, 0)] - bc.bottom.primary.at(i)) / (0.5 * g.hy);
    } else {
      out.y_defined[static_cast<std::size_t>(g.yface(i, 0))] = 0;
    }
    if (bc.top.kind == BcKind::Pressure) {
      out.values.y[g.yface(i, g.ny)] =
          (bc.top.primary.at(i) - p[g.cell(i, g.ny - 1)]) / (0.5 * g.hy);
    } else {
      out.y_defined[static_cast<std::size_t>(g.yface(i, g.ny))] = 0;
    }
  }
  return out;
}

double integrate_cells(const StaggeredGrid& g, const CellField& f) {
  validate_cell_field(g, f, "integrate_cells");
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum * g.cell_area();
}

FaceField face_permeability(const StaggeredGrid& g, const CellField& k) {
  validate_cell_field(g, k, "face_permeability");
  for (double v : k.values) {
    if (!(v > 0.0)) {
      throw InputError("face_permeability: permeability must be positive");
    }
  }
  FaceField out(g);
  auto harmonic = [](double a, double b) { return 2.0 * a * b / (a + b); };
  for (int j = 0; j < g.ny; ++j) {
    out.x[g.xface(0, j)] = k[g.cell(0, j)];
    out.x[g.xface(g.nx, j)] = k[g.cell(g.nx - 1, j)];
    for (int i = 1; i < g.nx; ++i) {
      out.x[g.xface(i, j)] = harmonic(k[g.cell(i - 1, j)], k[g.cell(i, j)]);
    }
  }
  for (int i = 0; i < g.nx; ++i) {
    out.y[g.yface(i, 0)] = k[g.cell(i, 0)];
    out.y[g.yface(i, g.ny)] = k[g.cell(i, g.ny - 1)];
    for (int j = 1; j < g.ny; ++j) {
      out.y[g.yface(i, j)] = harmonic(k[g.cell(i, j - 1)], k[g.cell(i, j)]);
    }
  }
  return out;
}

double face_permeability_derivative(double k_self, double k_other) {
  const double s = k_self + k_other;
  return 2.0 * k_other * k_other / (s * s);
}

double mean(const CellField& f) {
  if (f.values.empty()) return 0.0;
  double sum = 0.0;
  for (double v : f.values) sum += v;
  return sum / static_cast<double>(f.values.size());
}

}  // namespace porous
