#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "porous/errors.hpp"

namespace porous {

/// 2D staggered (MAC) grid on [0,lx] x [0,ly].
///
/// Variable layout:
///   - scalars (pressure, permeability, ...) at cell centers,
///     index (i,j), i in [0,nx), j in [0,ny)
///   - x-velocity components at vertical faces, index (i,j),
///     i in [0,nx], j in [0,ny)
///   - y-velocity components at horizontal faces, index (i,j),
///     i in [0,nx), j in [0,ny]
///
///        v(i,j+1)
///           |
///   u(i,j)--p(i,j)--u(i+1,j)
///           |
///        v(i,j)
struct StaggeredGrid {
  int nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  double hx = 0.0, hy = 0.0;

  int num_cells() const { return nx * ny; }
  int num_x_faces() const { return (nx + 1) * ny; }
  int num_y_faces() const { return nx * (ny + 1); }

  int cell(int i, int j) const { return j * nx + i; }
  int xface(int i, int j) const { return j * (nx + 1) + i; }
  int yface(int i, int j) const { return j * nx + i; }

  double cell_x(int i) const { return (i + 0.5) * hx; }
  double cell_y(int j) const { return (j + 0.5) * hy; }
  double cell_area() const { return hx * hy; }
};

/// Validates arguments and precomputes spacings.
StaggeredGrid make_grid(int nx, int ny, double lx, double ly);

/// One scalar per cell.
struct CellField {
  std::vector<double> values;

  CellField() = default;
  explicit CellField(const StaggeredGrid& g, double init = 0.0)
      : values(static_cast<std::size_t>(g.num_cells()), init) {}

  double& operator[](int c) { return values[static_cast<std::size_t>(c)]; }
  double operator[](int c) const { return values[static_cast<std::size_t>(c)]; }
  int size() const { return static_cast<int>(values.size()); }
};

/// One scalar per face, split by orientation. x[f] holds the x-component of
/// a vector field sampled at x-faces, y[f] the y-component at y-faces.
struct FaceField {
  std::vector<double> x, y;

  FaceField() = default;
  explicit FaceField(const StaggeredGrid& g, double init = 0.0)
      : x(static_cast<std::size_t>(g.num_x_faces()), init),
        y(static_cast<std::size_t>(g.num_y_faces()), init) {}
};

enum class Side : std::uint8_t { Left, Right, Bottom, Top };
inline constexpr std::array<Side, 4> kSides = {Side::Left, Side::Right,
                                               Side::Bottom, Side::Top};

enum class BcKind : std::uint8_t {
  Pressure,        // Darcy: prescribed p; Brinkman main form: prescribed
                   // normal stress -p^p plus tangential velocity
  NormalVelocity,  // Darcy: prescribed v.n (outward positive)
  FullVelocity,    // Brinkman: both velocity components prescribed
  Traction,        // Brinkman traction form: prescribed traction vector
};

/// Boundary value profile along one side: either a constant or one value per
/// boundary face (ordered by increasing boundary coordinate).
class Profile {
 public:
  Profile() = default;
  Profile(double c) : constant_(c) {}  // NOLINT: implicit by design
  explicit Profile(std::vector<double> table) : table_(std::move(table)) {}

  bool tabulated() const { return !table_.empty(); }
  int table_size() const { return static_cast<int>(table_.size()); }
  double at(int i) const {
    return table_.empty() ? constant_ : table_[static_cast<std::size_t>(i)];
  }

 private:
  double constant_ = 0.0;
  std::vector<double> table_;
};

/// Boundary condition on one side of the domain.
///
/// Meaning of the profiles per kind:
///   Pressure        primary = p^p, secondary = tangential velocity
///                   component (Cartesian: y on left/right, x on
///                   bottom/top; Brinkman main form only)
///   NormalVelocity  primary = v.n, outward positive
///   FullVelocity    primary = vx, secondary = vy (Cartesian)
///   Traction        primary = tx, secondary = ty (Cartesian)
struct SideBc {
  BcKind kind = BcKind::Pressure;
  Profile primary;
  Profile secondary;
};

/// Per-side boundary conditions; every boundary face is covered by exactly
/// one side and hence one condition kind.
struct BoundarySpec {
  SideBc left, right, bottom, top;

  const SideBc& side(Side s) const {
    switch (s) {
      case Side::Left: return left;
      case Side::Right: return right;
      case Side::Bottom: return bottom;
      default: return top;
    }
  }
  SideBc& side(Side s) {
    switch (s) {
      case Side::Left: return left;
      case Side::Right: return right;
      case Side::Bottom: return bottom;
      default: return top;
    }
  }
};

/// Number of boundary faces on a side (ny for left/right, nx for bottom/top).
int side_face_count(const StaggeredGrid& g, Side s);

/// Length of one boundary face on a side.
double side_face_area(const StaggeredGrid& g, Side s);

/// Outward normal sign of the velocity component stored on that side's
/// faces: -1 on left/bottom, +1 on right/top.
inline double outward_sign(Side s) {
  return (s == Side::Left || s == Side::Bottom) ? -1.0 : +1.0;
}

/// Outward normal component v.n of a FullVelocity profile pair at face i.
double full_velocity_normal(Side s, const SideBc& bc, int i);

/// Throws InputError unless every profile of `bc` is finite and any
/// tabulated profile matches its side's face count.
void validate_boundary_spec(const StaggeredGrid& g, const BoundarySpec& bc);

/// Throws InputError unless the field shape matches the grid and all values
/// are finite. `what` names the field in the error message.
void validate_cell_field(const StaggeredGrid& g, const CellField& f,
                         const char* what);
void validate_face_field(const StaggeredGrid& g, const FaceField& f,
                         const char* what);

// ---------------------------------------------------------------------------
// Discrete operators
// ---------------------------------------------------------------------------

/// Per cell: (u_E - u_W)/hx + (v_N - v_S)/hy.
CellField divergence(const StaggeredGrid& g, const FaceField& v);

/// Discrete pressure gradient at faces with boundary closure from `bc`.
/// Faces on non-Pressure sides carry no gradient demand; they are flagged
/// undefined (value 0, mask 0) rather than computed.
struct BoundaryGradient {
  FaceField values;
  std::vector<std::uint8_t> x_defined, y_defined;
};
BoundaryGradient gradient(const StaggeredGrid& g, const CellField& p,
                          const BoundarySpec& bc);

/// Midpoint-rule integral: sum of f_c * hx * hy.
double integrate_cells(const StaggeredGrid& g, const CellField& f);

/// Face permeability: harmonic mean of the two adjacent cell values on
/// interior faces, the adjacent cell value on boundary faces.
FaceField face_permeability(const StaggeredGrid& g, const CellField& k);

/// Derivative of the interior-face harmonic mean w.r.t. the cell value on
/// one side: d/dk_self [2 k_self k_other / (k_self + k_other)]. Boundary
/// faces copy the adjacent cell, so their derivative is exactly 1.
double face_permeability_derivative(double k_self, double k_other);

/// Mean of a cell field (uniform cell areas, so arithmetic = area-weighted).
double mean(const CellField& f);

}  // namespace porous
