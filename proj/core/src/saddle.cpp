#include "saddle.hpp"

#include <cmath>
#include <vector>

namespace porous::detail {

namespace {

using Triplet = Eigen::Triplet<double>;

// Prescribed tangential data lives at boundary-face centers, but tangential
// ghosts are needed at the staggered node positions half a cell away; the
// node value averages the two adjacent entries (end nodes clamp).
double node_value(const Profile& prof, int node, int count) {
  if (node <= 0) return prof.at(0);
  if (node >= count) return prof.at(count - 1);
  return 0.5 * (prof.at(node - 1) + prof.at(node));
}

struct BrinkmanAssembler {
  const BrinkmanProblem& pb;
  const StaggeredGrid& g;
  const FaceField kf;
  const FaceField bf;
  SaddleSystem sys;

  explicit BrinkmanAssembler(const BrinkmanProblem& problem)
      : pb(problem),
        g(problem.grid),
        kf(face_permeability(problem.grid, problem.k)),
        bf(body_force_faces(problem.grid, problem.body_force)) {
    sys.nu = g.num_x_faces();
    sys.nv = g.num_y_faces();
    sys.np = g.num_cells();
    sys.gauged = !pressure_like_present();
    sys.momentum_vel.resize(static_cast<std::size_t>(sys.nu + sys.nv));
    sys.is_dirichlet.assign(static_cast<std::size_t>(sys.nu + sys.nv), false);
  }

  BcKind pressure_like() const {
    return pb.form == BrinkmanProblem::Form::Main ? BcKind::Pressure
                                                  : BcKind::Traction;
  }
  bool pressure_like_present() const {
    for (Side s : kSides) {
      if (pb.bc.side(s).kind == pressure_like()) return true;
    }
    return false;
  }

  // --- tangential ghost closures -----------------------------------------

  // d v / d x at a bottom or top boundary node (x = i hx), one-sided at the
  // domain corners.
  LinComb dvdx_at_horizontal_node(int i, int j_face) const {
    LinComb lc;
    if (g.nx < 2) return lc;
    int lo = i - 1, hi = i;
    if (i == 0) { lo = 0; hi = 1; }
    if (i == g.nx) { lo = g.nx - 2; hi = g.nx - 1; }
    lc.add(sys.v_dof(g.yface(hi, j_face)), 1.0 / g.hx);
    lc.add(sys.v_dof(g.yface(lo, j_face)), -1.0 / g.hx);
    return lc;
  }

  // d u / d y at a left or right boundary node (y = j hy).
  LinComb dudy_at_vertical_node(int j, int i_face) const {
    LinComb lc;
    if (g.ny < 2) return lc;
    int lo = j - 1, hi = j;
    if (j == 0) { lo = 0; hi = 1; }
    if (j == g.ny) { lo = g.ny - 2; hi = g.ny - 1; }
    lc.add(sys.u_dof(g.xface(i_face, hi)), 1.0 / g.hy);
    lc.add(sys.u_dof(g.xface(i_face, lo)), -1.0 / g.hy);
    return lc;
  }

  // Ghost value of u mirrored across the bottom/top side at x-node i.
  LinComb u_ghost(int i, bool bottom) const {
    const Side s = bottom ? Side::Bottom : Side::Top;
    const SideBc& sb = pb.bc.side(s);
    const int j_in = bottom ? 0 : g.ny - 1;
    LinComb lc;
    if (sb.kind == BcKind::Traction) {
      // sigma_xy = -+t_x on the bottom/top boundary, so
      //   bottom: ghost = u + hy tx/mu + hy dv/dx
      //   top:    ghost = u + hy tx/mu - hy dv/dx
      const double tx = node_value(sb.primary, i, g.nx);
      const double sgn = bottom ? +1.0 : -1.0;
      lc.add(sys.u_dof(g.xface(i, j_in)), 1.0);
      lc.constant += g.hy * tx / pb.mu;
      lc.add_scaled(dvdx_at_horizontal_node(i, bottom ? 0 : g.ny),
                    sgn * g.hy);
      return lc;
    }
    // prescribed tangential velocity (FullVelocity: vx; Pressure: profile)
    const Profile& tangential =
        sb.kind == BcKind::FullVelocity ? sb.primary : sb.secondary;
    lc.add(sys.u_dof(g.xface(i, j_in)), -1.0);
    lc.constant = 2.0 * node_value(tangential, i, g.nx);
    return lc;
  }

  // Ghost value of v mirrored across the left/right side at y-node j.
  LinComb v_ghost(int j, bool left) const {
    const Side s = left ? Side::Left : Side::Right;
    const SideBc& sb = pb.bc.side(s);
    const int i_in = left ? 0 : g.nx - 1;
    LinComb lc;
    if (sb.kind == BcKind::Traction) {
      // sigma_xy = -+t_y on the left/right boundary, so
      //   left:  ghost = v + hx ty/mu + hx du/dy
      //   right: ghost = v + hx ty/mu - hx du/dy
      const double ty = node_value(sb.secondary, j, g.ny);
      const double sgn = left ? +1.0 : -1.0;
      lc.add(sys.v_dof(g.yface(i_in, j)), 1.0);
      lc.constant += g.hx * ty / pb.mu;
      lc.add_scaled(dudy_at_vertical_node(j, left ? 0 : g.nx), sgn * g.hx);
      return lc;
    }
    const Profile& tangential = sb.secondary;  // vy for both kinds
    lc.add(sys.v_dof(g.yface(i_in, j)), -1.0);
    lc.constant = 2.0 * node_value(tangential, j, g.ny);
    return lc;
  }

  LinComb u_at(int i, int j) const {
    if (j < 0) return u_ghost(i, /*bottom=*/true);
    if (j >= g.ny) return u_ghost(i, /*bottom=*/false);
    LinComb lc;
    lc.add(sys.u_dof(g.xface(i, j)), 1.0);
    return lc;
  }

  LinComb v_at(int i, int j) const {
    if (i < 0) return v_ghost(j, /*left=*/true);
    if (i >= g.nx) return v_ghost(j, /*left=*/false);
    LinComb lc;
    lc.add(sys.v_dof(g.yface(i, j)), 1.0);
    return lc;
  }

  // Boundary normal-stress datum sigma_nn at a pressure-like face.
  double sigma_data(Side s, int idx) const {
    const SideBc& sb = pb.bc.side(s);
    if (pb.form == BrinkmanProblem::Form::Main) return -sb.primary.at(idx);
    // traction form: sigma_nn = t.n
    const bool vertical = (s == Side::Left || s == Side::Right);
    const double tn = vertical ? outward_sign(s) * sb.primary.at(idx)
                               : outward_sign(s) * sb.secondary.at(idx);
    return tn;
  }

  // --- momentum rows -------------------------------------------------------

  struct Row {
    LinComb vel;
    LinComb pres;  // pressure dofs plus the stress-data constant
    double rhs_b = 0.0;
  };

  Row x_momentum_interior(int i, int j) const {
    Row r;
    const int f = g.xface(i, j);
    r.rhs_b = bf.x[f];
    r.vel.add(sys.u_dof(f), pb.mu / kf.x[f]);
    const double cx = pb.mu / (g.hx * g.hx);
    const double cy = pb.mu / (g.hy * g.hy);
    r.vel.add(sys.u_dof(f), 2.0 * (cx + cy));
    r.vel.add(sys.u_dof(g.xface(i + 1, j)), -cx);
    r.vel.add(sys.u_dof(g.xface(i - 1, j)), -cx);
    r.vel.add_scaled(u_at(i, j + 1), -cy);
    r.vel.add_scaled(u_at(i, j - 1), -cy);
    r.pres.add(sys.p_dof(g.cell(i, j)), 1.0 / g.hx);
    r.pres.add(sys.p_dof(g.cell(i - 1, j)), -1.0 / g.hx);
    return r;
  }

  // Half-cell balance at a boundary x-face with the normal stress
  // sigma_xx = -p + 2 mu du/dx closed by the boundary datum.
  Row x_momentum_stress(int i, int j) const {
    const bool left = (i == 0);
    const Side s = left ? Side::Left : Side::Right;
    Row r;
    const int f = g.xface(i, j);
    r.rhs_b = bf.x[f];
    r.vel.add(sys.u_dof(f), pb.mu / kf.x[f]);
    const double cy = pb.mu / (g.hy * g.hy);
    r.vel.add(sys.u_dof(f), 2.0 * cy);
    r.vel.add_scaled(u_at(i, j + 1), -cy);
    r.vel.add_scaled(u_at(i, j - 1), -cy);
    const double cn = 4.0 * pb.mu / (g.hx * g.hx);
    const int inner = left ? g.xface(1, j) : g.xface(g.nx - 1, j);
    r.vel.add(sys.u_dof(f), cn);
    r.vel.add(sys.u_dof(inner), -cn);
    const int cell = left ? g.cell(0, j) : g.cell(g.nx - 1, j);
    const double sgn = left ? +1.0 : -1.0;
    r.pres.add(sys.p_dof(cell), sgn * 2.0 / g.hx);
    r.pres.constant += sgn * 2.0 / g.hx * sigma_data(s, j);
    return r;
  }

  Row y_momentum_interior(int i, int j) const {
    Row r;
    const int f = g.yface(i, j);
    r.rhs_b = bf.y[f];
    r.vel.add(sys.v_dof(f), pb.mu / kf.y[f]);
    const double cx = pb.mu / (g.hx * g.hx);
    const double cy = pb.mu / (g.hy * g.hy);
    r.vel.add(sys.v_dof(f), 2.0 * (cx + cy));
    r.vel.add(sys.v_dof(g.yface(i, j + 1)), -cy);
    r.vel.add(sys.v_dof(g.yface(i, j - 1)), -cy);
    r.vel.add_scaled(v_at(i + 1, j), -cx);
    r.vel.add_scaled(v_at(i - 1, j), -cx);
    r.pres.add(sys.p_dof(g.cell(i, j)), 1.0 / g.hy);
    r.pres.add(sys.p_dof(g.cell(i, j - 1)), -1.0 / g.hy);
    return r;
  }

  Row y_momentum_stress(int i, int j) const {
    const bool bottom = (j == 0);
    const Side s = bottom ? Side::Bottom : Side::Top;
    Row r;
    const int f = g.yface(i, j);
    r.rhs_b = bf.y[f];
    r.vel.add(sys.v_dof(f), pb.mu / kf.y[f]);
    const double cx = pb.mu / (g.hx * g.hx);
    r.vel.add(sys.v_dof(f), 2.0 * cx);
    r.vel.add_scaled(v_at(i + 1, j), -cx);
    r.vel.add_scaled(v_at(i - 1, j), -cx);
    const double cn = 4.0 * pb.mu / (g.hy * g.hy);
    const int inner = bottom ? g.yface(i, 1) : g.yface(i, g.ny - 1);
    r.vel.add(sys.v_dof(f), cn);
    r.vel.add(sys.v_dof(inner), -cn);
    const int cell = bottom ? g.cell(i, 0) : g.cell(i, g.ny - 1);
    const double sgn = bottom ? +1.0 : -1.0;
    r.pres.add(sys.p_dof(cell), sgn * 2.0 / g.hy);
    r.pres.constant += sgn * 2.0 / g.hy * sigma_data(s, i);
    return r;
  }

  // --- assembly ------------------------------------------------------------

  void scatter_row(int row, const Row& r, std::vector<Triplet>& trips) {
    for (const auto& [dof, coef] : r.vel.terms) trips.emplace_back(row, dof, coef);
    for (const auto& [dof, coef] : r.pres.terms) trips.emplace_back(row, dof, coef);
    sys.rhs[row] = r.rhs_b - r.vel.constant - r.pres.constant;
    sys.momentum_vel[static_cast<std::size_t>(row)] = r.vel;
  }

  SaddleSystem assemble() {
    const int total = sys.size();
    sys.rhs = Eigen::VectorXd::Zero(total);
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(12 * total));

    // x-momentum
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i <= g.nx; ++i) {
        const int row = sys.u_dof(g.xface(i, j));
        if (i == 0 || i == g.nx) {
          const Side s = (i == 0) ? Side::Left : Side::Right;
          const SideBc& sb = pb.bc.side(s);
          if (sb.kind == BcKind::FullVelocity) {
            trips.emplace_back(row, row, 1.0);
            sys.rhs[row] = sb.primary.at(j);
            sys.is_dirichlet[static_cast<std::size_t>(row)] = true;
            continue;
          }
          scatter_row(row, x_momentum_stress(i, j), trips);
          continue;
        }
        scatter_row(row, x_momentum_interior(i, j), trips);
      }
    }
    // y-momentum
    for (int j = 0; j <= g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int row = sys.v_dof(g.yface(i, j));
        if (j == 0 || j == g.ny) {
          const Side s = (j == 0) ? Side::Bottom : Side::Top;
          const SideBc& sb = pb.bc.side(s);
          if (sb.kind == BcKind::FullVelocity) {
            trips.emplace_back(row, row, 1.0);
            sys.rhs[row] = sb.secondary.at(i);
            sys.is_dirichlet[static_cast<std::size_t>(row)] = true;
            continue;
          }
          scatter_row(row, y_momentum_stress(i, j), trips);
          continue;
        }
        scatter_row(row, y_momentum_interior(i, j), trips);
      }
    }
    // continuity in point form, div v = source
    for (int j = 0; j < g.ny; ++j) {
      for (int i = 0; i < g.nx; ++i) {
        const int row = sys.p_dof(g.cell(i, j));
        trips.emplace_back(row, sys.u_dof(g.xface(i + 1, j)), 1.0 / g.hx);
        trips.emplace_back(row, sys.u_dof(g.xface(i, j)), -1.0 / g.hx);
        trips.emplace_back(row, sys.v_dof(g.yface(i, j + 1)), 1.0 / g.hy);
        trips.emplace_back(row, sys.v_dof(g.yface(i, j)), -1.0 / g.hy);
        if (!pb.continuity_source.values.empty()) {
          sys.rhs[row] = pb.continuity_source[g.cell(i, j)];
        }
        if (sys.gauged) {
          trips.emplace_back(row, sys.nu + sys.nv + sys.np, 1.0);
        }
      }
    }
    if (sys.gauged) {
      const int gd = sys.nu + sys.nv + sys.np;
      for (int c = 0; c < sys.np; ++c) {
        trips.emplace_back(gd, sys.p_dof(c), g.cell_area());
      }
    }

    sys.M.resize(total, total);
    sys.M.setFromTriplets(trips.begin(), trips.end());
    return std::move(sys);
  }
};

}  // namespace

SaddleSystem assemble_brinkman(const BrinkmanProblem& pb) {
  BrinkmanAssembler asmb(pb);
  return asmb.assemble();
}

SaddleSystem assemble_darcy_first_order(const DarcyProblem& pb) {
  const StaggeredGrid& g = pb.grid;
  const FaceField kf = face_permeability(g, pb.k);
  const FaceField bf = body_force_faces(g, pb.body_force);

  SaddleSystem sys;
  sys.nu = g.num_x_faces();
  sys.nv = g.num_y_faces();
  sys.np = g.num_cells();
  sys.gauged = !has_pressure_side(pb.bc);
  sys.momentum_vel.resize(static_cast<std::size_t>(sys.nu + sys.nv));
  sys.is_dirichlet.assign(static_cast<std::size_t>(sys.nu + sys.nv), false);
  const int total = sys.size();
  sys.rhs = Eigen::VectorXd::Zero(total);
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(4 * total));

  auto drag_row = [&](int row, double mu_over_kf) {
    trips.emplace_back(row, row, mu_over_kf);
    LinComb lc;
    lc.add(row, mu_over_kf);
    sys.momentum_vel[static_cast<std::size_t>(row)] = lc;
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int f = g.xface(i, j);
      const int row = sys.u_dof(f);
      if (i == 0 || i == g.nx) {
        const Side s = (i == 0) ? Side::Left : Side::Right;
        const SideBc& sb = pb.bc.side(s);
        if (sb.kind == BcKind::NormalVelocity) {
          trips.emplace_back(row, row, 1.0);
          sys.rhs[row] = outward_sign(s) * sb.primary.at(j);
          sys.is_dirichlet[static_cast<std::size_t>(row)] = true;
          continue;
        }
        drag_row(row, pb.mu / kf.x[f]);
        const double c = 2.0 / g.hx;
        const int cell = (i == 0) ? g.cell(0, j) : g.cell(g.nx - 1, j);
        const double sgn = (i == 0) ? +1.0 : -1.0;
        trips.emplace_back(row, sys.p_dof(cell), sgn * c);
        sys.rhs[row] = bf.x[f] + sgn * c * sb.primary.at(j);
        continue;
      }
      drag_row(row, pb.mu / kf.x[f]);
      trips.emplace_back(row, sys.p_dof(g.cell(i, j)), 1.0 / g.hx);
      trips.emplace_back(row, sys.p_dof(g.cell(i - 1, j)), -1.0 / g.hx);
      sys.rhs[row] = bf.x[f];
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.yface(i, j);
      const int row = sys.v_dof(f);
      if (j == 0 || j == g.ny) {
        const Side s = (j == 0) ? Side::Bottom : Side::Top;
        const SideBc& sb = pb.bc.side(s);
        if (sb.kind == BcKind::NormalVelocity) {
          trips.emplace_back(row, row, 1.0);
          sys.rhs[row] = outward_sign(s) * sb.primary.at(i);
          sys.is_dirichlet[static_cast<std::size_t>(row)] = true;
          continue;
        }
        drag_row(row, pb.mu / kf.y[f]);
        const double c = 2.0 / g.hy;
        const int cell = (j == 0) ? g.cell(i, 0) : g.cell(i, g.ny - 1);
        const double sgn = (j == 0) ? +1.0 : -1.0;
        trips.emplace_back(row, sys.p_dof(cell), sgn * c);
        sys.rhs[row] = bf.y[f] + sgn * c * sb.primary.at(i);
        continue;
      }
      drag_row(row, pb.mu / kf.y[f]);
      trips.emplace_back(row, sys.p_dof(g.cell(i, j)), 1.0 / g.hy);
      trips.emplace_back(row, sys.p_dof(g.cell(i, j - 1)), -1.0 / g.hy);
      sys.rhs[row] = bf.y[f];
    }
  }
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int row = sys.p_dof(g.cell(i, j));
      trips.emplace_back(row, sys.u_dof(g.xface(i + 1, j)), 1.0 / g.hx);
      trips.emplace_back(row, sys.u_dof(g.xface(i, j)), -1.0 / g.hx);
      trips.emplace_back(row, sys.v_dof(g.yface(i, j + 1)), 1.0 / g.hy);
      trips.emplace_back(row, sys.v_dof(g.yface(i, j)), -1.0 / g.hy);
      if (!pb.continuity_source.values.empty()) {
        sys.rhs[row] = pb.continuity_source[g.cell(i, j)];
      }
    }
  }
  if (sys.gauged) {
    const int gd = sys.nu + sys.nv + sys.np;
    for (int c = 0; c < sys.np; ++c) {
      trips.emplace_back(sys.p_dof(c), gd, 1.0);
      trips.emplace_back(gd, sys.p_dof(c), g.cell_area());
    }
  }

  sys.M.resize(total, total);
  sys.M.setFromTriplets(trips.begin(), trips.end());
  return sys;
}

Eigen::VectorXd pack_state(const SaddleSystem& sys, const StaggeredGrid& g,
                           const FaceField& v, const CellField& p) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(sys.size());
  for (int f = 0; f < g.num_x_faces(); ++f) x[sys.u_dof(f)] = v.x[f];
  for (int f = 0; f < g.num_y_faces(); ++f) x[sys.v_dof(f)] = v.y[f];
  for (int c = 0; c < g.num_cells(); ++c) x[sys.p_dof(c)] = p[c];
  return x;
}

Eigen::VectorXd refined_lu_solve(const Eigen::SparseMatrix<double>& m,
                                 const Eigen::VectorXd& rhs,
                                 const char* what) {
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu(m);
  if (lu.info() != Eigen::Success) {
    throw ConvergenceError(std::string(what) + ": factorization failed");
  }
  Eigen::VectorXd x = lu.solve(rhs);
  double prev = std::numeric_limits<double>::infinity();
  for (int pass = 0; pass < 3; ++pass) {
    const Eigen::VectorXd r = rhs - m * x;
    const double rn = r.lpNorm<Eigen::Infinity>();
    if (rn == 0.0 || rn >= prev) break;
    prev = rn;
    x += lu.solve(r);
  }
  return x;
}

}  // namespace porous::detail
