#pragma once

// Shared problem builders, random-instance generators, and error norms for
// the unit and acceptance suites.

#include <cmath>
#include <random>
#include <vector>

#include "porous/brinkman.hpp"
#include "porous/darcy.hpp"
#include "porous/grid.hpp"

namespace porous::testutil {

inline constexpr double kPi = 3.14159265358979323846;

inline double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

inline double max_abs_diff(const std::vector<double>& a,
                           const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(a[i] - b[i]));
  }
  return m;
}

inline double face_max_abs_diff(const FaceField& a, const FaceField& b) {
  return std::max(max_abs_diff(a.x, b.x), max_abs_diff(a.y, b.y));
}

inline double l2_cells(const StaggeredGrid& g, const std::vector<double>& e) {
  double s = 0.0;
  for (double x : e) s += x * x;
  return std::sqrt(s * g.cell_area());
}

// --- canonical problems ----------------------------------------------------

/// Class B: pressure-driven channel with impermeable walls.
inline DarcyProblem darcy_channel_class_b(int nx, int ny, double k = 1.0,
                                          double mu = 1.0, double p_in = 1.0,
                                          double p_out = 0.0) {
  DarcyProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.bc.left = {BcKind::Pressure, Profile(p_in), Profile(0.0)};
  pb.bc.right = {BcKind::Pressure, Profile(p_out), Profile(0.0)};
  pb.bc.bottom = {BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
  return pb;
}

/// Class D: velocity-driven channel with a zero-pressure outlet.
inline DarcyProblem darcy_channel_class_d(int nx, int ny, double k = 1.0,
                                          double mu = 1.0,
                                          double inflow = 1.0) {
  DarcyProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.bc.left = {BcKind::NormalVelocity, Profile(-inflow), Profile(0.0)};
  pb.bc.right = {BcKind::Pressure, Profile(0.0), Profile(0.0)};
  pb.bc.bottom = {BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
  return pb;
}

/// Class C: compatible through-flow with velocity data on every side and a
/// conservative (potential-form) body force.
inline DarcyProblem darcy_channel_class_c(int nx, int ny, double k = 1.0,
                                          double mu = 1.0,
                                          double through = 1.0,
                                          double psi_amp = 0.0) {
  DarcyProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.bc.left = {BcKind::NormalVelocity, Profile(-through), Profile(0.0)};
  pb.bc.right = {BcKind::NormalVelocity, Profile(through), Profile(0.0)};
  pb.bc.bottom = {BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::NormalVelocity, Profile(0.0), Profile(0.0)};
  if (psi_amp != 0.0) {
    CellField psi(pb.grid);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        psi[pb.grid.cell(i, j)] =
            psi_amp * std::sin(kPi * pb.grid.cell_x(i)) *
            std::cos(kPi * pb.grid.cell_y(j));
      }
    }
    pb.body_force = BodyForce::from_potential(std::move(psi));
  }
  return pb;
}

/// Class A: pressure data on the entire boundary (linear-in-x profile).
inline DarcyProblem darcy_class_a(int nx, int ny, double k = 1.0,
                                  double mu = 1.0, double drop = 1.0) {
  DarcyProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  auto linear_profile = [&] {
    std::vector<double> values(static_cast<std::size_t>(nx));
    for (int i = 0; i < nx; ++i) {
      values[static_cast<std::size_t>(i)] = drop * (1.0 - pb.grid.cell_x(i));
    }
    return Profile(std::move(values));
  };
  pb.bc.left = {BcKind::Pressure, Profile(drop), Profile(0.0)};
  pb.bc.right = {BcKind::Pressure, Profile(0.0), Profile(0.0)};
  pb.bc.bottom = {BcKind::Pressure, linear_profile(), Profile(0.0)};
  pb.bc.top = {BcKind::Pressure, linear_profile(), Profile(0.0)};
  return pb;
}

// --- Brinkman counterparts -------------------------------------------------

inline BrinkmanProblem brinkman_channel_class_b(int nx, int ny, double k = 1.0,
                                                double mu = 1.0,
                                                double p_in = 1.0,
                                                double p_out = 0.0) {
  BrinkmanProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.bc.left = {BcKind::Pressure, Profile(p_in), Profile(0.0)};
  pb.bc.right = {BcKind::Pressure, Profile(p_out), Profile(0.0)};
  pb.bc.bottom = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  return pb;
}

inline BrinkmanProblem brinkman_channel_class_d(int nx, int ny, double k = 1.0,
                                                double mu = 1.0,
                                                double inflow = 1.0) {
  BrinkmanProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.bc.left = {BcKind::FullVelocity, Profile(inflow), Profile(0.0)};
  pb.bc.right = {BcKind::Pressure, Profile(0.0), Profile(0.0)};
  pb.bc.bottom = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  return pb;
}

inline BrinkmanProblem brinkman_class_a(int nx, int ny, double k = 1.0,
                                        double mu = 1.0, double drop = 1.0) {
  BrinkmanProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  auto linear_profile = [&](int n, bool along_x) {
    std::vector<double> values(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const double x = along_x ? pb.grid.cell_x(i) : 0.0;
      values[static_cast<std::size_t>(i)] = drop * (1.0 - x);
    }
    return Profile(std::move(values));
  };
  pb.bc.left = {BcKind::Pressure, Profile(drop), Profile(0.0)};
  pb.bc.right = {BcKind::Pressure, Profile(0.0), Profile(0.0)};
  pb.bc.bottom = {BcKind::Pressure, linear_profile(nx, true), Profile(0.0)};
  pb.bc.top = {BcKind::Pressure, linear_profile(nx, true), Profile(0.0)};
  return pb;
}

inline BrinkmanProblem brinkman_class_c(int nx, int ny, double k = 1.0,
                                        double mu = 1.0, double through = 1.0,
                                        double psi_amp = 0.0) {
  BrinkmanProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.bc.left = {BcKind::FullVelocity, Profile(through), Profile(0.0)};
  pb.bc.right = {BcKind::FullVelocity, Profile(through), Profile(0.0)};
  pb.bc.bottom = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  if (psi_amp != 0.0) {
    CellField psi(pb.grid);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        psi[pb.grid.cell(i, j)] =
            psi_amp * std::sin(kPi * pb.grid.cell_x(i)) *
            std::cos(kPi * pb.grid.cell_y(j));
      }
    }
    pb.body_force = BodyForce::from_potential(std::move(psi));
  }
  return pb;
}

/// Class A with a diagonal through-flow pressure drive, p = a(1-x) + b(1-y):
/// every boundary row keeps an O(1) normal velocity, so the sensitivity sign
/// is numerically decidable on coarse grids. Main or traction form.
inline BrinkmanProblem brinkman_class_a_diag(int nx, int ny, double a,
                                             double b,
                                             bool traction_form = false) {
  BrinkmanProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, 1.0);
  pb.mu = 1.0;
  const StaggeredGrid& g = pb.grid;
  auto pressure_at = [&](Side s, int i) {
    double x = 0.0, y = 0.0;
    switch (s) {
      case Side::Left: x = 0.0; y = g.cell_y(i); break;
      case Side::Right: x = g.lx; y = g.cell_y(i); break;
      case Side::Bottom: x = g.cell_x(i); y = 0.0; break;
      case Side::Top: x = g.cell_x(i); y = g.ly; break;
    }
    return a * (1.0 - x) + b * (1.0 - y);
  };
  for (Side s : kSides) {
    const int n = side_face_count(g, s);
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = pressure_at(s, i);
    if (!traction_form) {
      pb.bc.side(s) = {BcKind::Pressure, Profile(std::move(p)), Profile(0.0)};
      continue;
    }
    // t = -p n, written in Cartesian components per side
    std::vector<double> tn(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      tn[static_cast<std::size_t>(i)] =
          -outward_sign(s) * p[static_cast<std::size_t>(i)];
    }
    const bool vertical = (s == Side::Left || s == Side::Right);
    SideBc bc;
    bc.kind = BcKind::Traction;
    bc.primary = vertical ? Profile(std::move(tn)) : Profile(0.0);
    bc.secondary = vertical ? Profile(0.0) : Profile(std::move(tn));
    pb.bc.side(s) = bc;
  }
  if (traction_form) pb.form = BrinkmanProblem::Form::Traction;
  return pb;
}

/// Class C with walls moving at the through-flow speed: compatible velocity
/// data everywhere with no stagnant boundary cells.
inline BrinkmanProblem brinkman_class_c_moving(int nx, int ny,
                                               double through = 1.0,
                                               double psi_amp = 0.0) {
  BrinkmanProblem pb = brinkman_class_c(nx, ny, 1.0, 1.0, through, psi_amp);
  pb.bc.bottom = {BcKind::FullVelocity, Profile(through), Profile(0.0)};
  pb.bc.top = {BcKind::FullVelocity, Profile(through), Profile(0.0)};
  return pb;
}

/// Class D with walls moving at the inflow speed and a zero-pressure (or
/// zero-traction) outlet.
inline BrinkmanProblem brinkman_class_d_moving(int nx, int ny,
                                               double through = 1.0,
                                               bool traction_form = false) {
  BrinkmanProblem pb = brinkman_channel_class_d(nx, ny, 1.0, 1.0, through);
  pb.bc.bottom = {BcKind::FullVelocity, Profile(through), Profile(0.0)};
  pb.bc.top = {BcKind::FullVelocity, Profile(through), Profile(0.0)};
  if (traction_form) {
    pb.form = BrinkmanProblem::Form::Traction;
    pb.bc.right = {BcKind::Traction, Profile(0.0), Profile(0.0)};
  }
  return pb;
}

/// Traction-form class B channel: traction inlet/outlet, no-slip walls.
inline BrinkmanProblem brinkman_traction_class_b(int nx, int ny,
                                                 double k = 1.0,
                                                 double mu = 1.0,
                                                 double p_in = 1.0,
                                                 double p_out = 0.0) {
  BrinkmanProblem pb;
  pb.grid = make_grid(nx, ny, 1.0, 1.0);
  pb.k = CellField(pb.grid, k);
  pb.mu = mu;
  pb.form = BrinkmanProblem::Form::Traction;
  // t = -p n: left n=(-1,0) -> t=(p_in,0); right n=(1,0) -> t=(-p_out,0)
  pb.bc.left = {BcKind::Traction, Profile(p_in), Profile(0.0)};
  pb.bc.right = {BcKind::Traction, Profile(-p_out), Profile(0.0)};
  pb.bc.bottom = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  pb.bc.top = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  return pb;
}

inline BrinkmanProblem brinkman_traction_class_d(int nx, int ny,
                                                 double k = 1.0,
                                                 double mu = 1.0,
                                                 double inflow = 1.0) {
  BrinkmanProblem pb = brinkman_channel_class_d(nx, ny, k, mu, inflow);
  pb.form = BrinkmanProblem::Form::Traction;
  pb.bc.right = {BcKind::Traction, Profile(0.0), Profile(0.0)};
  return pb;
}

// --- manufactured solutions --------------------------------------------------

/// Darcy manufactured pair: p* = cos(pi x) cos(pi y),
/// k* = 1 + 0.5 sin(pi x) sin(pi y), b = 0, v* = -k* grad p*.
/// The field is not divergence-free, so the continuity equation is augmented
/// with the analytic source s* = div v*.
struct DarcyManufactured {
  DarcyProblem problem;
  // analytic samples
  CellField p_exact;
  FaceField v_exact;
};

inline DarcyManufactured darcy_manufactured(int n) {
  DarcyManufactured m;
  DarcyProblem& pb = m.problem;
  pb.grid = make_grid(n, n, 1.0, 1.0);
  const StaggeredGrid& g = pb.grid;
  pb.mu = 1.0;

  auto kf = [](double x, double y) {
    return 1.0 + 0.5 * std::sin(kPi * x) * std::sin(kPi * y);
  };
  auto pf = [](double x, double y) {
    return std::cos(kPi * x) * std::cos(kPi * y);
  };
  auto uf = [&](double x, double y) {
    return kPi * kf(x, y) * std::sin(kPi * x) * std::cos(kPi * y);
  };
  auto vf = [&](double x, double y) {
    return kPi * kf(x, y) * std::cos(kPi * x) * std::sin(kPi * y);
  };
  auto sf = [&](double x, double y) {
    const double sx = std::sin(kPi * x), cx = std::cos(kPi * x);
    const double sy = std::sin(kPi * y), cy = std::cos(kPi * y);
    return kPi * kPi * (sx * cx * sy * cy + 2.0 * kf(x, y) * cx * cy);
  };

  pb.k = CellField(g);
  pb.continuity_source = CellField(g);
  m.p_exact = CellField(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = g.cell_x(i), y = g.cell_y(j);
      pb.k[g.cell(i, j)] = kf(x, y);
      pb.continuity_source[g.cell(i, j)] = sf(x, y);
      m.p_exact[g.cell(i, j)] = pf(x, y);
    }
  }
  m.v_exact = FaceField(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= n; ++i) {
      m.v_exact.x[g.xface(i, j)] = uf(i * g.hx, g.cell_y(j));
    }
  }
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i < n; ++i) {
      m.v_exact.y[g.yface(i, j)] = vf(g.cell_x(i), j * g.hy);
    }
  }

  auto boundary_profile = [&](Side s) {
    const int count = side_face_count(g, s);
    std::vector<double> values(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
      double x = 0.0, y = 0.0;
      switch (s) {
        case Side::Left: x = 0.0; y = g.cell_y(i); break;
        case Side::Right: x = g.lx; y = g.cell_y(i); break;
        case Side::Bottom: x = g.cell_x(i); y = 0.0; break;
        case Side::Top: x = g.cell_x(i); y = g.ly; break;
      }
      values[static_cast<std::size_t>(i)] = pf(x, y);
    }
    return Profile(std::move(values));
  };
  for (Side s : kSides) {
    pb.bc.side(s) = {BcKind::Pressure, boundary_profile(s), Profile(0.0)};
  }
  return m;
}

/// Brinkman manufactured pair from the streamfunction
/// phi = sin^2(pi x) sin^2(pi y) / pi: a divergence-free velocity that
/// vanishes on the whole boundary, with p* = cos(pi x) cos(pi y) (zero mean)
/// and the body force b* = mu v*/k* + grad p* - mu lap v*.
struct BrinkmanManufactured {
  BrinkmanProblem problem;
  CellField p_exact;
  FaceField v_exact;
};

inline BrinkmanManufactured brinkman_manufactured(int n) {
  BrinkmanManufactured m;
  BrinkmanProblem& pb = m.problem;
  pb.grid = make_grid(n, n, 1.0, 1.0);
  const StaggeredGrid& g = pb.grid;
  pb.mu = 1.0;

  auto kf = [](double x, double y) {
    return 1.0 + 0.5 * std::sin(kPi * x) * std::sin(kPi * y);
  };
  auto uf = [](double x, double y) {
    const double sx = std::sin(kPi * x);
    return sx * sx * std::sin(2.0 * kPi * y);
  };
  auto vf = [](double x, double y) {
    const double sy = std::sin(kPi * y);
    return -std::sin(2.0 * kPi * x) * sy * sy;
  };
  auto lap_u = [](double x, double y) {
    const double sx = std::sin(kPi * x);
    return 2.0 * kPi * kPi * std::cos(2.0 * kPi * x) * std::sin(2.0 * kPi * y) -
           4.0 * kPi * kPi * sx * sx * std::sin(2.0 * kPi * y);
  };
  auto lap_v = [](double x, double y) {
    const double sy = std::sin(kPi * y);
    return 4.0 * kPi * kPi * std::sin(2.0 * kPi * x) * sy * sy -
           2.0 * kPi * kPi * std::sin(2.0 * kPi * x) * std::cos(2.0 * kPi * y);
  };
  auto dpdx = [](double x, double y) {
    return -kPi * std::sin(kPi * x) * std::cos(kPi * y);
  };
  auto dpdy = [](double x, double y) {
    return -kPi * std::cos(kPi * x) * std::sin(kPi * y);
  };
  auto pf = [](double x, double y) {
    return std::cos(kPi * x) * std::cos(kPi * y);
  };

  pb.k = CellField(g);
  m.p_exact = CellField(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = g.cell_x(i), y = g.cell_y(j);
      pb.k[g.cell(i, j)] = kf(x, y);
      m.p_exact[g.cell(i, j)] = pf(x, y);
    }
  }
  m.v_exact = FaceField(g);
  FaceField body(g);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i <= n; ++i) {
      const double x = i * g.hx, y = g.cell_y(j);
      m.v_exact.x[g.xface(i, j)] = uf(x, y);
      body.x[g.xface(i, j)] =
          pb.mu / kf(x, y) * uf(x, y) + dpdx(x, y) - pb.mu * lap_u(x, y);
    }
  }
  for (int j = 0; j <= n; ++j) {
    for (int i = 0; i < n; ++i) {
      const double x = g.cell_x(i), y = j * g.hy;
      m.v_exact.y[g.yface(i, j)] = vf(x, y);
      body.y[g.yface(i, j)] =
          pb.mu / kf(x, y) * vf(x, y) + dpdy(x, y) - pb.mu * lap_v(x, y);
    }
  }
  pb.body_force = BodyForce::face_vector(std::move(body));
  for (Side s : kSides) {
    pb.bc.side(s) = {BcKind::FullVelocity, Profile(0.0), Profile(0.0)};
  }
  return m;
}

// --- randomized fields -----------------------------------------------------

/// Smooth positive permeability with moderate contrast (about e).
inline CellField random_smooth_k(const StaggeredGrid& g, std::mt19937_64& rng,
                                 double base = 1.0) {
  std::uniform_real_distribution<double> amp(-1.0, 1.0);
  std::uniform_real_distribution<double> freq(0.5, 2.5);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  struct Mode {
    double a, fx, fy, px, py;
  };
  Mode modes[3];
  for (Mode& m : modes) {
    m = {amp(rng), freq(rng), freq(rng), phase(rng), phase(rng)};
  }
  CellField s(g);
  double smax = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double v = 0.0;
      for (const Mode& m : modes) {
        v += m.a * std::sin(m.fx * kPi * g.cell_x(i) + m.px) *
             std::sin(m.fy * kPi * g.cell_y(j) + m.py);
      }
      s[g.cell(i, j)] = v;
      smax = std::max(smax, std::abs(v));
    }
  }
  CellField k(g, base);
  if (smax > 0.0) {
    for (int c = 0; c < g.num_cells(); ++c) {
      k[c] = base * std::exp(0.5 * s[c] / smax);
    }
  }
  return k;
}

inline FaceField random_face_field(const StaggeredGrid& g,
                                   std::mt19937_64& rng,
                                   bool interior_only = false) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  FaceField f(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      if (interior_only && (i == 0 || i == g.nx)) continue;
      f.x[g.xface(i, j)] = dist(rng);
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      if (interior_only && (j == 0 || j == g.ny)) continue;
      f.y[g.yface(i, j)] = dist(rng);
    }
  }
  return f;
}

inline CellField random_cell_field(const StaggeredGrid& g,
                                   std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  CellField f(g);
  for (double& v : f.values) v = dist(rng);
  return f;
}

}  // namespace porous::testutil
