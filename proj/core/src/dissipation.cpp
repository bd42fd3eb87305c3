#include "porous/dissipation.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>
#include <vector>

#include "saddle.hpp"
#include "strain_stencil.hpp"

namespace porous {

namespace {

void check_positive_k(const StaggeredGrid& g, const CellField& k) {
  validate_cell_field(g, k, "dissipation permeability");
  for (double v : k.values) {
    if (!(v > 0.0)) {
      throw InputError("dissipation: permeability must be positive");
    }
  }
}

inline double ubar(const StaggeredGrid& g, const FaceField& v, int i, int j) {
  return 0.5 * (v.x[g.xface(i, j)] + v.x[g.xface(i + 1, j)]);
}
inline double vbar(const StaggeredGrid& g, const FaceField& v, int i, int j) {
  return 0.5 * (v.y[g.yface(i, j)] + v.y[g.yface(i, j + 1)]);
}

}  // namespace

double total_dissipation_darcy(const StaggeredGrid& g, const CellField& k,
                               double mu, const FaceField& v) {
  check_positive_k(g, k);
  validate_face_field(g, v, "dissipation velocity");
  double phi = 0.0;
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const double ux = ubar(g, v, i, j);
      const double uy = vbar(g, v, i, j);
      phi += mu / k[g.cell(i, j)] * (ux * ux + uy * uy);
    }
  }
  return phi * g.cell_area();
}

double total_dissipation_brinkman(const StaggeredGrid& g, const CellField& k,
                                  double mu, const FaceField& v) {
  double phi = total_dissipation_darcy(g, k, mu, v);
  const StrainField d = strain_rate(g, v);
  double strain = 0.0;
  for (std::size_t c = 0; c < d.xx.size(); ++c) {
    strain += d.xx[c] * d.xx[c] + d.yy[c] * d.yy[c] + 2.0 * d.xy[c] * d.xy[c];
  }
  return phi + 2.0 * mu * strain * g.cell_area();
}

SensitivityField sensitivity_field(const StaggeredGrid& g, const CellField& k,
                                   double mu, const FaceField& v,
                                   const AdjointSolution& adjoint) {
  check_positive_k(g, k);
  validate_face_field(g, v, "sensitivity velocity");
  validate_face_field(g, adjoint.lambda_v, "sensitivity adjoint velocity");

  SensitivityField out;
  out.density = CellField(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      const double ux = ubar(g, v, i, j);
      const double uy = vbar(g, v, i, j);
      const double lx = ubar(g, adjoint.lambda_v, i, j);
      const double ly = vbar(g, adjoint.lambda_v, i, j);
      out.density[c] = mu / (k[c] * k[c]) *
                       (ux * (2.0 * lx - ux) + uy * (2.0 * ly - uy));
    }
  }
  return out;
}

double directional_derivative(const StaggeredGrid& g,
                              const SensitivityField& s, const CellField& dk) {
  validate_cell_field(g, s.density, "directional_derivative density");
  validate_cell_field(g, dk, "directional_derivative perturbation");
  double sum = 0.0;
  for (int c = 0; c < g.num_cells(); ++c) {
    sum += s.density[c] * dk[c];
  }
  return sum * g.cell_area();
}

namespace {

// dPhi/d(face dofs) of the Darcy dissipation term, scattered into the
// system's dof numbering.
void scatter_drag_partials(const StaggeredGrid& g, const CellField& k,
                           double mu, const FaceField& v,
                           const detail::SaddleSystem& sys,
                           Eigen::VectorXd& dphi) {
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      const double w = mu / k[c] * g.cell_area();
      const double ux = ubar(g, v, i, j);
      const double uy = vbar(g, v, i, j);
      dphi[sys.u_dof(g.xface(i, j))] += w * ux;
      dphi[sys.u_dof(g.xface(i + 1, j))] += w * ux;
      dphi[sys.v_dof(g.yface(i, j))] += w * uy;
      dphi[sys.v_dof(g.yface(i, j + 1))] += w * uy;
    }
  }
}

// dPhi/d(face dofs) of the 2 mu D:D strain term.
void scatter_strain_partials(const StaggeredGrid& g, double mu,
                             const FaceField& v,
                             const detail::SaddleSystem& sys,
                             Eigen::VectorXd& dphi) {
  const StrainField d = strain_rate(g, v);
  const double a = g.cell_area();
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const std::size_t c = static_cast<std::size_t>(g.cell(i, j));
      const double wxx = 4.0 * mu * a * d.xx[c];
      const double wyy = 4.0 * mu * a * d.yy[c];
      const double wxy = 8.0 * mu * a * d.xy[c];
      detail::for_each_strain_coef(
          g, i, j,
          [&](detail::StrainComp comp, bool x_face, int f, double coef) {
            const double w = comp == detail::StrainComp::XX   ? wxx
                             : comp == detail::StrainComp::YY ? wyy
                                                              : wxy;
            const int dof = x_face ? sys.u_dof(f) : sys.v_dof(f);
            dphi[dof] += coef * w;
          });
    }
  }
}

// Explicit partial dPhi/dk_c of the dissipation functional.
CellField explicit_k_partials(const StaggeredGrid& g, const CellField& k,
                              double mu, const FaceField& v) {
  CellField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int c = g.cell(i, j);
      const double ux = ubar(g, v, i, j);
      const double uy = vbar(g, v, i, j);
      out[c] = -mu / (k[c] * k[c]) * (ux * ux + uy * uy) * g.cell_area();
    }
  }
  return out;
}

// Adjoint-weighted derivative of the drag coefficients mu/k_f through the
// harmonic face-permeability chain rule. w is the transpose-system solution.
void accumulate_drag_chain(const StaggeredGrid& g, const CellField& k,
                           double mu, const FaceField& v, const FaceField& kf,
                           const detail::SaddleSystem& sys,
                           const Eigen::VectorXd& w, CellField& grad) {
  auto add = [&](int row, double face_k, double face_u, int c_self,
                 int c_other) {
    if (sys.is_dirichlet[static_cast<std::size_t>(row)]) return;
    const double common = -w[row] * mu / (face_k * face_k) * face_u;
    if (c_other < 0) {
      grad[c_self] += common;  // boundary face copies the cell, d kf/dk = 1
      return;
    }
    grad[c_self] +=
        common * face_permeability_derivative(k[c_self], k[c_other]);
    grad[c_other] +=
        common * face_permeability_derivative(k[c_other], k[c_self]);
  };

  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i <= g.nx; ++i) {
      const int f = g.xface(i, j);
      if (i == 0) {
        add(sys.u_dof(f), kf.x[f], v.x[f], g.cell(0, j), -1);
      } else if (i == g.nx) {
        add(sys.u_dof(f), kf.x[f], v.x[f], g.cell(g.nx - 1, j), -1);
      } else {
        add(sys.u_dof(f), kf.x[f], v.x[f], g.cell(i - 1, j), g.cell(i, j));
      }
    }
  }
  for (int j = 0; j <= g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      const int f = g.yface(i, j);
      if (j == 0) {
        add(sys.v_dof(f), kf.y[f], v.y[f], g.cell(i, 0), -1);
      } else if (j == g.ny) {
        add(sys.v_dof(f), kf.y[f], v.y[f], g.cell(i, g.ny - 1), -1);
      } else {
        add(sys.v_dof(f), kf.y[f], v.y[f], g.cell(i, j - 1), g.cell(i, j));
      }
    }
  }
}

CellField discrete_gradient_impl(const StaggeredGrid& g, const CellField& k,
                                 double mu, const FlowSolution& sol,
                                 detail::SaddleSystem sys, bool brinkman) {
  Eigen::VectorXd dphi = Eigen::VectorXd::Zero(sys.size());
  scatter_drag_partials(g, k, mu, sol.v, sys, dphi);
  if (brinkman) scatter_strain_partials(g, mu, sol.v, sys, dphi);

  const Eigen::SparseMatrix<double> mt = sys.M.transpose();
  const Eigen::VectorXd w =
      detail::refined_lu_solve(mt, -dphi, "discrete_gradient");

  CellField grad = explicit_k_partials(g, k, mu, sol.v);
  const FaceField kf = face_permeability(g, k);
  accumulate_drag_chain(g, k, mu, sol.v, kf, sys, w, grad);
  return grad;
}

}  // namespace

CellField discrete_gradient(const DarcyProblem& pb, const FlowSolution& sol) {
  validate_darcy_problem(pb);
  validate_face_field(pb.grid, sol.v, "discrete_gradient velocity");
  return discrete_gradient_impl(pb.grid, pb.k, pb.mu, sol,
                                detail::assemble_darcy_first_order(pb),
                                /*brinkman=*/false);
}

CellField discrete_gradient(const BrinkmanProblem& pb,
                            const FlowSolution& sol) {
  validate_brinkman_problem(pb);
  validate_face_field(pb.grid, sol.v, "discrete_gradient velocity");
  return discrete_gradient_impl(pb.grid, pb.k, pb.mu, sol,
                                detail::assemble_brinkman(pb),
                                /*brinkman=*/true);
}

CellField fd_gradient(const StaggeredGrid& g, const CellField& k,
                      const std::function<double(const CellField&)>& objective,
                      int threads) {
  check_positive_k(g, k);
  const int n = g.num_cells();
  CellField grad(g);
  const double cbrt_eps = std::cbrt(std::numeric_limits<double>::epsilon());

  auto work = [&](int begin, int end) {
    CellField kp = k;
    for (int c = begin; c < end; ++c) {
      const double eps = std::max(k[c], 1.0) * cbrt_eps;
      if (!(k[c] - eps > 0.0)) {
        throw InputError(
            "fd_gradient: central step makes permeability nonpositive");
      }
      const double saved = kp[c];
      kp[c] = saved + eps;
      const double phi_plus = objective(kp);
      kp[c] = saved - eps;
      const double phi_minus = objective(kp);
      kp[c] = saved;
      grad[c] = (phi_plus - phi_minus) / (2.0 * eps);
    }
  };

  threads = std::max(1, threads);
  if (threads == 1 || n < 2 * threads) {
    work(0, n);
    return grad;
  }
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
  const int chunk = (n + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&, t, begin, end] {
      try {
        work(begin, end);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return grad;
}

CellField fd_gradient(const DarcyProblem& pb, int threads) {
  validate_darcy_problem(pb);
  return fd_gradient(
      pb.grid, pb.k,
      [&pb](const CellField& k) {
        DarcyProblem perturbed = pb;
        perturbed.k = k;
        const FlowSolution sol = solve_darcy(perturbed);
        return total_dissipation_darcy(pb.grid, k, pb.mu, sol.v);
      },
      threads);
}

CellField fd_gradient(const BrinkmanProblem& pb, int threads) {
  validate_brinkman_problem(pb);
  return fd_gradient(
      pb.grid, pb.k,
      [&pb](const CellField& k) {
        BrinkmanProblem perturbed = pb;
        perturbed.k = k;
        const FlowSolution sol = solve_brinkman(perturbed);
        return total_dissipation_brinkman(pb.grid, k, pb.mu, sol.v);
      },
      threads);
}

double relative_max_error(const CellField& a, const CellField& b) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t c = 0; c < a.values.size(); ++c) {
    diff = std::max(diff, std::abs(a.values[c] - b.values[c]));
    ref = std::max(ref, std::abs(b.values[c]));
  }
  return diff / std::max(ref, 1e-300);
}

namespace {

template <typename Problem>
GradientReport gradient_report_impl(const Problem& pb,
                                    const FlowSolution& forward,
                                    const AdjointSolution& adjoint,
                                    int threads) {
  GradientReport rep;
  const SensitivityField s =
      sensitivity_field(pb.grid, pb.k, pb.mu, forward.v, adjoint);
  rep.adjoint_gradient = CellField(pb.grid);
  for (int c = 0; c < pb.grid.num_cells(); ++c) {
    rep.adjoint_gradient[c] = s.density[c] * pb.grid.cell_area();
  }
  rep.discrete_gradient = discrete_gradient(pb, forward);
  rep.fd_gradient = fd_gradient(pb, threads);
  rep.adjoint_vs_fd = relative_max_error(rep.adjoint_gradient, rep.fd_gradient);
  rep.discrete_vs_fd =
      relative_max_error(rep.discrete_gradient, rep.fd_gradient);
  rep.adjoint_vs_discrete =
      relative_max_error(rep.adjoint_gradient, rep.discrete_gradient);
  return rep;
}

}  // namespace

GradientReport gradient_report(const DarcyProblem& pb, int threads) {
  const FlowSolution forward = solve_darcy(pb);
  const AdjointSolution adjoint = solve_adjoint_darcy(pb, forward);
  return gradient_report_impl(pb, forward, adjoint, threads);
}

GradientReport gradient_report(const BrinkmanProblem& pb, int threads) {
  const FlowSolution forward = solve_brinkman(pb);
  const AdjointSolution adjoint = solve_adjoint_brinkman(pb, forward);
  return gradient_report_impl(pb, forward, adjoint, threads);
}

}  // namespace porous
