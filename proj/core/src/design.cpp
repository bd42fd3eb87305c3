#include "porous/design.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "porous/dissipation.hpp"
#include "porous/log.hpp"

namespace porous {

FlowSolution solve(const AnyProblem& pb) {
  if (const auto* d = std::get_if<DarcyProblem>(&pb)) return solve_darcy(*d);
  return solve_brinkman(std::get<BrinkmanProblem>(pb));
}

BvpClass classify_bvp(const AnyProblem& pb) {
  return std::visit([](const auto& p) { return classify_bvp(p); }, pb);
}

double total_dissipation(const AnyProblem& pb, const FaceField& v) {
  if (const auto* d = std::get_if<DarcyProblem>(&pb)) {
    return total_dissipation_darcy(d->grid, d->k, d->mu, v);
  }
  const auto& b = std::get<BrinkmanProblem>(pb);
  return total_dissipation_brinkman(b.grid, b.k, b.mu, v);
}

CellField discrete_gradient(const AnyProblem& pb, const FlowSolution& sol) {
  return std::visit([&](const auto& p) { return discrete_gradient(p, sol); },
                    pb);
}

const StaggeredGrid& grid_of(const AnyProblem& pb) {
  return std::visit([](const auto& p) -> const StaggeredGrid& { return p.grid; },
                    pb);
}

const CellField& permeability_of(const AnyProblem& pb) {
  return std::visit([](const auto& p) -> const CellField& { return p.k; }, pb);
}

AnyProblem with_permeability(AnyProblem pb, CellField k) {
  std::visit([&](auto& p) { p.k = std::move(k); }, pb);
  return pb;
}

const char* to_string(DesignVerdict v) {
  switch (v) {
    case DesignVerdict::TrivialAllHigh: return "trivial_all_high";
    case DesignVerdict::TrivialAllLow: return "trivial_all_low";
    default: return "nontrivial";
  }
}

InterpolatedPermeability interpolate_permeability(const CellField& gamma,
                                                  const Scenario& sc) {
  if (!(sc.k_low > 0.0) || !(sc.k_high > sc.k_low)) {
    throw InputError("scenario: requires 0 < k_low < k_high");
  }
  if (!(sc.q > 0.0)) {
    throw InputError("scenario: interpolation parameter q must be positive");
  }
  InterpolatedPermeability out;
  out.k.values.resize(gamma.values.size());
  out.dk_dgamma.values.resize(gamma.values.size());
  const double inv_hi = 1.0 / sc.k_high;
  const double inv_lo = 1.0 / sc.k_low;
  for (std::size_t c = 0; c < gamma.values.size(); ++c) {
    const double gm = gamma.values[c];
    if (!(gm >= 0.0 && gm <= 1.0)) {
      throw InputError("interpolate_permeability: gamma out of [0,1]");
    }
    const double s = 1.0 - gm;
    const double w = s * (1.0 + sc.q) / (s + sc.q);
    const double inv_k = inv_hi + (inv_lo - inv_hi) * w;
    const double k = 1.0 / inv_k;
    const double dw = -(1.0 + sc.q) * sc.q / ((s + sc.q) * (s + sc.q));
    out.k.values[c] = k;
    out.dk_dgamma.values[c] = -k * k * (inv_lo - inv_hi) * dw;
  }
  return out;
}

namespace {

double bounded_material_fraction(const CellField& gamma, const Scenario& sc) {
  const double m = mean(gamma);
  return sc.bounded_material == Scenario::Bound::HighPermeability ? m
                                                                  : 1.0 - m;
}

// 3x3 box average, clipped at the boundary.
CellField box_filter(const StaggeredGrid& g, const CellField& f) {
  CellField out(g);
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double sum = 0.0;
      int count = 0;
      for (int dj = -1; dj <= 1; ++dj) {
        for (int di = -1; di <= 1; ++di) {
          const int ii = i + di, jj = j + dj;
          if (ii < 0 || ii >= g.nx || jj < 0 || jj >= g.ny) continue;
          sum += f[g.cell(ii, jj)];
          ++count;
        }
      }
      out[g.cell(i, j)] = sum / count;
    }
  }
  return out;
}

// Shift-then-clip projection onto the move-limited box intersected with the
// volume bound; bisection on the shift when the bound is violated.
CellField project_design(const CellField& gamma_prev, const CellField& step,
                         double move, const Scenario& sc) {
  const std::size_t n = gamma_prev.values.size();
  std::vector<double> lb(n), ub(n), trial(n);
  for (std::size_t c = 0; c < n; ++c) {
    lb[c] = std::max(0.0, gamma_prev.values[c] - move);
    ub[c] = std::min(1.0, gamma_prev.values[c] + move);
  }
  auto clipped = [&](double shift) {
    CellField out;
    out.values.resize(n);
    for (std::size_t c = 0; c < n; ++c) {
      out.values[c] = std::clamp(gamma_prev.values[c] + step.values[c] + shift,
                                 lb[c], ub[c]);
    }
    return out;
  };

  CellField candidate = clipped(0.0);
  const double f = sc.volume_fraction;
  const bool high_bound =
      sc.bounded_material == Scenario::Bound::HighPermeability;
  const double used = bounded_material_fraction(candidate, sc);
  if (used <= f + 1e-15) return candidate;

  // High bound exceeded -> shift down; low bound exceeded -> shift up.
  double lo = high_bound ? -2.0 : 0.0;
  double hi = high_bound ? 0.0 : 2.0;
  for (int it = 0; it < 200; ++it) {
    const double s = 0.5 * (lo + hi);
    candidate = clipped(s);
    const double v = bounded_material_fraction(candidate, sc);
    if (std::abs(v - f) <= 1e-13) break;
    const bool over = v > f;
    if (high_bound) {
      (over ? hi : lo) = s;
    } else {
      (over ? lo : hi) = s;
    }
  }
  return candidate;
}

}  // namespace

DesignState optimize(const AnyProblem& pb, const Scenario& sc, int max_iters,
                     double move_limit) {
  if (!(sc.volume_fraction > 0.0 && sc.volume_fraction < 1.0)) {
    throw InputError("optimize: volume fraction must lie in (0,1)");
  }
  const BvpClass cls = classify_bvp(pb);
  if (cls.tag == ClassTag::General) {
    log::info("optimize: problem is outside classes A-D (" + cls.notes +
              "); proceeding anyway");
  }
  const StaggeredGrid& g = grid_of(pb);
  const bool maximize = sc.sense == Scenario::Sense::Maximize;

  DesignState state;
  const double gamma0 =
      sc.bounded_material == Scenario::Bound::HighPermeability
          ? sc.volume_fraction
          : 1.0 - sc.volume_fraction;
  state.design.gamma = CellField(g, gamma0);

  auto evaluate = [&](const CellField& gamma) {
    const InterpolatedPermeability ip = interpolate_permeability(gamma, sc);
    AnyProblem local = with_permeability(pb, ip.k);
    const FlowSolution sol = porous::solve(local);
    const double phi = total_dissipation(local, sol.v);
    CellField gk = discrete_gradient(local, sol);
    CellField ggamma(g);
    for (int c = 0; c < g.num_cells(); ++c) {
      ggamma[c] = gk[c] * ip.dk_dgamma[c];
    }
    if (sc.smoothing_filter) ggamma = box_filter(g, ggamma);
    return std::pair<double, CellField>(phi, std::move(ggamma));
  };

  auto [phi, grad] = evaluate(state.design.gamma);
  state.objective_history.push_back(phi);

  for (int it = 0; it < max_iters; ++it) {
    double gmax = 0.0;
    for (double v : grad.values) gmax = std::max(gmax, std::abs(v));
    if (gmax == 0.0) {
      state.converged = true;
      break;
    }

    double move = move_limit;
    CellField gamma_new;
    double phi_new = 0.0;
    CellField grad_new;
    for (int attempt = 0;; ++attempt) {
      CellField step(g);
      const double scale = move / gmax;
      for (int c = 0; c < g.num_cells(); ++c) {
        step[c] = (maximize ? +1.0 : -1.0) * scale * grad[c];
      }
      gamma_new = project_design(state.design.gamma, step, move, sc);
      auto [p_trial, g_trial] = evaluate(gamma_new);
      phi_new = p_trial;
      grad_new = std::move(g_trial);
      const double slack = 1e-12 * std::max(1.0, std::abs(phi));
      const bool progress =
          maximize ? (phi_new >= phi - slack) : (phi_new <= phi + slack);
      if (progress || attempt >= 5) break;
      move *= 0.5;
    }

    double dmax = 0.0;
    for (int c = 0; c < g.num_cells(); ++c) {
      dmax = std::max(dmax,
                      std::abs(gamma_new[c] - state.design.gamma[c]));
    }
    state.design.gamma = std::move(gamma_new);
    phi = phi_new;
    grad = std::move(grad_new);
    state.objective_history.push_back(phi);
    state.iterations = it + 1;
    if (dmax < 1e-4) {
      state.converged = true;
      break;
    }
  }

  double gmin = 1.0, gmax_v = 0.0;
  for (double v : state.design.gamma.values) {
    gmin = std::min(gmin, v);
    gmax_v = std::max(gmax_v, v);
  }
  if (gmin >= 1.0 - 1e-3) {
    state.verdict = DesignVerdict::TrivialAllHigh;
  } else if (gmax_v <= 1e-3) {
    state.verdict = DesignVerdict::TrivialAllLow;
  } else {
    state.verdict = DesignVerdict::Nontrivial;
  }
  state.bounded_fraction = bounded_material_fraction(state.design.gamma, sc);
  state.constraint_active =
      std::abs(state.bounded_fraction - sc.volume_fraction) <=
      0.01 * sc.volume_fraction;
  return state;
}

bool table1_expected_trivial(bool bound_low, bool sense_min, bool group_cd) {
  return bound_low ? (sense_min == group_cd) : (sense_min != group_cd);
}

DesignVerdict table1_expected_trivial_verdict(bool bound_low) {
  return bound_low ? DesignVerdict::TrivialAllHigh
                   : DesignVerdict::TrivialAllLow;
}

Table1Result run_table1(const AnyProblem& problem_ab,
                        const AnyProblem& problem_cd,
                        const Table1Params& params) {
  const BvpClass cls_ab = classify_bvp(problem_ab);
  if (cls_ab.tag != ClassTag::A && cls_ab.tag != ClassTag::B) {
    throw InputError("run_table1: the A/B problem classifies as " +
                     std::string(to_string(cls_ab.tag)));
  }
  const BvpClass cls_cd = classify_bvp(problem_cd);
  if (cls_cd.tag != ClassTag::C && cls_cd.tag != ClassTag::D) {
    throw InputError("run_table1: the C/D problem classifies as " +
                     std::string(to_string(cls_cd.tag)));
  }

  Table1Result out;
  for (int bound_low = 0; bound_low < 2; ++bound_low) {
    for (int sense_min = 0; sense_min < 2; ++sense_min) {
      for (int group_cd = 0; group_cd < 2; ++group_cd) {
        Scenario sc;
        sc.sense = sense_min ? Scenario::Sense::Minimize
                             : Scenario::Sense::Maximize;
        sc.bounded_material = bound_low
                                  ? Scenario::Bound::LowPermeability
                                  : Scenario::Bound::HighPermeability;
        sc.volume_fraction = params.volume_fraction;
        sc.k_low = params.k_low;
        sc.k_high = params.k_high;
        sc.q = params.q;
        Table1Cell& cell = out.cells[bound_low][sense_min][group_cd];
        cell.scenario = sc;
        cell.state = optimize(group_cd ? problem_cd : problem_ab, sc,
                              params.max_iters, params.move_limit);
      }
    }
  }
  return out;
}

MonotoneReport objective_monotone_check(const AnyProblem& pb,
                                        const std::vector<double>& scales) {
  if (scales.size() < 2) {
    throw InputError("objective_monotone_check: need at least two scales");
  }
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (!(scales[i] > 0.0) || !std::isfinite(scales[i])) {
      throw InputError("objective_monotone_check: scales must be positive");
    }
    if (i > 0 && !(scales[i] > scales[i - 1])) {
      throw InputError("objective_monotone_check: scales must increase");
    }
  }
  const BvpClass cls = classify_bvp(pb);
  if (cls.tag == ClassTag::General) {
    throw InputError(
        "objective_monotone_check: unsupported for General-class problems");
  }

  MonotoneReport rep;
  rep.increasing_expected =
      cls.tag == ClassTag::A || cls.tag == ClassTag::B;
  const CellField& k0 = permeability_of(pb);
  for (double c : scales) {
    CellField k = k0;
    for (double& v : k.values) v *= c;
    AnyProblem local = with_permeability(pb, std::move(k));
    const FlowSolution sol = porous::solve(local);
    rep.phi.push_back(total_dissipation(local, sol.v));
  }

  double phi_max = 0.0;
  for (double p : rep.phi) phi_max = std::max(phi_max, std::abs(p));
  rep.degenerate = phi_max < 1e-12;
  if (rep.degenerate) return rep;

  rep.min_relative_separation = std::numeric_limits<double>::infinity();
  const double dir = rep.increasing_expected ? +1.0 : -1.0;
  for (std::size_t i = 0; i + 1 < rep.phi.size(); ++i) {
    const double sep = dir * (rep.phi[i + 1] - rep.phi[i]) /
                       std::max(std::abs(rep.phi[i]), std::abs(rep.phi[i + 1]));
    rep.min_relative_separation = std::min(rep.min_relative_separation, sep);
  }
  if (rep.min_relative_separation <= 1e-6) {
    throw InvariantError(
        "objective_monotone_check: dissipation trend violated (class " +
        std::string(to_string(cls.tag)) + ", min relative separation " +
        std::to_string(rep.min_relative_separation) + ")");
  }
  return rep;
}

}  // namespace porous
