#include <doctest.h>

#include <cmath>

#include "porous/design.hpp"
#include "test_util.hpp"

using namespace porous;
namespace tu = porous::testutil;

namespace {

Scenario scenario(Scenario::Sense sense, Scenario::Bound bound,
                  double f = 0.4) {
  Scenario sc;
  sc.sense = sense;
  sc.bounded_material = bound;
  sc.volume_fraction = f;
  sc.k_low = 1e-4;
  sc.k_high = 1.0;
  sc.q = 8.0;
  return sc;
}

}  // namespace

TEST_CASE("interpolation endpoints are exact") {
  const StaggeredGrid g = make_grid(4, 4, 1.0, 1.0);
  const Scenario sc = scenario(Scenario::Sense::Maximize,
                               Scenario::Bound::HighPermeability);

  const InterpolatedPermeability hi =
      interpolate_permeability(CellField(g, 1.0), sc);
  for (double v : hi.k.values) CHECK(v == doctest::Approx(sc.k_high));

  const InterpolatedPermeability lo =
      interpolate_permeability(CellField(g, 0.0), sc);
  for (double v : lo.k.values) CHECK(v == doctest::Approx(sc.k_low));
}

TEST_CASE("interpolation midpoint value and derivative") {
  const StaggeredGrid g = make_grid(1, 1, 1.0, 1.0);
  Scenario sc = scenario(Scenario::Sense::Maximize,
                         Scenario::Bound::HighPermeability);
  sc.q = 1.0;
  const InterpolatedPermeability ip =
      interpolate_permeability(CellField(g, 0.5), sc);
  // 1/k = 1 + (1e4 - 1) * 0.5 * 2 / 1.5
  CHECK(ip.k[0] == doctest::Approx(1.0 / 6667.0).epsilon(1e-12));

  // derivative against central differences of the interpolation law
  const double h = 1e-6;
  const double kp = interpolate_permeability(CellField(g, 0.5 + h), sc).k[0];
  const double km = interpolate_permeability(CellField(g, 0.5 - h), sc).k[0];
  CHECK(ip.dk_dgamma[0] ==
        doctest::Approx((kp - km) / (2.0 * h)).epsilon(1e-6));

  CellField bad(g, 1.5);
  CHECK_THROWS_AS(interpolate_permeability(bad, sc), InputError);
}

TEST_CASE("trivial scenarios reach the uniform design") {
  const AnyProblem ab = tu::darcy_channel_class_b(16, 16);

  SUBCASE("maximize with the low-permeability bound: all high") {
    const DesignState state =
        optimize(ab,
                 scenario(Scenario::Sense::Maximize,
                          Scenario::Bound::LowPermeability),
                 100, 0.2);
    CHECK(state.verdict == DesignVerdict::TrivialAllHigh);
    CHECK(state.iterations <= 100);
  }
  SUBCASE("minimize with the high-permeability bound: all low") {
    const DesignState state =
        optimize(ab,
                 scenario(Scenario::Sense::Minimize,
                          Scenario::Bound::HighPermeability),
                 100, 0.2);
    CHECK(state.verdict == DesignVerdict::TrivialAllLow);
  }
}

TEST_CASE("bounded scenarios end on the volume constraint") {
  const AnyProblem ab = tu::darcy_channel_class_b(16, 16);
  const DesignState state =
      optimize(ab,
               scenario(Scenario::Sense::Maximize,
                        Scenario::Bound::HighPermeability),
               120, 0.2);
  CHECK(state.verdict == DesignVerdict::Nontrivial);
  CHECK(state.constraint_active);
  CHECK(std::abs(state.bounded_fraction - 0.4) <= 0.004);

  const AnyProblem cd = tu::darcy_channel_class_d(16, 16);
  const DesignState state_cd =
      optimize(cd,
               scenario(Scenario::Sense::Minimize,
                        Scenario::Bound::HighPermeability),
               120, 0.2);
  CHECK(state_cd.verdict == DesignVerdict::Nontrivial);
  CHECK(state_cd.constraint_active);
}

TEST_CASE("volume bound is feasible after every projection") {
  const AnyProblem ab = tu::darcy_channel_class_b(12, 12);
  const Scenario sc = scenario(Scenario::Sense::Maximize,
                               Scenario::Bound::HighPermeability);
  for (int iters : {1, 2, 3, 5}) {
    const DesignState state = optimize(ab, sc, iters, 0.2);
    CHECK(state.bounded_fraction <= sc.volume_fraction + 1e-10);
  }
  const Scenario low = scenario(Scenario::Sense::Minimize,
                                Scenario::Bound::LowPermeability);
  for (int iters : {1, 2, 3, 5}) {
    const DesignState state = optimize(ab, low, iters, 0.2);
    CHECK(state.bounded_fraction <= low.volume_fraction + 1e-10);
  }
}

TEST_CASE("objective history makes monotone progress") {
  const AnyProblem ab = tu::darcy_channel_class_b(12, 12);
  const DesignState max_state =
      optimize(ab,
               scenario(Scenario::Sense::Maximize,
                        Scenario::Bound::HighPermeability),
               40, 0.2);
  for (std::size_t i = 0; i + 1 < max_state.objective_history.size(); ++i) {
    CHECK(max_state.objective_history[i + 1] >=
          max_state.objective_history[i] -
              1e-12 * std::max(1.0, std::abs(max_state.objective_history[i])));
  }
  const DesignState min_state =
      optimize(ab,
               scenario(Scenario::Sense::Minimize,
                        Scenario::Bound::LowPermeability),
               40, 0.2);
  for (std::size_t i = 0; i + 1 < min_state.objective_history.size(); ++i) {
    CHECK(min_state.objective_history[i + 1] <=
          min_state.objective_history[i] +
              1e-12 * std::max(1.0, std::abs(min_state.objective_history[i])));
  }
}

TEST_CASE("single-cell designs saturate the bound") {
  const AnyProblem ab = tu::darcy_channel_class_b(1, 1);

  const DesignState high = optimize(
      ab,
      scenario(Scenario::Sense::Maximize, Scenario::Bound::HighPermeability),
      60, 0.2);
  CHECK(high.design.gamma[0] == doctest::Approx(0.4).epsilon(1e-9));

  const DesignState low = optimize(
      ab,
      scenario(Scenario::Sense::Maximize, Scenario::Bound::LowPermeability),
      60, 0.2);
  CHECK(low.verdict == DesignVerdict::TrivialAllHigh);
}

TEST_CASE("smoothed gradients still reach the taxonomy verdicts") {
  const AnyProblem ab = tu::darcy_channel_class_b(12, 12);
  Scenario sc = scenario(Scenario::Sense::Maximize,
                         Scenario::Bound::LowPermeability);
  sc.smoothing_filter = true;
  const DesignState trivial = optimize(ab, sc, 100, 0.2);
  CHECK(trivial.verdict == DesignVerdict::TrivialAllHigh);

  sc = scenario(Scenario::Sense::Maximize, Scenario::Bound::HighPermeability);
  sc.smoothing_filter = true;
  const DesignState bounded = optimize(ab, sc, 100, 0.2);
  CHECK(bounded.verdict == DesignVerdict::Nontrivial);
  CHECK(bounded.bounded_fraction <= sc.volume_fraction + 1e-10);
}

TEST_CASE("infeasible volume fraction is rejected") {
  const AnyProblem ab = tu::darcy_channel_class_b(4, 4);
  Scenario sc = scenario(Scenario::Sense::Maximize,
                         Scenario::Bound::HighPermeability);
  sc.volume_fraction = 0.0;
  CHECK_THROWS_AS(optimize(ab, sc, 10, 0.2), InputError);
}

TEST_CASE("run_table1 reproduces the taxonomy on a small channel pair") {
  const AnyProblem ab = tu::darcy_channel_class_b(12, 12);
  const AnyProblem cd = tu::darcy_channel_class_d(12, 12);
  Table1Params params;
  params.max_iters = 120;

  const Table1Result r = run_table1(ab, cd, params);
  for (int bound_low = 0; bound_low < 2; ++bound_low) {
    for (int sense_min = 0; sense_min < 2; ++sense_min) {
      for (int group_cd = 0; group_cd < 2; ++group_cd) {
        const Table1Cell& cell = r.cells[bound_low][sense_min][group_cd];
        const bool expect_trivial = table1_expected_trivial(
            bound_low != 0, sense_min != 0, group_cd != 0);
        INFO("bound_low=" << bound_low << " sense_min=" << sense_min
                          << " group_cd=" << group_cd
                          << " verdict=" << to_string(cell.state.verdict));
        if (expect_trivial) {
          CHECK(cell.state.verdict ==
                table1_expected_trivial_verdict(bound_low != 0));
        } else {
          CHECK(cell.state.verdict == DesignVerdict::Nontrivial);
          CHECK(cell.state.constraint_active);
        }
      }
    }
  }
}

TEST_CASE("run_table1 validates the problem classes") {
  const AnyProblem ab = tu::darcy_channel_class_b(8, 8);
  const AnyProblem cd = tu::darcy_channel_class_d(8, 8);
  Table1Params params;
  CHECK_THROWS_AS(run_table1(cd, cd, params), InputError);
  CHECK_THROWS_AS(run_table1(ab, ab, params), InputError);
}

TEST_CASE("objective monotone check follows the class trend") {
  const std::vector<double> scales{1.0, 2.0, 4.0};

  SUBCASE("class B increases") {
    const MonotoneReport rep =
        objective_monotone_check(tu::darcy_channel_class_b(12, 8), scales);
    CHECK(rep.increasing_expected);
    CHECK(!rep.degenerate);
    CHECK(rep.phi.size() == 3);
    CHECK(rep.min_relative_separation > 1e-6);
  }
  SUBCASE("class D decreases") {
    const MonotoneReport rep =
        objective_monotone_check(tu::darcy_channel_class_d(12, 8), scales);
    CHECK(!rep.increasing_expected);
    CHECK(rep.min_relative_separation > 1e-6);
  }
  SUBCASE("zero loading is degenerate, reported, not asserted") {
    const MonotoneReport rep = objective_monotone_check(
        tu::darcy_channel_class_b(8, 8, 1.0, 1.0, 0.0, 0.0), scales);
    CHECK(rep.degenerate);
  }
  SUBCASE("general class is unsupported") {
    DarcyProblem pb = tu::darcy_channel_class_b(8, 8);
    pb.bc.top.primary = Profile(0.3);
    CHECK_THROWS_AS(objective_monotone_check(AnyProblem(pb), scales),
                    InputError);
  }
  SUBCASE("brinkman classes follow the same trend") {
    const MonotoneReport b = objective_monotone_check(
        tu::brinkman_channel_class_b(10, 10), scales);
    CHECK(b.min_relative_separation > 1e-6);
    const MonotoneReport d = objective_monotone_check(
        tu::brinkman_channel_class_d(10, 10), scales);
    CHECK(!d.increasing_expected);
    CHECK(d.min_relative_separation > 1e-6);
  }
}
