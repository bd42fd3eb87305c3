#pragma once

#include <string>

#include "porous/brinkman.hpp"
#include "porous/darcy.hpp"
#include "porous/grid.hpp"

namespace porous {

/// The four analytically solvable boundary-value-problem classes.
/// A: pressure data on the entire boundary (pressure-driven).
/// B: pressure data on part, homogeneous velocity data on the rest.
/// C: compatible velocity data everywhere, conservative body force.
/// D: velocity data on part, zero pressure data on the rest, zero body force.
enum class ClassTag { A, B, C, D, General };

enum class ModelForm { Darcy, BrinkmanMain, BrinkmanTraction };

struct BvpClass {
  ClassTag tag = ClassTag::General;
  ModelForm form = ModelForm::Darcy;
  std::string notes;  // which clause matched or failed
};

const char* to_string(ClassTag tag);
const char* to_string(ModelForm form);

/// Absolute tolerance for the homogeneity clauses: class membership is a
/// structural property of the data, not an approximate one.
inline constexpr double kHomogeneityTol = 1e-14;

BvpClass classify_bvp(const DarcyProblem& pb);
BvpClass classify_bvp(const BrinkmanProblem& pb);

/// Signed net outward flux of the prescribed boundary velocities,
/// sum over boundary faces of v.n * face area. Requires velocity data on
/// the entire boundary; throws InputError otherwise.
double check_compatibility(const StaggeredGrid& g, const BoundarySpec& bc);

/// Compatibility acceptance threshold: 1e-10 * boundary measure * velocity
/// scale (max prescribed |v.n|).
double compatibility_tolerance(const StaggeredGrid& g, const BoundarySpec& bc);

/// Rewrites a problem whose pressure (or normal-traction) data is a single
/// constant c with b = 0 into the equivalent zero-pressure-data problem,
/// recording c so reported pressures can be restored by adding it back.
/// Throws NotShiftableError when the data is not one constant or the body
/// force is nonzero.
struct ShiftedDarcy {
  DarcyProblem problem;
  double shift = 0.0;
};
ShiftedDarcy shift_pressure_datum(const DarcyProblem& pb);

struct ShiftedBrinkman {
  BrinkmanProblem problem;
  double shift = 0.0;
};
ShiftedBrinkman shift_pressure_datum(const BrinkmanProblem& pb);

}  // namespace porous
