#include "porous/classify.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

namespace porous {

namespace {

bool profile_zero(const StaggeredGrid& g, Side s, const Profile& p) {
  const int n = side_face_count(g, s);
  for (int i = 0; i < n; ++i) {
    if (std::abs(p.at(i)) > kHomogeneityTol) return false;
  }
  return true;
}

bool body_force_zero(const StaggeredGrid& g, const BodyForce& b) {
  if (b.kind == BodyForce::Kind::None) return true;
  const FaceField f = body_force_faces(g, b);
  for (double v : f.x) {
    if (std::abs(v) > kHomogeneityTol) return false;
  }
  for (double v : f.y) {
    if (std::abs(v) > kHomogeneityTol) return false;
  }
  return true;
}

// Class C demands the potential form explicitly; an identically zero vector
// field is accepted as the trivial gradient.
bool body_force_conservative(const StaggeredGrid& g, const BodyForce& b) {
  if (b.kind != BodyForce::Kind::FaceVector) return true;
  return body_force_zero(g, b);
}

bool is_velocity_kind(BcKind k) {
  return k == BcKind::NormalVelocity || k == BcKind::FullVelocity;
}

double normal_data(const BoundarySpec& bc, Side s, int i) {
  const SideBc& sb = bc.side(s);
  if (sb.kind == BcKind::NormalVelocity) return sb.primary.at(i);
  return full_velocity_normal(s, sb, i);
}

}  // namespace

const char* to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::A: return "A";
    case ClassTag::B: return "B";
    case ClassTag::C: return "C";
    case ClassTag::D: return "D";
    default: return "General";
  }
}

const char* to_string(ModelForm form) {
  switch (form) {
    case ModelForm::Darcy: return "darcy";
    case ModelForm::BrinkmanMain: return "brinkman";
    default: return "brinkman_traction";
  }
}

double check_compatibility(const StaggeredGrid& g, const BoundarySpec& bc) {
  validate_boundary_spec(g, bc);
  for (Side s : kSides) {
    if (!is_velocity_kind(bc.side(s).kind)) {
      throw InputError(
          "check_compatibility: velocity data must cover the entire boundary");
    }
  }
  double flux = 0.0;
  for (Side s : kSides) {
    const double area = side_face_area(g, s);
    const int n = side_face_count(g, s);
    for (int i = 0; i < n; ++i) {
      flux += normal_data(bc, s, i) * area;
    }
  }
  return flux;
}

double compatibility_tolerance(const StaggeredGrid& g,
                               const BoundarySpec& bc) {
  double v_scale = 0.0;
  for (Side s : kSides) {
    const int n = side_face_count(g, s);
    for (int i = 0; i < n; ++i) {
      v_scale = std::max(v_scale, std::abs(normal_data(bc, s, i)));
    }
  }
  const double boundary_measure = 2.0 * (g.lx + g.ly);
  return 1e-10 * boundary_measure * v_scale;
}

namespace {

struct ClauseCheck {
  bool pressure_everywhere = false;
  bool velocity_everywhere = false;
  bool mixed = false;
  bool velocity_data_zero = true;   // over velocity-kind sides
  bool pressure_data_zero = true;   // primary over pressure/traction sides
  bool tangential_zero = true;      // secondary over pressure sides (DB main)
};

ClauseCheck scan(const StaggeredGrid& g, const BoundarySpec& bc,
                 BcKind pressure_like) {
  ClauseCheck c;
  bool any_p = false, any_v = false;
  for (Side s : kSides) {
    const SideBc& sb = bc.side(s);
    if (sb.kind == pressure_like) {
      any_p = true;
      c.pressure_data_zero &= profile_zero(g, s, sb.primary);
      c.tangential_zero &= profile_zero(g, s, sb.secondary);
      if (pressure_like == BcKind::Traction) {
        c.pressure_data_zero &= profile_zero(g, s, sb.secondary);
      }
    } else {
      any_v = true;
      c.velocity_data_zero &= profile_zero(g, s, sb.primary);
      if (sb.kind == BcKind::FullVelocity) {
        c.velocity_data_zero &= profile_zero(g, s, sb.secondary);
      }
    }
  }
  c.pressure_everywhere = any_p && !any_v;
  c.velocity_everywhere = any_v && !any_p;
  c.mixed = any_p && any_v;
  return c;
}

BvpClass classify_common(const StaggeredGrid& g, const BoundarySpec& bc,
                         const BodyForce& body, ModelForm form,
                         BcKind pressure_like, bool require_tangential_zero) {
  const ClauseCheck c = scan(g, bc, pressure_like);
  BvpClass out;
  out.form = form;

  if (c.pressure_everywhere) {
    if (require_tangential_zero && !c.tangential_zero) {
      out.tag = ClassTag::General;
      out.notes = "pressure data on the entire boundary but nonzero "
                  "tangential velocity data";
      return out;
    }
    out.tag = ClassTag::A;
    out.notes = "pressure data on the entire boundary";
    return out;
  }

  if (c.velocity_everywhere) {
    const double flux = check_compatibility(g, bc);
    const double tol = compatibility_tolerance(g, bc);
    if (std::abs(flux) > tol) {
      out.tag = ClassTag::General;
      out.notes = "velocity data on the entire boundary with net flux " +
                  std::to_string(flux);
      return out;
    }
    if (!body_force_conservative(g, body)) {
      out.tag = ClassTag::General;
      out.notes = "compatible velocity data but body force is not in "
                  "potential form";
      return out;
    }
    out.tag = ClassTag::C;
    out.notes = "compatible velocity data on the entire boundary, "
                "conservative body force";
    return out;
  }

  // mixed boundary
  if (c.velocity_data_zero &&
      (!require_tangential_zero || c.tangential_zero)) {
    out.tag = ClassTag::B;
    out.notes = "pressure data with homogeneous velocity data on the rest";
    return out;
  }
  if (c.pressure_data_zero &&
      (!require_tangential_zero || c.tangential_zero) &&
      body_force_zero(g, body)) {
    out.tag = ClassTag::D;
    out.notes = "velocity data with zero pressure data on the rest and "
                "zero body force";
    return out;
  }
  out.tag = ClassTag::General;
  out.notes = "mixed boundary with nonzero velocity data and nonzero "
              "pressure data (or nonzero body force)";
  return out;
}

}  // namespace

BvpClass classify_bvp(const DarcyProblem& pb) {
  validate_darcy_problem(pb);
  return classify_common(pb.grid, pb.bc, pb.body_force, ModelForm::Darcy,
                         BcKind::Pressure, /*require_tangential_zero=*/false);
}

BvpClass classify_bvp(const BrinkmanProblem& pb) {
  validate_brinkman_problem(pb);
  if (pb.form == BrinkmanProblem::Form::Main) {
    return classify_common(pb.grid, pb.bc, pb.body_force,
                           ModelForm::BrinkmanMain, BcKind::Pressure,
                           /*require_tangential_zero=*/true);
  }
  return classify_common(pb.grid, pb.bc, pb.body_force,
                         ModelForm::BrinkmanTraction, BcKind::Traction,
                         /*require_tangential_zero=*/false);
}

namespace {

// Extracts the single constant pressure datum c, or nullopt if data is not
// one constant. For traction sides the datum satisfies t = -c n with zero
// tangential component.
std::optional<double> common_pressure_datum(const StaggeredGrid& g,
                                            const BoundarySpec& bc,
                                            BcKind pressure_like) {
  std::optional<double> c;
  for (Side s : kSides) {
    const SideBc& sb = bc.side(s);
    if (sb.kind != pressure_like) continue;
    const int n = side_face_count(g, s);
    for (int i = 0; i < n; ++i) {
      double value = 0.0;
      if (pressure_like == BcKind::Traction) {
        const bool vertical = (s == Side::Left || s == Side::Right);
        const double tn = vertical ? outward_sign(s) * sb.primary.at(i)
                                   : outward_sign(s) * sb.secondary.at(i);
        const double tt = vertical ? sb.secondary.at(i) : sb.primary.at(i);
        if (std::abs(tt) > kHomogeneityTol) return std::nullopt;
        value = -tn;
      } else {
        value = sb.primary.at(i);
      }
      if (!c) {
        c = value;
      } else if (std::abs(*c - value) > kHomogeneityTol) {
        return std::nullopt;
      }
    }
  }
  return c ? c : std::optional<double>(0.0);
}

void apply_datum_shift(const StaggeredGrid& g, BoundarySpec& bc,
                       BcKind pressure_like, double c) {
  for (Side s : kSides) {
    SideBc& sb = bc.side(s);
    if (sb.kind != pressure_like) continue;
    if (pressure_like == BcKind::Traction) {
      // new traction = old + c n, removing the -c n pressure part
      const bool vertical = (s == Side::Left || s == Side::Right);
      Profile& normal_comp = vertical ? sb.primary : sb.secondary;
      const int n = side_face_count(g, s);
      std::vector<double> shifted(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        shifted[static_cast<std::size_t>(i)] =
            normal_comp.at(i) + c * outward_sign(s);
      }
      normal_comp = Profile(std::move(shifted));
    } else {
      const int n = side_face_count(g, s);
      std::vector<double> shifted(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) {
        shifted[static_cast<std::size_t>(i)] = sb.primary.at(i) - c;
      }
      sb.primary = Profile(std::move(shifted));
    }
  }
}

}  // namespace

ShiftedDarcy shift_pressure_datum(const DarcyProblem& pb) {
  validate_darcy_problem(pb);
  if (!body_force_zero(pb.grid, pb.body_force)) {
    throw NotShiftableError("shift_pressure_datum: body force must be zero");
  }
  const auto c = common_pressure_datum(pb.grid, pb.bc, BcKind::Pressure);
  if (!c) {
    throw NotShiftableError(
        "shift_pressure_datum: pressure data is not a single constant");
  }
  ShiftedDarcy out{pb, *c};
  apply_datum_shift(out.problem.grid, out.problem.bc, BcKind::Pressure, *c);
  return out;
}

ShiftedBrinkman shift_pressure_datum(const BrinkmanProblem& pb) {
  validate_brinkman_problem(pb);
  if (!body_force_zero(pb.grid, pb.body_force)) {
    throw NotShiftableError("shift_pressure_datum: body force must be zero");
  }
  const BcKind pressure_like = pb.form == BrinkmanProblem::Form::Main
                                   ? BcKind::Pressure
                                   : BcKind::Traction;
  const auto c = common_pressure_datum(pb.grid, pb.bc, pressure_like);
  if (!c) {
    throw NotShiftableError(
        "shift_pressure_datum: pressure data is not a single constant");
  }
  ShiftedBrinkman out{pb, *c};
  apply_datum_shift(out.problem.grid, out.problem.bc, pressure_like, *c);
  return out;
}

}  // namespace porous
