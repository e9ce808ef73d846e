#include "jjtrench/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "jjtrench/errors.hpp"

namespace jjtrench::geometry {
namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

void require_tilt(double tilt_deg, const char* what) {
  if (!std::isfinite(tilt_deg) || std::abs(tilt_deg) >= 90.0) {
    throw DomainError(std::string(what) + " must satisfy |angle| < 90 deg, got " +
                      std::to_string(tilt_deg));
  }
}

void require_opposite(double tilt1_deg, double tilt2_deg) {
  if (!(tilt1_deg * tilt2_deg < 0.0)) {
    throw SameSideDeposition("deposition tilts " + std::to_string(tilt1_deg) + " and " +
                             std::to_string(tilt2_deg) + " are not on opposite sides");
  }
}

}  // namespace

void TrenchProfile::validate() const {
  if (!(depth_nm > 0.0)) throw ValidationError("trench depth_nm must be > 0");
  if (!(sidewall_deg > 0.0 && sidewall_deg <= 90.0)) {
    throw ValidationError("trench sidewall_deg must be in (0, 90], got " +
                          std::to_string(sidewall_deg));
  }
  if (segments.empty()) throw ValidationError("trench needs at least one segment");
  const double inset = wall_inset_nm();
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto& s = segments[i];
    const std::string tag = "trench segment " + std::to_string(i);
    if (!(s.length_nm > 0.0)) throw ValidationError(tag + ": length_nm must be > 0");
    if (!(s.top_width_nm > 0.0)) throw ValidationError(tag + ": width_nm must be > 0");
    if (!(s.top_width_nm > 2.0 * inset)) {
      throw ValidationError(tag + ": width_nm must exceed 2*depth*cot(sidewall) = " +
                            std::to_string(2.0 * inset) + " (wall bases cross)");
    }
  }
}

double TrenchProfile::wall_inset_nm() const {
  if (sidewall_deg >= 90.0) return 0.0;
  return depth_nm / std::tan(sidewall_deg * kDegToRad);
}

TrenchProfile TrenchProfile::mirrored() const {
  TrenchProfile out = *this;
  std::reverse(out.segments.begin(), out.segments.end());
  return out;
}

void DepositionStep::validate() const {
  require_tilt(tilt_deg, "deposition tilt_deg");
  if (!(nominal_nm > 0.0)) throw ValidationError("deposition nominal_nm must be > 0");
  require_tilt(in_plane_rotation_deg, "deposition rotation_deg");
}

double effective_thickness(double nominal_nm, double tilt_deg) {
  require_tilt(tilt_deg, "tilt");
  if (!(nominal_nm > 0.0)) throw DomainError("nominal thickness must be > 0");
  return nominal_nm * std::cos(tilt_deg * kDegToRad);
}

double floor_shadow(double depth_nm, double tilt_deg) {
  require_tilt(tilt_deg, "tilt");
  if (!(depth_nm > 0.0)) throw DomainError("depth must be > 0");
  return depth_nm * std::tan(std::abs(tilt_deg) * kDegToRad);
}

double projected_shadow(double depth_nm, const DepositionStep& step) {
  require_tilt(step.in_plane_rotation_deg, "rotation");
  return floor_shadow(depth_nm, step.tilt_deg) *
         std::cos(step.in_plane_rotation_deg * kDegToRad);
}

FloorCoverage coverage(const TrenchProfile& profile, const DepositionStep& step) {
  profile.validate();
  step.validate();
  const double shadow = projected_shadow(profile.depth_nm, step);
  const double inset = profile.wall_inset_nm();

  FloorCoverage out;
  out.segments.reserve(profile.segments.size());
  for (const auto& seg : profile.segments) {
    const double w = seg.top_width_nm;
    FloorInterval iv;
    if (step.tilt_deg >= 0.0) {
      iv = {std::max(shadow, inset), w - inset};
    } else {
      iv = {inset, w - std::max(shadow, inset)};
    }
    if (iv.lo_nm < iv.hi_nm) {
      out.segments.emplace_back(iv);
    } else {
      out.segments.emplace_back(std::nullopt);
    }
  }
  return out;
}

JunctionGeometry junction_geometry(const TrenchProfile& profile, const DepositionStep& step1,
                                   const DepositionStep& step2) {
  profile.validate();
  step1.validate();
  step2.validate();
  require_opposite(step1.tilt_deg, step2.tilt_deg);

  // Both shadows hang from top edges, so the sidewall angle drops out.
  const double shadows =
      projected_shadow(profile.depth_nm, step1) + projected_shadow(profile.depth_nm, step2);

  JunctionGeometry best;
  double run_area_nm2 = 0.0;
  double run_length = 0.0;
  int runs = 0;
  auto close_run = [&] {
    if (run_length <= 0.0) return;
    ++runs;
    if (run_area_nm2 * 1e-6 > best.area_um2) {
      best.overlap_length_nm = run_length;
      best.overlap_width_nm = run_area_nm2 / run_length;
      best.area_um2 = run_area_nm2 * 1e-6;
    }
    run_area_nm2 = 0.0;
    run_length = 0.0;
  };

  for (const auto& seg : profile.segments) {
    const double width = std::max(0.0, seg.top_width_nm - shadows);
    if (width > 0.0) {
      run_area_nm2 += width * seg.length_nm;
      run_length += seg.length_nm;
    } else {
      close_run();
    }
  }
  close_run();

  best.formed = best.area_um2 > 0.0;
  best.junction_count = runs;
  if (!best.formed) best = JunctionGeometry{};
  return best;
}

RotatedJunction overlap_vs_rotation(const TrenchProfile& profile, const DepositionStep& step1,
                                    const DepositionStep& step2, double rotation_deg) {
  require_tilt(rotation_deg, "rotation");
  DepositionStep r1 = step1;
  DepositionStep r2 = step2;
  r1.in_plane_rotation_deg += rotation_deg;
  r2.in_plane_rotation_deg += rotation_deg;

  RotatedJunction out;
  out.junction = junction_geometry(profile, r1, r2);
  out.along_shift1_nm =
      floor_shadow(profile.depth_nm, r1.tilt_deg) * std::sin(r1.in_plane_rotation_deg * kDegToRad);
  out.along_shift2_nm =
      floor_shadow(profile.depth_nm, r2.tilt_deg) * std::sin(r2.in_plane_rotation_deg * kDegToRad);
  return out;
}

double min_width_for_overlap(double depth_nm, double tilt1_deg, double tilt2_deg) {
  require_tilt(tilt1_deg, "tilt1");
  require_tilt(tilt2_deg, "tilt2");
  require_opposite(tilt1_deg, tilt2_deg);
  return floor_shadow(depth_nm, tilt1_deg) + floor_shadow(depth_nm, tilt2_deg);
}

}  // namespace jjtrench::geometry
