#pragma once

// First-order shadow geometry for double-angle evaporation into an etched
// trench. Cross-section is a symmetric trapezoid (top width w, depth d,
// sidewall angle phi from horizontal). Cross-trench coordinate x has its
// origin at the top edge of the left wall; positive tilt means the beam
// passes over the left wall. Lengths are nanometres, areas square microns.

#include <optional>
#include <vector>

namespace jjtrench::geometry {

struct TrenchSegment {
  double length_nm = 0.0;     // along the trench axis
  double top_width_nm = 0.0;  // cross-trench opening at the surface
};

struct TrenchProfile {
  double depth_nm = 0.0;
  double sidewall_deg = 90.0;  // from horizontal; 90 = vertical walls
  std::vector<TrenchSegment> segments;

  /// Throws ValidationError naming the first violated invariant.
  void validate() const;

  /// Horizontal distance from a wall's top edge to its base, d*cot(phi).
  double wall_inset_nm() const;

  /// Segment order reversed along the trench axis (180-degree chip rotation
  /// when combined with swapping the deposition sides).
  TrenchProfile mirrored() const;
};

struct DepositionStep {
  double tilt_deg = 0.0;  // signed, from substrate normal
  double nominal_nm = 0.0;
  double in_plane_rotation_deg = 0.0;  // chip misalignment about the normal

  void validate() const;
};

struct FloorInterval {
  double lo_nm = 0.0;
  double hi_nm = 0.0;
  double width_nm() const { return hi_nm - lo_nm; }
};

/// Floor coverage of one deposition; nullopt marks a fully shadowed segment.
struct FloorCoverage {
  std::vector<std::optional<FloorInterval>> segments;
};

struct JunctionGeometry {
  double overlap_width_nm = 0.0;
  double overlap_length_nm = 0.0;
  double area_um2 = 0.0;
  bool formed = false;
  /// Number of separate contiguous runs of overlap-forming segments.
  int junction_count = 0;
};

struct RotatedJunction {
  JunctionGeometry junction;
  /// Along-trench displacement of each film's shadow edge, d*tan(tilt)*sin(rot).
  double along_shift1_nm = 0.0;
  double along_shift2_nm = 0.0;
};

double effective_thickness(double nominal_nm, double tilt_deg);

double floor_shadow(double depth_nm, double tilt_deg);

/// Cross-trench shadow including the in-plane rotation projection.
double projected_shadow(double depth_nm, const DepositionStep& step);

FloorCoverage coverage(const TrenchProfile& profile, const DepositionStep& step);

JunctionGeometry junction_geometry(const TrenchProfile& profile, const DepositionStep& step1,
                                   const DepositionStep& step2);

RotatedJunction overlap_vs_rotation(const TrenchProfile& profile, const DepositionStep& step1,
                                    const DepositionStep& step2, double rotation_deg);

/// Widths strictly above the returned value form an overlap.
double min_width_for_overlap(double depth_nm, double tilt1_deg, double tilt2_deg);

}  // namespace jjtrench::geometry
