#pragma once

#include "acb/model.hpp"

#include <vector>

namespace acb::landsmeer {

/// Below this angle model III is evaluated with its series expansion.
inline constexpr double kSeriesThreshold = 1e-3;

/// Model I: tendon following the articular surface, E = r·θ.
double excursion_I(double r, double theta);
/// Model II: free sling along the bisector, E = 2r·sin(θ/2).
double excursion_II(double r, double theta);
/// Model III: tendon in a sheath at distance d from the shaft, sheath ends
/// at y from the joint centre.
double excursion_III(double y, double d, double theta);

double moment_arm_I(double r, double theta);
double moment_arm_II(double r, double theta);
double moment_arm_III(double y, double d, double theta);

/// Geometry-only excursion of one crossing for θ ∈ [0, π]; no side sign.
double segment_excursion(LandsmeerModel model, double r, double y, double d, double theta);
/// dE/dθ for θ ∈ [0, π].
double segment_moment_arm(LandsmeerModel model, double r, double y, double d, double theta);

double moment_arm(const RoutingSegment& segment, double theta);
double moment_arm(const CompiledSegment& segment, double theta);

/// Signed excursion of a crossing for a signed angle measured from rest:
/// odd extension of the unsigned model, times side.
double signed_excursion(const CompiledSegment& segment, double theta);
/// Signed moment arm, side · dE/dθ at |θ| (even in θ).
double signed_moment_arm(const CompiledSegment& segment, double theta);

struct SegmentContribution {
    std::size_t segment{0};
    std::string dof;
    double contribution{0.0};  // mm
};

struct ExcursionResult {
    double excursion{0.0};  // positive = tendon shortening toward the muscle
    std::vector<SegmentContribution> per_segment;
};

/// Sum of side·E over the tendon's crossings, angles measured from rest.
ExcursionResult path_excursion(const HandModel& model, std::size_t muscle, const Posture& posture);
ExcursionResult path_excursion(const HandModel& model, const std::string& muscle,
                               const Posture& posture);

}  // namespace acb::landsmeer
