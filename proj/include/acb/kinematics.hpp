#pragma once

#include "acb/model.hpp"
#include "acb/statics.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace acb::kin {

/// Bone frame in the hand frame (x radial, y distal, z palmar). Columns of
/// `rotation` are the bone's local x, y (along the shaft) and z (palmar).
struct Frame {
    Vec3 origin{Vec3::Zero()};
    Mat3 rotation{Mat3::Identity()};

    Vec3 x() const { return rotation.col(0); }
    Vec3 y() const { return rotation.col(1); }
    Vec3 z() const { return rotation.col(2); }
};

struct DigitPoints {
    Vec3 tip;        // distal end of the distal phalanx axis
    Vec3 pad;        // palmar pad point of the distal phalanx
    Vec3 pad_normal;
};

struct HandFrames {
    std::vector<Frame> bones;  // indexed like model.data().bones
    std::vector<Vec3> bone_ends;
    std::vector<DigitPoints> digits;  // indexed by Digit

    const DigitPoints& digit(Digit d) const { return digits[static_cast<std::size_t>(d)]; }
};

/// Pad distance proximal to the tip along the distal phalanx.
inline constexpr double kPadSetback = 3.0;
/// Palmar offset of an MCP pad from the joint centre.
inline constexpr double kMcpPadDepth = 10.0;

HandFrames forward_kinematics(const HandModel& model, const Posture& p);

/// Rotation produced by a joint at the given DoF values (local frame).
Mat3 joint_rotation(const Joint& joint, const std::vector<double>& values);

/// Joint centre of the digit's first joint distal of the metacarpal (MCP).
Vec3 mcp_centre(const HandModel& model, const HandFrames& f, Digit d);
/// Palmar pad over the MCP.
Vec3 mcp_pad(const HandModel& model, const HandFrames& f, Digit d);

struct Plane {
    Vec3 centroid;
    Vec3 normal;
    double max_deviation{0.0};  // mm
};
/// Least-squares plane through at least 3 points.
Plane fit_plane(const std::vector<Vec3>& points);

// --- Trajectories -----------------------------------------------------------

struct TrajectoryPoint {
    int step{0};
    Vec3 point;
    double residual{0.0};
    bool converged{true};
};

struct Trajectory {
    Digit digit{Digit::Index};
    std::vector<TrajectoryPoint> points;
    std::vector<Posture> postures;
    std::optional<int> first_unconverged;
};

/// Linear activation ramp start→end over `steps` equilibria, each warm-started
/// from the previous one. The fingertip of `digit` is recorded.
Trajectory fingertip_trajectory(const HandModel& model, Digit digit, const ActivationPattern& start,
                                const ActivationPattern& end, int steps,
                                const statics::SolverOptions& options = {});

enum class Projection { None, Sagittal, Palmar };

std::string trajectory_csv(const Trajectory& t, Projection projection = Projection::None);
nlohmann::json trajectory_json(const Trajectory& t);

// --- Workspace oracle -------------------------------------------------------

struct MuscleBound {
    std::string muscle;
    double lo{0.0};
    double hi{1.0};
};

struct WorkspaceCloud {
    Digit digit{Digit::Index};
    std::vector<Vec3> points;
    std::vector<ActivationPattern> activations;
    int excluded{0};  // non-converged samples
};

/// Draws n activation patterns uniformly within the bounds of the digit's
/// muscles (others from `baseline`), solves each from `initial` and records
/// the digit's pad. Deterministic in `seed`.
WorkspaceCloud workspace_sample(const HandModel& model, Digit digit, const std::vector<MuscleBound>& bounds,
                                int n, std::uint64_t seed, const ActivationPattern& baseline,
                                const Posture& initial, const statics::SolverOptions& options = {});
WorkspaceCloud workspace_sample(const HandModel& model, Digit digit, const std::vector<MuscleBound>& bounds,
                                int n, std::uint64_t seed);

nlohmann::json cloud_json(const WorkspaceCloud& c);

}  // namespace acb::kin
