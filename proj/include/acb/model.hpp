#pragma once

#include "acb/types.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace acb {

// ---------------------------------------------------------------------------
// Plain model data. This is what the model document maps onto; everything is
// stored in mm / rad / N. HandModel below is the validated, indexed form.
// ---------------------------------------------------------------------------

/// Parent-bone id of joints attached directly to the carpal block.
inline constexpr const char* kCarpal = "carpal";

/// Placement of a chain root (metacarpal) relative to the carpal block.
struct RootFrame {
    Vec3 origin{Vec3::Zero()};
    Vec3 y_axis{Vec3::UnitY()};  // along the bone, distal
    Vec3 z_axis{Vec3::UnitZ()};  // palmar / flexion direction

    bool operator==(const RootFrame&) const = default;
};

struct Bone {
    std::string id;
    std::string name;
    Digit digit{Digit::Index};
    double length{0.0};
    double radius{0.0};  // capsule radius used for contact checks
    std::optional<std::string> parent_joint;
    double axial_offset{0.0};
    std::optional<RootFrame> root;

    bool operator==(const Bone&) const = default;
};

enum class JointKind { Hinge1DoF, Universal2DoF, Saddle2DoF };

struct DofSpec {
    std::string name;  // "flex" or "abd"
    double axis_obliquity{0.0};
    double min{0.0};
    double max{0.0};
    double rest{0.0};
    double stiffness{0.0};
    double barrier_k{0.0};

    bool operator==(const DofSpec&) const = default;
};

struct Joint {
    std::string id;
    JointKind kind{JointKind::Hinge1DoF};
    std::string parent_bone;
    std::string child_bone;
    std::vector<DofSpec> dofs;
    double rotation_coupling{0.0};
    // Ad/abduction range shrinks linearly to zero at this flexion angle.
    std::optional<double> abd_lock_flexion;

    bool operator==(const Joint&) const = default;
};

enum class LandsmeerModel { I, II, III };

enum class GateChannel { Primary, Complement };

struct GateRef {
    std::string id;
    GateChannel channel{GateChannel::Primary};

    bool operator==(const GateRef&) const = default;
};

struct RoutingSegment {
    std::string joint;
    std::size_t dof_index{0};
    LandsmeerModel model{LandsmeerModel::I};
    double r{0.0};
    double y{0.0};
    double d{0.0};
    int side{+1};
    std::optional<GateRef> gate;

    bool operator==(const RoutingSegment&) const = default;
};

struct TendonPath {
    std::string muscle;
    std::vector<RoutingSegment> segments;
    std::string insertion;

    bool operator==(const TendonPath&) const = default;
};

enum class MuscleGroup {
    ExtrinsicFlexor,
    ExtrinsicExtensor,
    Interosseous,
    Lumbrical,
    ThenarMedial,
    ThenarLateral,
    Hypothenar
};

struct Muscle {
    std::string id;
    std::string name;
    MuscleGroup group{MuscleGroup::ExtrinsicFlexor};
    double max_tension{0.0};
    std::optional<std::string> slave_group;
    // Muscle whose tendon this one originates from (lumbricals on FDP).
    std::optional<std::string> origin_muscle;

    bool operator==(const Muscle&) const = default;
};

enum class GateKind {
    DeepSlipSlack,
    LateralBandSlide,
    IntHoodSwitch,
    LumIndependent,
    OrlCoupling,
    ThumbExpansion
};

struct Gate {
    std::string id;
    GateKind kind{GateKind::LumIndependent};
    Digit digit{Digit::Index};
    std::vector<std::string> inputs;  // DoF ids read by the gate
    // Angles stored in radians; keys depend on kind.
    std::map<std::string, double> params;

    bool operator==(const Gate&) const = default;
};

struct ModelData {
    std::string name{"acb-default"};
    std::vector<Bone> bones;
    std::vector<Joint> joints;
    std::vector<TendonPath> tendons;
    std::vector<Muscle> muscles;
    std::vector<Gate> gates;
    double lum_coupling{0.5};
    double barrier_width{deg_to_rad(3.0)};

    bool operator==(const ModelData&) const = default;
};

const char* to_string(JointKind k);
const char* to_string(LandsmeerModel m);
const char* to_string(MuscleGroup g);
const char* to_string(GateKind k);
const char* to_string(GateChannel c);

struct Violation {
    std::string element;
    std::string rule;
    std::string detail;
};

/// All invariant violations of `data`; empty iff the data is a valid model.
std::vector<Violation> validate(const ModelData& data);

// ---------------------------------------------------------------------------
// Compiled model
// ---------------------------------------------------------------------------

struct DofInfo {
    std::string id;  // "<joint>.<dof>"
    std::size_t joint{0};
    std::size_t local{0};
    Digit digit{Digit::Index};
};

struct CompiledSegment {
    std::size_t dof{0};
    LandsmeerModel model{LandsmeerModel::I};
    double r{0.0};
    double y{0.0};
    double d{0.0};
    int side{+1};
    int gate{-1};
    GateChannel channel{GateChannel::Primary};
};

struct CompiledGate {
    GateKind kind{GateKind::LumIndependent};
    std::vector<std::size_t> inputs;
    double on{0.0};
    double off{0.0};
    double floor{0.0};
    double zero_crossing{0.0};
    double half_width{0.0};
    double w_slide{0.0};
    double min_weight{0.0};
    double weight{1.0};
};

struct SlaveGroup {
    std::string id;
    std::vector<std::size_t> members;
};

/// Validated, immutable hand model with integer indices for the hot paths.
/// Construction throws ModelError listing every violation.
class HandModel {
public:
    explicit HandModel(ModelData data);

    const ModelData& data() const { return data_; }

    std::size_t dof_count() const { return dofs_.size(); }
    std::size_t muscle_count() const { return data_.muscles.size(); }
    const std::vector<DofInfo>& dofs() const { return dofs_; }
    const DofInfo& dof(std::size_t i) const { return dofs_[i]; }
    const DofSpec& dof_spec(std::size_t i) const;
    std::size_t dof_index(const std::string& id) const;
    std::optional<std::size_t> find_dof(const std::string& id) const;

    std::size_t muscle_index(const std::string& id) const;
    std::optional<std::size_t> find_muscle(const std::string& id) const;
    const Muscle& muscle(std::size_t i) const { return data_.muscles[i]; }
    Digit muscle_digit(std::size_t m) const { return muscle_digit_[m]; }

    std::size_t joint_index(const std::string& id) const;
    std::size_t bone_index(const std::string& id) const;
    std::size_t gate_index(const std::string& id) const;

    /// Tendon of muscle `m` (every muscle has exactly one).
    const TendonPath& tendon(std::size_t m) const { return data_.tendons[tendon_of_muscle_[m]]; }
    const std::vector<CompiledSegment>& segments(std::size_t m) const { return segments_[m]; }
    const std::vector<CompiledGate>& gates() const { return gates_; }

    const std::vector<std::size_t>& digit_dofs(Digit d) const {
        return digit_dofs_[static_cast<std::size_t>(d)];
    }
    const std::vector<std::size_t>& digit_muscles(Digit d) const {
        return digit_muscles_[static_cast<std::size_t>(d)];
    }
    const std::vector<SlaveGroup>& slave_groups() const { return slave_groups_; }

    /// Per-muscle index of the muscle it originates from, or -1.
    int origin_of(std::size_t m) const { return origin_[m]; }

    /// Ordered bones of a digit chain, proximal to distal.
    const std::vector<std::size_t>& chain(Digit d) const {
        return chains_[static_cast<std::size_t>(d)];
    }

    Posture rest_posture() const;
    ActivationPattern zero_activation() const { return ActivationPattern(muscle_count()); }

    /// Effective [min, max] of a DoF at the given posture; MCP ad/abduction
    /// narrows with flexion when the joint has a collateral lock angle.
    std::pair<double, double> effective_range(std::size_t dof, const Posture& p) const;
    bool within_ranges(const Posture& p, double tol = 1e-12) const;

    /// Posture from a DoF-id → degrees map; unspecified DoFs at rest.
    Posture posture_from_degrees(const std::map<std::string, double>& deg) const;
    /// Activation from a muscle-id → value map; unspecified muscles at zero.
    ActivationPattern activation_from(const std::map<std::string, double>& values) const;

private:
    ModelData data_;
    std::vector<DofInfo> dofs_;
    std::unordered_map<std::string, std::size_t> dof_ids_;
    std::unordered_map<std::string, std::size_t> muscle_ids_;
    std::unordered_map<std::string, std::size_t> joint_ids_;
    std::unordered_map<std::string, std::size_t> bone_ids_;
    std::unordered_map<std::string, std::size_t> gate_ids_;
    std::vector<std::size_t> tendon_of_muscle_;
    std::vector<Digit> muscle_digit_;
    std::vector<std::vector<CompiledSegment>> segments_;
    std::vector<CompiledGate> gates_;
    std::vector<std::vector<std::size_t>> digit_dofs_;
    std::vector<std::vector<std::size_t>> digit_muscles_;
    std::vector<std::vector<std::size_t>> chains_;
    std::vector<SlaveGroup> slave_groups_;
    std::vector<int> origin_;
    // Per DoF: index of the flexion DoF of the same joint for collateral lock, or -1.
    std::vector<int> lock_partner_;
};

/// Slave-group projection: every member of a group receives the group mean.
ActivationPattern project_slave_groups(const HandModel& model, const ActivationPattern& a);

// ---------------------------------------------------------------------------
// Document I/O
// ---------------------------------------------------------------------------

inline constexpr const char* kSchemaId = "acb-model/1";

/// Parses a model document (degrees at the boundary). Throws ModelError with
/// a JSON-pointer style path for schema problems and the violation list for
/// invariant problems.
HandModel load_model(const nlohmann::json& doc);
HandModel load_model_file(const std::string& path);
ModelData parse_model_data(const nlohmann::json& doc);
nlohmann::json serialize(const ModelData& data);

/// Field-by-field equality with a tolerance on floating point values.
bool approx_equal(const ModelData& a, const ModelData& b, double tol = 1e-9);

// ---------------------------------------------------------------------------
// Default parameter set
// ---------------------------------------------------------------------------

/// Geometry before the sheath fit: d values at their unscaled ratios.
ModelData default_model_data_unfitted();
ModelData default_model_data();
const HandModel& default_model();

// ---------------------------------------------------------------------------
// Sheath fitting
// ---------------------------------------------------------------------------

struct ExcursionTarget {
    std::string tendon;  // muscle id
    Posture posture;
    double excursion{0.0};  // mm, magnitude
};

struct TendonFit {
    std::string tendon;
    double scale{1.0};
    std::vector<double> fitted_d;  // per model-III segment, proximal to distal
    std::vector<double> residuals;  // per target of this tendon, mm (predicted - target)
    std::vector<double> relative_residuals;
};

struct FitResult {
    std::vector<TendonFit> tendons;
    ModelData fitted;
};

/// Least-squares scale of every targeted tendon's model-III d values (y and
/// the d ratios stay fixed). One scale per tendon.
FitResult fit_sheath_parameters(const HandModel& model, const std::vector<ExcursionTarget>& targets);

/// The excursion targets from the validation table, index finger.
std::vector<ExcursionTarget> table3_targets(const HandModel& model);

}  // namespace acb
