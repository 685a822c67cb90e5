#pragma once

#include "acb/kinematics.hpp"
#include "acb/model.hpp"
#include "acb/search.hpp"
#include "acb/statics.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace acb::protocols {

// ---------------------------------------------------------------------------
// Excursion table
// ---------------------------------------------------------------------------

struct Table3Row {
    std::string tendon;
    std::map<std::string, double> angles_deg;
    double computed{0.0};  // |excursion|, mm
    double calc{0.0};
    double measured{0.0};
    double delta_calc{0.0};      // relative
    double delta_measured{0.0};  // (measured − calc)/calc, informational
    bool pass{false};
};

struct Table3Report {
    std::vector<Table3Row> rows;
    double tolerance{0.02};
    bool pass{false};
};

Table3Report table3_check(const HandModel& model, double tolerance = 0.02);
nlohmann::json to_json(const Table3Report& r);

// ---------------------------------------------------------------------------
// Synergy scenarios
// ---------------------------------------------------------------------------

enum class Comparator { Greater, Within };

struct Predicate {
    std::vector<std::string> dofs;
    Comparator cmp{Comparator::Greater};
    double threshold_deg{0.0};
};

struct SynergyScenario {
    std::string name;
    std::map<std::string, double> activation;
    std::vector<Predicate> predicates;
};

std::string describe(const Predicate& p);

/// Built-in scenario table (claw, full_flexion, full_extension, beak).
const std::vector<SynergyScenario>& synergy_scenarios();
const SynergyScenario& synergy_scenario(const std::string& name);
nlohmann::json scenarios_json(const std::vector<SynergyScenario>& s);
std::vector<SynergyScenario> parse_scenarios(const nlohmann::json& doc);

struct PredicateResult {
    std::string description;
    std::vector<double> values_deg;
    double margin_deg{0.0};  // ≥ 0 iff satisfied
    bool pass{false};
};

struct SynergyResult {
    std::string name;
    ActivationPattern activation;
    statics::EquilibriumReport report;
    std::vector<PredicateResult> predicates;
    double margin_deg{0.0};
    bool pass{false};  // converged and every predicate holds
};

std::vector<PredicateResult> evaluate_predicates(const HandModel& model, const std::vector<Predicate>& preds,
                                                 const Posture& p);
SynergyResult run_scenario(const HandModel& model, const SynergyScenario& s, const ActivationPattern& a,
                           const statics::SolverOptions& options = {});
SynergyResult synergy_posture(const HandModel& model, const SynergyScenario& s,
                              const statics::SolverOptions& options = {});
SynergyResult synergy_posture(const HandModel& model, const std::string& name,
                              const statics::SolverOptions& options = {});
nlohmann::json to_json(const HandModel& model, const SynergyResult& r);
std::string to_csv(const HandModel& model, const SynergyResult& r);

struct AblationResult {
    std::string scenario;
    std::vector<std::string> zeroed;
    double base_ip_deg{0.0};     // PIP + DIP flexion with the full pattern
    double ablated_ip_deg{0.0};  // same with the zeroed muscles
    bool converged{false};
    bool degraded{false};        // ablated IP flexion exceeds the base
};

AblationResult ablation(const HandModel& model, const std::string& scenario,
                        const std::vector<std::string>& zeroed, const statics::SolverOptions& options = {});
/// LUM-zeroed beak and INT-zeroed full extension.
std::vector<AblationResult> standard_ablations(const HandModel& model, const statics::SolverOptions& options = {});
nlohmann::json to_json(const AblationResult& r);

// ---------------------------------------------------------------------------
// Fingertip trajectories
// ---------------------------------------------------------------------------

struct TrajectoryScenario {
    std::string name;
    Digit digit{Digit::Index};
    std::map<std::string, double> start;
    std::map<std::string, double> end;
    int steps{20};
    kin::Projection projection{kin::Projection::None};
};

const std::vector<TrajectoryScenario>& trajectory_scenarios();
const TrajectoryScenario& trajectory_scenario(const std::string& name);
kin::Trajectory run_trajectory(const HandModel& model, const TrajectoryScenario& s,
                               const statics::SolverOptions& options = {});

struct TrajectoryCheck {
    std::string name;
    std::string property;
    double value{0.0};  // property-specific measurement
    bool converged{false};
    bool pass{false};
};

/// Fingertip-to-MCP distance never increases over the index flexion ramp.
TrajectoryCheck check_index_flexion(const HandModel& model, const kin::Trajectory& t);
/// Best-fit plane of the thumb flexion path within `max_deg` of the palm.
TrajectoryCheck check_thumb_plane(const HandModel& model, const kin::Trajectory& t, double max_deg = 15.0);
/// Thumb pad crosses the radial coordinate of the resting index fingertip.
TrajectoryCheck check_thumb_circulation(const HandModel& model, const kin::Trajectory& t);
std::vector<TrajectoryCheck> trajectory_checks(const HandModel& model, const statics::SolverOptions& options = {});
nlohmann::json to_json(const TrajectoryCheck& c);

// ---------------------------------------------------------------------------
// Thumb opposition
// ---------------------------------------------------------------------------

enum class TargetKind { McpPad, Fingertip };

struct KapandjiStage {
    int id{0};
    std::string name;
    Digit digit{Digit::Index};
    TargetKind kind{TargetKind::McpPad};
    // Long-finger activation held fixed while the thumb searches.
    std::map<std::string, double> finger_activation;
    // Thumb-muscle bounds shared by the search and the sampling oracle.
    std::vector<kin::MuscleBound> bounds;
    double tolerance_mm{5.0};
};

const std::vector<KapandjiStage>& kapandji_stages();

struct StageTarget {
    Vec3 point;
    Posture posture;  // long fingers at equilibrium, thumb at rest
    bool converged{false};
};
StageTarget stage_target(const HandModel& model, const KapandjiStage& stage,
                         const statics::SolverOptions& options = {});

/// Thumb pad position for the given thumb activations on top of `base`.
Vec3 thumb_pad_for(const HandModel& model, const ActivationPattern& a, const Posture& base,
                   const statics::SolverOptions& options, Posture* out = nullptr, bool* converged = nullptr);

struct KapandjiOptions {
    search::PatternSearchOptions search{};
    statics::SolverOptions solver{};
    bool run_oracle{true};
    int oracle_samples{2000};
    std::uint64_t oracle_seed{2024};
};

struct KapandjiStageResult {
    int id{0};
    std::string name;
    Vec3 target;
    Vec3 thumb_pad;
    double distance_mm{0.0};
    bool reached{false};
    std::map<std::string, double> activation;
    Posture posture;
    int evaluations{0};
    bool oracle_run{false};
    double oracle_distance_mm{0.0};
    bool oracle_feasible{false};
    int oracle_excluded{0};
};

struct KapandjiReport {
    std::vector<KapandjiStageResult> stages;
    bool pass{false};        // every stage reached (and oracle-confirmed when run)
    bool consistent{true};   // no stage reached by the search but refuted by the oracle
};

KapandjiStageResult kapandji_stage(const HandModel& model, const KapandjiStage& stage,
                                   const KapandjiOptions& options = {});
KapandjiReport kapandji_test(const HandModel& model, const std::vector<KapandjiStage>& stages,
                             const KapandjiOptions& options = {}, int jobs = 1);
nlohmann::json to_json(const KapandjiReport& r);

// ---------------------------------------------------------------------------
// Grasp taxonomy
// ---------------------------------------------------------------------------

enum class GraspClass { Power, Intermediate, Precision };
enum class Opposition { Palm, Pad, Side };
enum class ThumbPosition { Abducted, Adducted };

const char* to_string(GraspClass c);
const char* to_string(Opposition o);
const char* to_string(ThumbPosition t);

struct ObjectPrimitive {
    enum class Kind { Sphere, Cylinder, Card } kind{Kind::Sphere};
    Vec3 centre{Vec3::Zero()};
    Vec3 axis{Vec3::UnitX()};  // cylinder axis or card normal
    double radius{0.0};        // sphere/cylinder radius
    double length{0.0};        // cylinder length or card side
    double thickness{0.0};     // card thickness

    /// Signed distance from p to the surface (negative inside) and outward normal.
    double sdf(const Vec3& p, Vec3* normal = nullptr) const;
};

const char* to_string(ObjectPrimitive::Kind k);

struct GraspPreset {
    int number{0};
    std::string name;
    GraspClass cls{GraspClass::Power};
    Opposition opposition{Opposition::Palm};
    ThumbPosition thumb{ThumbPosition::Abducted};
    std::string virtual_finger;  // digits opposing the thumb, e.g. "2-5"
    std::map<std::string, double> posture_deg;
    std::optional<ObjectPrimitive> object;
};

const std::vector<GraspPreset>& grasp_presets();
/// Case-insensitive lookup; throws DomainError for unknown names.
const GraspPreset& grasp_preset(const std::string& name);
Posture preset_posture(const HandModel& model, const GraspPreset& preset);

enum class ContactKind { Segment, Pad, Side, Palm };
const char* to_string(ContactKind k);

struct Contact {
    std::string element;
    ContactKind kind{ContactKind::Segment};
    Digit digit{Digit::Index};
    double gap_mm{0.0};
    Vec3 point;
    Vec3 normal;  // object outward normal at the nearest surface point
};

inline constexpr double kContactBand = 3.0;

/// Every candidate contact element with its gap to the object surface.
std::vector<Contact> contact_candidates(const HandModel& model, const Posture& p, const ObjectPrimitive& obj);

struct GraspReport {
    std::string name;
    GraspClass cls{GraspClass::Power};
    bool within_limits{false};
    bool has_object{false};
    std::vector<Contact> contacts;  // gap within ±kContactBand
    int segment_contacts{0};
    bool palm_contact{false};
    int pad_contacts{0};
    bool opposing_pads{false};
    int side_contacts{0};
    double max_penetration_mm{0.0};
    bool contact_pass{true};
    bool pass{false};
    std::string detail;
};

GraspReport grasp_check(const HandModel& model, const GraspPreset& preset);
GraspReport grasp_check(const HandModel& model, const std::string& name);
nlohmann::json to_json(const GraspReport& r);

}  // namespace acb::protocols
