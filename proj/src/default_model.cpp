#include "acb/model.hpp"

#include <cmath>

namespace acb {

namespace {

// Sheath distance at the MCP before fitting; PIP/DIP follow the taper ratios.
constexpr double kNominalSheathD = 7.0;
constexpr double kPipDRatio = 0.8;
constexpr double kDipDRatio = 0.6;

// Sheath distances at the MCP after fitting the flexor excursions
// (see fit_sheath_parameters and the shipped data/default_model.json).
constexpr double kFittedFdpD = 6.9643816;
constexpr double kFittedFdsD = 6.7438397;

// Model I radius of the EDC over the MCP: 14.7 mm over 109.9 deg.
constexpr double kEdcMcpRadius = 7.664;

struct LongFinger {
    Digit digit;
    Vec3 base;
    double yaw_deg;  // metacarpal direction, positive toward radial
    double mc, pp, mp, dp;
    double obliquity_deg;
};

constexpr double kBarrierK = 2000.0;

DofSpec dof(const char* name, double lo_deg, double hi_deg, double k, double obliquity_deg = 0.0) {
    DofSpec d;
    d.name = name;
    d.min = deg_to_rad(lo_deg);
    d.max = deg_to_rad(hi_deg);
    d.rest = 0.0;
    d.stiffness = k;
    d.barrier_k = kBarrierK;
    d.axis_obliquity = deg_to_rad(obliquity_deg);
    return d;
}

RoutingSegment seg1(const std::string& joint, std::size_t dof_index, double r, int side,
                    std::optional<GateRef> gate = std::nullopt) {
    RoutingSegment s;
    s.joint = joint;
    s.dof_index = dof_index;
    s.model = LandsmeerModel::I;
    s.r = r;
    s.side = side;
    s.gate = std::move(gate);
    return s;
}

RoutingSegment seg3(const std::string& joint, std::size_t dof_index, double y, double d) {
    RoutingSegment s;
    s.joint = joint;
    s.dof_index = dof_index;
    s.model = LandsmeerModel::III;
    s.y = y;
    s.d = d;
    s.side = +1;
    return s;
}

GateRef gate(const std::string& id, GateChannel channel = GateChannel::Primary) { return {id, channel}; }

Muscle muscle(std::string id, std::string name, MuscleGroup group, double tension,
              std::optional<std::string> slave = std::nullopt) {
    Muscle m;
    m.id = std::move(id);
    m.name = std::move(name);
    m.group = group;
    m.max_tension = tension;
    m.slave_group = std::move(slave);
    return m;
}

Bone bone(const std::string& id, const std::string& name, Digit digit, double length, double radius,
          std::optional<std::string> parent) {
    Bone b;
    b.id = id;
    b.name = name;
    b.digit = digit;
    b.length = length;
    b.radius = radius;
    b.parent_joint = std::move(parent);
    return b;
}

void add_long_finger(ModelData& m, const LongFinger& f) {
    const std::string n = to_string(f.digit);
    const double yaw = deg_to_rad(f.yaw_deg);

    Bone mc = bone(n + ".MC", n + " metacarpal", f.digit, f.mc, 8.0, std::nullopt);
    mc.root = RootFrame{f.base, Vec3(std::sin(yaw), std::cos(yaw), 0.0), Vec3::UnitZ()};
    m.bones.push_back(mc);
    m.bones.push_back(bone(n + ".PP", n + " proximal phalanx", f.digit, f.pp, 7.5, n + ".MCP"));
    m.bones.push_back(bone(n + ".MP", n + " middle phalanx", f.digit, f.mp, 6.5, n + ".PIP"));
    m.bones.push_back(bone(n + ".DP", n + " distal phalanx", f.digit, f.dp, 6.0, n + ".DIP"));

    Joint mcp;
    mcp.id = n + ".MCP";
    mcp.kind = JointKind::Universal2DoF;
    mcp.parent_bone = n + ".MC";
    mcp.child_bone = n + ".PP";
    mcp.dofs = {dof("flex", -20.0, 110.0, 100.0, f.obliquity_deg), dof("abd", -20.0, 20.0, 80.0)};
    mcp.abd_lock_flexion = deg_to_rad(80.0);
    m.joints.push_back(mcp);

    Joint pip;
    pip.id = n + ".PIP";
    pip.kind = JointKind::Hinge1DoF;
    pip.parent_bone = n + ".PP";
    pip.child_bone = n + ".MP";
    pip.dofs = {dof("flex", -5.0, 110.0, 40.0, f.obliquity_deg)};
    m.joints.push_back(pip);

    Joint dip;
    dip.id = n + ".DIP";
    dip.kind = JointKind::Hinge1DoF;
    dip.parent_bone = n + ".MP";
    dip.child_bone = n + ".DP";
    dip.dofs = {dof("flex", -10.0, 90.0, 30.0, f.obliquity_deg)};
    m.joints.push_back(dip);

    const std::string MCP = n + ".MCP", PIP = n + ".PIP", DIP = n + ".DIP";
    const bool mid_ring = f.digit == Digit::Middle || f.digit == Digit::Ring;
    const bool ring_little = f.digit == Digit::Ring || f.digit == Digit::Little;

    m.muscles.push_back(muscle("FDP_" + n, "flexor digitorum profundus (" + n + ")",
                               MuscleGroup::ExtrinsicFlexor, 40.0));
    m.muscles.push_back(muscle("FDS_" + n, "flexor digitorum superficialis (" + n + ")",
                               MuscleGroup::ExtrinsicFlexor, 35.0,
                               ring_little ? std::optional<std::string>("FDS_ring_little") : std::nullopt));
    m.muscles.push_back(muscle("EDC_" + n, "extensor digitorum communis (" + n + ")",
                               MuscleGroup::ExtrinsicExtensor, 30.0));
    m.muscles.push_back(muscle("INT_radial_" + n, "radial interosseous (" + n + ")", MuscleGroup::Interosseous,
                               15.0, mid_ring ? std::optional<std::string>("INT_radial_middle_ring")
                                              : std::nullopt));
    // The ulnar-side intrinsic of the little finger stands for the merged
    // hypothenar group.
    const bool hypothenar = f.digit == Digit::Little;
    m.muscles.push_back(muscle("INT_ulnar_" + n,
                               hypothenar ? "hypothenar group (abductor/flexor digiti minimi)"
                                          : "ulnar interosseous (" + n + ")",
                               hypothenar ? MuscleGroup::Hypothenar : MuscleGroup::Interosseous, 15.0,
                               mid_ring ? std::optional<std::string>("INT_ulnar_middle_ring") : std::nullopt));
    Muscle lum = muscle("LUM_" + n, "lumbrical (" + n + ")", MuscleGroup::Lumbrical, 6.0);
    lum.origin_muscle = "FDP_" + n;
    m.muscles.push_back(lum);

    m.tendons.push_back({"FDP_" + n,
                         {seg3(MCP, 0, 7.0, kNominalSheathD), seg3(PIP, 0, 6.0, kPipDRatio * kNominalSheathD),
                          seg3(DIP, 0, 5.0, kDipDRatio * kNominalSheathD)},
                         n + ".DP"});
    m.tendons.push_back({"FDS_" + n,
                         {seg3(MCP, 0, 7.0, kNominalSheathD), seg3(PIP, 0, 6.0, kPipDRatio * kNominalSheathD)},
                         n + ".MP"});
    m.tendons.push_back({"EDC_" + n,
                         {seg1(MCP, 0, kEdcMcpRadius, -1, gate(n + ".deep_slip")),
                          seg1(PIP, 0, 1.0, -1),
                          seg1(PIP, 0, 1.5, -1, gate(n + ".lateral_band")),
                          seg1(DIP, 0, 2.5, -1, gate(n + ".orl"))},
                         n + ".DP"});
    for (int side : {+1, -1}) {
        const std::string id = (side > 0 ? "INT_radial_" : "INT_ulnar_") + n;
        m.tendons.push_back({id,
                             {seg1(MCP, 1, 5.0, side),
                              seg1(MCP, 0, 2.0, +1),
                              seg1(MCP, 0, 6.0, +1, gate(n + ".int_hood", GateChannel::Complement)),
                              seg1(PIP, 0, 3.5, -1, gate(n + ".int_hood")),
                              seg1(DIP, 0, 2.0, -1, gate(n + ".int_hood"))},
                             n + ".DP"});
    }
    m.tendons.push_back({"LUM_" + n,
                         {seg1(MCP, 0, 5.0, +1, gate(n + ".lum")), seg1(PIP, 0, 3.0, -1, gate(n + ".lum")),
                          seg1(DIP, 0, 2.0, -1, gate(n + ".lum"))},
                         n + ".DP"});

    const std::string pip_id = PIP + ".flex", dip_id = DIP + ".flex", mcp_id = MCP + ".flex";
    m.gates.push_back({n + ".deep_slip", GateKind::DeepSlipSlack, f.digit, {pip_id, dip_id},
                       {{"on", deg_to_rad(40.0)}, {"off", deg_to_rad(90.0)}, {"floor", 0.05}}});
    m.gates.push_back({n + ".lateral_band", GateKind::LateralBandSlide, f.digit, {pip_id},
                       {{"zero_crossing", deg_to_rad(80.0)}, {"half_width", deg_to_rad(40.0)}, {"w_slide", 0.4}}});
    m.gates.push_back({n + ".int_hood", GateKind::IntHoodSwitch, f.digit, {mcp_id},
                       {{"on", deg_to_rad(10.0)}, {"off", deg_to_rad(60.0)}}});
    m.gates.push_back({n + ".lum", GateKind::LumIndependent, f.digit, {}, {}});
    m.gates.push_back({n + ".orl", GateKind::OrlCoupling, f.digit, {pip_id},
                       {{"on", 0.0}, {"off", deg_to_rad(60.0)}, {"min_weight", 0.5}}});
}

void add_thumb(ModelData& m) {
    const Digit t = Digit::Thumb;
    const double a = deg_to_rad(40.0);

    Bone mc = bone("thumb.MC", "thumb metacarpal", t, 46.0, 9.0, "thumb.TMC");
    // Thumb metacarpal lies radial-distal, its flexion direction points ulnar
    // within the palmar plane.
    mc.root = RootFrame{Vec3(28.0, 12.0, 12.0), Vec3(std::sin(a), std::cos(a), 0.0),
                        Vec3(-std::cos(a), std::sin(a), 0.0)};
    m.bones.push_back(mc);
    m.bones.push_back(bone("thumb.PP", "thumb proximal phalanx", t, 32.0, 8.0, "thumb.MCP"));
    m.bones.push_back(bone("thumb.DP", "thumb distal phalanx", t, 25.0, 7.0, "thumb.IP"));

    Joint tmc;
    tmc.id = "thumb.TMC";
    tmc.kind = JointKind::Saddle2DoF;
    tmc.parent_bone = "carpal";
    tmc.child_bone = "thumb.MC";
    tmc.dofs = {dof("flex", -20.0, 70.0, 120.0), dof("abd", -15.0, 70.0, 120.0)};
    tmc.rotation_coupling = 0.25;
    m.joints.push_back(tmc);

    Joint mcp;
    mcp.id = "thumb.MCP";
    mcp.kind = JointKind::Universal2DoF;
    mcp.parent_bone = "thumb.MC";
    mcp.child_bone = "thumb.PP";
    mcp.dofs = {dof("flex", -10.0, 75.0, 60.0), dof("abd", -15.0, 15.0, 60.0)};
    m.joints.push_back(mcp);

    Joint ip;
    ip.id = "thumb.IP";
    ip.kind = JointKind::Hinge1DoF;
    ip.parent_bone = "thumb.PP";
    ip.child_bone = "thumb.DP";
    ip.dofs = {dof("flex", -15.0, 85.0, 40.0)};
    ip.rotation_coupling = 0.1;
    m.joints.push_back(ip);

    using G = MuscleGroup;
    m.muscles.push_back(muscle("FPL", "flexor pollicis longus", G::ExtrinsicFlexor, 40.0));
    m.muscles.push_back(muscle("APL", "abductor pollicis longus", G::ExtrinsicExtensor, 25.0));
    m.muscles.push_back(muscle("EPB", "extensor pollicis brevis", G::ExtrinsicExtensor, 15.0));
    m.muscles.push_back(muscle("EPL", "extensor pollicis longus", G::ExtrinsicExtensor, 20.0));
    m.muscles.push_back(muscle("AP_proximal", "adductor pollicis, proximal head", G::ThenarMedial, 20.0));
    m.muscles.push_back(muscle("AP_distal", "adductor pollicis, distal head", G::ThenarMedial, 20.0));
    m.muscles.push_back(muscle("AI1", "first anterior interosseous", G::ThenarMedial, 8.0));
    m.muscles.push_back(muscle("FPB", "flexor pollicis brevis", G::ThenarLateral, 15.0));
    m.muscles.push_back(muscle("APB", "abductor pollicis brevis", G::ThenarLateral, 15.0));
    m.muscles.push_back(muscle("OP", "opponens pollicis", G::ThenarLateral, 25.0));

    const std::string TMC = "thumb.TMC", MCP = "thumb.MCP", IP = "thumb.IP";
    const auto expansion = gate("thumb.expansion");
    m.tendons.push_back({"FPL", {seg1(TMC, 0, 8.0, +1), seg3(MCP, 0, 6.0, 6.0), seg3(IP, 0, 5.0, 5.0)}, "thumb.DP"});
    m.tendons.push_back({"APL", {seg1(TMC, 0, 6.0, -1), seg1(TMC, 1, 7.0, +1)}, "thumb.MC"});
    m.tendons.push_back({"EPB", {seg1(MCP, 0, 6.0, -1)}, "thumb.PP"});
    m.tendons.push_back({"EPL", {seg1(IP, 0, 4.0, -1)}, "thumb.DP"});
    m.tendons.push_back({"AP_proximal", {seg1(TMC, 1, 9.0, -1), seg1(TMC, 0, 6.0, +1)}, "thumb.PP"});
    m.tendons.push_back(
        {"AP_distal", {seg1(TMC, 1, 7.0, -1), seg1(MCP, 0, 4.0, +1), seg1(MCP, 1, 3.0, -1)}, "thumb.PP"});
    m.tendons.push_back(
        {"AI1", {seg1(TMC, 1, 5.0, -1), seg1(MCP, 0, 3.0, +1, expansion), seg1(IP, 0, 3.0, -1, expansion)},
         "thumb.DP"});
    m.tendons.push_back({"APB",
                         {seg1(TMC, 1, 8.0, +1), seg1(MCP, 0, 4.0, +1, expansion), seg1(MCP, 1, 3.0, +1),
                          seg1(IP, 0, 3.0, -1, expansion)},
                         "thumb.DP"});
    m.tendons.push_back({"FPB", {seg1(TMC, 0, 7.0, +1), seg1(MCP, 0, 6.0, +1)}, "thumb.PP"});
    m.tendons.push_back({"OP", {seg1(TMC, 0, 10.0, +1), seg1(TMC, 1, 10.0, +1)}, "thumb.MC"});

    m.gates.push_back({"thumb.expansion", GateKind::ThumbExpansion, t, {}, {{"weight", 1.0}}});
}

void set_sheath_scale(ModelData& m, const std::string& muscle_prefix, double d_mcp) {
    for (auto& t : m.tendons) {
        if (t.muscle.rfind(muscle_prefix, 0) != 0) continue;
        for (auto& s : t.segments) {
            if (s.model != LandsmeerModel::III) continue;
            const auto dot = s.joint.rfind('.');
            const auto j = s.joint.substr(dot + 1);
            const double ratio = j == "MCP" ? 1.0 : j == "PIP" ? kPipDRatio : kDipDRatio;
            s.d = ratio * d_mcp;
        }
    }
}

}  // namespace

ModelData default_model_data_unfitted() {
    ModelData m;
    m.name = "acb-default";
    m.lum_coupling = 0.5;
    m.barrier_width = deg_to_rad(3.0);

    add_thumb(m);
    const LongFinger fingers[] = {
        {Digit::Index, Vec3(16.0, 0.0, 0.0), 8.0, 68.0, 40.0, 23.0, 18.0, 0.0},
        {Digit::Middle, Vec3(3.0, 0.0, 0.0), 2.0, 65.0, 45.0, 27.0, 19.0, 3.0},
        {Digit::Ring, Vec3(-9.0, 0.0, 0.0), -5.0, 58.0, 42.0, 26.0, 19.0, 6.0},
        {Digit::Little, Vec3(-19.0, 0.0, 0.0), -12.0, 53.0, 33.0, 19.0, 17.0, 9.0},
    };
    for (const auto& f : fingers) add_long_finger(m, f);
    return m;
}

ModelData default_model_data() {
    ModelData m = default_model_data_unfitted();
    set_sheath_scale(m, "FDP_", kFittedFdpD);
    set_sheath_scale(m, "FDS_", kFittedFdsD);
    return m;
}

const HandModel& default_model() {
    static const HandModel model(default_model_data());
    return model;
}

}  // namespace acb
