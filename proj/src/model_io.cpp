#include "acb/model.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

namespace acb {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw ModelError("schema violation at " + (path.empty() ? std::string("/") : path) + ": " + msg);
}

const json& field(const json& obj, const std::string& path, const char* key) {
    if (!obj.is_object()) fail(path, "expected object");
    auto it = obj.find(key);
    if (it == obj.end()) fail(path + "/" + key, "required field missing");
    return *it;
}

double number(const json& obj, const std::string& path, const char* key) {
    const auto& v = field(obj, path, key);
    if (!v.is_number()) fail(path + "/" + key, "expected number");
    return v.get<double>();
}

double number_or(const json& obj, const std::string& path, const char* key, double def) {
    if (!obj.contains(key)) return def;
    return number(obj, path, key);
}

std::string text(const json& obj, const std::string& path, const char* key) {
    const auto& v = field(obj, path, key);
    if (!v.is_string()) fail(path + "/" + key, "expected string");
    return v.get<std::string>();
}

std::optional<std::string> optional_text(const json& obj, const std::string& path, const char* key) {
    if (!obj.contains(key) || obj.at(key).is_null()) return std::nullopt;
    return text(obj, path, key);
}

const json& array(const json& obj, const std::string& path, const char* key) {
    const auto& v = field(obj, path, key);
    if (!v.is_array()) fail(path + "/" + key, "expected array");
    return v;
}

Vec3 vec3(const json& obj, const std::string& path, const char* key) {
    const auto& v = array(obj, path, key);
    if (v.size() != 3) fail(path + "/" + key, "expected 3 numbers");
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number()) fail(path + "/" + key + "/" + std::to_string(i), "expected number");
        out[i] = v[i].get<double>();
    }
    return out;
}

template <class Enum, std::size_t N>
Enum enum_field(const json& obj, const std::string& path, const char* key,
                const std::array<Enum, N>& values) {
    const auto s = text(obj, path, key);
    for (auto e : values)
        if (s == to_string(e)) return e;
    fail(path + "/" + key, "unknown value '" + s + "'");
}

constexpr std::array kJointKinds{JointKind::Hinge1DoF, JointKind::Universal2DoF, JointKind::Saddle2DoF};
constexpr std::array kModels{LandsmeerModel::I, LandsmeerModel::II, LandsmeerModel::III};
constexpr std::array kGroups{MuscleGroup::ExtrinsicFlexor, MuscleGroup::ExtrinsicExtensor,
                             MuscleGroup::Interosseous,    MuscleGroup::Lumbrical,
                             MuscleGroup::ThenarMedial,    MuscleGroup::ThenarLateral,
                             MuscleGroup::Hypothenar};
constexpr std::array kGateKinds{GateKind::DeepSlipSlack,  GateKind::LateralBandSlide,
                                GateKind::IntHoodSwitch,  GateKind::LumIndependent,
                                GateKind::OrlCoupling,    GateKind::ThumbExpansion};
constexpr std::array kChannels{GateChannel::Primary, GateChannel::Complement};

// Gate parameters that are angles (degrees in documents).
bool is_angle_param(const std::string& key) {
    return key == "on" || key == "off" || key == "zero_crossing" || key == "half_width";
}

std::string angle_key(const std::string& key) { return key + "_deg"; }

}  // namespace

ModelData parse_model_data(const json& doc) {
    if (!doc.is_object()) fail("", "model document must be an object");
    const auto schema = text(doc, "", "schema");
    if (schema != kSchemaId) fail("/schema", "expected '" + std::string(kSchemaId) + "', got '" + schema + "'");

    ModelData m;
    if (doc.contains("name")) m.name = text(doc, "", "name");
    m.lum_coupling = number(doc, "", "lum_coupling");
    m.barrier_width = deg_to_rad(number_or(doc, "", "barrier_width_deg", 3.0));

    const auto& bones = array(doc, "", "bones");
    for (std::size_t i = 0; i < bones.size(); ++i) {
        const std::string p = "/bones/" + std::to_string(i);
        const auto& b = bones[i];
        Bone bone;
        bone.id = text(b, p, "id");
        bone.name = text(b, p, "name");
        try {
            bone.digit = digit_from_string(text(b, p, "digit"));
        } catch (const ModelError&) {
            fail(p + "/digit", "unknown digit");
        }
        bone.length = number(b, p, "length_mm");
        bone.radius = number(b, p, "radius_mm");
        bone.parent_joint = optional_text(b, p, "parent_joint");
        bone.axial_offset = deg_to_rad(number_or(b, p, "axial_offset_deg", 0.0));
        if (b.contains("root_frame") && !b.at("root_frame").is_null()) {
            const auto& r = b.at("root_frame");
            RootFrame rf;
            rf.origin = vec3(r, p + "/root_frame", "origin_mm");
            rf.y_axis = vec3(r, p + "/root_frame", "y_axis");
            rf.z_axis = vec3(r, p + "/root_frame", "z_axis");
            bone.root = rf;
        }
        m.bones.push_back(std::move(bone));
    }

    const auto& joints = array(doc, "", "joints");
    for (std::size_t i = 0; i < joints.size(); ++i) {
        const std::string p = "/joints/" + std::to_string(i);
        const auto& j = joints[i];
        Joint joint;
        joint.id = text(j, p, "id");
        joint.kind = enum_field(j, p, "kind", kJointKinds);
        joint.parent_bone = text(j, p, "parent_bone");
        joint.child_bone = text(j, p, "child_bone");
        joint.rotation_coupling = number_or(j, p, "rotation_coupling", 0.0);
        if (j.contains("abd_lock_flexion_deg") && !j.at("abd_lock_flexion_deg").is_null()) {
            joint.abd_lock_flexion = deg_to_rad(number(j, p, "abd_lock_flexion_deg"));
        }
        const auto& dofs = array(j, p, "dofs");
        for (std::size_t k = 0; k < dofs.size(); ++k) {
            const std::string q = p + "/dofs/" + std::to_string(k);
            const auto& d = dofs[k];
            DofSpec spec;
            spec.name = text(d, q, "name");
            spec.axis_obliquity = deg_to_rad(number_or(d, q, "axis_obliquity_deg", 0.0));
            const auto& range = array(d, q, "range_deg");
            if (range.size() != 2 || !range[0].is_number() || !range[1].is_number()) {
                fail(q + "/range_deg", "expected [min, max]");
            }
            spec.min = deg_to_rad(range[0].get<double>());
            spec.max = deg_to_rad(range[1].get<double>());
            spec.rest = deg_to_rad(number_or(d, q, "rest_deg", 0.0));
            spec.stiffness = number(d, q, "stiffness_nmm_per_rad");
            spec.barrier_k = number(d, q, "barrier_k_nmm_per_rad");
            joint.dofs.push_back(std::move(spec));
        }
        m.joints.push_back(std::move(joint));
    }

    const auto& muscles = array(doc, "", "muscles");
    for (std::size_t i = 0; i < muscles.size(); ++i) {
        const std::string p = "/muscles/" + std::to_string(i);
        const auto& mu = muscles[i];
        Muscle muscle;
        muscle.id = text(mu, p, "id");
        muscle.name = text(mu, p, "name");
        muscle.group = enum_field(mu, p, "group", kGroups);
        muscle.max_tension = number(mu, p, "max_tension_n");
        muscle.slave_group = optional_text(mu, p, "slave_group");
        muscle.origin_muscle = optional_text(mu, p, "origin_muscle");
        m.muscles.push_back(std::move(muscle));
    }

    const auto& tendons = array(doc, "", "tendons");
    for (std::size_t i = 0; i < tendons.size(); ++i) {
        const std::string p = "/tendons/" + std::to_string(i);
        const auto& t = tendons[i];
        TendonPath tendon;
        tendon.muscle = text(t, p, "muscle");
        tendon.insertion = text(t, p, "insertion");
        const auto& segs = array(t, p, "segments");
        for (std::size_t k = 0; k < segs.size(); ++k) {
            const std::string q = p + "/segments/" + std::to_string(k);
            const auto& s = segs[k];
            RoutingSegment seg;
            seg.joint = text(s, q, "joint");
            const auto& dof = field(s, q, "dof");
            if (!dof.is_number_unsigned()) fail(q + "/dof", "expected non-negative integer");
            seg.dof_index = dof.get<std::size_t>();
            seg.model = enum_field(s, q, "model", kModels);
            if (seg.model == LandsmeerModel::III) {
                seg.y = number(s, q, "y_mm");
                seg.d = number(s, q, "d_mm");
            } else {
                seg.r = number(s, q, "r_mm");
            }
            const auto& side = field(s, q, "side");
            if (!side.is_number_integer()) fail(q + "/side", "expected +1 or -1");
            seg.side = side.get<int>();
            if (seg.side != 1 && seg.side != -1) fail(q + "/side", "expected +1 or -1");
            if (s.contains("gate") && !s.at("gate").is_null()) {
                const auto& g = s.at("gate");
                GateRef ref;
                ref.id = text(g, q + "/gate", "id");
                ref.channel = g.contains("channel") ? enum_field(g, q + "/gate", "channel", kChannels)
                                                    : GateChannel::Primary;
                seg.gate = ref;
            }
            tendon.segments.push_back(std::move(seg));
        }
        m.tendons.push_back(std::move(tendon));
    }

    const auto& gates = array(doc, "", "gates");
    for (std::size_t i = 0; i < gates.size(); ++i) {
        const std::string p = "/gates/" + std::to_string(i);
        const auto& g = gates[i];
        Gate gate;
        gate.id = text(g, p, "id");
        gate.kind = enum_field(g, p, "kind", kGateKinds);
        try {
            gate.digit = digit_from_string(text(g, p, "digit"));
        } catch (const ModelError&) {
            fail(p + "/digit", "unknown digit");
        }
        for (std::size_t k = 0; k < array(g, p, "inputs").size(); ++k) {
            const auto& in = g.at("inputs")[k];
            if (!in.is_string()) fail(p + "/inputs/" + std::to_string(k), "expected string");
            gate.inputs.push_back(in.get<std::string>());
        }
        if (g.contains("params")) {
            const auto& params = g.at("params");
            if (!params.is_object()) fail(p + "/params", "expected object");
            for (auto it = params.begin(); it != params.end(); ++it) {
                if (!it.value().is_number()) fail(p + "/params/" + it.key(), "expected number");
                std::string key = it.key();
                double v = it.value().get<double>();
                if (key.size() > 4 && key.ends_with("_deg")) {
                    key = key.substr(0, key.size() - 4);
                    v = deg_to_rad(v);
                }
                gate.params[key] = v;
            }
        }
        m.gates.push_back(std::move(gate));
    }
    return m;
}

HandModel load_model(const json& doc) { return HandModel(parse_model_data(doc)); }

HandModel load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open model document '" + path + "'");
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ModelError("model document '" + path + "' is not valid JSON: " + e.what());
    }
    return load_model(doc);
}

namespace {

// Degrees on the wire, trimmed of radian round-trip noise.
double wire_deg(double rad) { return std::round(rad_to_deg(rad) * 1e9) / 1e9; }

}  // namespace

json serialize(const ModelData& m) {
    json doc;
    doc["schema"] = kSchemaId;
    doc["name"] = m.name;
    doc["lum_coupling"] = m.lum_coupling;
    doc["barrier_width_deg"] = wire_deg(m.barrier_width);

    auto vec = [](const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); };

    json bones = json::array();
    for (const auto& b : m.bones) {
        json jb{{"id", b.id},
                {"name", b.name},
                {"digit", to_string(b.digit)},
                {"length_mm", b.length},
                {"radius_mm", b.radius},
                {"parent_joint", b.parent_joint ? json(*b.parent_joint) : json(nullptr)},
                {"axial_offset_deg", wire_deg(b.axial_offset)}};
        if (b.root) {
            jb["root_frame"] = {{"origin_mm", vec(b.root->origin)},
                                {"y_axis", vec(b.root->y_axis)},
                                {"z_axis", vec(b.root->z_axis)}};
        }
        bones.push_back(std::move(jb));
    }
    doc["bones"] = std::move(bones);

    json joints = json::array();
    for (const auto& j : m.joints) {
        json dofs = json::array();
        for (const auto& d : j.dofs) {
            dofs.push_back({{"name", d.name},
                            {"axis_obliquity_deg", wire_deg(d.axis_obliquity)},
                            {"range_deg", json::array({wire_deg(d.min), wire_deg(d.max)})},
                            {"rest_deg", wire_deg(d.rest)},
                            {"stiffness_nmm_per_rad", d.stiffness},
                            {"barrier_k_nmm_per_rad", d.barrier_k}});
        }
        json jj{{"id", j.id},
                {"kind", to_string(j.kind)},
                {"parent_bone", j.parent_bone},
                {"child_bone", j.child_bone},
                {"rotation_coupling", j.rotation_coupling},
                {"dofs", std::move(dofs)}};
        if (j.abd_lock_flexion) jj["abd_lock_flexion_deg"] = wire_deg(*j.abd_lock_flexion);
        joints.push_back(std::move(jj));
    }
    doc["joints"] = std::move(joints);

    json muscles = json::array();
    for (const auto& mu : m.muscles) {
        json jm{{"id", mu.id},
                {"name", mu.name},
                {"group", to_string(mu.group)},
                {"max_tension_n", mu.max_tension},
                {"slave_group", mu.slave_group ? json(*mu.slave_group) : json(nullptr)}};
        if (mu.origin_muscle) jm["origin_muscle"] = *mu.origin_muscle;
        muscles.push_back(std::move(jm));
    }
    doc["muscles"] = std::move(muscles);

    json tendons = json::array();
    for (const auto& t : m.tendons) {
        json segs = json::array();
        for (const auto& s : t.segments) {
            json js{{"joint", s.joint}, {"dof", s.dof_index}, {"model", to_string(s.model)}, {"side", s.side}};
            if (s.model == LandsmeerModel::III) {
                js["y_mm"] = s.y;
                js["d_mm"] = s.d;
            } else {
                js["r_mm"] = s.r;
            }
            if (s.gate) js["gate"] = {{"id", s.gate->id}, {"channel", to_string(s.gate->channel)}};
            segs.push_back(std::move(js));
        }
        tendons.push_back({{"muscle", t.muscle}, {"insertion", t.insertion}, {"segments", std::move(segs)}});
    }
    doc["tendons"] = std::move(tendons);

    json gates = json::array();
    for (const auto& g : m.gates) {
        json params = json::object();
        for (const auto& [k, v] : g.params) {
            if (is_angle_param(k)) params[angle_key(k)] = wire_deg(v);
            else params[k] = v;
        }
        gates.push_back({{"id", g.id},
                         {"kind", to_string(g.kind)},
                         {"digit", to_string(g.digit)},
                         {"inputs", g.inputs},
                         {"params", std::move(params)}});
    }
    doc["gates"] = std::move(gates);
    return doc;
}

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(a)); }
bool near(const Vec3& a, const Vec3& b, double tol) {
    return near(a.x(), b.x(), tol) && near(a.y(), b.y(), tol) && near(a.z(), b.z(), tol);
}

}  // namespace

bool approx_equal(const ModelData& a, const ModelData& b, double tol) {
    if (a.name != b.name || !near(a.lum_coupling, b.lum_coupling, tol) ||
        !near(a.barrier_width, b.barrier_width, tol)) {
        return false;
    }
    if (a.bones.size() != b.bones.size() || a.joints.size() != b.joints.size() ||
        a.tendons.size() != b.tendons.size() || a.muscles.size() != b.muscles.size() ||
        a.gates.size() != b.gates.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.bones.size(); ++i) {
        const auto &x = a.bones[i], &y = b.bones[i];
        if (x.id != y.id || x.name != y.name || x.digit != y.digit || x.parent_joint != y.parent_joint ||
            !near(x.length, y.length, tol) || !near(x.radius, y.radius, tol) ||
            !near(x.axial_offset, y.axial_offset, tol) || x.root.has_value() != y.root.has_value()) {
            return false;
        }
        if (x.root && (!near(x.root->origin, y.root->origin, tol) || !near(x.root->y_axis, y.root->y_axis, tol) ||
                       !near(x.root->z_axis, y.root->z_axis, tol))) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.joints.size(); ++i) {
        const auto &x = a.joints[i], &y = b.joints[i];
        if (x.id != y.id || x.kind != y.kind || x.parent_bone != y.parent_bone || x.child_bone != y.child_bone ||
            !near(x.rotation_coupling, y.rotation_coupling, tol) || x.dofs.size() != y.dofs.size() ||
            x.abd_lock_flexion.has_value() != y.abd_lock_flexion.has_value()) {
            return false;
        }
        if (x.abd_lock_flexion && !near(*x.abd_lock_flexion, *y.abd_lock_flexion, tol)) return false;
        for (std::size_t k = 0; k < x.dofs.size(); ++k) {
            const auto &p = x.dofs[k], &q = y.dofs[k];
            if (p.name != q.name || !near(p.axis_obliquity, q.axis_obliquity, tol) || !near(p.min, q.min, tol) ||
                !near(p.max, q.max, tol) || !near(p.rest, q.rest, tol) || !near(p.stiffness, q.stiffness, tol) ||
                !near(p.barrier_k, q.barrier_k, tol)) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < a.muscles.size(); ++i) {
        const auto &x = a.muscles[i], &y = b.muscles[i];
        if (x.id != y.id || x.name != y.name || x.group != y.group || x.slave_group != y.slave_group ||
            x.origin_muscle != y.origin_muscle || !near(x.max_tension, y.max_tension, tol)) {
            return false;
        }
    }
    for (std::size_t i = 0; i < a.tendons.size(); ++i) {
        const auto &x = a.tendons[i], &y = b.tendons[i];
        if (x.muscle != y.muscle || x.insertion != y.insertion || x.segments.size() != y.segments.size()) return false;
        for (std::size_t k = 0; k < x.segments.size(); ++k) {
            const auto &p = x.segments[k], &q = y.segments[k];
            if (p.joint != q.joint || p.dof_index != q.dof_index || p.model != q.model || p.side != q.side ||
                p.gate != q.gate || !near(p.r, q.r, tol) || !near(p.y, q.y, tol) || !near(p.d, q.d, tol)) {
                return false;
            }
        }
    }
    for (std::size_t i = 0; i < a.gates.size(); ++i) {
        const auto &x = a.gates[i], &y = b.gates[i];
        if (x.id != y.id || x.kind != y.kind || x.digit != y.digit || x.inputs != y.inputs ||
            x.params.size() != y.params.size()) {
            return false;
        }
        for (const auto& [k, v] : x.params) {
            auto it = y.params.find(k);
            if (it == y.params.end() || !near(v, it->second, tol)) return false;
        }
    }
    return true;
}

}  // namespace acb
