#include "acb/model.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace acb {

const char* to_string(Digit d) {
    switch (d) {
        case Digit::Thumb: return "thumb";
        case Digit::Index: return "index";
        case Digit::Middle: return "middle";
        case Digit::Ring: return "ring";
        case Digit::Little: return "little";
    }
    return "?";
}

Digit digit_from_string(const std::string& s) {
    for (std::size_t i = 0; i < kDigitCount; ++i) {
        const auto d = static_cast<Digit>(i);
        if (s == to_string(d)) return d;
    }
    throw ModelError("unknown digit '" + s + "'");
}

const char* to_string(JointKind k) {
    switch (k) {
        case JointKind::Hinge1DoF: return "Hinge1DoF";
        case JointKind::Universal2DoF: return "Universal2DoF";
        case JointKind::Saddle2DoF: return "Saddle2DoF";
    }
    return "?";
}

const char* to_string(LandsmeerModel m) {
    switch (m) {
        case LandsmeerModel::I: return "I";
        case LandsmeerModel::II: return "II";
        case LandsmeerModel::III: return "III";
    }
    return "?";
}

const char* to_string(MuscleGroup g) {
    switch (g) {
        case MuscleGroup::ExtrinsicFlexor: return "extrinsic_flexor";
        case MuscleGroup::ExtrinsicExtensor: return "extrinsic_extensor";
        case MuscleGroup::Interosseous: return "interosseous";
        case MuscleGroup::Lumbrical: return "lumbrical";
        case MuscleGroup::ThenarMedial: return "thenar_medial";
        case MuscleGroup::ThenarLateral: return "thenar_lateral";
        case MuscleGroup::Hypothenar: return "hypothenar";
    }
    return "?";
}

const char* to_string(GateKind k) {
    switch (k) {
        case GateKind::DeepSlipSlack: return "DeepSlipSlack";
        case GateKind::LateralBandSlide: return "LateralBandSlide";
        case GateKind::IntHoodSwitch: return "IntHoodSwitch";
        case GateKind::LumIndependent: return "LumIndependent";
        case GateKind::OrlCoupling: return "OrlCoupling";
        case GateKind::ThumbExpansion: return "ThumbExpansion";
    }
    return "?";
}

const char* to_string(GateChannel c) {
    return c == GateChannel::Primary ? "primary" : "complement";
}

// ---------------------------------------------------------------------------
// validate
// ---------------------------------------------------------------------------

namespace {

struct GateRequirement {
    std::size_t inputs;
    std::vector<const char*> params;
};

GateRequirement requirement(GateKind k) {
    switch (k) {
        case GateKind::DeepSlipSlack: return {2, {"on", "off", "floor"}};
        case GateKind::LateralBandSlide: return {1, {"zero_crossing", "half_width", "w_slide"}};
        case GateKind::IntHoodSwitch: return {1, {"on", "off"}};
        case GateKind::LumIndependent: return {0, {}};
        case GateKind::OrlCoupling: return {1, {"on", "off", "min_weight"}};
        case GateKind::ThumbExpansion: return {0, {"weight"}};
    }
    return {0, {}};
}

// Joints each muscle role must cross, keyed by id prefix.
const std::vector<std::pair<std::string, std::vector<std::string>>>& required_crossings() {
    static const std::vector<std::pair<std::string, std::vector<std::string>>> table = {
        {"FDP_", {"MCP", "PIP", "DIP"}},
        {"FDS_", {"MCP", "PIP"}},
        {"EDC_", {"MCP"}},
    };
    return table;
}

std::string dof_id(const Joint& j, const DofSpec& d) { return j.id + "." + d.name; }

}  // namespace

std::vector<Violation> validate(const ModelData& m) {
    std::vector<Violation> out;
    auto add = [&](std::string element, std::string rule, std::string detail = {}) {
        out.push_back({std::move(element), std::move(rule), std::move(detail)});
    };

    std::unordered_map<std::string, const Bone*> bones;
    std::unordered_map<std::string, const Joint*> joints;
    std::unordered_map<std::string, const Muscle*> muscles;
    std::unordered_map<std::string, const Gate*> gates;
    std::set<std::string> dof_ids;

    for (const auto& b : m.bones) {
        if (!bones.emplace(b.id, &b).second) add(b.id, "bone.unique_id");
        if (!(b.length > 0.0)) add(b.id, "bone.length_positive", std::to_string(b.length));
        if (!(b.radius > 0.0)) add(b.id, "bone.radius_positive", std::to_string(b.radius));
        if (b.root) {
            const double ny = b.root->y_axis.norm();
            const double nz = b.root->z_axis.norm();
            if (ny < 1e-9 || nz < 1e-9 ||
                std::abs(b.root->y_axis.dot(b.root->z_axis)) > 1e-6 * ny * nz) {
                add(b.id, "bone.root_frame_orthogonal");
            }
        }
    }
    for (const auto& j : m.joints) {
        if (!joints.emplace(j.id, &j).second) add(j.id, "joint.unique_id");
        for (const auto& d : j.dofs) dof_ids.insert(dof_id(j, d));
    }
    for (const auto& mu : m.muscles) {
        if (!muscles.emplace(mu.id, &mu).second) add(mu.id, "muscle.unique_id");
        if (!(mu.max_tension > 0.0)) add(mu.id, "muscle.max_tension_positive",
                                         std::to_string(mu.max_tension));
    }
    for (const auto& g : m.gates) {
        if (!gates.emplace(g.id, &g).second) add(g.id, "gate.unique_id");
    }

    if (!(m.lum_coupling >= 0.0 && m.lum_coupling <= 1.0)) {
        add("model", "model.lum_coupling_range", std::to_string(m.lum_coupling));
    }
    if (!(m.barrier_width > 0.0)) add("model", "model.barrier_width_positive");

    // A chain root either sits rigidly on the carpal block or hangs off it
    // through a joint (thumb TMC).
    auto is_root = [&](const Bone& b) {
        if (!b.parent_joint) return true;
        auto it = joints.find(*b.parent_joint);
        return it != joints.end() && it->second->parent_bone == kCarpal;
    };

    // Bones reference joints; joints reference bones.
    for (const auto& b : m.bones) {
        if (is_root(b) && !b.root) add(b.id, "bone.root_frame_required");
        if (b.parent_joint) {
            auto it = joints.find(*b.parent_joint);
            if (it == joints.end()) {
                add(b.id, "bone.parent_joint_exists", *b.parent_joint);
            } else if (it->second->child_bone != b.id) {
                add(b.id, "bone.parent_joint_consistent", *b.parent_joint);
            }
        }
    }
    for (const auto& j : m.joints) {
        const bool carpal = j.parent_bone == kCarpal;
        auto pb = bones.find(j.parent_bone);
        auto cb = bones.find(j.child_bone);
        if (pb == bones.end() && !carpal) add(j.id, "joint.parent_bone_exists", j.parent_bone);
        if (cb == bones.end()) add(j.id, "joint.child_bone_exists", j.child_bone);
        if (cb != bones.end()) {
            if (pb != bones.end() && pb->second->digit != cb->second->digit) add(j.id, "joint.single_digit");
            if (cb->second->parent_joint != j.id) add(j.id, "joint.child_links_back");
        }

        const auto n = j.dofs.size();
        switch (j.kind) {
            case JointKind::Hinge1DoF:
                if (n != 1) add(j.id, "joint.hinge_one_dof", std::to_string(n));
                break;
            case JointKind::Universal2DoF:
            case JointKind::Saddle2DoF:
                if (n != 2 || j.dofs[0].name != "flex" || j.dofs[1].name != "abd") {
                    add(j.id, "joint.two_dof_flex_abd");
                }
                break;
        }
        if (j.kind == JointKind::Saddle2DoF && j.rotation_coupling == 0.0) {
            add(j.id, "joint.saddle_rotation_coupling");
        }
        if (j.kind == JointKind::Universal2DoF && j.rotation_coupling != 0.0) {
            add(j.id, "joint.universal_symmetric");
        }
        if (j.abd_lock_flexion && !(*j.abd_lock_flexion > 0.0)) {
            add(j.id, "joint.abd_lock_positive");
        }
        for (const auto& d : j.dofs) {
            const auto id = dof_id(j, d);
            if (!(d.min < d.max)) {
                std::ostringstream os;
                os << "joint " << j.id << " dof " << d.name << ": min " << rad_to_deg(d.min)
                   << " deg >= max " << rad_to_deg(d.max) << " deg";
                add(id, "dof.range_ordered", os.str());
            }
            if (d.rest < d.min || d.rest > d.max) add(id, "dof.rest_in_range");
            if (!(d.stiffness >= 0.0)) add(id, "dof.stiffness_nonnegative");
            if (!(d.barrier_k > 0.0)) add(id, "dof.barrier_positive");
        }
    }

    // Chains: per digit one root, serial, the expected length.
    for (std::size_t di = 0; di < kDigitCount; ++di) {
        const auto digit = static_cast<Digit>(di);
        std::vector<const Bone*> roots;
        std::size_t count = 0;
        for (const auto& b : m.bones) {
            if (b.digit != digit) continue;
            ++count;
            if (is_root(b)) roots.push_back(&b);
        }
        const std::size_t expected = digit == Digit::Thumb ? 3 : 4;
        if (roots.size() != 1) {
            add(to_string(digit), "bone.single_root", std::to_string(roots.size()) + " roots");
            continue;
        }
        std::size_t walked = 1;
        std::string cur = roots.front()->id;
        std::set<std::string> seen{cur};
        while (true) {
            std::vector<const Joint*> next;
            for (const auto& j : m.joints)
                if (j.parent_bone == cur) next.push_back(&j);
            if (next.size() > 1) {
                add(cur, "bone.serial_chain", "bone has several child joints");
                break;
            }
            if (next.empty()) break;
            cur = next.front()->child_bone;
            if (!seen.insert(cur).second) {
                add(cur, "bone.acyclic");
                break;
            }
            ++walked;
        }
        if (walked != count || count != expected) {
            add(to_string(digit), "bone.chain_shape",
                "expected " + std::to_string(expected) + " bones, found " + std::to_string(count) +
                    " (" + std::to_string(walked) + " reachable)");
        }
    }

    // Ancestry (joint ids) of each bone, proximal to distal.
    auto ancestry = [&](const std::string& bone) {
        std::vector<std::string> path;
        std::string cur = bone;
        for (int guard = 0; guard < 64; ++guard) {
            auto it = bones.find(cur);
            if (it == bones.end() || !it->second->parent_joint) break;
            const auto& jid = *it->second->parent_joint;
            path.push_back(jid);
            auto jt = joints.find(jid);
            if (jt == joints.end()) break;
            cur = jt->second->parent_bone;
        }
        std::reverse(path.begin(), path.end());
        return path;
    };

    // Tendons.
    std::unordered_map<std::string, int> tendon_count;
    std::unordered_map<std::string, std::pair<int, int>> coverage;  // dof id -> (+, -)
    for (const auto& t : m.tendons) {
        ++tendon_count[t.muscle];
        const std::string el = "tendon:" + t.muscle;
        if (!muscles.count(t.muscle)) add(el, "tendon.muscle_exists", t.muscle);
        if (!bones.count(t.insertion)) add(el, "tendon.insertion_exists", t.insertion);
        if (t.segments.empty()) add(el, "tendon.nonempty");
        const auto anc = ancestry(t.insertion);
        std::size_t cursor = 0;
        std::set<Digit> digits;
        std::string prev_joint;
        for (std::size_t si = 0; si < t.segments.size(); ++si) {
            const auto& s = t.segments[si];
            const std::string sel = el + "/segment " + std::to_string(si);
            auto jt = joints.find(s.joint);
            if (jt == joints.end()) {
                add(sel, "segment.joint_exists", s.joint);
                continue;
            }
            const Joint& j = *jt->second;
            if (auto cb = bones.find(j.child_bone); cb != bones.end()) digits.insert(cb->second->digit);
            if (s.dof_index >= j.dofs.size()) {
                add(sel, "segment.dof_exists", s.joint + "#" + std::to_string(s.dof_index));
            } else {
                auto& c = coverage[dof_id(j, j.dofs[s.dof_index])];
                (s.side > 0 ? c.first : c.second)++;
            }
            if (s.model == LandsmeerModel::III) {
                if (!(s.y > 0.0) || !(s.d > 0.0)) add(sel, "segment.model3_geometry");
            } else if (!(s.r > 0.0)) {
                add(sel, "segment.radius_positive");
            }
            if (s.side != 1 && s.side != -1) add(sel, "segment.side_sign");
            if (s.gate) {
                auto gt = gates.find(s.gate->id);
                if (gt == gates.end()) {
                    add(sel, "segment.gate_exists", s.gate->id);
                } else {
                    const Gate& g = *gt->second;
                    if (s.gate->channel == GateChannel::Complement && g.kind != GateKind::IntHoodSwitch) {
                        add(sel, "segment.complement_channel_kind");
                    }
                    if (g.kind == GateKind::OrlCoupling && s.side != -1) {
                        add(sel, "segment.orl_extension_only");
                    }
                }
            }
            // Chain order: joints of consecutive segments may repeat (2-DoF
            // joints), otherwise they must advance along the ancestry.
            if (s.joint != prev_joint) {
                while (cursor < anc.size() && anc[cursor] != s.joint) ++cursor;
                if (cursor == anc.size()) {
                    add(sel, "segment.chain_order",
                        s.joint + " is not distal to the previous crossing on the way to " + t.insertion);
                    cursor = 0;
                } else {
                    ++cursor;
                }
            }
            prev_joint = s.joint;
        }
        if (digits.size() > 1) add(el, "tendon.single_digit");

        for (const auto& [prefix, required] : required_crossings()) {
            if (t.muscle.rfind(prefix, 0) != 0) continue;
            for (const auto& jname : required) {
                bool found = false;
                for (const auto& s : t.segments) {
                    const auto dot = s.joint.rfind('.');
                    if (dot != std::string::npos && s.joint.substr(dot + 1) == jname) found = true;
                }
                if (!found) add(el, "tendon.required_crossing", "missing " + jname);
            }
        }
    }
    for (const auto& mu : m.muscles) {
        const auto n = tendon_count[mu.id];
        if (n == 0) add(mu.id, "muscle.tendon_complete", "no tendon path for " + mu.id);
        if (n > 1) add(mu.id, "muscle.single_tendon");
        if (mu.origin_muscle && !muscles.count(*mu.origin_muscle)) {
            add(mu.id, "muscle.origin_exists", *mu.origin_muscle);
        }
    }

    for (const auto& j : m.joints) {
        for (const auto& d : j.dofs) {
            const auto id = dof_id(j, d);
            const auto it = coverage.find(id);
            if (it == coverage.end() || it->second.first == 0 || it->second.second == 0) {
                add(id, "dof.antagonistic_coverage");
            }
        }
    }

    for (const auto& g : m.gates) {
        const auto req = requirement(g.kind);
        if (g.inputs.size() != req.inputs) {
            add(g.id, "gate.input_count", std::to_string(g.inputs.size()));
        }
        for (const auto& in : g.inputs) {
            if (!dof_ids.count(in)) add(g.id, "gate.input_exists", in);
        }
        for (const char* p : req.params) {
            if (!g.params.count(p)) add(g.id, "gate.param_present", p);
        }
        auto param = [&](const char* k) { auto it = g.params.find(k); return it == g.params.end() ? 0.0 : it->second; };
        switch (g.kind) {
            case GateKind::DeepSlipSlack:
            case GateKind::IntHoodSwitch:
            case GateKind::OrlCoupling:
                if (!(param("on") < param("off"))) add(g.id, "gate.ramp_ordered");
                break;
            case GateKind::LateralBandSlide:
                if (!(param("half_width") > 0.0)) add(g.id, "gate.ramp_ordered");
                if (!(param("w_slide") >= 0.0 && param("w_slide") <= 1.0)) add(g.id, "gate.weight_range");
                break;
            default: break;
        }
        for (const char* k : {"floor", "min_weight", "weight"}) {
            if (g.params.count(k) && !(param(k) >= 0.0 && param(k) <= 1.0)) add(g.id, "gate.weight_range", k);
        }
    }

    // Flexion-axis obliquity non-decreasing from index to little (MCP).
    double prev = -1e9;
    for (Digit d : {Digit::Index, Digit::Middle, Digit::Ring, Digit::Little}) {
        const std::string jid = std::string(to_string(d)) + ".MCP";
        auto it = joints.find(jid);
        if (it == joints.end() || it->second->dofs.empty()) continue;
        const double o = it->second->dofs.front().axis_obliquity;
        if (o < prev) add(jid, "joint.obliquity_monotone");
        prev = o;
    }

    return out;
}

// ---------------------------------------------------------------------------
// HandModel
// ---------------------------------------------------------------------------

HandModel::HandModel(ModelData data) : data_(std::move(data)) {
    const auto violations = validate(data_);
    if (!violations.empty()) {
        std::ostringstream os;
        os << "invalid hand model (" << violations.size() << " violation"
           << (violations.size() == 1 ? "" : "s") << "):";
        for (const auto& v : violations) {
            os << "\n  " << v.element << ": " << v.rule;
            if (!v.detail.empty()) os << " (" << v.detail << ")";
        }
        throw ModelError(os.str());
    }

    for (std::size_t i = 0; i < data_.bones.size(); ++i) bone_ids_[data_.bones[i].id] = i;
    for (std::size_t i = 0; i < data_.joints.size(); ++i) joint_ids_[data_.joints[i].id] = i;
    for (std::size_t i = 0; i < data_.muscles.size(); ++i) muscle_ids_[data_.muscles[i].id] = i;
    for (std::size_t i = 0; i < data_.gates.size(); ++i) gate_ids_[data_.gates[i].id] = i;

    digit_dofs_.assign(kDigitCount, {});
    digit_muscles_.assign(kDigitCount, {});
    chains_.assign(kDigitCount, {});

    for (std::size_t ji = 0; ji < data_.joints.size(); ++ji) {
        const auto& j = data_.joints[ji];
        const Digit digit = data_.bones[bone_ids_.at(j.child_bone)].digit;
        for (std::size_t k = 0; k < j.dofs.size(); ++k) {
            DofInfo info{j.id + "." + j.dofs[k].name, ji, k, digit};
            dof_ids_[info.id] = dofs_.size();
            digit_dofs_[static_cast<std::size_t>(digit)].push_back(dofs_.size());
            dofs_.push_back(std::move(info));
        }
    }
    lock_partner_.assign(dofs_.size(), -1);
    for (std::size_t i = 0; i < dofs_.size(); ++i) {
        const auto& j = data_.joints[dofs_[i].joint];
        if (j.abd_lock_flexion && j.dofs[dofs_[i].local].name == "abd") {
            lock_partner_[i] = static_cast<int>(dof_ids_.at(j.id + ".flex"));
        }
    }

    for (std::size_t d = 0; d < kDigitCount; ++d) {
        const Bone* root = nullptr;
        for (const auto& b : data_.bones) {
            if (static_cast<std::size_t>(b.digit) != d) continue;
            if (!b.parent_joint || data_.joints[joint_ids_.at(*b.parent_joint)].parent_bone == kCarpal) root = &b;
        }
        std::string cur = root->id;
        chains_[d].push_back(bone_ids_.at(cur));
        while (true) {
            const Joint* next = nullptr;
            for (const auto& j : data_.joints)
                if (j.parent_bone == cur) next = &j;
            if (!next) break;
            cur = next->child_bone;
            chains_[d].push_back(bone_ids_.at(cur));
        }
    }

    for (const auto& g : data_.gates) {
        CompiledGate cg;
        cg.kind = g.kind;
        for (const auto& in : g.inputs) cg.inputs.push_back(dof_ids_.at(in));
        auto get = [&](const char* k, double def) {
            auto it = g.params.find(k);
            return it == g.params.end() ? def : it->second;
        };
        cg.on = get("on", 0.0);
        cg.off = get("off", 1.0);
        cg.floor = get("floor", 0.0);
        cg.zero_crossing = get("zero_crossing", 0.0);
        cg.half_width = get("half_width", 1.0);
        cg.w_slide = get("w_slide", 0.0);
        cg.min_weight = get("min_weight", 0.0);
        cg.weight = get("weight", 1.0);
        gates_.push_back(std::move(cg));
    }

    tendon_of_muscle_.assign(data_.muscles.size(), 0);
    muscle_digit_.assign(data_.muscles.size(), Digit::Index);
    segments_.assign(data_.muscles.size(), {});
    for (std::size_t ti = 0; ti < data_.tendons.size(); ++ti) {
        const auto& t = data_.tendons[ti];
        const auto m = muscle_ids_.at(t.muscle);
        tendon_of_muscle_[m] = ti;
        for (const auto& s : t.segments) {
            const auto& j = data_.joints[joint_ids_.at(s.joint)];
            CompiledSegment cs;
            cs.dof = dof_ids_.at(j.id + "." + j.dofs[s.dof_index].name);
            cs.model = s.model;
            cs.r = s.r;
            cs.y = s.y;
            cs.d = s.d;
            cs.side = s.side;
            if (s.gate) {
                cs.gate = static_cast<int>(gate_ids_.at(s.gate->id));
                cs.channel = s.gate->channel;
            }
            segments_[m].push_back(cs);
        }
        muscle_digit_[m] = data_.bones[bone_ids_.at(t.insertion)].digit;
    }
    for (std::size_t m = 0; m < data_.muscles.size(); ++m) {
        digit_muscles_[static_cast<std::size_t>(muscle_digit_[m])].push_back(m);
    }

    origin_.assign(data_.muscles.size(), -1);
    std::map<std::string, SlaveGroup> groups;
    for (std::size_t m = 0; m < data_.muscles.size(); ++m) {
        const auto& mu = data_.muscles[m];
        if (mu.origin_muscle) origin_[m] = static_cast<int>(muscle_ids_.at(*mu.origin_muscle));
        if (mu.slave_group) {
            auto& g = groups[*mu.slave_group];
            g.id = *mu.slave_group;
            g.members.push_back(m);
        }
    }
    for (auto& [id, g] : groups) slave_groups_.push_back(std::move(g));
}

const DofSpec& HandModel::dof_spec(std::size_t i) const {
    const auto& info = dofs_[i];
    return data_.joints[info.joint].dofs[info.local];
}

std::size_t HandModel::dof_index(const std::string& id) const {
    auto it = dof_ids_.find(id);
    if (it == dof_ids_.end()) throw ModelError("unknown DoF '" + id + "'");
    return it->second;
}

std::optional<std::size_t> HandModel::find_dof(const std::string& id) const {
    auto it = dof_ids_.find(id);
    if (it == dof_ids_.end()) return std::nullopt;
    return it->second;
}

std::size_t HandModel::muscle_index(const std::string& id) const {
    auto it = muscle_ids_.find(id);
    if (it == muscle_ids_.end()) throw ModelError("unknown muscle '" + id + "'");
    return it->second;
}

std::optional<std::size_t> HandModel::find_muscle(const std::string& id) const {
    auto it = muscle_ids_.find(id);
    if (it == muscle_ids_.end()) return std::nullopt;
    return it->second;
}

std::size_t HandModel::joint_index(const std::string& id) const {
    auto it = joint_ids_.find(id);
    if (it == joint_ids_.end()) throw ModelError("unknown joint '" + id + "'");
    return it->second;
}

std::size_t HandModel::bone_index(const std::string& id) const {
    auto it = bone_ids_.find(id);
    if (it == bone_ids_.end()) throw ModelError("unknown bone '" + id + "'");
    return it->second;
}

std::size_t HandModel::gate_index(const std::string& id) const {
    auto it = gate_ids_.find(id);
    if (it == gate_ids_.end()) throw ModelError("unknown gate '" + id + "'");
    return it->second;
}

Posture HandModel::rest_posture() const {
    Posture p(dof_count());
    for (std::size_t i = 0; i < dof_count(); ++i) p[i] = dof_spec(i).rest;
    return p;
}

std::pair<double, double> HandModel::effective_range(std::size_t dof, const Posture& p) const {
    const auto& spec = dof_spec(dof);
    const int partner = lock_partner_[dof];
    if (partner < 0) return {spec.min, spec.max};
    const auto& j = data_.joints[dofs_[dof].joint];
    const double flex = std::max(0.0, p[static_cast<std::size_t>(partner)]);
    const double factor = std::clamp(1.0 - flex / *j.abd_lock_flexion, 0.0, 1.0);
    return {spec.min * factor, spec.max * factor};
}

bool HandModel::within_ranges(const Posture& p, double tol) const {
    if (p.size() != dof_count()) return false;
    for (std::size_t i = 0; i < dof_count(); ++i) {
        const auto [lo, hi] = effective_range(i, p);
        if (p[i] < lo - tol || p[i] > hi + tol) return false;
    }
    return true;
}

Posture HandModel::posture_from_degrees(const std::map<std::string, double>& deg) const {
    Posture p = rest_posture();
    for (const auto& [id, value] : deg) p[dof_index(id)] = deg_to_rad(value);
    return p;
}

ActivationPattern HandModel::activation_from(const std::map<std::string, double>& values) const {
    ActivationPattern a(muscle_count());
    for (const auto& [id, value] : values) a[muscle_index(id)] = value;
    return a;
}

ActivationPattern project_slave_groups(const HandModel& model, const ActivationPattern& a) {
    ActivationPattern out = a;
    for (const auto& g : model.slave_groups()) {
        double sum = 0.0;
        for (auto m : g.members) sum += a[m];
        const double mean = sum / static_cast<double>(g.members.size());
        for (auto m : g.members) out[m] = mean;
    }
    return out;
}

}  // namespace acb
