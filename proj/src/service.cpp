#include "acb/service.hpp"

#include "acb/kinematics.hpp"
#include "acb/protocols.hpp"

#include <cmath>

namespace acb::service {

namespace {

constexpr double kDeg = 180.0 / kPi;

nlohmann::json vec(const Vec3& v) { return {v.x(), v.y(), v.z()}; }

struct Reject {
    std::string code;
    std::string message;
};

}  // namespace

nlohmann::json error_reply(std::int64_t seq, const std::string& code, const std::string& message) {
    return {{"type", "error"}, {"seq", seq}, {"payload", {{"code", code}, {"message", message}}}};
}

Session::Session(std::shared_ptr<const HandModel> model, std::string model_id, statics::SolverOptions options)
    : model_(std::move(model)),
      model_id_(std::move(model_id)),
      options_(options),
      activation_(model_->muscle_count()),
      posture_(model_->rest_posture()) {}

nlohmann::json Session::hello() const {
    const auto& m = *model_;
    nlohmann::json muscles = nlohmann::json::array();
    for (const auto& mu : m.data().muscles) {
        muscles.push_back({{"id", mu.id},
                           {"name", mu.name},
                           {"group", to_string(mu.group)},
                           {"slave_group", mu.slave_group ? nlohmann::json(*mu.slave_group) : nlohmann::json()},
                           {"max_tension_n", mu.max_tension}});
    }
    nlohmann::json joints = nlohmann::json::array();
    for (const auto& j : m.data().joints) {
        nlohmann::json dofs = nlohmann::json::array();
        for (const auto& d : j.dofs) {
            dofs.push_back({{"id", j.id + "." + d.name},
                            {"min_deg", d.min * kDeg},
                            {"max_deg", d.max * kDeg},
                            {"rest_deg", d.rest * kDeg}});
        }
        joints.push_back({{"id", j.id}, {"kind", to_string(j.kind)}, {"dofs", dofs}});
    }
    nlohmann::json bones = nlohmann::json::array();
    for (const auto& b : m.data().bones) {
        bones.push_back({{"id", b.id}, {"digit", to_string(b.digit)}, {"length_mm", b.length}, {"radius_mm", b.radius}});
    }
    nlohmann::json synergies = nlohmann::json::array(), grasps = nlohmann::json::array();
    for (const auto& s : protocols::synergy_scenarios()) synergies.push_back(s.name);
    for (const auto& g : protocols::grasp_presets()) grasps.push_back(g.name);
    return {{"type", "hello"},
            {"seq", 0},
            {"payload",
             {{"model", model_id_},
              {"muscles", muscles},
              {"joints", joints},
              {"bones", bones},
              {"presets", {{"synergy", synergies}, {"grasp", grasps}}}}}};
}

nlohmann::json Session::handle_text(const std::string& text) {
    nlohmann::json msg;
    try {
        msg = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        return error_reply(-1, "bad_json", e.what());
    }
    return handle(msg);
}

nlohmann::json Session::handle(const nlohmann::json& msg) {
    if (!msg.is_object() || !msg.contains("type") || !msg["type"].is_string()) {
        return error_reply(-1, "bad_message", "message must be an object with a string 'type'");
    }
    if (!msg.contains("seq") || !msg["seq"].is_number_integer()) {
        return error_reply(-1, "bad_message", "message needs an integer 'seq'");
    }
    const auto seq = msg["seq"].get<std::int64_t>();
    if (seq <= last_seq_) {
        return error_reply(seq, "stale_seq", "seq must increase; last accepted " + std::to_string(last_seq_));
    }
    const std::string type = msg["type"];
    const nlohmann::json payload = msg.value("payload", nlohmann::json::object());
    nlohmann::json reply;
    try {
        if (type == "hello") {
            reply = hello();
            reply["seq"] = seq;
        } else if (type == "set_activation") {
            reply = set_activation(seq, payload);
        } else if (type == "load_preset") {
            reply = load_preset(seq, payload);
        } else {
            return error_reply(seq, "unknown_type", "unknown message type '" + type + "'");
        }
    } catch (const Reject& r) {
        return error_reply(seq, r.code, r.message);
    } catch (const SolverFault& e) {
        return error_reply(seq, "solver_fault", e.what());
    }
    last_seq_ = seq;
    return reply;
}

nlohmann::json Session::set_activation(std::int64_t seq, const nlohmann::json& payload) {
    if (!payload.contains("activation") || !payload["activation"].is_object()) {
        throw Reject{"bad_payload", "set_activation needs an 'activation' object"};
    }
    const auto& m = *model_;
    ActivationPattern a = payload.value("reset", false) ? ActivationPattern(m.muscle_count()) : activation_;
    std::vector<bool> given(m.muscle_count(), false);
    for (const auto& [id, v] : payload["activation"].items()) {
        const auto idx = m.find_muscle(id);
        if (!idx) throw Reject{"unknown_muscle", "unknown muscle '" + id + "'"};
        if (!v.is_number() || !(v.get<double>() >= 0.0 && v.get<double>() <= 1.0)) {
            throw Reject{"bad_value", "activation of '" + id + "' must be a number in [0, 1]"};
        }
        a[*idx] = v.get<double>();
        given[*idx] = true;
    }
    // A group moves together: members not named in the message follow the
    // named ones, then the group is projected onto its mean.
    for (const auto& g : m.slave_groups()) {
        double sum = 0.0;
        int n = 0;
        for (auto k : g.members) {
            if (given[k]) {
                sum += a[k];
                ++n;
            }
        }
        if (n == 0) continue;
        for (auto k : g.members) {
            if (!given[k]) a[k] = sum / n;
        }
    }
    return solve_and_reply(seq, project_slave_groups(m, a));
}

nlohmann::json Session::solve_and_reply(std::int64_t seq, const ActivationPattern& a) {
    const auto rep = statics::solve_equilibrium(*model_, a, posture_, options_);
    activation_ = a;
    posture_ = rep.posture;
    posed_ = false;
    return state(seq, &rep);
}

nlohmann::json Session::load_preset(std::int64_t seq, const nlohmann::json& payload) {
    if (!payload.contains("name") || !payload["name"].is_string()) {
        throw Reject{"bad_payload", "load_preset needs a string 'name'"};
    }
    const std::string name = payload["name"];
    for (const auto& s : protocols::synergy_scenarios()) {
        if (s.name == name) return solve_and_reply(seq, project_slave_groups(*model_, model_->activation_from(s.activation)));
    }
    const protocols::GraspPreset* preset = nullptr;
    try {
        preset = &protocols::grasp_preset(name);
    } catch (const DomainError&) {
        throw Reject{"unknown_preset", "unknown preset '" + name + "'"};
    }
    activation_ = ActivationPattern(model_->muscle_count());
    posture_ = protocols::preset_posture(*model_, *preset);
    posed_ = true;
    auto reply = state(seq, nullptr);
    reply["payload"]["preset"] = preset->name;
    return reply;
}

nlohmann::json Session::state(std::int64_t seq, const statics::EquilibriumReport* report) const {
    const auto& m = *model_;
    nlohmann::json activation = nlohmann::json::object();
    for (std::size_t i = 0; i < m.muscle_count(); ++i) activation[m.data().muscles[i].id] = activation_[i];
    nlohmann::json posture = nlohmann::json::object();
    for (std::size_t i = 0; i < m.dof_count(); ++i) posture[m.dof(i).id] = posture_[i] * kDeg;

    const auto f = kin::forward_kinematics(m, posture_);
    nlohmann::json bones = nlohmann::json::array();
    for (std::size_t b = 0; b < f.bones.size(); ++b) {
        const auto& fr = f.bones[b];
        bones.push_back({{"id", m.data().bones[b].id},
                         {"origin", vec(fr.origin)},
                         {"end", vec(f.bone_ends[b])},
                         {"x", vec(fr.x())},
                         {"y", vec(fr.y())},
                         {"z", vec(fr.z())}});
    }
    nlohmann::json tips = nlohmann::json::object();
    for (std::size_t d = 0; d < kDigitCount; ++d) {
        const auto& p = f.digits[d];
        tips[to_string(static_cast<Digit>(d))] = {{"tip", vec(p.tip)}, {"pad", vec(p.pad)}, {"pad_normal", vec(p.pad_normal)}};
    }
    nlohmann::json payload = {{"mode", posed_ ? "posed" : "active"},
                              {"activation", activation},
                              {"posture_deg", posture},
                              {"bones", bones},
                              {"fingertips", tips}};
    if (report) {
        payload["residual"] = report->residual;
        payload["converged"] = report->converged;
        payload["iterations"] = report->iterations;
        payload["saturated"] = report->saturated_dofs;
    } else {
        payload["residual"] = nullptr;
        payload["converged"] = nullptr;
        payload["iterations"] = 0;
        payload["saturated"] = nlohmann::json::array();
    }
    return {{"type", "state"}, {"seq", seq}, {"payload", payload}};
}

}  // namespace acb::service
