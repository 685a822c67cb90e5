#include "acb/extensor_net.hpp"

#include "acb/landsmeer.hpp"

#include <algorithm>
#include <cmath>

namespace acb::extensor {

double smoothstep(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

double ramp(double x, double on, double off) { return smoothstep((x - on) / (off - on)); }

double gate_weight(const HandModel& model, std::size_t g, const Posture& p, GateChannel channel) {
    const auto& gate = model.gates().at(g);
    auto in = [&](std::size_t k) { return p[gate.inputs[k]]; };
    switch (gate.kind) {
        case GateKind::DeepSlipSlack: {
            const double ip = 0.5 * (in(0) + in(1));
            return gate.floor + (1.0 - gate.floor) * (1.0 - ramp(ip, gate.on, gate.off));
        }
        case GateKind::LateralBandSlide: {
            const double x = in(0);
            if (x <= gate.zero_crossing) {
                return 1.0 - ramp(x, gate.zero_crossing - gate.half_width, gate.zero_crossing);
            }
            return -gate.w_slide * ramp(x, gate.zero_crossing, gate.zero_crossing + gate.half_width);
        }
        case GateKind::IntHoodSwitch: {
            const double s = ramp(in(0), gate.on, gate.off);
            return channel == GateChannel::Primary ? 1.0 - s : s;
        }
        case GateKind::LumIndependent: return 1.0;
        case GateKind::OrlCoupling:
            return gate.min_weight + (1.0 - gate.min_weight) * (1.0 - ramp(in(0), gate.on, gate.off));
        case GateKind::ThumbExpansion: return gate.weight;
    }
    throw ModelError("unknown gate kind");
}

double gate_weight(const HandModel& model, const std::string& id, const Posture& p, GateChannel channel) {
    return gate_weight(model, model.gate_index(id), p, channel);
}

double segment_arm(const HandModel& model, const CompiledSegment& s, const Posture& p) {
    const double theta = p[s.dof] - model.dof_spec(s.dof).rest;
    double arm = landsmeer::signed_moment_arm(s, theta);
    if (s.gate >= 0) arm *= gate_weight(model, static_cast<std::size_t>(s.gate), p, s.channel);
    return arm;
}

Eigen::MatrixXd routing_matrix(const HandModel& model, const Posture& p) {
    if (p.size() != model.dof_count()) throw ModelError("routing_matrix: incomplete posture");
    Eigen::MatrixXd R = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(model.dof_count()),
                                              static_cast<Eigen::Index>(model.muscle_count()));
    for (std::size_t m = 0; m < model.muscle_count(); ++m) {
        for (const auto& s : model.segments(m)) {
            R(static_cast<Eigen::Index>(s.dof), static_cast<Eigen::Index>(m)) += segment_arm(model, s, p);
        }
    }
    return R;
}

void check_activation(const HandModel& model, const ActivationPattern& a) {
    if (a.size() != model.muscle_count()) {
        throw ModelError("activation has " + std::to_string(a.size()) + " entries, model has " +
                         std::to_string(model.muscle_count()) + " muscles");
    }
    for (std::size_t m = 0; m < a.size(); ++m) {
        if (!(a[m] >= 0.0 && a[m] <= 1.0)) {
            throw DomainError("activation of " + model.muscle(m).id + " outside [0, 1]: " + std::to_string(a[m]));
        }
    }
}

Eigen::VectorXd lum_fdp_transfer(const HandModel& model, const ActivationPattern& a) {
    check_activation(model, a);
    Eigen::VectorXd delta = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.muscle_count()));
    const double c = model.data().lum_coupling;
    for (std::size_t m = 0; m < model.muscle_count(); ++m) {
        const int o = model.origin_of(m);
        if (o < 0) continue;
        const auto src = static_cast<std::size_t>(o);
        const double t_src = a[src] * model.muscle(src).max_tension;
        const double moved = c * a[m] * t_src;
        delta[static_cast<Eigen::Index>(src)] -= moved;
        delta[static_cast<Eigen::Index>(m)] += moved;
    }
    return delta;
}

Eigen::VectorXd tendon_tensions(const HandModel& model, const ActivationPattern& a) {
    Eigen::VectorXd t = lum_fdp_transfer(model, a);
    for (std::size_t m = 0; m < model.muscle_count(); ++m) {
        t[static_cast<Eigen::Index>(m)] += a[m] * model.muscle(m).max_tension;
    }
    return t;
}

}  // namespace acb::extensor
