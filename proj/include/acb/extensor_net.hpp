#pragma once

#include "acb/model.hpp"

#include <Eigen/Core>

namespace acb::extensor {

/// s(t) = t²(3 − 2t) on [0, 1], clamped outside.
double smoothstep(double t);
/// Smoothstep of x over [on, off].
double ramp(double x, double on, double off);

/// Signed gate output in [−1, 1] for one channel of gate `g` at posture `p`.
double gate_weight(const HandModel& model, std::size_t g, const Posture& p,
                   GateChannel channel = GateChannel::Primary);
double gate_weight(const HandModel& model, const std::string& gate_id, const Posture& p,
                   GateChannel channel = GateChannel::Primary);

/// Effective moment arm of one segment, side · gate · dE/dθ.
double segment_arm(const HandModel& model, const CompiledSegment& s, const Posture& p);

/// DoF × muscle matrix of effective moment arms (mm). Positive entries
/// flex (or abduct) the DoF when the muscle pulls.
Eigen::MatrixXd routing_matrix(const HandModel& model, const Posture& p);

/// Tension diverted from each FDP into its lumbrical, indexed by muscle:
/// negative on the FDP, positive on the LUM, zero elsewhere.
Eigen::VectorXd lum_fdp_transfer(const HandModel& model, const ActivationPattern& a);

/// Tendon tensions (N): a·T_max with the lumbrical transfer applied.
/// Activations must lie in [0, 1].
Eigen::VectorXd tendon_tensions(const HandModel& model, const ActivationPattern& a);

void check_activation(const HandModel& model, const ActivationPattern& a);

}  // namespace acb::extensor
