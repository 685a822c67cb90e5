#pragma once

#include "acb/model.hpp"

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

namespace acb::statics {

/// Smooth ReLU of width m: 0 below −m, (x + m)²/(4m) inside, x above m.
double smooth_relu(double x, double m);

/// Passive torque of one DoF at θ (N·mm) for the range [lo, hi]: linear
/// ligament spring about rest plus a barrier beyond the limits.
double passive_torque(const DofSpec& spec, double theta, double lo, double hi, double barrier_width);
double passive_torque(const DofSpec& spec, double theta, double barrier_width);
/// Passive torque of every DoF of the model, using posture-dependent ranges.
Eigen::VectorXd passive_torques(const HandModel& model, const Posture& p);

/// τ = R(θ)·T(a) + τ_passive. `a` must already be slave-projected.
Eigen::VectorXd joint_torques(const HandModel& model, const Posture& p, const ActivationPattern& a);

struct SolverOptions {
    double tolerance{0.5};  // N·mm
    int max_iter{5000};
    double step_scale{0.2};
    int max_halvings{20};
    bool record_trace{false};
};

struct EquilibriumReport {
    Posture posture;
    double residual{0.0};  // max |τ| over unsaturated DoFs, N·mm
    int iterations{0};
    std::vector<std::string> saturated_dofs;
    bool converged{false};
    int step_halvings{0};
    std::vector<double> trace;  // per-iteration residual (max over digits)
    Eigen::VectorXd torques;    // net torque per DoF at the reported posture

    bool operator==(const EquilibriumReport& o) const;
};

/// Damped fixed-point iteration θ ← clamp(θ + η·τ/k_ref). Digits share no
/// tendons, so each digit is iterated independently. A DoF held at a limit
/// by outward torque is saturated: the bony stop supplies the reaction and it
/// does not count toward the residual.
EquilibriumReport solve_equilibrium(const HandModel& model, const ActivationPattern& a,
                                    const Posture& initial, const SolverOptions& options = {});
EquilibriumReport solve_equilibrium(const HandModel& model, const ActivationPattern& a,
                                    const SolverOptions& options = {});

/// Single-digit solve; DoFs of other digits are copied from `initial`.
EquilibriumReport solve_digit(const HandModel& model, Digit digit, const ActivationPattern& a,
                              const Posture& initial, const SolverOptions& options = {});

}  // namespace acb::statics
