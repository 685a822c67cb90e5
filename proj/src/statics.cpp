#include "acb/statics.hpp"

#include "acb/extensor_net.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

namespace acb::statics {

double smooth_relu(double x, double m) {
    if (x <= -m) return 0.0;
    if (x >= m) return x;
    return (x + m) * (x + m) / (4.0 * m);
}

namespace {

double smooth_relu_slope(double x, double m) {
    if (x <= -m) return 0.0;
    if (x >= m) return 1.0;
    return (x + m) / (2.0 * m);
}

// Torque evaluation restricted to one digit. Tendons never leave their digit,
// so the digit's DoFs see only the digit's muscles.
class DigitSystem {
public:
    DigitSystem(const HandModel& model, Digit digit, const Eigen::VectorXd& tensions)
        : model_(model), dofs_(model.digit_dofs(digit)), tensions_(tensions) {
        for (auto m : model.digit_muscles(digit))
            if (tensions[static_cast<Eigen::Index>(m)] != 0.0) muscles_.push_back(m);
        local_.assign(model.dof_count(), -1);
        for (std::size_t i = 0; i < dofs_.size(); ++i) local_[dofs_[i]] = static_cast<int>(i);
    }

    std::size_t size() const { return dofs_.size(); }
    std::size_t global(std::size_t i) const { return dofs_[i]; }

    void range(const Posture& p, std::size_t i, double& lo, double& hi) const {
        std::tie(lo, hi) = model_.effective_range(dofs_[i], p);
    }

    void torque(const Posture& p, std::vector<double>& tau) const {
        tau.assign(dofs_.size(), 0.0);
        const double bw = model_.data().barrier_width;
        for (std::size_t i = 0; i < dofs_.size(); ++i) {
            double lo, hi;
            range(p, i, lo, hi);
            tau[i] = passive_torque(model_.dof_spec(dofs_[i]), p[dofs_[i]], lo, hi, bw);
        }
        for (auto m : muscles_) {
            const double t = tensions_[static_cast<Eigen::Index>(m)];
            for (const auto& s : model_.segments(m)) {
                tau[static_cast<std::size_t>(local_[s.dof])] += t * extensor::segment_arm(model_, s, p);
            }
        }
    }

    // Reference stiffness: ligament spring plus the local barrier slope.
    double k_ref(const Posture& p, std::size_t i) const {
        const auto& spec = model_.dof_spec(dofs_[i]);
        double lo, hi;
        range(p, i, lo, hi);
        const double bw = model_.data().barrier_width;
        const double th = p[dofs_[i]];
        const double barrier = spec.barrier_k * (smooth_relu_slope(th - hi, bw) + smooth_relu_slope(lo - th, bw));
        return std::max(spec.stiffness + barrier, 1.0);
    }

private:
    const HandModel& model_;
    const std::vector<std::size_t>& dofs_;
    const Eigen::VectorXd& tensions_;
    std::vector<std::size_t> muscles_;
    std::vector<int> local_;
};

constexpr double kLimitEps = 1e-12;

struct Evaluation {
    std::vector<double> tau;
    std::vector<char> saturated;
    double residual{0.0};
};

void evaluate(const DigitSystem& sys, const Posture& p, Evaluation& e) {
    sys.torque(p, e.tau);
    e.saturated.assign(sys.size(), 0);
    e.residual = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        if (!std::isfinite(e.tau[i])) {
            throw SolverFault("non-finite torque at DoF index " + std::to_string(sys.global(i)));
        }
        double lo, hi;
        sys.range(p, i, lo, hi);
        const double th = p[sys.global(i)];
        const bool at_hi = th >= hi - kLimitEps && e.tau[i] > 0.0;
        const bool at_lo = th <= lo + kLimitEps && e.tau[i] < 0.0;
        if (at_hi || at_lo) {
            e.saturated[i] = 1;
            continue;
        }
        e.residual = std::max(e.residual, std::abs(e.tau[i]));
    }
}

void clamp_digit(const DigitSystem& sys, Posture& p) {
    // Flexion first so the collateral lock sees the clamped flexion angle.
    for (int pass = 0; pass < 2; ++pass) {
        for (std::size_t i = 0; i < sys.size(); ++i) {
            double lo, hi;
            sys.range(p, i, lo, hi);
            p[sys.global(i)] = std::clamp(p[sys.global(i)], lo, hi);
        }
    }
}

struct DigitResult {
    Evaluation eval;
    int iterations{0};
    int halvings{0};
    bool converged{false};
    std::vector<double> trace;
};

DigitResult solve_one(const DigitSystem& sys, Posture& p, const SolverOptions& opt) {
    DigitResult r;
    clamp_digit(sys, p);
    evaluate(sys, p, r.eval);
    if (opt.record_trace) r.trace.push_back(r.eval.residual);

    double eta = opt.step_scale;
    Posture trial = p;
    Evaluation next;
    std::vector<double> kref(sys.size());
    while (r.eval.residual >= opt.tolerance && r.iterations < opt.max_iter) {
        for (std::size_t i = 0; i < sys.size(); ++i) kref[i] = sys.k_ref(p, i);
        bool overshoot = false;
        while (true) {
            trial = p;
            for (std::size_t i = 0; i < sys.size(); ++i) {
                trial[sys.global(i)] += eta * r.eval.tau[i] / kref[i];
            }
            clamp_digit(sys, trial);
            evaluate(sys, trial, next);
            // A growing residual only means trouble when the step overshot.
            overshoot = false;
            for (std::size_t i = 0; i < sys.size(); ++i) {
                if (next.saturated[i] || r.eval.saturated[i] || next.tau[i] * r.eval.tau[i] >= 0.0) continue;
                if (std::abs(next.tau[i]) >= opt.tolerance && std::abs(next.tau[i]) > 0.5 * std::abs(r.eval.tau[i])) {
                    overshoot = true;
                }
            }
            if (next.residual <= r.eval.residual || !overshoot || r.halvings >= opt.max_halvings) break;
            eta *= 0.5;
            ++r.halvings;
        }
        p = trial;
        std::swap(r.eval, next);
        if (!overshoot) eta = std::min(opt.step_scale, 1.5 * eta);
        ++r.iterations;
        if (opt.record_trace) r.trace.push_back(r.eval.residual);
    }
    r.converged = r.eval.residual < opt.tolerance;
    return r;
}

EquilibriumReport solve_digits(const HandModel& model, const std::vector<Digit>& digits,
                               const ActivationPattern& raw, const Posture& initial, const SolverOptions& opt) {
    if (initial.size() != model.dof_count()) throw ModelError("solve: incomplete initial posture");
    const ActivationPattern a = project_slave_groups(model, raw);
    const Eigen::VectorXd tensions = extensor::tendon_tensions(model, a);

    EquilibriumReport rep;
    rep.posture = initial;
    rep.converged = true;
    rep.torques = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(model.dof_count()));
    std::vector<std::vector<double>> traces;
    for (Digit d : digits) {
        DigitSystem sys(model, d, tensions);
        DigitResult r = solve_one(sys, rep.posture, opt);
        rep.residual = std::max(rep.residual, r.eval.residual);
        rep.iterations = std::max(rep.iterations, r.iterations);
        rep.step_halvings += r.halvings;
        rep.converged = rep.converged && r.converged;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            rep.torques[static_cast<Eigen::Index>(sys.global(i))] = r.eval.tau[i];
        }
        traces.push_back(std::move(r.trace));
    }
    for (Digit d : digits) {
        for (auto g : model.digit_dofs(d)) {
            const auto [lo, hi] = model.effective_range(g, rep.posture);
            const double th = rep.posture[g];
            const double t = rep.torques[static_cast<Eigen::Index>(g)];
            if ((th >= hi - kLimitEps && t > 0.0) || (th <= lo + kLimitEps && t < 0.0)) {
                rep.saturated_dofs.push_back(model.dof(g).id);
            }
        }
    }
    if (opt.record_trace) {
        std::size_t n = 0;
        for (const auto& t : traces) n = std::max(n, t.size());
        rep.trace.assign(n, 0.0);
        for (const auto& t : traces) {
            for (std::size_t k = 0; k < n; ++k) {
                const double v = k < t.size() ? t[k] : (t.empty() ? 0.0 : t.back());
                rep.trace[k] = std::max(rep.trace[k], v);
            }
        }
    }
    return rep;
}

}  // namespace

double passive_torque(const DofSpec& spec, double theta, double lo, double hi, double bw) {
    const double linear = -spec.stiffness * (theta - spec.rest);
    const double barrier = spec.barrier_k * (smooth_relu(theta - hi, bw) - smooth_relu(lo - theta, bw));
    return linear - barrier;
}

double passive_torque(const DofSpec& spec, double theta, double bw) {
    return passive_torque(spec, theta, spec.min, spec.max, bw);
}

Eigen::VectorXd passive_torques(const HandModel& model, const Posture& p) {
    Eigen::VectorXd tau(static_cast<Eigen::Index>(model.dof_count()));
    for (std::size_t i = 0; i < model.dof_count(); ++i) {
        const auto [lo, hi] = model.effective_range(i, p);
        tau[static_cast<Eigen::Index>(i)] =
            passive_torque(model.dof_spec(i), p[i], lo, hi, model.data().barrier_width);
    }
    return tau;
}

Eigen::VectorXd joint_torques(const HandModel& model, const Posture& p, const ActivationPattern& a) {
    return extensor::routing_matrix(model, p) * extensor::tendon_tensions(model, a) + passive_torques(model, p);
}

bool EquilibriumReport::operator==(const EquilibriumReport& o) const {
    return posture == o.posture && residual == o.residual && iterations == o.iterations &&
           saturated_dofs == o.saturated_dofs && converged == o.converged && step_halvings == o.step_halvings &&
           trace == o.trace && torques == o.torques;
}

EquilibriumReport solve_equilibrium(const HandModel& model, const ActivationPattern& a, const Posture& initial,
                                    const SolverOptions& options) {
    std::vector<Digit> all;
    for (std::size_t d = 0; d < kDigitCount; ++d) all.push_back(static_cast<Digit>(d));
    return solve_digits(model, all, a, initial, options);
}

EquilibriumReport solve_equilibrium(const HandModel& model, const ActivationPattern& a,
                                    const SolverOptions& options) {
    return solve_equilibrium(model, a, model.rest_posture(), options);
}

EquilibriumReport solve_digit(const HandModel& model, Digit digit, const ActivationPattern& a,
                              const Posture& initial, const SolverOptions& options) {
    return solve_digits(model, {digit}, a, initial, options);
}

}  // namespace acb::statics
