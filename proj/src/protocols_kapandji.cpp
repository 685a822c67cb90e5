#include "acb/protocols.hpp"

#include <future>
#include <limits>

namespace acb::protocols {

namespace {

const std::vector<std::string>& thumb_muscles() {
    static const std::vector<std::string> m = {"FPL", "APL", "EPB", "EPL", "AP_proximal",
                                               "AP_distal", "AI1", "FPB", "APB", "OP"};
    return m;
}

std::vector<kin::MuscleBound> box(const std::map<std::string, std::pair<double, double>>& narrowed) {
    std::vector<kin::MuscleBound> out;
    for (const auto& m : thumb_muscles()) {
        auto it = narrowed.find(m);
        if (it == narrowed.end()) out.push_back({m, 0.0, 0.0});
        else out.push_back({m, it->second.first, it->second.second});
    }
    return out;
}

}  // namespace

const std::vector<KapandjiStage>& kapandji_stages() {
    // Search boxes come from tools/tune_kapandji; muscles absent from a box
    // stay inactive for that stage.
#include "kapandji_stages.inc"
    return stages;
}

StageTarget stage_target(const HandModel& model, const KapandjiStage& stage, const statics::SolverOptions& options) {
    StageTarget t;
    const auto a = model.activation_from(stage.finger_activation);
    const auto rep = statics::solve_equilibrium(model, a, model.rest_posture(), options);
    t.posture = rep.posture;
    for (auto d : model.digit_dofs(Digit::Thumb)) t.posture[d] = model.dof_spec(d).rest;
    t.converged = rep.converged;
    const auto f = kin::forward_kinematics(model, t.posture);
    t.point = stage.kind == TargetKind::McpPad ? kin::mcp_pad(model, f, stage.digit) : f.digit(stage.digit).pad;
    return t;
}

Vec3 thumb_pad_for(const HandModel& model, const ActivationPattern& a, const Posture& base,
                   const statics::SolverOptions& options, Posture* out, bool* converged) {
    const auto rep = statics::solve_digit(model, Digit::Thumb, a, base, options);
    if (out) *out = rep.posture;
    if (converged) *converged = rep.converged;
    return kin::forward_kinematics(model, rep.posture).digit(Digit::Thumb).pad;
}

KapandjiStageResult kapandji_stage(const HandModel& model, const KapandjiStage& stage,
                                   const KapandjiOptions& options) {
    KapandjiStageResult r;
    r.id = stage.id;
    r.name = stage.name;
    const auto target = stage_target(model, stage, options.solver);
    r.target = target.point;

    std::vector<std::size_t> idx;
    std::vector<double> lo, hi;
    for (const auto& b : stage.bounds) {
        idx.push_back(model.muscle_index(b.muscle));
        lo.push_back(b.lo);
        hi.push_back(b.hi);
    }
    const ActivationPattern baseline = model.activation_from(stage.finger_activation);
    auto activation = [&](const std::vector<double>& x) {
        ActivationPattern a = baseline;
        for (std::size_t i = 0; i < x.size(); ++i) a[idx[i]] = x[i];
        return a;
    };
    auto objective = [&](const std::vector<double>& x) {
        bool conv = false;
        const Vec3 pad = thumb_pad_for(model, activation(x), target.posture, options.solver, nullptr, &conv);
        const double d = (pad - target.point).norm();
        return conv ? d : d + 1e3;
    };
    // Pattern search needs a nonzero box width somewhere; fixed muscles are
    // simply carried along.
    auto opt = options.search;
    opt.target = std::min(opt.target, 0.0);
    const auto best = search::pattern_search(objective, lo, hi, opt);

    const auto a = activation(best.x);
    bool conv = false;
    r.thumb_pad = thumb_pad_for(model, a, target.posture, options.solver, &r.posture, &conv);
    r.distance_mm = (r.thumb_pad - r.target).norm();
    r.reached = conv && target.converged && r.distance_mm < stage.tolerance_mm;
    r.evaluations = best.evaluations;
    for (std::size_t i = 0; i < idx.size(); ++i) r.activation[stage.bounds[i].muscle] = best.x[i];

    if (options.run_oracle) {
        r.oracle_run = true;
        const auto cloud = kin::workspace_sample(model, Digit::Thumb, stage.bounds, options.oracle_samples,
                                                 options.oracle_seed + static_cast<std::uint64_t>(stage.id),
                                                 baseline, target.posture, options.solver);
        r.oracle_excluded = cloud.excluded;
        r.oracle_distance_mm = std::numeric_limits<double>::infinity();
        for (const auto& p : cloud.points) r.oracle_distance_mm = std::min(r.oracle_distance_mm, (p - r.target).norm());
        r.oracle_feasible = r.oracle_distance_mm < stage.tolerance_mm;
    }
    return r;
}

KapandjiReport kapandji_test(const HandModel& model, const std::vector<KapandjiStage>& stages,
                             const KapandjiOptions& options, int jobs) {
    if (stages.empty()) throw DomainError("kapandji_test: no stages");
    KapandjiReport rep;
    rep.stages.resize(stages.size());
    if (jobs <= 1) {
        for (std::size_t i = 0; i < stages.size(); ++i) rep.stages[i] = kapandji_stage(model, stages[i], options);
    } else {
        for (std::size_t start = 0; start < stages.size(); start += static_cast<std::size_t>(jobs)) {
            std::vector<std::future<KapandjiStageResult>> fut;
            for (std::size_t i = start; i < std::min(stages.size(), start + static_cast<std::size_t>(jobs)); ++i) {
                fut.push_back(std::async(std::launch::async,
                                         [&, i] { return kapandji_stage(model, stages[i], options); }));
            }
            for (std::size_t k = 0; k < fut.size(); ++k) rep.stages[start + k] = fut[k].get();
        }
    }
    rep.pass = true;
    for (const auto& s : rep.stages) {
        const bool refuted = s.oracle_run && s.reached && !s.oracle_feasible;
        if (refuted) rep.consistent = false;
        rep.pass = rep.pass && s.reached && (!s.oracle_run || s.oracle_feasible);
    }
    return rep;
}

nlohmann::json to_json(const KapandjiReport& r) {
    nlohmann::json stages = nlohmann::json::array();
    for (const auto& s : r.stages) {
        nlohmann::json j{{"stage", s.id},
                         {"name", s.name},
                         {"target_mm", {s.target.x(), s.target.y(), s.target.z()}},
                         {"thumb_pad_mm", {s.thumb_pad.x(), s.thumb_pad.y(), s.thumb_pad.z()}},
                         {"distance_mm", s.distance_mm},
                         {"reached", s.reached},
                         {"activation", s.activation},
                         {"evaluations", s.evaluations}};
        if (s.oracle_run) {
            j["oracle"] = {{"min_distance_mm", s.oracle_distance_mm},
                           {"feasible", s.oracle_feasible},
                           {"excluded", s.oracle_excluded}};
        }
        stages.push_back(j);
    }
    return {{"stages", stages}, {"pass", r.pass}, {"consistent", r.consistent}};
}

}  // namespace acb::protocols
