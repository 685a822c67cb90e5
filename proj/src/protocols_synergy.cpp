#include "acb/protocols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace acb::protocols {

namespace {

Predicate gt(std::vector<std::string> dofs, double t) { return {std::move(dofs), Comparator::Greater, t}; }
Predicate within(std::vector<std::string> dofs, double t) { return {std::move(dofs), Comparator::Within, t}; }

const std::string kMcp = "index.MCP.flex";
const std::string kPip = "index.PIP.flex";
const std::string kDip = "index.DIP.flex";

}  // namespace

std::string describe(const Predicate& p) {
    std::ostringstream os;
    for (std::size_t i = 0; i < p.dofs.size(); ++i) os << (i ? "," : "") << p.dofs[i];
    if (p.cmp == Comparator::Greater) os << " > " << p.threshold_deg << " deg";
    else os << " within " << p.threshold_deg << " deg of 0";
    return os.str();
}

const std::vector<SynergyScenario>& synergy_scenarios() {
    // Activation magnitudes come from tools/tune_synergy.
    static const std::vector<SynergyScenario> s = {
        {"claw",
         {{"FDP_index", 0.155}, {"EDC_index", 0.153}},
         {within({kMcp}, 15.0), gt({kPip}, 45.0), gt({kDip}, 30.0)}},
        {"full_flexion",
         {{"FDP_index", 0.6}, {"FDS_index", 0.6}, {"INT_radial_index", 0.4}, {"INT_ulnar_index", 0.4}},
         {gt({kMcp, kPip, kDip}, 45.0)}},
        {"full_extension",
         {{"FDP_index", 0.1}, {"EDC_index", 0.15}, {"INT_radial_index", 0.1}, {"INT_ulnar_index", 0.1}},
         {within({kMcp, kPip, kDip}, 10.0)}},
        {"beak",
         {{"LUM_index", 0.45}, {"INT_radial_index", 0.86}, {"INT_ulnar_index", 0.86}, {"EDC_index", 0.01},
          {"FDP_index", 0.06}},
         {gt({kMcp}, 45.0), within({kPip, kDip}, 15.0)}},
    };
    return s;
}

const SynergyScenario& synergy_scenario(const std::string& name) {
    for (const auto& s : synergy_scenarios())
        if (s.name == name) return s;
    throw DomainError("unknown synergy scenario '" + name + "'");
}

nlohmann::json scenarios_json(const std::vector<SynergyScenario>& list) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& s : list) {
        nlohmann::json preds = nlohmann::json::array();
        for (const auto& p : s.predicates) {
            preds.push_back({{"dofs", p.dofs},
                             {"comparator", p.cmp == Comparator::Greater ? "greater" : "within"},
                             {"threshold_deg", p.threshold_deg}});
        }
        out.push_back({{"name", s.name}, {"activation", s.activation}, {"predicates", preds}});
    }
    return out;
}

std::vector<SynergyScenario> parse_scenarios(const nlohmann::json& doc) {
    std::vector<SynergyScenario> out;
    try {
        for (const auto& j : doc) {
            SynergyScenario s;
            s.name = j.at("name").get<std::string>();
            s.activation = j.at("activation").get<std::map<std::string, double>>();
            for (const auto& p : j.at("predicates")) {
                Predicate pr;
                pr.dofs = p.at("dofs").get<std::vector<std::string>>();
                const auto c = p.at("comparator").get<std::string>();
                if (c == "greater") pr.cmp = Comparator::Greater;
                else if (c == "within") pr.cmp = Comparator::Within;
                else throw ModelError("scenario " + s.name + ": unknown comparator '" + c + "'");
                pr.threshold_deg = p.at("threshold_deg").get<double>();
                s.predicates.push_back(std::move(pr));
            }
            out.push_back(std::move(s));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ModelError(std::string("scenario document: ") + e.what());
    }
    return out;
}

std::vector<PredicateResult> evaluate_predicates(const HandModel& model, const std::vector<Predicate>& preds,
                                                 const Posture& p) {
    std::vector<PredicateResult> out;
    for (const auto& pr : preds) {
        PredicateResult r;
        r.description = describe(pr);
        r.margin_deg = std::numeric_limits<double>::infinity();
        for (const auto& id : pr.dofs) {
            const double v = rad_to_deg(p[model.dof_index(id)]);
            r.values_deg.push_back(v);
            const double m = pr.cmp == Comparator::Greater ? v - pr.threshold_deg : pr.threshold_deg - std::abs(v);
            r.margin_deg = std::min(r.margin_deg, m);
        }
        r.pass = r.margin_deg > 0.0;
        out.push_back(std::move(r));
    }
    return out;
}

SynergyResult run_scenario(const HandModel& model, const SynergyScenario& s, const ActivationPattern& a,
                           const statics::SolverOptions& options) {
    SynergyResult r;
    r.name = s.name;
    r.activation = project_slave_groups(model, a);
    r.report = statics::solve_equilibrium(model, r.activation, model.rest_posture(), options);
    r.predicates = evaluate_predicates(model, s.predicates, r.report.posture);
    r.margin_deg = std::numeric_limits<double>::infinity();
    r.pass = r.report.converged;
    for (const auto& p : r.predicates) {
        r.margin_deg = std::min(r.margin_deg, p.margin_deg);
        r.pass = r.pass && p.pass;
    }
    return r;
}

SynergyResult synergy_posture(const HandModel& model, const SynergyScenario& s,
                              const statics::SolverOptions& options) {
    return run_scenario(model, s, model.activation_from(s.activation), options);
}

SynergyResult synergy_posture(const HandModel& model, const std::string& name,
                              const statics::SolverOptions& options) {
    return synergy_posture(model, synergy_scenario(name), options);
}

nlohmann::json to_json(const HandModel& model, const SynergyResult& r) {
    nlohmann::json posture = nlohmann::json::object();
    for (auto d : model.digit_dofs(Digit::Index)) posture[model.dof(d).id] = rad_to_deg(r.report.posture[d]);
    nlohmann::json preds = nlohmann::json::array();
    for (const auto& p : r.predicates) {
        preds.push_back({{"predicate", p.description}, {"values_deg", p.values_deg},
                         {"margin_deg", p.margin_deg}, {"pass", p.pass}});
    }
    nlohmann::json act = nlohmann::json::object();
    for (std::size_t m = 0; m < model.muscle_count(); ++m)
        if (r.activation[m] != 0.0) act[model.muscle(m).id] = r.activation[m];
    return {{"scenario", r.name},
            {"activation", act},
            {"posture_deg", posture},
            {"converged", r.report.converged},
            {"residual_nmm", r.report.residual},
            {"iterations", r.report.iterations},
            {"saturated_dofs", r.report.saturated_dofs},
            {"predicates", preds},
            {"pass", r.pass}};
}

std::string to_csv(const HandModel& model, const SynergyResult& r) {
    std::ostringstream os;
    os.precision(9);
    os << "scenario,kind,name,value,pass\n";
    for (auto d : model.digit_dofs(Digit::Index)) {
        os << r.name << ",angle_deg," << model.dof(d).id << ',' << rad_to_deg(r.report.posture[d]) << ",\n";
    }
    for (const auto& p : r.predicates) {
        os << r.name << ",predicate_margin_deg,\"" << p.description << "\"," << p.margin_deg << ','
           << (p.pass ? "true" : "false") << '\n';
    }
    os << r.name << ",residual_nmm,," << r.report.residual << ',' << (r.report.converged ? "true" : "false") << '\n';
    os << r.name << ",verdict,,," << (r.pass ? "true" : "false") << '\n';
    return os.str();
}

AblationResult ablation(const HandModel& model, const std::string& scenario, const std::vector<std::string>& zeroed,
                        const statics::SolverOptions& options) {
    const auto& s = synergy_scenario(scenario);
    const auto base = synergy_posture(model, s, options);
    auto act = s.activation;
    for (const auto& m : zeroed) {
        model.muscle_index(m);
        act[m] = 0.0;
    }
    const auto abl = run_scenario(model, s, model.activation_from(act), options);
    const auto pip = model.dof_index(kPip), dip = model.dof_index(kDip);
    AblationResult r;
    r.scenario = scenario;
    r.zeroed = zeroed;
    r.base_ip_deg = rad_to_deg(base.report.posture[pip] + base.report.posture[dip]);
    r.ablated_ip_deg = rad_to_deg(abl.report.posture[pip] + abl.report.posture[dip]);
    r.converged = base.report.converged && abl.report.converged;
    r.degraded = r.converged && r.ablated_ip_deg > r.base_ip_deg;
    return r;
}

std::vector<AblationResult> standard_ablations(const HandModel& model, const statics::SolverOptions& options) {
    return {ablation(model, "beak", {"LUM_index"}, options),
            ablation(model, "full_extension", {"INT_radial_index", "INT_ulnar_index"}, options)};
}

nlohmann::json to_json(const AblationResult& r) {
    return {{"scenario", r.scenario},         {"zeroed", r.zeroed},     {"base_ip_flexion_deg", r.base_ip_deg},
            {"ablated_ip_flexion_deg", r.ablated_ip_deg}, {"converged", r.converged}, {"degraded", r.degraded}};
}

}  // namespace acb::protocols
