// Offline tuner for the synergy scenario activations. Maximizes the worst
// predicate margin over the pattern and two scaled copies of it (robustness
// to ±3% activation), and prints the best magnitudes per scenario.
#include "acb/protocols.hpp"
#include "acb/search.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <map>
#include <iostream>

using namespace acb;

int main(int argc, char** argv) {
    CLI::App app{"tune synergy scenario activations"};
    std::vector<std::string> names{"claw", "full_flexion", "full_extension", "beak"};
    int restarts = 8, evals = 150;
    app.add_option("scenarios", names, "scenarios to tune");
    app.add_option("--restarts", restarts);
    app.add_option("--evals", evals);
    CLI11_PARSE(app, argc, argv);

    const auto& model = default_model();
    for (const auto& name : names) {
        const auto& sc = protocols::synergy_scenario(name);
        // Radial and ulnar interossei of a finger share one variable.
        std::vector<std::string> muscles;
        std::vector<double> start;
        for (const auto& [m, v] : sc.activation) {
            if (m.rfind("INT_ulnar_", 0) == 0 && sc.activation.count("INT_radial_" + m.substr(10))) continue;
            muscles.push_back(m);
            start.push_back(v);
        }
        auto apply = [&](protocols::SynergyScenario& s, std::size_t i, double v) {
            s.activation[muscles[i]] = v;
            if (muscles[i].rfind("INT_radial_", 0) == 0) {
                const auto twin = "INT_ulnar_" + muscles[i].substr(11);
                if (s.activation.count(twin)) s.activation[twin] = v;
            }
        };
        auto score = [&](const std::vector<double>& x) {
            double worst = 1e9;
            for (double scale : {1.0, 0.97, 1.03}) {
                auto s = sc;
                for (std::size_t i = 0; i < x.size(); ++i) apply(s, i, std::min(1.0, scale * x[i]));
                const auto r = protocols::synergy_posture(model, s);
                if (!r.report.converged) return 1e3;
                worst = std::min(worst, r.margin_deg);
            }
            // Ablation scenarios must also degrade by at least 5 deg of IP flexion.
            const std::map<std::string, std::vector<std::string>> ablate = {
                {"beak", {"LUM_index"}}, {"full_extension", {"INT_radial_index", "INT_ulnar_index"}}};
            if (auto it = ablate.find(name); it != ablate.end()) {
                auto s = sc;
                for (std::size_t i = 0; i < x.size(); ++i) apply(s, i, x[i]);
                auto base = protocols::synergy_posture(model, s);
                for (const auto& m : it->second) s.activation[m] = 0.0;
                auto abl = protocols::synergy_posture(model, s);
                const auto pip = model.dof_index("index.PIP.flex"), dip = model.dof_index("index.DIP.flex");
                const double gain = rad_to_deg(abl.report.posture[pip] + abl.report.posture[dip] -
                                               base.report.posture[pip] - base.report.posture[dip]);
                worst = std::min(worst, gain - 5.0);
            }
            return -worst;
        };
        search::PatternSearchOptions opt;
        opt.restarts = restarts;
        opt.evaluations_per_restart = evals;
        opt.initial_step = 0.2;
        opt.seed = 7;
        const std::vector<double> lo(muscles.size(), 0.0), hi(muscles.size(), 1.0);
        const auto best = search::pattern_search(score, lo, hi, opt, start);
        std::cout << name << ": robust margin " << -best.value << " deg\n";
        for (std::size_t i = 0; i < muscles.size(); ++i) std::cout << "  " << muscles[i] << " = " << best.x[i] << "\n";
        for (double scale : {1.0, 0.97, 1.03}) {
            auto s = sc;
            for (std::size_t i = 0; i < best.x.size(); ++i) apply(s, i, std::min(1.0, scale * best.x[i]));
            const auto r = protocols::synergy_posture(model, s);
            std::cout << "  x" << scale << ":";
            for (auto d : model.digit_dofs(Digit::Index)) std::cout << ' ' << rad_to_deg(r.report.posture[d]);
            std::cout << "  margin " << r.margin_deg << " conv " << r.report.converged << "\n";
        }
    }
    return 0;
}
