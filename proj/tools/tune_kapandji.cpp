// Broad search per Kapandji stage; prints the best thumb activation so the
// stage boxes in src/kapandji_stages.inc can be narrowed around it.
#include "acb/protocols.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Kapandji stage tuning"};
    std::vector<int> ids;
    int restarts = 8, evals = 300;
    bool oracle = false;
    std::string emit;
    double width = 0.1;
    app.add_option("stages", ids, "stage ids (default all)");
    app.add_option("--restarts", restarts);
    app.add_option("--evals", evals);
    app.add_flag("--oracle", oracle);
    app.add_option("--emit", emit, "write narrowed stage boxes to this include file");
    app.add_option("--width", width, "initial half-width of the narrowed box");
    CLI11_PARSE(app, argc, argv);

    const acb::HandModel model = acb::default_model();
    acb::protocols::KapandjiOptions opt;
    opt.search.restarts = restarts;
    opt.search.evaluations_per_restart = evals;
    opt.run_oracle = oracle;
    std::ostringstream inc;
    inc << std::setprecision(4);
    inc << "    static const std::vector<KapandjiStage> stages = {\n";
    for (const auto& s : acb::protocols::kapandji_stages()) {
        if (!ids.empty() && std::find(ids.begin(), ids.end(), s.id) == ids.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        const auto r = acb::protocols::kapandji_stage(model, s, opt);
        const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::cout << s.id << " " << s.name << ": d=" << r.distance_mm << " mm, evals " << r.evaluations
                  << ", " << sec << " s";
        if (r.oracle_run) std::cout << ", oracle " << r.oracle_distance_mm << " excl " << r.oracle_excluded;
        std::cout << "\n  target " << r.target.transpose() << "  pad " << r.thumb_pad.transpose() << "\n ";
        for (const auto& [m, v] : r.activation) std::cout << " " << m << "=" << v;
        std::cout << "\n";
        if (emit.empty()) continue;

        // Shrink a box around the best point until the sampling oracle
        // lands inside the tolerance with some margin.
        acb::protocols::KapandjiStage narrowed = s;
        acb::protocols::KapandjiOptions check;
        for (double w = width; w > 1e-3; w *= 0.5) {
            narrowed.bounds.clear();
            for (const auto& [m, v] : r.activation) {
                narrowed.bounds.push_back({m, std::max(0.0, v - w), std::min(1.0, v + w)});
            }
            const auto c = acb::protocols::kapandji_stage(model, narrowed, check);
            std::cout << "  width " << w << ": search " << c.distance_mm << ", oracle " << c.oracle_distance_mm << "\n";
            if (c.reached && c.oracle_feasible && c.oracle_distance_mm < 0.6 * s.tolerance_mm) break;
        }
        std::string digit = acb::to_string(s.digit);
        digit[0] = static_cast<char>(std::toupper(digit[0]));
        inc << "        {" << s.id << ", \"" << s.name << "\", Digit::" << digit
            << ", TargetKind::" << (s.kind == acb::protocols::TargetKind::McpPad ? "McpPad" : "Fingertip") << ", {";
        bool first = true;
        for (const auto& [m, v] : s.finger_activation) {
            inc << (first ? "" : ", ") << "{\"" << m << "\", " << v << "}";
            first = false;
        }
        inc << "},\n         box({";
        first = true;
        for (const auto& b : narrowed.bounds) {
            if (b.hi <= 0.0) continue;
            inc << (first ? "" : ", ") << "{\"" << b.muscle << "\", {" << b.lo << ", " << b.hi << "}}";
            first = false;
        }
        inc << "})},\n";
    }
    if (!emit.empty()) {
        inc << "    };\n";
        std::ofstream(emit) << inc.str();
    }
}
