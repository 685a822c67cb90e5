// Acceptance run: one PASS/FAIL line per primary criterion, each with its
// runtime cap. Exit status is non-zero if any criterion fails.
#include "acb/landsmeer.hpp"
#include "acb/protocols.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

using namespace acb;

namespace {

struct Outcome {
    bool pass{false};
    std::string detail;
};

int failures = 0;

void criterion(const std::string& name, double cap_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = sec < cap_s;
    const bool pass = o.pass && in_time;
    if (!pass) ++failures;
    std::cout << (pass ? "PASS" : "FAIL") << "  " << std::left << std::setw(22) << name << " " << o.detail << " ["
              << std::fixed << std::setprecision(3) << sec << " s, cap " << cap_s << " s"
              << (in_time ? "" : ", OVER CAP") << "]\n";
}

std::string num(double v, int p = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(p) << v;
    return os.str();
}

Outcome table3() {
    const auto r = protocols::table3_check(default_model(), 0.02);
    std::ostringstream os;
    for (const auto& row : r.rows) os << row.tendon << " " << num(row.computed) << " mm; ";
    return {r.pass && r.rows.size() == 3, os.str()};
}

Outcome landsmeer_suite() {
    using namespace landsmeer;
    const double r = 8.0, y = 7.0, d = 6.5;
    double worst_fd = 0.0, jump = 0.0;
    bool monotone = true;
    for (int m = 0; m < 3; ++m) {
        const auto model = static_cast<LandsmeerModel>(m);
        double prev = -1.0;
        for (int i = 0; i < 100; ++i) {
            const double th = kPi * (i + 0.5) / 100.0;
            const double h = 1e-5;
            const double fd = (segment_excursion(model, r, y, d, th + h) - segment_excursion(model, r, y, d, th - h)) / (2 * h);
            const double arm = segment_moment_arm(model, r, y, d, th);
            worst_fd = std::max(worst_fd, std::abs(arm - fd) / std::abs(arm));
            const double e = segment_excursion(model, r, y, d, th);
            if (!(e > prev)) monotone = false;
            prev = e;
        }
    }
    const double below = std::nextafter(kSeriesThreshold, 0.0);
    jump = std::abs(excursion_III(y, d, kSeriesThreshold) - excursion_III(y, d, below));
    const bool pass = worst_fd < 1e-6 && jump < 1e-9 && monotone;
    return {pass, "max FD rel err " + num(worst_fd * 1e9, 3) + "e-9, switch jump " + num(jump * 1e12, 3) +
                      "e-12 mm, monotone " + (monotone ? "yes" : "no")};
}

Outcome synergy_suite() {
    const auto& m = default_model();
    bool pass = true;
    std::ostringstream os;
    for (const auto& s : protocols::synergy_scenarios()) {
        const auto r = protocols::synergy_posture(m, s);
        const bool ok = r.pass && r.report.converged && r.report.residual < 0.5;
        pass = pass && ok;
        os << s.name << (ok ? " ok" : " FAILED") << " (res " << num(r.report.residual, 3) << "); ";
    }
    for (const auto& a : protocols::standard_ablations(m)) {
        pass = pass && a.degraded && a.converged;
        os << "ablated " << a.scenario << " IP " << num(a.base_ip_deg, 1) << "->" << num(a.ablated_ip_deg, 1) << " deg; ";
    }
    return {pass, os.str()};
}

Outcome trajectory_suite() {
    bool pass = true;
    std::ostringstream os;
    for (const auto& c : protocols::trajectory_checks(default_model())) {
        pass = pass && c.pass && c.converged;
        os << c.name << " " << num(c.value) << (c.pass ? "" : " FAILED") << "; ";
    }
    return {pass, os.str()};
}

Outcome kapandji() {
    protocols::KapandjiOptions opt;  // 16 restarts x 400 evaluations, 2000 oracle samples
    const auto r = protocols::kapandji_test(default_model(), protocols::kapandji_stages(), opt, 1);
    bool pass = r.stages.size() == 8 && r.pass && r.consistent;
    double worst = 0.0, worst_oracle = 0.0;
    for (const auto& s : r.stages) {
        pass = pass && s.reached && s.oracle_run && s.oracle_feasible && s.distance_mm < 5.0;
        worst = std::max(worst, s.distance_mm);
        worst_oracle = std::max(worst_oracle, s.oracle_distance_mm);
    }
    return {pass, std::to_string(r.stages.size()) + " stages, worst search distance " + num(worst) +
                      " mm, worst oracle distance " + num(worst_oracle) + " mm (tolerance 5 mm)"};
}

Outcome grasp() {
    const auto& m = default_model();
    const auto& presets = protocols::grasp_presets();
    int limits = 0, with_object = 0, contact_ok = 0;
    for (const auto& p : presets) {
        const auto r = protocols::grasp_check(m, p);
        limits += r.within_limits;
        if (r.has_object) {
            ++with_object;
            contact_ok += r.contact_pass;
        }
    }
    const bool pass = presets.size() == 33 && limits == 33 && contact_ok == with_object;
    return {pass, std::to_string(presets.size()) + " presets, " + std::to_string(limits) + " within limits, " +
                      std::to_string(contact_ok) + "/" + std::to_string(with_object) + " object presets meet contact criteria"};
}

Outcome solver_contracts() {
    const auto& m = default_model();
    const ActivationPattern zero(m.muscle_count());
    const auto rest = statics::solve_equilibrium(m, zero);
    const bool rest_ok = rest.converged && rest.iterations <= 1 && rest.posture == m.rest_posture();

    const auto claw = protocols::synergy_scenario("claw");
    const auto a = m.activation_from(claw.activation);
    const auto r1 = statics::solve_equilibrium(m, a);
    const auto r2 = statics::solve_equilibrium(m, a);
    const auto k1 = protocols::kapandji_stage(m, protocols::kapandji_stages().back());
    const auto k2 = protocols::kapandji_stage(m, protocols::kapandji_stages().back());
    const bool deterministic = r1 == r2 && k1.posture == k2.posture && k1.distance_mm == k2.distance_mm;

    // Raising FDP never reduces any index flexion angle, from 20 random baselines.
    std::mt19937_64 rng(20240611);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    statics::SolverOptions tight;
    tight.tolerance = 1e-3;
    tight.max_iter = 20000;
    const char* others[] = {"FDS_index", "EDC_index", "INT_radial_index", "INT_ulnar_index", "LUM_index"};
    const char* dofs[] = {"index.MCP.flex", "index.PIP.flex", "index.DIP.flex"};
    int monotone = 0;
    for (int b = 0; b < 20; ++b) {
        std::map<std::string, double> base;
        for (const char* n : others) base[n] = u(rng);
        bool ok = true;
        std::vector<double> prev(3, -1e9);
        for (int k = 0; k <= 10; ++k) {
            auto act = base;
            act["FDP_index"] = k / 10.0;
            const auto r = statics::solve_equilibrium(m, m.activation_from(act), tight);
            ok = ok && r.converged;
            for (int j = 0; j < 3; ++j) {
                const double v = r.posture[m.dof_index(dofs[j])];
                if (v < prev[j] - 1e-6) ok = false;
                prev[j] = v;
            }
        }
        monotone += ok;
    }
    const bool pass = rest_ok && deterministic && monotone == 20;
    return {pass, std::string("rest in ") + std::to_string(rest.iterations) + " iterations, deterministic " +
                      (deterministic ? "yes" : "no") + ", FDP monotone on " + std::to_string(monotone) + "/20 baselines"};
}

}  // namespace

int main() {
    criterion("table3", 1.0, table3);
    criterion("landsmeer-properties", 1.0, landsmeer_suite);
    criterion("synergy", 10.0, synergy_suite);
    criterion("trajectory", 30.0, trajectory_suite);
    criterion("kapandji", 120.0, kapandji);
    criterion("grasp-taxonomy", 10.0, grasp);
    criterion("solver-contracts", 60.0, solver_contracts);
    std::cout << (failures == 0 ? "all primary criteria pass" : std::to_string(failures) + " primary criteria FAIL") << "\n";
    return failures == 0 ? 0 : 1;
}
