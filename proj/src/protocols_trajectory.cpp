#include "acb/protocols.hpp"

#include <cmath>

namespace acb::protocols {

const std::vector<TrajectoryScenario>& trajectory_scenarios() {
    static const std::vector<TrajectoryScenario> s = {
        {"index_flexion", Digit::Index, {},
         {{"FDP_index", 0.6}, {"FDS_index", 0.6}, {"INT_radial_index", 0.4}, {"INT_ulnar_index", 0.4}}, 30,
         kin::Projection::Sagittal},
        {"thumb_flexion", Digit::Thumb, {}, {{"FPL", 0.5}, {"FPB", 0.3}}, 30, kin::Projection::Palmar},
        {"thumb_opposition", Digit::Thumb, {}, {{"OP", 1.0}, {"APB", 0.5}, {"FPL", 0.3}}, 30,
         kin::Projection::Palmar},
    };
    return s;
}

const TrajectoryScenario& trajectory_scenario(const std::string& name) {
    for (const auto& s : trajectory_scenarios())
        if (s.name == name) return s;
    throw DomainError("unknown trajectory scenario '" + name + "'");
}

kin::Trajectory run_trajectory(const HandModel& model, const TrajectoryScenario& s,
                               const statics::SolverOptions& options) {
    return kin::fingertip_trajectory(model, s.digit, model.activation_from(s.start), model.activation_from(s.end),
                                     s.steps, options);
}

TrajectoryCheck check_index_flexion(const HandModel& model, const kin::Trajectory& t) {
    TrajectoryCheck c;
    c.name = "index_flexion";
    c.property = "fingertip-to-MCP distance non-increasing";
    c.converged = !t.first_unconverged.has_value();
    std::vector<double> dist;
    for (const auto& p : t.postures) {
        const auto f = kin::forward_kinematics(model, p);
        dist.push_back((f.digit(t.digit).tip - kin::mcp_centre(model, f, t.digit)).norm());
    }
    bool mono = true;
    double worst = 0.0;  // largest step-to-step increase
    for (std::size_t k = 1; k < dist.size(); ++k) {
        worst = std::max(worst, dist[k] - dist[k - 1]);
        if (dist[k] > dist[k - 1] + 1e-9) mono = false;
    }
    c.value = dist.empty() ? 0.0 : dist.front() - dist.back();
    c.pass = c.converged && mono && c.value > 0.0;
    return c;
}

TrajectoryCheck check_thumb_plane(const HandModel&, const kin::Trajectory& t, double max_deg) {
    TrajectoryCheck c;
    c.name = "thumb_flexion";
    c.property = "best-fit plane angle to palm (deg)";
    c.converged = !t.first_unconverged.has_value();
    std::vector<Vec3> pts;
    for (const auto& p : t.points) pts.push_back(p.point);
    const auto plane = kin::fit_plane(pts);
    c.value = rad_to_deg(std::acos(std::min(1.0, std::abs(plane.normal.z()))));
    c.pass = c.converged && c.value < max_deg;
    return c;
}

TrajectoryCheck check_thumb_circulation(const HandModel& model, const kin::Trajectory& t) {
    TrajectoryCheck c;
    c.name = "thumb_opposition";
    c.property = "radial coordinate relative to index fingertip changes sign";
    c.converged = !t.first_unconverged.has_value();
    const double ref = kin::forward_kinematics(model, model.rest_posture()).digit(Digit::Index).tip.x();
    double lo = 1e9, hi = -1e9;
    for (const auto& p : t.points) {
        lo = std::min(lo, p.point.x() - ref);
        hi = std::max(hi, p.point.x() - ref);
    }
    c.value = std::min(hi, -lo);  // how far it gets on the weaker side
    c.pass = c.converged && lo < 0.0 && hi > 0.0;
    return c;
}

std::vector<TrajectoryCheck> trajectory_checks(const HandModel& model, const statics::SolverOptions& options) {
    return {check_index_flexion(model, run_trajectory(model, trajectory_scenario("index_flexion"), options)),
            check_thumb_plane(model, run_trajectory(model, trajectory_scenario("thumb_flexion"), options)),
            check_thumb_circulation(model, run_trajectory(model, trajectory_scenario("thumb_opposition"), options))};
}

nlohmann::json to_json(const TrajectoryCheck& c) {
    return {{"scenario", c.name}, {"property", c.property}, {"value", c.value},
            {"converged", c.converged}, {"pass", c.pass}};
}

}  // namespace acb::protocols
