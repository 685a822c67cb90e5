#include "acb/landsmeer.hpp"
#include "acb/protocols.hpp"

#include <cmath>

namespace acb::protocols {

namespace {

struct Row {
    const char* tendon;
    std::map<std::string, double> angles;
    double calc;
    double measured;
};

const std::vector<Row>& rows() {
    static const std::vector<Row> r = {
        {"FDP_index", {{"index.MCP.flex", 79.4}, {"index.PIP.flex", 97.5}, {"index.DIP.flex", 74.7}}, 31.4, 32.7},
        {"FDS_index", {{"index.MCP.flex", 84.5}, {"index.PIP.flex", 91.1}}, 23.8, 26.1},
        {"EDC_index", {{"index.MCP.flex", 109.9}}, 14.7, 14.3},
    };
    return r;
}

}  // namespace

Table3Report table3_check(const HandModel& model, double tolerance) {
    Table3Report rep;
    rep.tolerance = tolerance;
    rep.pass = true;
    for (const auto& r : rows()) {
        Table3Row out;
        out.tendon = r.tendon;
        out.angles_deg = r.angles;
        out.calc = r.calc;
        out.measured = r.measured;
        out.computed = std::abs(landsmeer::path_excursion(model, r.tendon, model.posture_from_degrees(r.angles)).excursion);
        out.delta_calc = (out.computed - r.calc) / r.calc;
        out.delta_measured = (r.measured - r.calc) / r.calc;
        out.pass = std::abs(out.delta_calc) <= tolerance;
        rep.pass = rep.pass && out.pass;
        rep.rows.push_back(std::move(out));
    }
    return rep;
}

nlohmann::json to_json(const Table3Report& r) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : r.rows) {
        rows.push_back({{"tendon", row.tendon},
                        {"angles_deg", row.angles_deg},
                        {"computed_mm", row.computed},
                        {"calc_mm", row.calc},
                        {"measured_mm", row.measured},
                        {"delta_vs_calc", row.delta_calc},
                        {"measured_vs_calc", row.delta_measured},
                        {"pass", row.pass}});
    }
    return {{"tolerance", r.tolerance}, {"rows", rows}, {"pass", r.pass}};
}

}  // namespace acb::protocols
