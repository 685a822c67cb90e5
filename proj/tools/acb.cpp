#include "acb/landsmeer.hpp"
#include "acb/protocols.hpp"
#include "acb/server.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <memory>
#include <sstream>

using namespace acb;
using nlohmann::json;

namespace {

enum class Format { Text, Json, Csv };

struct Global {
    std::string model_path;
    std::string format = "text";
    bool json = false;
    bool csv = false;
    std::string output;
    std::uint64_t seed = 2024;
    int jobs = 1;

    Format fmt() const {
        if (json) return Format::Json;
        if (csv) return Format::Csv;
        if (format == "json") return Format::Json;
        if (format == "csv") return Format::Csv;
        return Format::Text;
    }
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

int log_level() {
    const char* v = std::getenv("ACB_LOG_LEVEL");
    if (!v) return 1;
    const std::string s = v;
    if (s == "quiet") return 0;
    if (s == "debug") return 2;
    return 1;
}

void debug(const std::string& msg) {
    if (log_level() >= 2) std::cerr << "[debug] " << msg << "\n";
}

class Out {
public:
    explicit Out(const std::string& path) {
        if (!path.empty()) {
            file_.open(path);
            if (!file_) throw UsageError("cannot write " + path);
        }
    }
    std::ostream& operator()() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

std::shared_ptr<const HandModel> load(const Global& g) {
    if (g.model_path.empty()) return std::make_shared<HandModel>(default_model());
    debug("loading model " + g.model_path);
    return std::make_shared<HandModel>(load_model_file(g.model_path));
}

std::string fixed(double v, int p = 2) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(p) << v;
    return os.str();
}

const char* verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

// --- subcommands ------------------------------------------------------------

int cmd_validate(const Global& g, const std::string& path_arg) {
    const std::string path = path_arg.empty() ? g.model_path : path_arg;
    std::vector<Violation> violations;
    if (path.empty()) {
        violations = validate(default_model().data());
    } else {
        std::ifstream in(path);
        if (!in) throw ModelError("cannot open " + path);
        json doc;
        try {
            doc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ModelError(std::string("not valid JSON: ") + e.what());
        }
        violations = validate(parse_model_data(doc));
    }
    Out out(g.output);
    if (g.fmt() == Format::Json) {
        json v = json::array();
        for (const auto& x : violations) v.push_back({{"rule", x.rule}, {"element", x.element}, {"detail", x.detail}});
        out() << json{{"valid", violations.empty()}, {"violations", v}}.dump(2) << "\n";
    } else {
        for (const auto& x : violations) out() << x.rule << " at " << x.element << ": " << x.detail << "\n";
        out() << (violations.empty() ? "model is valid" : std::to_string(violations.size()) + " violations") << "\n";
    }
    return violations.empty() ? 0 : 3;
}

int cmd_fit(const Global& g, const std::string& write_path) {
    const auto model = load(g);
    const auto r = fit_sheath_parameters(*model, table3_targets(*model));
    Out out(g.output);
    if (g.fmt() == Format::Json) {
        json t = json::array();
        for (const auto& f : r.tendons) {
            t.push_back({{"tendon", f.tendon}, {"scale", f.scale}, {"fitted_d_mm", f.fitted_d}, {"residuals_mm", f.residuals}});
        }
        out() << json{{"tendons", t}}.dump(2) << "\n";
    } else if (g.fmt() == Format::Csv) {
        out() << "tendon,scale,residual_mm\n";
        for (const auto& f : r.tendons) {
            for (double res : f.residuals) out() << f.tendon << "," << f.scale << "," << res << "\n";
        }
    } else {
        for (const auto& f : r.tendons) {
            out() << f.tendon << ": scale " << fixed(f.scale, 5) << ", d =";
            for (double d : f.fitted_d) out() << " " << fixed(d, 4);
            out() << " mm, residual";
            for (double res : f.residuals) out() << " " << fixed(res, 4);
            out() << " mm\n";
        }
    }
    if (!write_path.empty()) {
        std::ofstream w(write_path);
        if (!w) throw UsageError("cannot write " + write_path);
        w << serialize(r.fitted).dump(2) << "\n";
    }
    return 0;
}

int cmd_table3(const Global& g, double tolerance) {
    const auto model = load(g);
    const auto r = protocols::table3_check(*model, tolerance);
    Out out(g.output);
    if (g.fmt() == Format::Json) {
        out() << protocols::to_json(r).dump(2) << "\n";
    } else if (g.fmt() == Format::Csv) {
        out() << "tendon,computed_mm,calc_mm,measured_mm,delta_calc,delta_measured,pass\n";
        for (const auto& row : r.rows) {
            out() << row.tendon << "," << row.computed << "," << row.calc << "," << row.measured << "," << row.delta_calc
                  << "," << row.delta_measured << "," << (row.pass ? 1 : 0) << "\n";
        }
    } else {
        for (const auto& row : r.rows) {
            out() << std::left << std::setw(10) << row.tendon << " computed " << fixed(row.computed) << " mm, calc "
                  << fixed(row.calc, 1) << " (" << fixed(100 * row.delta_calc, 2) << "%), measured " << fixed(row.measured, 1)
                  << " (" << fixed(100 * row.delta_measured, 1) << "%)  " << verdict(row.pass) << "\n";
        }
        out() << "table3 " << verdict(r.pass) << "\n";
    }
    return r.pass ? 0 : 1;
}

int cmd_synergy(const Global& g, std::vector<std::string> names, bool ablate) {
    const auto model = load(g);
    if (names.empty()) {
        for (const auto& s : protocols::synergy_scenarios()) names.push_back(s.name);
    }
    std::vector<protocols::SynergyResult> results;
    for (const auto& n : names) {
        try {
            results.push_back(protocols::synergy_posture(*model, n));
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    std::vector<protocols::AblationResult> ablations;
    if (ablate) ablations = protocols::standard_ablations(*model);
    bool pass = true;
    for (const auto& r : results) pass = pass && r.pass;
    for (const auto& a : ablations) pass = pass && a.degraded;

    Out out(g.output);
    if (g.fmt() == Format::Json) {
        json j = json::array();
        for (const auto& r : results) j.push_back(protocols::to_json(*model, r));
        json doc{{"scenarios", j}, {"pass", pass}};
        if (ablate) {
            json a = json::array();
            for (const auto& x : ablations) a.push_back(protocols::to_json(x));
            doc["ablations"] = a;
        }
        out() << doc.dump(2) << "\n";
    } else if (g.fmt() == Format::Csv) {
        bool header = true;
        for (const auto& r : results) {
            std::string csv = protocols::to_csv(*model, r);
            if (!header) csv = csv.substr(csv.find('\n') + 1);
            out() << csv;
            header = false;
        }
    } else {
        for (const auto& r : results) {
            out() << r.name << ": " << verdict(r.pass) << " (margin " << fixed(r.margin_deg, 1) << " deg, residual "
                  << fixed(r.report.residual, 3) << ", " << r.report.iterations << " iterations)\n";
            for (const auto& p : r.predicates) {
                out() << "  " << verdict(p.pass) << "  " << p.description << "  [";
                for (std::size_t i = 0; i < p.values_deg.size(); ++i) out() << (i ? ", " : "") << fixed(p.values_deg[i], 1);
                out() << "]\n";
            }
        }
        for (const auto& a : ablations) {
            out() << "ablation " << a.scenario << " without";
            for (const auto& z : a.zeroed) out() << " " << z;
            out() << ": IP flexion " << fixed(a.base_ip_deg, 1) << " -> " << fixed(a.ablated_ip_deg, 1) << " deg  "
                  << (a.degraded ? "degraded" : "NOT degraded") << "\n";
        }
    }
    return pass ? 0 : 1;
}

int cmd_trajectory(const Global& g, std::vector<std::string> names) {
    const auto model = load(g);
    if (names.empty()) {
        for (const auto& s : protocols::trajectory_scenarios()) names.push_back(s.name);
    }
    Out out(g.output);
    bool pass = true;
    json doc = json::array();
    bool header = true;
    for (const auto& n : names) {
        const protocols::TrajectoryScenario* s = nullptr;
        try {
            s = &protocols::trajectory_scenario(n);
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
        const auto t = protocols::run_trajectory(*model, *s);
        protocols::TrajectoryCheck c;
        if (n == "index_flexion") c = protocols::check_index_flexion(*model, t);
        else if (n == "thumb_flexion") c = protocols::check_thumb_plane(*model, t);
        else c = protocols::check_thumb_circulation(*model, t);
        pass = pass && c.pass;
        if (g.fmt() == Format::Json) {
            auto j = kin::trajectory_json(t);
            j["name"] = n;
            j["check"] = protocols::to_json(c);
            doc.push_back(j);
        } else if (g.fmt() == Format::Csv) {
            std::string csv = kin::trajectory_csv(t, s->projection);
            std::istringstream lines(csv);
            std::string line;
            bool first = true;
            while (std::getline(lines, line)) {
                if (first) {
                    if (header) out() << "scenario," << line << "\n";
                    first = false;
                    continue;
                }
                out() << n << "," << line << "\n";
            }
            header = false;
        } else {
            out() << n << ": " << t.points.size() << " points; " << c.property << " = " << fixed(c.value, 2) << "  "
                  << verdict(c.pass) << "\n";
        }
    }
    if (g.fmt() == Format::Json) out() << json{{"trajectories", doc}, {"pass", pass}}.dump(2) << "\n";
    return pass ? 0 : 1;
}

int cmd_kapandji(const Global& g, const std::vector<int>& ids, bool no_oracle) {
    const auto model = load(g);
    std::vector<protocols::KapandjiStage> stages;
    for (const auto& s : protocols::kapandji_stages()) {
        if (ids.empty() || std::find(ids.begin(), ids.end(), s.id) != ids.end()) stages.push_back(s);
    }
    if (stages.empty()) throw UsageError("no matching Kapandji stages");
    protocols::KapandjiOptions opt;
    opt.run_oracle = !no_oracle;
    opt.search.seed = g.seed;
    opt.oracle_seed = g.seed;
    const auto r = protocols::kapandji_test(*model, stages, opt, g.jobs);
    Out out(g.output);
    if (g.fmt() == Format::Json) {
        out() << protocols::to_json(r).dump(2) << "\n";
    } else if (g.fmt() == Format::Csv) {
        out() << "stage,name,distance_mm,reached,oracle_distance_mm,oracle_feasible\n";
        for (const auto& s : r.stages) {
            out() << s.id << "," << s.name << "," << s.distance_mm << "," << (s.reached ? 1 : 0) << ","
                  << (s.oracle_run ? std::to_string(s.oracle_distance_mm) : "") << ","
                  << (s.oracle_run ? (s.oracle_feasible ? "1" : "0") : "") << "\n";
        }
    } else {
        for (const auto& s : r.stages) {
            out() << "stage " << s.id << " " << std::left << std::setw(18) << s.name << " distance " << fixed(s.distance_mm)
                  << " mm";
            if (s.oracle_run) out() << ", oracle " << fixed(s.oracle_distance_mm) << " mm";
            out() << "  " << (s.reached ? "reached" : "NOT reached") << "\n";
        }
        out() << "kapandji " << verdict(r.pass) << (r.consistent ? "" : " (search and oracle disagree)") << "\n";
    }
    return r.pass ? 0 : 1;
}

int cmd_grasp(const Global& g, std::vector<std::string> names, bool all) {
    const auto model = load(g);
    if (all || names.empty()) {
        names.clear();
        for (const auto& p : protocols::grasp_presets()) names.push_back(p.name);
    }
    std::vector<protocols::GraspReport> reports;
    for (const auto& n : names) {
        try {
            reports.push_back(protocols::grasp_check(*model, n));
        } catch (const DomainError& e) {
            throw UsageError(e.what());
        }
    }
    bool pass = true;
    for (const auto& r : reports) pass = pass && r.pass;
    Out out(g.output);
    if (g.fmt() == Format::Json) {
        json j = json::array();
        for (const auto& r : reports) j.push_back(protocols::to_json(r));
        out() << json{{"grasps", j}, {"pass", pass}}.dump(2) << "\n";
    } else if (g.fmt() == Format::Csv) {
        out() << "name,class,within_limits,segment_contacts,palm_contact,pad_contacts,opposing_pads,side_contacts,"
                 "max_penetration_mm,pass\n";
        for (const auto& r : reports) {
            out() << r.name << "," << protocols::to_string(r.cls) << "," << r.within_limits << "," << r.segment_contacts
                  << "," << r.palm_contact << "," << r.pad_contacts << "," << r.opposing_pads << "," << r.side_contacts
                  << "," << r.max_penetration_mm << "," << r.pass << "\n";
        }
    } else {
        for (const auto& r : reports) {
            out() << std::left << std::setw(24) << r.name << std::setw(13) << protocols::to_string(r.cls) << verdict(r.pass)
                  << "  " << r.detail << "\n";
        }
    }
    return pass ? 0 : 1;
}

int cmd_workspace(const Global& g, const std::string& digit_name, int samples) {
    const auto model = load(g);
    Digit digit = Digit::Index;
    bool found = false;
    for (std::size_t d = 0; d < kDigitCount; ++d) {
        if (digit_name == to_string(static_cast<Digit>(d))) {
            digit = static_cast<Digit>(d);
            found = true;
        }
    }
    if (!found) throw UsageError("unknown digit '" + digit_name + "'");
    std::vector<kin::MuscleBound> bounds;
    for (auto m : model->digit_muscles(digit)) bounds.push_back({model->data().muscles[m].id, 0.0, 1.0});
    const auto cloud = kin::workspace_sample(*model, digit, bounds, samples, g.seed);
    Out out(g.output);
    if (g.fmt() == Format::Json) {
        out() << kin::cloud_json(cloud).dump(2) << "\n";
    } else if (g.fmt() == Format::Csv) {
        out() << "x_mm,y_mm,z_mm\n";
        for (const auto& p : cloud.points) out() << p.x() << "," << p.y() << "," << p.z() << "\n";
    } else {
        Vec3 lo = Vec3::Constant(1e9), hi = Vec3::Constant(-1e9);
        for (const auto& p : cloud.points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
        out() << digit_name << ": " << cloud.points.size() << " pad points, " << cloud.excluded << " excluded\n";
        if (!cloud.points.empty()) {
            out() << "  x [" << fixed(lo.x(), 1) << ", " << fixed(hi.x(), 1) << "] y [" << fixed(lo.y(), 1) << ", "
                  << fixed(hi.y(), 1) << "] z [" << fixed(lo.z(), 1) << ", " << fixed(hi.z(), 1) << "] mm\n";
        }
    }
    return 0;
}

int cmd_serve(const Global& g, const std::string& address, int port) {
    auto model = load(g);
    if (port < 0 || port > 65535) throw UsageError("port out of range");
    service::Server server(model, g.model_path.empty() ? "default" : g.model_path, address, static_cast<std::uint16_t>(port));
    std::cerr << "listening on ws://" << address << ":" << server.port() << "\n";
    server.run();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tendon-driven hand simulator"};
    app.require_subcommand(1, 1);
    app.fallthrough();
    Global g;
    app.add_option("--model", g.model_path, "model document (default: built-in model)");
    app.add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
    app.add_flag("--json", g.json, "same as --format json");
    app.add_flag("--csv", g.csv, "same as --format csv");
    app.add_option("-o,--output", g.output, "write the report to a file");
    app.add_option("--seed", g.seed, "seed for sampling and search");
    app.add_option("--jobs", g.jobs, "parallel workers")->check(CLI::Range(1, 64));

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "check a model document against the structural rules");
    validate_cmd->add_option("path", validate_path, "model document (default: --model or built-in)");

    std::string fit_write;
    auto* fit_cmd = app.add_subcommand("fit", "fit FDP/FDS sheath distances to the excursion table");
    fit_cmd->add_option("--write", fit_write, "write the fitted model document");
    fit_cmd->footer("CSV columns: tendon,scale,residual_mm");

    double tol = 0.02;
    auto* table3_cmd = app.add_subcommand("table3", "excursion table check");
    table3_cmd->add_option("--tolerance", tol, "relative tolerance against the calc column");
    table3_cmd->footer("CSV columns: tendon,computed_mm,calc_mm,measured_mm,delta_calc,delta_measured,pass");

    std::vector<std::string> synergy_names;
    bool synergy_all = false, ablate = false;
    auto* synergy_cmd = app.add_subcommand("synergy", "index-finger synergy postures");
    synergy_cmd->add_option("names", synergy_names, "claw, full_flexion, full_extension, beak (default all)");
    synergy_cmd->add_flag("--all", synergy_all, "run every scenario");
    synergy_cmd->add_flag("--ablations", ablate, "also run the LUM and INT ablations");
    synergy_cmd->footer("CSV columns: scenario,dof,angle_deg, then predicate rows (see README)");

    std::vector<std::string> traj_names;
    bool traj_all = false;
    auto* traj_cmd = app.add_subcommand("trajectory", "fingertip trajectories");
    traj_cmd->add_option("names", traj_names, "index_flexion, thumb_flexion, thumb_opposition (default all)");
    traj_cmd->add_flag("--all", traj_all, "run every scenario");
    traj_cmd->footer("CSV columns: scenario,step,x_mm,y_mm,z_mm,u_mm,v_mm,residual,converged");

    std::vector<int> stage_ids;
    bool no_oracle = false;
    auto* kap_cmd = app.add_subcommand("kapandji", "thumb opposition test");
    kap_cmd->add_option("stages", stage_ids, "stage ids 1-8 (default all)");
    kap_cmd->add_flag("--all", "run every stage");
    kap_cmd->add_flag("--no-oracle", no_oracle, "skip the sampling oracle");
    kap_cmd->footer("CSV columns: stage,name,distance_mm,reached,oracle_distance_mm,oracle_feasible");

    std::vector<std::string> grasp_names;
    bool grasp_all = false;
    auto* grasp_cmd = app.add_subcommand("grasp", "grasp taxonomy presets");
    grasp_cmd->add_option("names", grasp_names, "preset names, case-insensitive (default all)");
    grasp_cmd->add_flag("--all", grasp_all, "check all 33 presets");
    grasp_cmd->footer(
        "CSV columns: name,class,within_limits,segment_contacts,palm_contact,pad_contacts,opposing_pads,"
        "side_contacts,max_penetration_mm,pass");

    std::string ws_digit = "index";
    int ws_samples = 500;
    auto* ws_cmd = app.add_subcommand("workspace", "sample a digit's reachable pad positions");
    ws_cmd->add_option("--digit", ws_digit, "thumb, index, middle, ring or little");
    ws_cmd->add_option("--samples", ws_samples, "number of activation samples")->check(CLI::PositiveNumber);
    ws_cmd->footer("CSV columns: x_mm,y_mm,z_mm");

    std::string address = "127.0.0.1";
    int port = 8765;
    auto* serve_cmd = app.add_subcommand("serve", "websocket simulation service");
    serve_cmd->add_option("--port", port, "TCP port");
    serve_cmd->add_option("--address", address, "bind address");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*validate_cmd) return cmd_validate(g, validate_path);
        if (*fit_cmd) return cmd_fit(g, fit_write);
        if (*table3_cmd) return cmd_table3(g, tol);
        if (*synergy_cmd) return cmd_synergy(g, synergy_all ? std::vector<std::string>{} : synergy_names, ablate);
        if (*traj_cmd) return cmd_trajectory(g, traj_all ? std::vector<std::string>{} : traj_names);
        if (*kap_cmd) return cmd_kapandji(g, stage_ids, no_oracle);
        if (*grasp_cmd) return cmd_grasp(g, grasp_names, grasp_all);
        if (*ws_cmd) return cmd_workspace(g, ws_digit, ws_samples);
        if (*serve_cmd) return cmd_serve(g, address, port);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ModelError& e) {
        std::cerr << "model error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
