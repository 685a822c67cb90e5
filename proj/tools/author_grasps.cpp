// Authors the grasp preset table: for each preset a joint-angle posture and
// object placement are optimised so the desired elements touch the object,
// nothing penetrates, and the thumb stays clear of the fingers. The result is
// written as src/grasp_presets.inc and re-checked with grasp_check.
#include "acb/protocols.hpp"
#include "acb/search.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>

using namespace acb;
using protocols::ObjectPrimitive;
using K = ObjectPrimitive::Kind;

namespace {

struct Spec {
    int number;
    ObjectPrimitive object;
    std::vector<std::string> want;       // must touch; "?name" = soft preference
    std::map<std::string, double> tmpl;  // template posture, degrees
    std::vector<std::pair<std::string, std::string>> oppose;  // pad pairs with opposing normals
};

ObjectPrimitive sphere(Vec3 c, double r) {
    ObjectPrimitive o;
    o.kind = K::Sphere;
    o.centre = c;
    o.radius = r;
    return o;
}

ObjectPrimitive cylinder(Vec3 c, Vec3 axis, double r, double len) {
    ObjectPrimitive o;
    o.kind = K::Cylinder;
    o.centre = c;
    o.axis = axis.normalized();
    o.radius = r;
    o.length = len;
    return o;
}

ObjectPrimitive card(Vec3 c, Vec3 normal, double side, double t) {
    ObjectPrimitive o;
    o.kind = K::Card;
    o.centre = c;
    o.axis = normal.normalized();
    o.length = side;
    o.thickness = t;
    return o;
}

using Tmpl = std::map<std::string, double>;

Tmpl fingers(Tmpl t, std::initializer_list<const char*> names, double mcp, double pip, double dip, double abd = 0.0) {
    for (const char* n : names) {
        const std::string s = n;
        t[s + ".MCP.flex"] = mcp;
        t[s + ".MCP.abd"] = abd;
        t[s + ".PIP.flex"] = pip;
        t[s + ".DIP.flex"] = dip;
    }
    return t;
}

Tmpl thumb(Tmpl t, double tf, double ta, double mf, double ma, double ip) {
    t["thumb.TMC.flex"] = tf;
    t["thumb.TMC.abd"] = ta;
    t["thumb.MCP.flex"] = mf;
    t["thumb.MCP.abd"] = ma;
    t["thumb.IP.flex"] = ip;
    return t;
}

Tmpl all_fingers(double mcp, double pip, double dip) {
    return fingers({}, {"index", "middle", "ring", "little"}, mcp, pip, dip);
}

std::vector<Spec> specs() {
    const Vec3 X(1, 0, 0), Y(0, 1, 0), Z(0, 0, 1);
    const Vec3 oblique = Vec3(1, 0.25, 0).normalized();
    std::vector<Spec> s;
    const std::vector<std::string> wrap = {"index.PP", "index.MP", "middle.PP", "middle.MP", "ring.PP",
                                           "ring.MP",  "middle.MC", "?little.MP", "?thumb.DP"};
    s.push_back({1, cylinder({0, 60, 45}, oblique, 35, 150), wrap, thumb(all_fingers(30, 35, 20), 30, 50, 10, 0, 10), {}});
    s.push_back({2, cylinder({0, 60, 22}, oblique, 12, 150), wrap, thumb(all_fingers(70, 80, 50), 40, 40, 30, 0, 30), {}});
    s.push_back({3, cylinder({0, 60, 30}, oblique, 20, 150), wrap, thumb(all_fingers(55, 60, 40), 35, 45, 20, 0, 20), {}});
    s.push_back({4, cylinder({0, 60, 25}, oblique, 15, 150),
                 {"index.PP", "index.MP", "middle.PP", "middle.MP", "ring.PP", "ring.MP", "middle.MC", "?thumb.PP"},
                 thumb(all_fingers(65, 70, 45), 40, 0, 10, 0, 10), {}});
    s.push_back({5, cylinder({0, 55, 17}, oblique, 8, 150),
                 {"index.PP", "index.MP", "middle.PP", "middle.MP", "ring.PP", "ring.MP", "middle.MC", "?thumb.DP"},
                 thumb(all_fingers(75, 85, 55), 40, 10, 20, 0, 20), {}});
    const Tmpl prism = thumb(all_fingers(45, 30, 20), 50, 55, 20, 0, 15);
    s.push_back({6, cylinder({5, 95, 40}, X, 8, 150),
                 {"thumb.pad", "index.pad", "middle.pad", "?ring.pad", "?little.pad"}, prism, {{"thumb.pad", "index.pad"}}});
    s.push_back({7, cylinder({5, 95, 40}, X, 8, 150), {"thumb.pad", "index.pad", "middle.pad", "?ring.pad"}, prism,
                 {{"thumb.pad", "index.pad"}}});
    s.push_back({8, cylinder({5, 95, 40}, X, 8, 150), {"thumb.pad", "index.pad", "middle.pad"}, prism,
                 {{"thumb.pad", "index.pad"}}});
    s.push_back({9, card({30, 100, 35}, Vec3(0, 1, 1), 30, 8), {"thumb.pad", "index.pad"},
                 thumb(fingers(all_fingers(20, 20, 10), {"index"}, 45, 30, 20), 45, 50, 20, 0, 15), {{"thumb.pad", "index.pad"}}});
    s.push_back({10, cylinder({0, 60, 16}, Z, 40, 15),
                 {"index.MP", "middle.MP", "ring.MP", "little.MP", "middle.MC", "?index.DP", "?middle.DP", "?thumb.PP"},
                 thumb(all_fingers(40, 60, 40), 30, 20, 10, 0, 10), {}});
    s.push_back({11, sphere({0, 60, 45}, 35), wrap, thumb(all_fingers(35, 40, 25), 40, 50, 15, 0, 15), {}});
    s.push_back({12, cylinder({5, 95, 50}, Z, 40, 10), {"thumb.pad", "index.pad", "middle.pad", "?ring.pad", "?little.pad"},
                 thumb(all_fingers(35, 30, 20), 50, 55, 15, 0, 10), {{"thumb.pad", "middle.pad"}}});
    s.push_back({13, sphere({5, 95, 50}, 30), {"thumb.pad", "index.pad", "middle.pad", "?ring.pad", "?little.pad"},
                 thumb(all_fingers(35, 35, 20), 50, 55, 15, 0, 10), {{"thumb.pad", "middle.pad"}}});
    s.push_back({14, sphere({20, 100, 40}, 12), {"thumb.pad", "index.pad", "middle.pad"},
                 thumb(fingers(all_fingers(40, 50, 30), {"index", "middle"}, 45, 35, 20), 50, 50, 20, 0, 15),
                 {{"thumb.pad", "index.pad"}}});
    s.push_back({15, cylinder({0, 80, 20}, oblique, 12, 150),
                 {"index.MP", "index.DP", "middle.MP", "middle.DP", "ring.MP", "ring.DP", "middle.MC", "?index.PP"},
                 thumb(all_fingers(20, 90, 60), 0, 0, 0, 0, 0), {}});
    s.push_back({16, card({40, 90, 20}, Vec3(1, 0, 0.3), 40, 3), {"thumb.pad", "index.MP.radial", "?index.DP.radial"},
                 thumb(fingers(all_fingers(50, 70, 40), {"index"}, 50, 60, 30), 20, 10, 20, 0, 10), {}});
    s.push_back({17, cylinder({0, 65, 22}, Vec3(1, 0.4, 0), 12, 150),
                 {"middle.PP", "middle.MP", "ring.PP", "ring.MP", "little.PP", "little.MP", "middle.MC", "?thumb.DP"},
                 thumb(fingers(all_fingers(70, 80, 50), {"index"}, 20, 10, 5), 40, 10, 20, 0, 20), {}});
    s.push_back({18, card({0, 95, 25}, Z, 100, 20), {"index.DP", "middle.DP", "ring.DP", "little.DP", "middle.MC", "?index.MP", "thumb.DP"},
                 thumb(all_fingers(30, 10, 5), 50, 55, 10, 0, 10), {}});
    s.push_back({19, cylinder({10, 55, 19}, X, 10, 150),
                 {"thumb.DP", "index.DP", "middle.DP", "middle.MP", "middle.MC", "?ring.DP", "?index.MP"},
                 thumb(all_fingers(40, 50, 30), 50, 50, 20, 0, 15), {}});
    s.push_back({20, cylinder({25, 100, 35}, Vec3(0.5, -0.6, 0.6), 4, 140), {"thumb.pad", "index.pad", "?middle.DP.radial"},
                 thumb(fingers(all_fingers(50, 60, 40), {"index", "middle"}, 40, 40, 20), 50, 45, 20, 0, 15),
                 {{"thumb.pad", "index.pad"}}});
    s.push_back({21, cylinder({15, 100, 35}, Vec3(0.5, -0.6, 0.6), 5, 140), {"thumb.pad", "middle.DP.radial", "?ring.DP.radial"},
                 thumb(fingers(all_fingers(50, 60, 40), {"middle", "ring"}, 45, 40, 20), 50, 45, 20, 0, 15), {}});
    s.push_back({22, card({10, 110, 35}, Vec3(0, 1, 0.3), 60, 10), {"thumb.pad", "index.pad", "middle.pad", "?ring.pad"},
                 thumb(all_fingers(60, 5, 5), 40, 30, 10, 0, 5), {{"thumb.pad", "index.pad"}}});
    s.push_back({23, cylinder({10, 100, 10}, Z, 5, 60), {"index.MP.ulnar", "middle.MP.radial"},
                 thumb(fingers(all_fingers(40, 50, 30), {"index", "middle"}, 10, 10, 5), 20, 20, 10, 0, 10), {}});
    s.push_back({24, sphere({25, 105, 30}, 5), {"thumb.pad", "index.pad"},
                 thumb(fingers(all_fingers(40, 50, 30), {"index"}, 40, 50, 30), 50, 50, 20, 0, 20), {{"thumb.pad", "index.pad"}}});
    s.push_back({25, cylinder({10, 100, 30}, Vec3(0.5, -0.6, 0.6), 5, 140), {"thumb.pad", "middle.DP.radial", "?index.pad"},
                 thumb(fingers(all_fingers(60, 70, 40), {"index", "middle"}, 45, 50, 30), 30, 20, 20, 0, 15), {}});
    s.push_back({26, sphere({5, 75, 40}, 30), {"index.DP", "index.MP", "middle.DP", "middle.MP", "ring.DP", "middle.MC", "thumb.DP"},
                 thumb(all_fingers(40, 40, 25), 50, 55, 15, 0, 10), {}});
    s.push_back({27, sphere({10, 100, 40}, 20), {"thumb.pad", "index.pad", "middle.pad", "ring.pad"},
                 thumb(all_fingers(40, 45, 25), 50, 55, 15, 0, 10), {{"thumb.pad", "middle.pad"}}});
    s.push_back({28, sphere({15, 80, 33}, 25), {"index.DP", "index.MP", "middle.DP", "middle.MP", "middle.MC", "thumb.DP"},
                 thumb(fingers(all_fingers(60, 70, 40), {"index", "middle"}, 40, 40, 25), 50, 55, 15, 0, 10), {}});
    s.push_back({29, cylinder({35, 90, 20}, Vec3(0.2, 1, 0.3), 6, 120), {"thumb.pad", "index.MP.radial", "?index.PP.radial"},
                 thumb(fingers(all_fingers(60, 70, 40), {"index"}, 40, 50, 30), 20, 10, 20, 0, 10), {}});
    s.push_back({30, card({0, 55, 16}, Z, 80, 15),
                 {"middle.MC", "index.DP", "middle.DP", "ring.DP", "index.MP", "middle.MP", "?ring.MP"},
                 thumb(all_fingers(40, 70, 50), 10, 10, 10, 0, 10), {}});
    s.push_back({31, cylinder({35, 85, 30}, Vec3(0, 0.3, 1), 15, 80),
                 {"thumb.PP", "thumb.DP", "index.PP", "index.MP", "index.DP"},
                 thumb(fingers(all_fingers(60, 70, 40), {"index"}, 40, 60, 40), 40, 40, 20, 0, 30), {}});
    s.push_back({32, cylinder({35, 90, 15}, Vec3(0.1, 1, 0.1), 6, 120), {"thumb.pad", "index.DP.radial", "?index.MP.radial"},
                 thumb(fingers(all_fingers(50, 60, 40), {"index"}, 30, 30, 20), 20, 15, 20, 0, 10), {}});
    s.push_back({33, sphere({25, 95, 25}, 8), {"thumb.pad", "index.pad"},
                 thumb(fingers(all_fingers(50, 60, 40), {"index"}, 55, 70, 30), 45, 45, 20, 0, 20), {{"thumb.pad", "index.pad"}}});
    return s;
}

// Closest distance between segments p0-p1 and q0-q1.
double segment_distance(const Vec3& p0, const Vec3& p1, const Vec3& q0, const Vec3& q1) {
    const Vec3 d1 = p1 - p0, d2 = q1 - q0, r = p0 - q0;
    const double a = d1.squaredNorm(), e = d2.squaredNorm(), f = d2.dot(r);
    const double c = d1.dot(r), b = d1.dot(d2), den = a * e - b * b;
    double s = den > 1e-12 ? std::clamp((b * f - c * e) / den, 0.0, 1.0) : 0.0;
    double t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    return ((p0 + s * d1) - (q0 + t * d2)).norm();
}

struct Author {
    const HandModel& model;
    const Spec& spec;
    const protocols::GraspPreset& meta;

    Posture posture(const std::vector<double>& x) const {
        Posture p(std::vector<double>(x.begin(), x.begin() + static_cast<long>(model.dof_count())));
        for (int pass = 0; pass < 2; ++pass) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                const auto [lo, hi] = model.effective_range(i, p);
                p[i] = std::clamp(p[i], lo, hi);
            }
        }
        return p;
    }

    ObjectPrimitive object(const std::vector<double>& x) const {
        ObjectPrimitive o = spec.object;
        const std::size_t n = model.dof_count();
        o.centre += Vec3(x[n], x[n + 1], x[n + 2]);
        return o;
    }

    double cost(const std::vector<double>& x, bool with_thumb = true) const {
        const Posture p = posture(x);
        const ObjectPrimitive o = object(x);
        const auto cands = protocols::contact_candidates(model, p, o);
        std::map<std::string, const protocols::Contact*> by;
        double c = 0.0;
        for (const auto& k : cands) {
            by[k.element] = &k;
            if (!with_thumb && k.digit == Digit::Thumb) continue;
            const double pen = std::max(0.0, -k.gap_mm - 1.0);
            c += 10.0 * pen * pen;
        }
        for (const auto& w : spec.want) {
            const bool soft = w[0] == '?';
            if (!with_thumb && w.find("thumb.") != std::string::npos) continue;
            const auto* k = by.at(soft ? w.substr(1) : w);
            const double e = std::max(0.0, std::abs(k->gap_mm) - 0.8);
            c += (soft ? 0.2 : 1.0) * e * e;
        }
        if (!with_thumb) return c;
        for (const auto& [a, b] : spec.oppose) {
            const double dot = by.at(a)->normal.dot(by.at(b)->normal);
            const double e = std::max(0.0, dot + 0.5);
            c += 50.0 * e * e;
        }
        for (const auto& [id, deg] : spec.tmpl) {
            const double e = p[model.dof_index(id)] * 180.0 / kPi - deg;
            c += 3e-4 * e * e;
        }
        // Thumb capsules must stay clear of the long fingers.
        const auto f = kin::forward_kinematics(model, p);
        const auto& bones = model.data().bones;
        for (std::size_t i = 0; i < bones.size(); ++i) {
            if (bones[i].digit != Digit::Thumb) continue;
            for (std::size_t j = 0; j < bones.size(); ++j) {
                if (bones[j].digit == Digit::Thumb) continue;
                const double d = segment_distance(f.bones[i].origin, f.bone_ends[i], f.bones[j].origin, f.bone_ends[j]);
                const double e = std::max(0.0, bones[i].radius + bones[j].radius - d - 1.0);
                c += 10.0 * e * e;
            }
        }
        return c;
    }
};

std::string num(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << (std::abs(v) < 0.005 ? 0.0 : v);
    return os.str();
}

std::string vec(const Vec3& v) { return "{" + num(v.x()) + ", " + num(v.y()) + ", " + num(v.z()) + "}"; }

std::string vec6(const Vec3& v) {
    std::ostringstream os;
    os << std::setprecision(6) << "{" << v.x() << ", " << v.y() << ", " << v.z() << "}";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Grasp preset authoring"};
    std::vector<int> only;
    int restarts = 6, evals = 6000;
    std::string out;
    app.add_option("presets", only, "preset numbers (default all)");
    app.add_option("--restarts", restarts);
    app.add_option("--evals", evals);
    app.add_option("--emit", out, "write the preset table here");
    CLI11_PARSE(app, argc, argv);

    const HandModel model = default_model();
    const auto& metas = protocols::grasp_presets();
    std::ostringstream inc;
    int failures = 0;
    for (const auto& spec : specs()) {
        const auto& meta = metas.at(static_cast<std::size_t>(spec.number - 1));
        protocols::GraspPreset preset = meta;
        const bool selected = only.empty() || std::find(only.begin(), only.end(), spec.number) != only.end();
        if (selected) {
            Author a{model, spec, meta};
            std::vector<double> lo, hi, start;
            for (std::size_t i = 0; i < model.dof_count(); ++i) {
                const auto& d = model.dof_spec(i);
                lo.push_back(d.min);
                hi.push_back(d.max);
                auto it = spec.tmpl.find(model.dof(i).id);
                start.push_back(it == spec.tmpl.end() ? d.rest : std::clamp(it->second * kPi / 180.0, d.min, d.max));
            }
            for (int k = 0; k < 3; ++k) {
                lo.push_back(-40.0);
                hi.push_back(40.0);
                start.push_back(0.0);
            }
            // Stage 1 places the long fingers and object, stage 2 brings the
            // thumb in, stage 3 refines everything together.
            std::vector<double> x = start;
            auto stage = [&](const std::vector<std::size_t>& vars, bool with_thumb, int rs, int ev) {
                std::vector<double> sl, sh, s0;
                for (auto v : vars) {
                    sl.push_back(lo[v]);
                    sh.push_back(hi[v]);
                    s0.push_back(x[v]);
                }
                search::PatternSearchOptions opt;
                opt.restarts = rs;
                opt.evaluations_per_restart = ev;
                opt.initial_step = 0.1;
                opt.min_step = 1e-4;
                auto f = [&](const std::vector<double>& y) {
                    std::vector<double> full = x;
                    for (std::size_t i = 0; i < vars.size(); ++i) full[vars[i]] = y[i];
                    return a.cost(full, with_thumb);
                };
                const auto r = search::pattern_search(f, sl, sh, opt, s0);
                for (std::size_t i = 0; i < vars.size(); ++i) x[vars[i]] = r.x[i];
                return r.value;
            };
            std::vector<std::size_t> finger_vars, thumb_vars, all_vars;
            for (std::size_t i = 0; i < x.size(); ++i) {
                all_vars.push_back(i);
                const bool centre = i >= model.dof_count();
                const bool is_thumb = !centre && model.dof(i).digit == Digit::Thumb;
                if (!is_thumb) finger_vars.push_back(i);
                if (is_thumb || centre) thumb_vars.push_back(i);
            }
            stage(finger_vars, false, restarts, evals);
            stage(thumb_vars, true, restarts * 4, evals / 2);
            struct { double value; std::vector<double> x; } best{stage(all_vars, true, 1, evals * 2), x};
            const Posture p = a.posture(best.x);
            // Round to 0.01 deg, nudging inward where rounding crosses a limit.
            Posture rounded = p;
            for (std::size_t i = 0; i < model.dof_count(); ++i) {
                rounded[i] = std::round(p[i] * 180.0 / kPi * 100.0) / 100.0 * kPi / 180.0;
            }
            preset.posture_deg.clear();
            for (std::size_t i = 0; i < model.dof_count(); ++i) {
                const auto [lo, hi] = model.effective_range(i, rounded);
                double deg = rounded[i] * 180.0 / kPi;
                if (rounded[i] < lo) deg = std::ceil(lo * 180.0 / kPi * 100.0) / 100.0;
                if (rounded[i] > hi) deg = std::floor(hi * 180.0 / kPi * 100.0) / 100.0;
                preset.posture_deg[model.dof(i).id] = deg;
            }
            ObjectPrimitive o = a.object(best.x);
            o.centre = (o.centre * 100.0).array().round() / 100.0;
            preset.object = o;
            std::cout << spec.number << " " << meta.name << ": cost " << best.value << "\n";
        }
        const auto r = protocols::grasp_check(model, preset);
        std::cout << "  " << (r.pass ? "PASS " : "FAIL ") << r.detail << ", max penetration " << r.max_penetration_mm
                  << "\n   ";
        for (const auto& c : r.contacts) std::cout << " " << c.element << "(" << num(c.gap_mm) << ")";
        std::cout << "\n";
        if (!r.pass) ++failures;

        inc << "            {" << preset.number << ", {";
        bool first = true;
        for (const auto& [id, deg] : preset.posture_deg) {
            inc << (first ? "" : ", ") << "{\"" << id << "\", " << num(deg) << "}";
            first = false;
        }
        inc << "},\n             ";
        if (preset.object) {
            const auto& o = *preset.object;
            inc << "obj(K::" << (o.kind == K::Sphere ? "Sphere" : o.kind == K::Cylinder ? "Cylinder" : "Card") << ", "
                << vec(o.centre) << ", " << vec6(o.axis) << ", " << o.radius << ", " << o.length << ", " << o.thickness
                << ")},\n";
        } else {
            inc << "std::nullopt},\n";
        }
    }
    if (!out.empty()) std::ofstream(out) << inc.str();
    std::cout << failures << " failing presets\n";
    return failures == 0 ? 0 : 1;
}
