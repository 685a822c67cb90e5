#include "acb/protocols.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

namespace acb::protocols {

const char* to_string(GraspClass c) {
    switch (c) {
        case GraspClass::Power: return "power";
        case GraspClass::Intermediate: return "intermediate";
        case GraspClass::Precision: return "precision";
    }
    return "?";
}

const char* to_string(Opposition o) {
    switch (o) {
        case Opposition::Palm: return "palm";
        case Opposition::Pad: return "pad";
        case Opposition::Side: return "side";
    }
    return "?";
}

const char* to_string(ThumbPosition t) { return t == ThumbPosition::Abducted ? "abducted" : "adducted"; }

const char* to_string(ObjectPrimitive::Kind k) {
    switch (k) {
        case ObjectPrimitive::Kind::Sphere: return "sphere";
        case ObjectPrimitive::Kind::Cylinder: return "cylinder";
        case ObjectPrimitive::Kind::Card: return "card";
    }
    return "?";
}

const char* to_string(ContactKind k) {
    switch (k) {
        case ContactKind::Segment: return "segment";
        case ContactKind::Pad: return "pad";
        case ContactKind::Side: return "side";
        case ContactKind::Palm: return "palm";
    }
    return "?";
}

namespace {

double box_sdf(const Vec3& q, const Vec3& half) {
    const Vec3 d = q.cwiseAbs() - half;
    return d.cwiseMax(0.0).norm() + std::min(d.maxCoeff(), 0.0);
}

double raw_sdf(const ObjectPrimitive& o, const Vec3& p) {
    const Vec3 a = o.axis.normalized();
    const Vec3 rel = p - o.centre;
    switch (o.kind) {
        case ObjectPrimitive::Kind::Sphere: return rel.norm() - o.radius;
        case ObjectPrimitive::Kind::Cylinder: {
            const double h = rel.dot(a);
            const double rho = (rel - h * a).norm();
            const double dx = rho - o.radius, dy = std::abs(h) - 0.5 * o.length;
            return std::min(std::max(dx, dy), 0.0) + std::hypot(std::max(dx, 0.0), std::max(dy, 0.0));
        }
        case ObjectPrimitive::Kind::Card: {
            const Vec3 u = a.unitOrthogonal();
            const Vec3 v = a.cross(u);
            const Vec3 q(rel.dot(u), rel.dot(v), rel.dot(a));
            return box_sdf(q, Vec3(0.5 * o.length, 0.5 * o.length, 0.5 * o.thickness));
        }
    }
    return 0.0;
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace

double ObjectPrimitive::sdf(const Vec3& p, Vec3* normal) const {
    const double d = raw_sdf(*this, p);
    if (normal) {
        const double h = 1e-4;
        Vec3 g;
        for (int i = 0; i < 3; ++i) {
            Vec3 e = Vec3::Zero();
            e[i] = h;
            g[i] = raw_sdf(*this, p + e) - raw_sdf(*this, p - e);
        }
        *normal = g.norm() > 0.0 ? Vec3(g.normalized()) : Vec3::UnitZ();
    }
    return d;
}

const std::vector<GraspPreset>& grasp_presets() {
    static const std::vector<GraspPreset> presets = [] {
        using C = GraspClass;
        using O = Opposition;
        using T = ThumbPosition;
        auto meta = [](int n, const char* name, C c, O o, T t, const char* vf) {
            GraspPreset g;
            g.number = n;
            g.name = name;
            g.cls = c;
            g.opposition = o;
            g.thumb = t;
            g.virtual_finger = vf;
            return g;
        };
        std::vector<GraspPreset> v = {
            meta(1, "Large Diameter", C::Power, O::Palm, T::Abducted, "2-5"),
            meta(2, "Small Diameter", C::Power, O::Palm, T::Abducted, "2-5"),
            meta(3, "Medium Wrap", C::Power, O::Palm, T::Abducted, "2-5"),
            meta(4, "Adducted Thumb", C::Power, O::Palm, T::Adducted, "2-5"),
            meta(5, "Light Tool", C::Power, O::Palm, T::Adducted, "2-5"),
            meta(6, "Prismatic 4 Finger", C::Precision, O::Pad, T::Abducted, "2-5"),
            meta(7, "Prismatic 3 Finger", C::Precision, O::Pad, T::Abducted, "2-4"),
            meta(8, "Prismatic 2 Finger", C::Precision, O::Pad, T::Abducted, "2-3"),
            meta(9, "Palmar Pinch", C::Precision, O::Pad, T::Abducted, "2"),
            meta(10, "Power Disk", C::Power, O::Palm, T::Abducted, "2-5"),
            meta(11, "Power Sphere", C::Power, O::Palm, T::Abducted, "2-5"),
            meta(12, "Precision Disk", C::Precision, O::Pad, T::Abducted, "2-5"),
            meta(13, "Precision Sphere", C::Precision, O::Pad, T::Abducted, "2-5"),
            meta(14, "Tripod", C::Precision, O::Pad, T::Abducted, "2-3"),
            meta(15, "Fixed Hook", C::Power, O::Palm, T::Adducted, "2-5"),
            meta(16, "Lateral", C::Intermediate, O::Side, T::Adducted, "2"),
            meta(17, "Index Finger Extension", C::Power, O::Palm, T::Adducted, "3-5"),
            meta(18, "Extension Type", C::Power, O::Pad, T::Abducted, "2-5"),
            meta(19, "Distal Type", C::Power, O::Pad, T::Abducted, "2-5"),
            meta(20, "Writing Tripod", C::Precision, O::Side, T::Abducted, "2"),
            meta(21, "Tripod Variation", C::Intermediate, O::Side, T::Abducted, "3-4"),
            meta(22, "Parallel Extension", C::Precision, O::Pad, T::Adducted, "2-5"),
            meta(23, "Adduction Grip", C::Intermediate, O::Side, T::Abducted, "2"),
            meta(24, "Tip Pinch", C::Precision, O::Pad, T::Abducted, "2"),
            meta(25, "Lateral Tripod", C::Intermediate, O::Side, T::Adducted, "3"),
            meta(26, "Sphere 4 Finger", C::Power, O::Pad, T::Abducted, "2-4"),
            meta(27, "Quadpod", C::Precision, O::Pad, T::Abducted, "2-4"),
            meta(28, "Sphere 3 Finger", C::Power, O::Pad, T::Abducted, "2-3"),
            meta(29, "Stick", C::Intermediate, O::Side, T::Adducted, "2"),
            meta(30, "Palmar", C::Power, O::Palm, T::Adducted, "2-5"),
            meta(31, "Ring", C::Power, O::Pad, T::Abducted, "2"),
            meta(32, "Ventral", C::Intermediate, O::Side, T::Adducted, "2"),
            meta(33, "Inferior Pincer", C::Precision, O::Pad, T::Abducted, "2"),
        };

        struct Authored {
            int number;
            std::map<std::string, double> posture_deg;
            std::optional<ObjectPrimitive> object;
        };
        using K = ObjectPrimitive::Kind;
        auto obj = [](K kind, Vec3 centre, Vec3 axis, double radius, double length, double thickness) {
            ObjectPrimitive o;
            o.kind = kind;
            o.centre = centre;
            o.axis = axis;
            o.radius = radius;
            o.length = length;
            o.thickness = thickness;
            return std::optional<ObjectPrimitive>(o);
        };
        // Joint angles and object placements come from tools/author_grasps.
        const std::vector<Authored> authored = {
#include "grasp_presets.inc"
        };
        (void)obj;
        for (const auto& a : authored) {
            auto& g = v.at(static_cast<std::size_t>(a.number - 1));
            g.posture_deg = a.posture_deg;
            g.object = a.object;
        }
        return v;
    }();
    return presets;
}

const GraspPreset& grasp_preset(const std::string& name) {
    const std::string key = lower(name);
    for (const auto& p : grasp_presets()) {
        if (lower(p.name) == key) return p;
    }
    throw DomainError("unknown grasp preset: " + name);
}

Posture preset_posture(const HandModel& model, const GraspPreset& preset) {
    Posture p = model.rest_posture();
    for (const auto& [id, deg] : preset.posture_deg) p[model.dof_index(id)] = deg * kPi / 180.0;
    return p;
}

std::vector<Contact> contact_candidates(const HandModel& model, const Posture& p, const ObjectPrimitive& obj) {
    const auto f = kin::forward_kinematics(model, p);
    const auto& bones = model.data().bones;
    std::vector<Contact> out;
    auto add = [&](const std::string& element, ContactKind kind, Digit digit, const Vec3& point, double inset) {
        Contact c;
        c.element = element;
        c.kind = kind;
        c.digit = digit;
        c.gap_mm = obj.sdf(point, &c.normal) - inset;
        c.point = point - inset * c.normal;
        out.push_back(c);
    };
    for (std::size_t b = 0; b < bones.size(); ++b) {
        const auto& bone = bones[b];
        const kin::Frame& fr = f.bones[b];
        const Vec3 start = fr.origin;
        const Vec3 end = f.bone_ends[b];
        const bool metacarpal = bone.id.size() >= 3 && bone.id.compare(bone.id.size() - 3, 3, ".MC") == 0;

        // Capsule: nearest of 11 axis samples.
        Contact best;
        best.gap_mm = std::numeric_limits<double>::infinity();
        for (int i = 0; i <= 10; ++i) {
            const Vec3 q = start + (end - start) * (i / 10.0);
            Vec3 n;
            const double g = obj.sdf(q, &n) - bone.radius;
            if (g < best.gap_mm) {
                best.gap_mm = g;
                best.normal = n;
                best.point = q - bone.radius * n;
            }
        }
        best.element = bone.id;
        best.kind = metacarpal ? ContactKind::Palm : ContactKind::Segment;
        best.digit = bone.digit;
        out.push_back(best);

        if (!metacarpal) {
            const Vec3 mid = 0.5 * (start + end);
            add(bone.id + ".radial", ContactKind::Side, bone.digit, mid + bone.radius * fr.x(), 0.0);
            add(bone.id + ".ulnar", ContactKind::Side, bone.digit, mid - bone.radius * fr.x(), 0.0);
        }
    }
    for (std::size_t d = 0; d < kDigitCount; ++d) {
        const Digit digit = static_cast<Digit>(d);
        add(std::string(to_string(digit)) + ".pad", ContactKind::Pad, digit, f.digit(digit).pad, 0.0);
    }
    return out;
}

GraspReport grasp_check(const HandModel& model, const GraspPreset& preset) {
    GraspReport r;
    r.name = preset.name;
    r.cls = preset.cls;
    const Posture p = preset_posture(model, preset);
    std::ostringstream detail;

    r.within_limits = true;
    for (std::size_t i = 0; i < model.dof_count(); ++i) {
        const auto [lo, hi] = model.effective_range(i, p);
        if (p[i] < lo - 1e-9 || p[i] > hi + 1e-9) {
            r.within_limits = false;
            detail << model.dof(i).id << " outside its range; ";
        }
    }

    r.has_object = preset.object.has_value();
    if (r.has_object) {
        const auto cands = contact_candidates(model, p, *preset.object);
        double min_gap = std::numeric_limits<double>::infinity();
        for (const auto& c : cands) {
            min_gap = std::min(min_gap, c.gap_mm);
            if (std::abs(c.gap_mm) <= kContactBand) r.contacts.push_back(c);
        }
        r.max_penetration_mm = std::max(0.0, -min_gap);
        for (const auto& c : r.contacts) {
            switch (c.kind) {
                case ContactKind::Segment: ++r.segment_contacts; break;
                case ContactKind::Palm: r.palm_contact = true; break;
                case ContactKind::Pad: ++r.pad_contacts; break;
                case ContactKind::Side: ++r.side_contacts; break;
            }
        }
        for (std::size_t i = 0; i < r.contacts.size(); ++i) {
            for (std::size_t j = i + 1; j < r.contacts.size(); ++j) {
                const auto& a = r.contacts[i];
                const auto& b = r.contacts[j];
                if (a.kind == ContactKind::Pad && b.kind == ContactKind::Pad && a.normal.dot(b.normal) < 0.0) {
                    r.opposing_pads = true;
                }
            }
        }
        bool class_ok = false;
        switch (preset.cls) {
            case GraspClass::Power:
                class_ok = r.segment_contacts >= 4 && r.palm_contact;
                detail << r.segment_contacts << " segment contacts" << (r.palm_contact ? " + palm" : "");
                break;
            case GraspClass::Precision:
                class_ok = r.pad_contacts >= 2 && r.opposing_pads;
                detail << r.pad_contacts << " pad contacts" << (r.opposing_pads ? ", opposing" : ", not opposing");
                break;
            case GraspClass::Intermediate: {
                bool other_digit = false;
                for (const auto& s : r.contacts) {
                    if (s.kind != ContactKind::Side) continue;
                    for (const auto& c : r.contacts) other_digit = other_digit || c.digit != s.digit;
                }
                class_ok = r.side_contacts >= 1 && other_digit;
                detail << r.side_contacts << " side contacts" << (other_digit ? " opposed by another digit" : "");
                break;
            }
        }
        const bool no_penetration = min_gap >= -kContactBand;
        if (!no_penetration) detail << "; penetration " << r.max_penetration_mm << " mm";
        r.contact_pass = class_ok && no_penetration;
    }
    r.pass = r.within_limits && r.contact_pass;
    r.detail = detail.str();
    return r;
}

GraspReport grasp_check(const HandModel& model, const std::string& name) {
    return grasp_check(model, grasp_preset(name));
}

nlohmann::json to_json(const GraspReport& r) {
    nlohmann::json contacts = nlohmann::json::array();
    for (const auto& c : r.contacts) {
        contacts.push_back({{"element", c.element}, {"kind", to_string(c.kind)}, {"gap_mm", c.gap_mm}});
    }
    return {{"name", r.name},
            {"class", to_string(r.cls)},
            {"within_limits", r.within_limits},
            {"has_object", r.has_object},
            {"segment_contacts", r.segment_contacts},
            {"palm_contact", r.palm_contact},
            {"pad_contacts", r.pad_contacts},
            {"opposing_pads", r.opposing_pads},
            {"side_contacts", r.side_contacts},
            {"max_penetration_mm", r.max_penetration_mm},
            {"contacts", contacts},
            {"pass", r.pass},
            {"detail", r.detail}};
}

}  // namespace acb::protocols
