#include "acb/landsmeer.hpp"

#include <cmath>
#include <sstream>

namespace acb::landsmeer {

namespace {

void check_theta(double theta, bool allow_pi, const char* fn) {
    const bool ok = std::isfinite(theta) && theta >= 0.0 && (allow_pi ? theta <= kPi : theta < kPi);
    if (!ok) {
        std::ostringstream os;
        os << fn << ": theta " << theta << " outside " << (allow_pi ? "[0, pi]" : "[0, pi)");
        throw DomainError(os.str());
    }
}

void check_positive(double v, const char* what, const char* fn) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        std::ostringstream os;
        os << fn << ": " << what << " must be positive, got " << v;
        throw DomainError(os.str());
    }
}

}  // namespace

double excursion_I(double r, double theta) {
    check_positive(r, "r", "excursion_I");
    check_theta(theta, true, "excursion_I");
    return r * theta;
}

double excursion_II(double r, double theta) {
    check_positive(r, "r", "excursion_II");
    check_theta(theta, true, "excursion_II");
    return 2.0 * r * std::sin(0.5 * theta);
}

double excursion_III(double y, double d, double theta) {
    check_positive(y, "y", "excursion_III");
    check_positive(d, "d", "excursion_III");
    check_theta(theta, false, "excursion_III");
    if (theta < kSeriesThreshold) {
        // 2y − θ·y·cot(θ/2) = y·θ²/6 + y·θ⁴/360 + O(θ⁶)
        const double t2 = theta * theta;
        return theta * d + y * t2 / 6.0 + y * t2 * t2 / 360.0;
    }
    return 2.0 * y + theta * d - theta * y / std::tan(0.5 * theta);
}

double moment_arm_I(double r, double theta) {
    check_positive(r, "r", "moment_arm_I");
    check_theta(theta, true, "moment_arm_I");
    return r;
}

double moment_arm_II(double r, double theta) {
    check_positive(r, "r", "moment_arm_II");
    check_theta(theta, true, "moment_arm_II");
    return r * std::cos(0.5 * theta);
}

double moment_arm_III(double y, double d, double theta) {
    check_positive(y, "y", "moment_arm_III");
    check_positive(d, "d", "moment_arm_III");
    check_theta(theta, false, "moment_arm_III");
    if (theta < kSeriesThreshold) {
        const double t2 = theta * theta;
        return d + y * theta / 3.0 + y * t2 * theta / 90.0;
    }
    const double half = 0.5 * theta;
    const double s = std::sin(half);
    return d - y / std::tan(half) + 0.5 * theta * y / (s * s);
}

double segment_excursion(LandsmeerModel model, double r, double y, double d, double theta) {
    switch (model) {
        case LandsmeerModel::I: return excursion_I(r, theta);
        case LandsmeerModel::II: return excursion_II(r, theta);
        case LandsmeerModel::III: return excursion_III(y, d, theta);
    }
    throw DomainError("unknown Landsmeer model");
}

double segment_moment_arm(LandsmeerModel model, double r, double y, double d, double theta) {
    switch (model) {
        case LandsmeerModel::I: return moment_arm_I(r, theta);
        case LandsmeerModel::II: return moment_arm_II(r, theta);
        case LandsmeerModel::III: return moment_arm_III(y, d, theta);
    }
    throw DomainError("unknown Landsmeer model");
}

double moment_arm(const RoutingSegment& s, double theta) {
    return segment_moment_arm(s.model, s.r, s.y, s.d, theta);
}

double moment_arm(const CompiledSegment& s, double theta) {
    return segment_moment_arm(s.model, s.r, s.y, s.d, theta);
}

double signed_excursion(const CompiledSegment& s, double theta) {
    const double e = segment_excursion(s.model, s.r, s.y, s.d, std::abs(theta));
    return s.side * (theta < 0.0 ? -e : e);
}

double signed_moment_arm(const CompiledSegment& s, double theta) {
    return s.side * segment_moment_arm(s.model, s.r, s.y, s.d, std::abs(theta));
}

ExcursionResult path_excursion(const HandModel& model, std::size_t muscle, const Posture& posture) {
    if (posture.size() != model.dof_count()) {
        throw ModelError("path_excursion: posture has " + std::to_string(posture.size()) +
                         " angles, model has " + std::to_string(model.dof_count()) + " DoFs");
    }
    ExcursionResult out;
    const auto& segs = model.segments(muscle);
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const auto& s = segs[i];
        const double theta = posture[s.dof] - model.dof_spec(s.dof).rest;
        const double c = signed_excursion(s, theta);
        out.per_segment.push_back({i, model.dof(s.dof).id, c});
        out.excursion += c;
    }
    return out;
}

ExcursionResult path_excursion(const HandModel& model, const std::string& muscle,
                               const Posture& posture) {
    return path_excursion(model, model.muscle_index(muscle), posture);
}

}  // namespace acb::landsmeer
