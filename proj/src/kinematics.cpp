#include "acb/kinematics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/Geometry>

#include <cmath>
#include <random>
#include <sstream>

namespace acb::kin {

namespace {

Mat3 rot(const Vec3& axis, double angle) { return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix(); }

Mat3 root_rotation(const RootFrame& r) {
    const Vec3 y = r.y_axis.normalized();
    const Vec3 z = r.z_axis.normalized();
    Mat3 R;
    R.col(0) = y.cross(z);
    R.col(1) = y;
    R.col(2) = z;
    return R;
}

}  // namespace

Mat3 joint_rotation(const Joint& j, const std::vector<double>& v) {
    // Flexion about the (oblique) local x axis; positive moves y toward z.
    const auto& fs = j.dofs[0];
    const double o = fs.axis_obliquity;
    const Vec3 flex_axis(std::cos(o), 0.0, -std::sin(o));
    Mat3 R = rot(flex_axis, v[0]);
    if (j.dofs.size() > 1) R = rot(Vec3::UnitZ(), -v[1]) * R;  // abduction toward +x, applied first
    if (j.rotation_coupling != 0.0) R = R * rot(Vec3::UnitY(), -j.rotation_coupling * v[0]);
    return R;
}

HandFrames forward_kinematics(const HandModel& model, const Posture& p) {
    if (p.size() != model.dof_count()) throw ModelError("forward_kinematics: incomplete posture");
    const auto& data = model.data();
    HandFrames f;
    f.bones.resize(data.bones.size());
    f.bone_ends.resize(data.bones.size());
    f.digits.resize(kDigitCount);

    std::vector<double> values;
    for (std::size_t d = 0; d < kDigitCount; ++d) {
        const auto& chain = model.chain(static_cast<Digit>(d));
        for (std::size_t k = 0; k < chain.size(); ++k) {
            const auto bi = chain[k];
            const Bone& b = data.bones[bi];
            Frame base;
            if (k == 0) {
                base.origin = b.root->origin;
                base.rotation = root_rotation(*b.root);
            } else {
                const auto pi = chain[k - 1];
                base.origin = f.bone_ends[pi];
                base.rotation = f.bones[pi].rotation;
            }
            Frame fr = base;
            if (b.parent_joint) {
                const auto ji = model.joint_index(*b.parent_joint);
                const Joint& j = data.joints[ji];
                values.clear();
                for (const auto& ds : j.dofs) values.push_back(p[model.dof_index(j.id + "." + ds.name)]);
                fr.rotation = base.rotation * joint_rotation(j, values);
            }
            if (b.axial_offset != 0.0) fr.rotation = fr.rotation * rot(Vec3::UnitY(), b.axial_offset);
            f.bones[bi] = fr;
            f.bone_ends[bi] = fr.origin + b.length * fr.y();
        }
        const auto last = chain.back();
        const Frame& dp = f.bones[last];
        DigitPoints pts;
        pts.tip = f.bone_ends[last];
        pts.pad_normal = dp.z();
        pts.pad = pts.tip - kPadSetback * dp.y() + data.bones[last].radius * dp.z();
        f.digits[d] = pts;
    }
    return f;
}

Vec3 mcp_centre(const HandModel& model, const HandFrames& f, Digit d) {
    return f.bones[model.chain(d).at(1)].origin;
}

Vec3 mcp_pad(const HandModel& model, const HandFrames& f, Digit d) {
    const auto mc = model.chain(d).front();
    return mcp_centre(model, f, d) + kMcpPadDepth * f.bones[mc].z();
}

Plane fit_plane(const std::vector<Vec3>& pts) {
    if (pts.size() < 3) throw DomainError("fit_plane: need at least 3 points");
    Vec3 c = Vec3::Zero();
    for (const auto& q : pts) c += q;
    c /= static_cast<double>(pts.size());
    Mat3 cov = Mat3::Zero();
    for (const auto& q : pts) cov += (q - c) * (q - c).transpose();
    Eigen::SelfAdjointEigenSolver<Mat3> es(cov);
    Plane pl;
    pl.centroid = c;
    pl.normal = es.eigenvectors().col(0).normalized();
    for (const auto& q : pts) pl.max_deviation = std::max(pl.max_deviation, std::abs((q - c).dot(pl.normal)));
    return pl;
}

Trajectory fingertip_trajectory(const HandModel& model, Digit digit, const ActivationPattern& start,
                                const ActivationPattern& end, int steps, const statics::SolverOptions& options) {
    if (steps < 2) throw DomainError("fingertip_trajectory: steps must be >= 2");
    if (start.size() != model.muscle_count() || end.size() != model.muscle_count()) {
        throw ModelError("fingertip_trajectory: incomplete activation");
    }
    Trajectory t;
    t.digit = digit;
    Posture current = model.rest_posture();
    for (int k = 0; k < steps; ++k) {
        const double s = static_cast<double>(k) / static_cast<double>(steps - 1);
        ActivationPattern a(model.muscle_count());
        for (std::size_t m = 0; m < a.size(); ++m) a[m] = (1.0 - s) * start[m] + s * end[m];
        const auto rep = statics::solve_digit(model, digit, a, current, options);
        current = rep.posture;
        const auto f = forward_kinematics(model, current);
        t.points.push_back({k, f.digit(digit).tip, rep.residual, rep.converged});
        t.postures.push_back(current);
        if (!rep.converged && !t.first_unconverged) t.first_unconverged = k;
    }
    return t;
}

std::string trajectory_csv(const Trajectory& t, Projection projection) {
    std::ostringstream os;
    os.precision(9);
    switch (projection) {
        case Projection::None: os << "step,x,y,z\n"; break;
        case Projection::Sagittal: os << "step,y,z\n"; break;
        case Projection::Palmar: os << "step,x,y\n"; break;
    }
    for (const auto& p : t.points) {
        os << p.step;
        if (projection != Projection::Sagittal) os << ',' << p.point.x();
        os << ',' << p.point.y();
        if (projection != Projection::Palmar) os << ',' << p.point.z();
        os << '\n';
    }
    return os.str();
}

nlohmann::json trajectory_json(const Trajectory& t) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : t.points) {
        pts.push_back({{"step", p.step},
                       {"point_mm", {p.point.x(), p.point.y(), p.point.z()}},
                       {"residual_nmm", p.residual},
                       {"converged", p.converged}});
    }
    nlohmann::json j{{"digit", to_string(t.digit)}, {"points", pts}};
    j["first_unconverged"] = t.first_unconverged ? nlohmann::json(*t.first_unconverged) : nlohmann::json();
    return j;
}

WorkspaceCloud workspace_sample(const HandModel& model, Digit digit, const std::vector<MuscleBound>& bounds,
                                int n, std::uint64_t seed, const ActivationPattern& baseline,
                                const Posture& initial, const statics::SolverOptions& options) {
    if (n < 1) throw DomainError("workspace_sample: n must be >= 1");
    std::vector<std::pair<std::size_t, MuscleBound>> idx;
    for (const auto& b : bounds) {
        if (!(b.lo >= 0.0 && b.hi <= 1.0 && b.lo <= b.hi)) throw DomainError("workspace_sample: bad bound for " + b.muscle);
        idx.emplace_back(model.muscle_index(b.muscle), b);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    WorkspaceCloud c;
    c.digit = digit;
    for (int k = 0; k < n; ++k) {
        ActivationPattern a = baseline;
        for (const auto& [m, b] : idx) a[m] = b.lo + (b.hi - b.lo) * unit(rng);
        const auto rep = statics::solve_digit(model, digit, a, initial, options);
        if (!rep.converged) {
            ++c.excluded;
            continue;
        }
        c.points.push_back(forward_kinematics(model, rep.posture).digit(digit).pad);
        c.activations.push_back(a);
    }
    return c;
}

WorkspaceCloud workspace_sample(const HandModel& model, Digit digit, const std::vector<MuscleBound>& bounds,
                                int n, std::uint64_t seed) {
    return workspace_sample(model, digit, bounds, n, seed, model.zero_activation(), model.rest_posture());
}

nlohmann::json cloud_json(const WorkspaceCloud& c) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.points) pts.push_back({p.x(), p.y(), p.z()});
    return {{"digit", to_string(c.digit)}, {"points_mm", pts}, {"excluded", c.excluded}};
}

}  // namespace acb::kin
