#include "acb/kinematics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace acb;
using namespace acb::kin;

namespace {

Posture random_posture(const HandModel& m, std::mt19937_64& rng) {
    auto p = m.rest_posture();
    for (std::size_t i = 0; i < m.dof_count(); ++i) {
        const auto& s = m.dof_spec(i);
        p[i] = std::uniform_real_distribution<double>(s.min, s.max)(rng);
    }
    return p;
}

}  // namespace

TEST(Kinematics, LinksAreRigidAndFramesOrthonormal) {
    const auto& m = default_model();
    std::mt19937_64 rng(3);
    for (int k = 0; k < 50; ++k) {
        const auto f = forward_kinematics(m, random_posture(m, rng));
        for (std::size_t b = 0; b < f.bones.size(); ++b) {
            const auto& fr = f.bones[b];
            EXPECT_NEAR((f.bone_ends[b] - fr.origin).norm(), m.data().bones[b].length, 1e-9);
            EXPECT_NEAR((fr.rotation.transpose() * fr.rotation - Mat3::Identity()).norm(), 0.0, 1e-12);
            EXPECT_NEAR(fr.rotation.determinant(), 1.0, 1e-12);
            EXPECT_NEAR((f.bone_ends[b] - fr.origin).normalized().dot(fr.y()), 1.0, 1e-12);
        }
    }
}

TEST(Kinematics, ChildStartsAtParentEnd) {
    const auto& m = default_model();
    std::mt19937_64 rng(5);
    const auto f = forward_kinematics(m, random_posture(m, rng));
    for (std::size_t d = 0; d < kDigitCount; ++d) {
        const auto& ch = m.chain(static_cast<Digit>(d));
        for (std::size_t k = 1; k < ch.size(); ++k) {
            EXPECT_NEAR((f.bones[ch[k]].origin - f.bone_ends[ch[k - 1]]).norm(), 0.0, 1e-12);
        }
    }
}

TEST(Kinematics, FlexionMovesTipPalmward) {
    const auto& m = default_model();
    const auto rest = forward_kinematics(m, m.rest_posture());
    const auto bent = forward_kinematics(m, m.posture_from_degrees({{"index.PIP.flex", 60.0}}));
    EXPECT_GT(bent.digit(Digit::Index).tip.z(), rest.digit(Digit::Index).tip.z());
    EXPECT_NEAR(bent.digit(Digit::Index).pad_normal.norm(), 1.0, 1e-12);
    EXPECT_NEAR((rest.digit(Digit::Index).tip - rest.digit(Digit::Index).pad).norm(),
                std::hypot(kPadSetback, m.data().bones[m.chain(Digit::Index).back()].radius), 1e-9);
}

TEST(Kinematics, FitPlaneRecoversKnownPlane) {
    const Vec3 n = Vec3(1.0, 2.0, 2.0).normalized();
    const Vec3 u = n.unitOrthogonal(), v = n.cross(u);
    std::vector<Vec3> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(Vec3(1, 2, 3) + (i % 5) * u + (i / 5) * 1.7 * v);
    const auto pl = fit_plane(pts);
    EXPECT_NEAR(std::abs(pl.normal.dot(n)), 1.0, 1e-12);
    EXPECT_LT(pl.max_deviation, 1e-9);
    pts.push_back(Vec3(1, 2, 3) + 0.5 * u + 3.0 * n);
    EXPECT_GT(fit_plane(pts).max_deviation, 1.0);
    EXPECT_ANY_THROW(fit_plane({Vec3::Zero(), Vec3::UnitX()}));
}

TEST(Kinematics, ThumbSaddleSweepIsNotPlanar) {
    const auto& m = default_model();
    std::vector<Vec3> tips;
    for (double flex : {-20.0, 10.0, 40.0, 70.0})
        for (double abd : {0.0, 30.0, 60.0})
            tips.push_back(forward_kinematics(m, m.posture_from_degrees({{"thumb.TMC.flex", flex}, {"thumb.TMC.abd", abd}}))
                               .digit(Digit::Thumb)
                               .tip);
    EXPECT_GT(fit_plane(tips).max_deviation, 3.0);
}

TEST(Kinematics, WorkspaceSamplingIsSeeded) {
    const auto& m = default_model();
    const std::vector<MuscleBound> b = {{"FDP_index", 0.0, 1.0}, {"EDC_index", 0.0, 0.5}};
    const auto a = workspace_sample(m, Digit::Index, b, 30, 11);
    const auto c = workspace_sample(m, Digit::Index, b, 30, 11);
    const auto d = workspace_sample(m, Digit::Index, b, 30, 12);
    ASSERT_EQ(a.points.size() + static_cast<std::size_t>(a.excluded), 30u);
    EXPECT_EQ(a.activations, c.activations);
    EXPECT_NE(a.activations, d.activations);
    for (const auto& act : a.activations) {
        EXPECT_LE(act[m.muscle_index("EDC_index")], 0.5);
        EXPECT_EQ(act[m.muscle_index("FDS_index")], 0.0);
    }
}

TEST(Kinematics, TrajectoryWarmStartsAndRecordsSteps) {
    const auto& m = default_model();
    const auto t = fingertip_trajectory(m, Digit::Index, m.zero_activation(),
                                        m.activation_from({{"FDP_index", 0.5}}), 10);
    EXPECT_EQ(t.points.size(), 10u);
    EXPECT_FALSE(t.first_unconverged.has_value());
    EXPECT_NE(trajectory_csv(t).find('\n'), std::string::npos);
    EXPECT_EQ(trajectory_json(t)["points"].size(), 10u);
    EXPECT_EQ(t.postures.front(), m.rest_posture());
    EXPECT_THROW(fingertip_trajectory(m, Digit::Index, m.zero_activation(), m.zero_activation(), 1), DomainError);
}
