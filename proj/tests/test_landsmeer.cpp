#include "acb/landsmeer.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace acb;
using namespace acb::landsmeer;

namespace {

constexpr double kR = 8.0, kY = 7.0, kD = 6.5;

double central_difference(LandsmeerModel m, double th) {
    const double h = 1e-5;
    return (segment_excursion(m, kR, kY, kD, th + h) - segment_excursion(m, kR, kY, kD, th - h)) / (2.0 * h);
}

}  // namespace

TEST(Landsmeer, ClosedFormsAtKnownAngles) {
    EXPECT_DOUBLE_EQ(excursion_I(8.0, kPi / 2), 4.0 * kPi);
    EXPECT_NEAR(excursion_II(8.0, kPi / 2), 16.0 * std::sin(kPi / 4), 1e-12);
    EXPECT_NEAR(excursion_II(8.0, kPi), 16.0, 1e-12);
    // At a right angle cot(π/4) = 1, so E = 2y + θ(d − y).
    EXPECT_NEAR(excursion_III(kY, kD, kPi / 2), 2 * kY + kPi / 2 * (kD - kY), 1e-12);
    for (double th : {0.0, 0.3, 1.0, 2.5}) {
        EXPECT_DOUBLE_EQ(moment_arm_I(kR, th), kR);
        EXPECT_NEAR(moment_arm_II(kR, th), kR * std::cos(th / 2), 1e-12);
    }
}

TEST(Landsmeer, MomentArmMatchesFiniteDifference) {
    for (auto m : {LandsmeerModel::I, LandsmeerModel::II, LandsmeerModel::III}) {
        for (int i = 0; i < 100; ++i) {
            const double th = kPi * (i + 0.5) / 100.0;
            const double arm = segment_moment_arm(m, kR, kY, kD, th);
            EXPECT_LT(std::abs(arm - central_difference(m, th)) / std::abs(arm), 1e-6)
                << to_string(m) << " at " << th;
        }
    }
}

TEST(Landsmeer, SeriesBranchIsContinuous) {
    const double t = kSeriesThreshold;
    const double below = std::nextafter(t, 0.0);
    EXPECT_LT(std::abs(excursion_III(kY, kD, t) - excursion_III(kY, kD, below)), 1e-9);
    EXPECT_LT(std::abs(moment_arm_III(kY, kD, t) - moment_arm_III(kY, kD, below)), 1e-9);
    // Long-double closed form as a reference just above and below the switch.
    for (double th : {0.5 * t, 0.999 * t, 1.001 * t, 2.0 * t}) {
        const long double lt = th, ly = kY, ld = kD;
        const long double ref = 2.0L * ly + lt * ld - lt * ly / std::tan(0.5L * lt);
        EXPECT_NEAR(excursion_III(kY, kD, th), static_cast<double>(ref), 1e-10);
    }
    EXPECT_DOUBLE_EQ(excursion_III(kY, kD, 0.0), 0.0);
    EXPECT_DOUBLE_EQ(moment_arm_III(kY, kD, 0.0), kD);
}

TEST(Landsmeer, ExcursionIncreasesOnOpenInterval) {
    for (auto m : {LandsmeerModel::I, LandsmeerModel::II, LandsmeerModel::III}) {
        double prev = -1.0;
        for (int i = 0; i <= 300; ++i) {
            const double th = (kPi - 1e-3) * i / 300.0;
            const double e = segment_excursion(m, kR, kY, kD, th);
            EXPECT_GT(e, prev);
            prev = e;
        }
    }
}

TEST(Landsmeer, DomainErrors) {
    EXPECT_THROW(excursion_I(0.0, 1.0), DomainError);
    EXPECT_THROW(excursion_I(-1.0, 1.0), DomainError);
    EXPECT_THROW(excursion_II(8.0, -0.1), DomainError);
    EXPECT_THROW(excursion_II(8.0, kPi + 1e-9), DomainError);
    EXPECT_NO_THROW(excursion_II(8.0, kPi));
    EXPECT_THROW(excursion_III(kY, kD, kPi), DomainError);
    EXPECT_THROW(excursion_III(0.0, kD, 1.0), DomainError);
    EXPECT_THROW(excursion_III(kY, -1.0, 1.0), DomainError);
    EXPECT_THROW(moment_arm_III(kY, kD, std::nan("")), DomainError);
}

TEST(Landsmeer, SignedExcursionIsOddAndArmIsEven) {
    CompiledSegment s;
    s.model = LandsmeerModel::III;
    s.y = kY;
    s.d = kD;
    for (int side : {+1, -1}) {
        s.side = side;
        for (double th : {0.01, 0.4, 1.2}) {
            EXPECT_DOUBLE_EQ(signed_excursion(s, -th), -signed_excursion(s, th));
            EXPECT_DOUBLE_EQ(signed_moment_arm(s, -th), signed_moment_arm(s, th));
            EXPECT_NEAR(signed_excursion(s, th), side * excursion_III(kY, kD, th), 1e-12);
        }
    }
}

TEST(Landsmeer, PathExcursionSumsSegments) {
    const auto& m = default_model();
    const auto p = m.posture_from_degrees({{"index.MCP.flex", 45.0}, {"index.PIP.flex", 60.0}});
    const auto r = path_excursion(m, "FDS_index", p);
    double sum = 0.0;
    for (const auto& c : r.per_segment) sum += c.contribution;
    EXPECT_NEAR(sum, r.excursion, 1e-12);
    EXPECT_GT(r.excursion, 0.0);
    EXPECT_DOUBLE_EQ(path_excursion(m, "FDS_index", m.rest_posture()).excursion, 0.0);
}
