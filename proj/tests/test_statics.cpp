#include "acb/statics.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace acb;
using namespace acb::statics;

TEST(Statics, SmoothRelu) {
    EXPECT_DOUBLE_EQ(smooth_relu(-1.0, 0.5), 0.0);
    EXPECT_DOUBLE_EQ(smooth_relu(0.0, 0.5), 0.125);
    EXPECT_DOUBLE_EQ(smooth_relu(2.0, 0.5), 2.0);
    EXPECT_DOUBLE_EQ(smooth_relu(0.5, 0.5), 0.5);
}

TEST(Statics, PassiveTorque) {
    DofSpec s;
    s.min = -0.5;
    s.max = 1.0;
    s.rest = 0.1;
    s.stiffness = 20.0;
    s.barrier_k = 1000.0;
    const double bw = 0.05;
    EXPECT_DOUBLE_EQ(passive_torque(s, 0.1, bw), 0.0);
    EXPECT_DOUBLE_EQ(passive_torque(s, 0.6, bw), -10.0);
    // Past the upper limit the barrier adds to the spring.
    EXPECT_NEAR(passive_torque(s, 1.2, bw), -20.0 * 1.1 - 1000.0 * 0.2, 1e-9);
    EXPECT_NEAR(passive_torque(s, -0.7, bw), 20.0 * 0.8 + 1000.0 * 0.2, 1e-9);
}

TEST(Statics, ZeroActivationStaysAtRest) {
    const auto& m = default_model();
    const auto r = solve_equilibrium(m, m.zero_activation());
    EXPECT_TRUE(r.converged);
    EXPECT_LE(r.iterations, 1);
    EXPECT_EQ(r.posture, m.rest_posture());
    EXPECT_LT(r.residual, 1e-9);
}

TEST(Statics, EquilibriumResidualIsSmall) {
    const auto& m = default_model();
    const auto a = m.activation_from({{"FDP_index", 0.3}, {"EDC_index", 0.2}, {"FPL", 0.3}, {"OP", 0.4}});
    const auto r = solve_equilibrium(m, a);
    ASSERT_TRUE(r.converged);
    EXPECT_LT(r.residual, 0.5);
    EXPECT_TRUE(m.within_ranges(r.posture));
    const auto tau = joint_torques(m, r.posture, project_slave_groups(m, a));
    for (std::size_t i = 0; i < m.dof_count(); ++i) {
        const bool sat = std::find(r.saturated_dofs.begin(), r.saturated_dofs.end(), m.dof(i).id) != r.saturated_dofs.end();
        if (!sat) EXPECT_LT(std::abs(tau[static_cast<Eigen::Index>(i)]), 0.5) << m.dof(i).id;
    }
}

TEST(Statics, Deterministic) {
    const auto& m = default_model();
    SolverOptions opt;
    opt.record_trace = true;
    const auto a = m.activation_from({{"FDP_index", 0.155}, {"EDC_index", 0.153}, {"FDS_ring", 0.5}});
    const auto r1 = solve_equilibrium(m, a, opt);
    const auto r2 = solve_equilibrium(m, a, opt);
    EXPECT_TRUE(r1 == r2);
    EXPECT_EQ(r1.trace.size(), static_cast<std::size_t>(r1.iterations) + 1);
}

TEST(Statics, FdpMonotonicity) {
    const auto& m = default_model();
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 0.5);
    SolverOptions tight;
    tight.tolerance = 1e-3;
    tight.max_iter = 20000;
    const auto mcp = m.dof_index("index.MCP.flex"), pip = m.dof_index("index.PIP.flex"),
               dip = m.dof_index("index.DIP.flex");
    for (int b = 0; b < 20; ++b) {
        std::map<std::string, double> base;
        for (const char* n : {"FDS_index", "EDC_index", "INT_radial_index", "INT_ulnar_index", "LUM_index"})
            base[n] = u(rng);
        double prev[3] = {-1e9, -1e9, -1e9};
        for (int k = 0; k <= 10; ++k) {
            auto act = base;
            act["FDP_index"] = k / 10.0;
            const auto r = solve_equilibrium(m, m.activation_from(act), tight);
            ASSERT_TRUE(r.converged);
            const double v[3] = {r.posture[mcp], r.posture[pip], r.posture[dip]};
            for (int j = 0; j < 3; ++j) {
                EXPECT_GE(v[j], prev[j] - 1e-6) << "baseline " << b << " step " << k;
                prev[j] = v[j];
            }
        }
    }
}

TEST(Statics, DigitsAreIndependent) {
    const auto& m = default_model();
    const auto a = m.activation_from({{"FDP_index", 0.4}, {"FDP_little", 0.4}});
    const auto both = solve_equilibrium(m, a);
    const auto index = solve_digit(m, Digit::Index, m.activation_from({{"FDP_index", 0.4}}), m.rest_posture());
    for (auto d : m.digit_dofs(Digit::Index)) EXPECT_EQ(both.posture[d], index.posture[d]);
    for (auto d : m.digit_dofs(Digit::Middle)) EXPECT_EQ(both.posture[d], m.rest_posture()[d]);
}

TEST(Statics, SaturationAtFullFlexion) {
    const auto& m = default_model();
    const auto r = solve_equilibrium(m, m.activation_from({{"FDP_index", 1.0}, {"FDS_index", 1.0}}));
    EXPECT_TRUE(r.converged);
    EXPECT_FALSE(r.saturated_dofs.empty());
    EXPECT_THROW(solve_equilibrium(m, m.zero_activation(), Posture(3)), ModelError);
}
