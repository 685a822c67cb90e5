#include "acb/extensor_net.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace acb;
using namespace acb::extensor;

namespace {

Posture with(const HandModel& m, std::map<std::string, double> deg) { return m.posture_from_degrees(deg); }

}  // namespace

TEST(Extensor, Smoothstep) {
    EXPECT_DOUBLE_EQ(smoothstep(-1.0), 0.0);
    EXPECT_DOUBLE_EQ(smoothstep(0.5), 0.5);
    EXPECT_DOUBLE_EQ(smoothstep(2.0), 1.0);
    EXPECT_DOUBLE_EQ(smoothstep(0.25), 0.25 * 0.25 * 2.5);
    EXPECT_DOUBLE_EQ(ramp(15.0, 10.0, 20.0), 0.5);
}

TEST(Extensor, DeepSlipSlackensWithInterphalangealFlexion) {
    const auto& m = default_model();
    EXPECT_DOUBLE_EQ(gate_weight(m, "index.deep_slip", m.rest_posture()), 1.0);
    EXPECT_NEAR(gate_weight(m, "index.deep_slip", with(m, {{"index.PIP.flex", 100}, {"index.DIP.flex", 80}})), 0.05, 1e-12);
    // Mean IP angle 65 deg is halfway through [40, 90].
    EXPECT_NEAR(gate_weight(m, "index.deep_slip", with(m, {{"index.PIP.flex", 65}, {"index.DIP.flex", 65}})),
                0.05 + 0.95 * 0.5, 1e-12);
}

TEST(Extensor, LateralBandChangesSign) {
    const auto& m = default_model();
    EXPECT_DOUBLE_EQ(gate_weight(m, "index.lateral_band", with(m, {{"index.PIP.flex", 30}})), 1.0);
    EXPECT_NEAR(gate_weight(m, "index.lateral_band", with(m, {{"index.PIP.flex", 80}})), 0.0, 1e-12);
    EXPECT_NEAR(gate_weight(m, "index.lateral_band", with(m, {{"index.PIP.flex", 100}})), -0.4 * 0.5, 1e-12);
    EXPECT_LT(gate_weight(m, "index.lateral_band", with(m, {{"index.PIP.flex", 90}})), 0.0);
}

TEST(Extensor, HoodChannelsAreComplementary) {
    const auto& m = default_model();
    for (double mcp : {0.0, 20.0, 35.0, 50.0, 80.0}) {
        const auto p = with(m, {{"index.MCP.flex", mcp}});
        EXPECT_NEAR(gate_weight(m, "index.int_hood", p, GateChannel::Primary) +
                        gate_weight(m, "index.int_hood", p, GateChannel::Complement),
                    1.0, 1e-15);
    }
    EXPECT_NEAR(gate_weight(m, "index.int_hood", with(m, {{"index.MCP.flex", 35}})), 0.5, 1e-12);
}

TEST(Extensor, OrlAndIndependentGates) {
    const auto& m = default_model();
    EXPECT_DOUBLE_EQ(gate_weight(m, "index.orl", m.rest_posture()), 1.0);
    EXPECT_NEAR(gate_weight(m, "index.orl", with(m, {{"index.PIP.flex", 90}})), 0.5, 1e-12);
    EXPECT_DOUBLE_EQ(gate_weight(m, "index.lum", with(m, {{"index.PIP.flex", 90}})), 1.0);
    EXPECT_DOUBLE_EQ(gate_weight(m, "thumb.expansion", m.rest_posture()), 1.0);
}

TEST(Extensor, LumbricalTransferArithmetic) {
    auto d = default_model_data();
    for (auto& mu : d.muscles)
        if (mu.id == "FDP_index") mu.max_tension = 10.0;
    d.lum_coupling = 0.5;
    const HandModel m(d);
    const auto a = m.activation_from({{"FDP_index", 1.0}, {"LUM_index", 1.0}});
    const auto delta = lum_fdp_transfer(m, a);
    const auto fdp = static_cast<Eigen::Index>(m.muscle_index("FDP_index"));
    const auto lum = static_cast<Eigen::Index>(m.muscle_index("LUM_index"));
    EXPECT_DOUBLE_EQ(delta[fdp], -5.0);
    EXPECT_DOUBLE_EQ(delta[lum], 5.0);
    EXPECT_DOUBLE_EQ(delta.sum(), 0.0);
    const auto t = tendon_tensions(m, a);
    EXPECT_DOUBLE_EQ(t[fdp], 5.0);
    EXPECT_DOUBLE_EQ(t[lum], m.muscle(static_cast<std::size_t>(lum)).max_tension + 5.0);
    // Without FDP tension there is nothing to divert.
    EXPECT_DOUBLE_EQ(lum_fdp_transfer(m, m.activation_from({{"LUM_index", 1.0}})).cwiseAbs().sum(), 0.0);
}

TEST(Extensor, ActivationChecks) {
    const auto& m = default_model();
    EXPECT_THROW(check_activation(m, ActivationPattern(3)), ModelError);
    auto a = m.zero_activation();
    a[0] = 1.2;
    EXPECT_THROW(check_activation(m, a), DomainError);
    a[0] = -0.1;
    EXPECT_THROW(tendon_tensions(m, a), DomainError);
    a[0] = std::nan("");
    EXPECT_THROW(check_activation(m, a), DomainError);
}

TEST(Extensor, RoutingMatrixSigns) {
    const auto& m = default_model();
    const auto R = routing_matrix(m, m.rest_posture());
    auto at = [&](const char* dof, const char* mu) {
        return R(static_cast<Eigen::Index>(m.dof_index(dof)), static_cast<Eigen::Index>(m.muscle_index(mu)));
    };
    EXPECT_GT(at("index.DIP.flex", "FDP_index"), 0.0);
    EXPECT_GT(at("index.PIP.flex", "FDS_index"), 0.0);
    EXPECT_DOUBLE_EQ(at("index.DIP.flex", "FDS_index"), 0.0);
    // Full deep-slip engagement at rest: the ungated model-I arm, extending.
    EXPECT_NEAR(at("index.MCP.flex", "EDC_index"), -7.664, 1e-9);
    EXPECT_DOUBLE_EQ(at("middle.DIP.flex", "FDP_index"), 0.0);
}

TEST(Extensor, EveryFlexionDofKeepsAnAntagonistPair) {
    const auto& m = default_model();
    std::mt19937_64 rng(17);
    for (int k = 0; k < 200; ++k) {
        auto p = m.rest_posture();
        for (std::size_t i = 0; i < m.dof_count(); ++i) {
            const auto [lo, hi] = m.effective_range(i, p);
            p[i] = std::uniform_real_distribution<double>(lo, hi)(rng);
        }
        const auto R = routing_matrix(m, p);
        for (std::size_t i = 0; i < m.dof_count(); ++i) {
            if (m.dof_spec(i).name != "flex") continue;
            const auto row = R.row(static_cast<Eigen::Index>(i));
            EXPECT_GT(row.maxCoeff(), 0.0) << m.dof(i).id;
            EXPECT_LT(row.minCoeff(), 0.0) << m.dof(i).id;
        }
    }
}
