#include "acb/protocols.hpp"

#include <gtest/gtest.h>

#include <set>

using namespace acb;
using namespace acb::protocols;

TEST(Table3, ReproducesPublishedExcursions) {
    const auto r = table3_check(default_model());
    ASSERT_EQ(r.rows.size(), 3u);
    const double calc[] = {31.4, 23.8, 14.7};
    const double meas[] = {32.7, 26.1, 14.3};
    for (int i = 0; i < 3; ++i) {
        EXPECT_DOUBLE_EQ(r.rows[i].calc, calc[i]);
        EXPECT_DOUBLE_EQ(r.rows[i].measured, meas[i]);
        EXPECT_LE(std::abs(r.rows[i].computed - calc[i]) / calc[i], 0.02);
    }
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(to_json(r)["rows"].size(), 3u);
}

TEST(Synergy, ScenariosPassAndRoundTrip) {
    const auto& m = default_model();
    for (const auto& s : synergy_scenarios()) {
        const auto r = synergy_posture(m, s);
        EXPECT_TRUE(r.pass) << s.name;
        EXPECT_LT(r.report.residual, 0.5) << s.name;
    }
    const auto parsed = parse_scenarios(scenarios_json(synergy_scenarios()));
    ASSERT_EQ(parsed.size(), synergy_scenarios().size());
    EXPECT_EQ(parsed[0].activation, synergy_scenarios()[0].activation);
    EXPECT_ANY_THROW(synergy_scenario("fist2"));
}

TEST(Synergy, ClawKeepsMcpExtendedWhileInterphalangealsFlex) {
    const auto& m = default_model();
    const auto r = synergy_posture(m, "claw");
    EXPECT_LT(std::abs(rad_to_deg(r.report.posture[m.dof_index("index.MCP.flex")])), 15.0);
    EXPECT_GT(rad_to_deg(r.report.posture[m.dof_index("index.PIP.flex")]), 20.0);
}

TEST(Synergy, AblationsDegrade) {
    for (const auto& a : standard_ablations(default_model())) {
        EXPECT_TRUE(a.converged) << a.scenario;
        EXPECT_TRUE(a.degraded) << a.scenario;
        EXPECT_GT(a.ablated_ip_deg, a.base_ip_deg);
    }
}

TEST(Trajectory, ChecksPass) {
    const auto checks = trajectory_checks(default_model());
    ASSERT_EQ(checks.size(), 3u);
    for (const auto& c : checks) EXPECT_TRUE(c.pass) << c.name << " " << c.value;
}

TEST(Kapandji, StagesAreWellFormed) {
    const auto& st = kapandji_stages();
    ASSERT_EQ(st.size(), 8u);
    for (std::size_t i = 0; i < st.size(); ++i) {
        EXPECT_EQ(st[i].id, static_cast<int>(i) + 1);
        EXPECT_DOUBLE_EQ(st[i].tolerance_mm, 5.0);
        for (const auto& b : st[i].bounds) {
            EXPECT_LE(0.0, b.lo);
            EXPECT_LE(b.lo, b.hi);
            EXPECT_LE(b.hi, 1.0);
        }
    }
    EXPECT_EQ(st.front().kind, TargetKind::McpPad);
    EXPECT_EQ(st.back().kind, TargetKind::Fingertip);
    EXPECT_EQ(st.back().digit, Digit::Little);
}

TEST(Kapandji, OppositionShiftsFromAdductorToOpponens) {
    const auto& m = default_model();
    const auto first = kapandji_stage(m, kapandji_stages().front());
    const auto last = kapandji_stage(m, kapandji_stages().back());
    ASSERT_TRUE(first.reached);
    ASSERT_TRUE(last.reached);
    const double ap1 = std::max(first.activation.at("AP_proximal"), first.activation.at("AP_distal"));
    EXPECT_GE(ap1, first.activation.at("OP"));
    EXPECT_GE(last.activation.at("OP"), 0.5);
    EXPECT_GT(last.activation.at("OP"), first.activation.at("OP"));
    EXPECT_TRUE(first.oracle_run && first.oracle_feasible);
}

TEST(Kapandji, OracleRefutesUnreachableBox) {
    const auto& m = default_model();
    auto stage = kapandji_stages().back();
    for (auto& b : stage.bounds) b.lo = b.hi = 0.0;  // thumb fully relaxed
    KapandjiOptions opt;
    opt.oracle_samples = 50;
    const auto r = kapandji_test(m, {stage}, opt);
    EXPECT_FALSE(r.pass);
    EXPECT_FALSE(r.stages[0].reached);
    EXPECT_FALSE(r.stages[0].oracle_feasible);
    EXPECT_TRUE(r.consistent);
}

TEST(Grasp, TaxonomyIsComplete) {
    const auto& p = grasp_presets();
    ASSERT_EQ(p.size(), 33u);
    std::set<int> numbers;
    std::set<std::string> names;
    for (const auto& g : p) {
        numbers.insert(g.number);
        names.insert(g.name);
    }
    EXPECT_EQ(numbers.size(), 33u);
    EXPECT_EQ(*numbers.begin(), 1);
    EXPECT_EQ(*numbers.rbegin(), 33);
    EXPECT_EQ(names.size(), 33u);
}

TEST(Grasp, EveryPresetPasses) {
    const auto& m = default_model();
    for (const auto& g : grasp_presets()) {
        const auto r = grasp_check(m, g);
        EXPECT_TRUE(r.within_limits) << g.name;
        EXPECT_TRUE(r.pass) << g.name << ": " << r.detail;
        EXPECT_LE(r.max_penetration_mm, kContactBand) << g.name;
    }
}

TEST(Grasp, ClassSpecificContacts) {
    const auto& m = default_model();
    const auto sphere = grasp_check(m, "Sphere 4 Finger");
    EXPECT_EQ(sphere.cls, GraspClass::Power);
    EXPECT_GE(sphere.segment_contacts, 4);
    const auto tip = grasp_check(m, "Tip Pinch");
    EXPECT_EQ(tip.cls, GraspClass::Precision);
    EXPECT_GE(tip.pad_contacts, 2);
    EXPECT_TRUE(tip.opposing_pads);
    const auto large = grasp_check(m, "Large Diameter");
    EXPECT_TRUE(large.palm_contact);
}

TEST(Grasp, LookupIsCaseInsensitive) {
    EXPECT_EQ(grasp_preset("tip pinch").number, grasp_preset("Tip Pinch").number);
    EXPECT_EQ(grasp_preset("TIP PINCH").name, "Tip Pinch");
    EXPECT_THROW(grasp_preset("fist2"), DomainError);
}

TEST(Grasp, PresetPostureAppliesDegrees) {
    const auto& m = default_model();
    const auto& g = grasp_preset("Tip Pinch");
    const auto p = preset_posture(m, g);
    for (const auto& [dof, deg] : g.posture_deg) EXPECT_NEAR(rad_to_deg(p[m.dof_index(dof)]), deg, 1e-9) << dof;
}

TEST(Grasp, SignedDistanceOracles) {
    ObjectPrimitive s;
    s.kind = ObjectPrimitive::Kind::Sphere;
    s.centre = Vec3(1, 2, 3);
    s.radius = 10.0;
    Vec3 n;
    EXPECT_NEAR(s.sdf(Vec3(1, 2, 18), &n), 5.0, 1e-12);
    EXPECT_NEAR(n.dot(Vec3::UnitZ()), 1.0, 1e-6);
    EXPECT_NEAR(s.sdf(s.centre), -10.0, 1e-12);

    ObjectPrimitive c;
    c.kind = ObjectPrimitive::Kind::Cylinder;
    c.axis = Vec3::UnitX();
    c.radius = 5.0;
    c.length = 40.0;
    EXPECT_NEAR(c.sdf(Vec3(3, 0, 12)), 7.0, 1e-12);      // beside the shaft
    EXPECT_NEAR(c.sdf(Vec3(25, 0, 0)), 5.0, 1e-12);      // beyond the cap
    EXPECT_NEAR(c.sdf(Vec3(23, 9, 0)), 5.0, 1e-12);      // off the rim: hypot(3, 4)
    EXPECT_NEAR(c.sdf(Vec3(0, 0, 1)), -4.0, 1e-12);
    EXPECT_NEAR(c.sdf(Vec3(0, 6, 0), &n), 1.0, 1e-12);
    EXPECT_NEAR(n.dot(Vec3::UnitY()), 1.0, 1e-6);

    ObjectPrimitive k;
    k.kind = ObjectPrimitive::Kind::Card;
    k.axis = Vec3::UnitZ();
    k.length = 30.0;
    k.thickness = 2.0;
    EXPECT_NEAR(k.sdf(Vec3(0, 0, 4)), 3.0, 1e-12);
    EXPECT_NEAR(k.sdf(Vec3(0, 0, 0)), -1.0, 1e-12);
    EXPECT_NEAR(k.sdf(Vec3(5, 0, 4), &n), 3.0, 1e-12);
    EXPECT_NEAR(n.z(), 1.0, 1e-6);
}

TEST(Grasp, CandidatesCoverHand) {
    const auto& m = default_model();
    const auto& g = grasp_preset("Large Diameter");
    ASSERT_TRUE(g.object);
    const auto c = contact_candidates(m, preset_posture(m, g), *g.object);
    std::set<ContactKind> kinds;
    for (const auto& x : c) kinds.insert(x.kind);
    EXPECT_EQ(kinds.size(), 4u);
    for (const auto& x : c) EXPECT_NEAR(x.normal.norm(), 1.0, 1e-9);
}
