#include "acb/model.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <fstream>

using namespace acb;

namespace {

bool has_rule(const std::vector<Violation>& v, const std::string& rule) {
    return std::any_of(v.begin(), v.end(), [&](const Violation& x) { return x.rule == rule; });
}

}  // namespace

TEST(Model, DefaultIsValid) {
    EXPECT_TRUE(validate(default_model_data()).empty());
    const auto& m = default_model();
    EXPECT_EQ(m.muscle_count(), 34u);  // 10 thumb plus 6 per long finger
    EXPECT_EQ(m.chain(Digit::Thumb).size(), 3u);
    EXPECT_EQ(m.chain(Digit::Little).size(), 4u);
    EXPECT_TRUE(m.within_ranges(m.rest_posture()));
}

TEST(Model, ValidationRules) {
    const auto base = default_model_data();
    struct Case {
        const char* rule;
        std::function<void(ModelData&)> edit;
    };
    const std::vector<Case> cases = {
        {"bone.length_positive", [](ModelData& d) { d.bones[1].length = 0.0; }},
        {"bone.unique_id", [](ModelData& d) { d.bones[2].id = d.bones[1].id; }},
        {"muscle.max_tension_positive", [](ModelData& d) { d.muscles[0].max_tension = -1.0; }},
        {"model.lum_coupling_range", [](ModelData& d) { d.lum_coupling = 1.5; }},
        {"dof.range_ordered", [](ModelData& d) { std::swap(d.joints[0].dofs[0].min, d.joints[0].dofs[0].max); }},
        {"tendon.muscle_exists", [](ModelData& d) { d.tendons[0].muscle = "nope"; }},
        {"segment.joint_exists", [](ModelData& d) { d.tendons[0].segments[0].joint = "nope"; }},
        {"segment.side_sign", [](ModelData& d) { d.tendons[0].segments[0].side = 0; }},
        {"segment.gate_exists",
         [](ModelData& d) {
             for (auto& t : d.tendons)
                 for (auto& s : t.segments)
                     if (s.gate) {
                         s.gate->id = "nope";
                         return;
                     }
         }},
    };
    for (const auto& c : cases) {
        auto d = base;
        c.edit(d);
        const auto v = validate(d);
        EXPECT_TRUE(has_rule(v, c.rule)) << c.rule;
        EXPECT_THROW(HandModel{d}, ModelError) << c.rule;
    }
}

TEST(Model, ModelErrorListsViolation) {
    auto d = default_model_data();
    d.bones[1].length = -2.0;
    try {
        HandModel m(d);
        FAIL() << "expected ModelError";
    } catch (const ModelError& e) {
        EXPECT_NE(std::string(e.what()).find("bone.length_positive"), std::string::npos);
    }
}

TEST(Model, SerializeRoundTrip) {
    const auto d = default_model_data();
    const auto doc = serialize(d);
    EXPECT_EQ(doc.at("schema").get<std::string>(), kSchemaId);
    const auto back = parse_model_data(doc);
    EXPECT_TRUE(approx_equal(d, back));
    EXPECT_EQ(serialize(back), doc);
}

TEST(Model, ShippedDocumentMatchesBuiltIn) {
    std::ifstream in(ACB_DEFAULT_MODEL_JSON);
    ASSERT_TRUE(in.good());
    const auto doc = nlohmann::json::parse(in);
    EXPECT_TRUE(approx_equal(parse_model_data(doc), default_model_data()));
    EXPECT_NO_THROW(load_model_file(ACB_DEFAULT_MODEL_JSON));
}

TEST(Model, ParseErrorsCarryPath) {
    auto doc = serialize(default_model_data());
    doc["bones"][0]["length_mm"] = "long";
    try {
        parse_model_data(doc);
        FAIL() << "expected ModelError";
    } catch (const ModelError& e) {
        EXPECT_NE(std::string(e.what()).find("/bones/0"), std::string::npos) << e.what();
    }
    EXPECT_THROW(load_model_file("/nonexistent/model.json"), ModelError);
}

TEST(Model, SlaveProjectionUsesGroupMean) {
    const auto& m = default_model();
    auto a = m.activation_from({{"FDS_ring", 0.2}, {"FDS_little", 0.6}});
    const auto p = project_slave_groups(m, a);
    EXPECT_NEAR(p[m.muscle_index("FDS_ring")], 0.4, 1e-15);
    EXPECT_NEAR(p[m.muscle_index("FDS_little")], 0.4, 1e-15);
    EXPECT_EQ(project_slave_groups(m, p), p);
}

TEST(Model, AbductionLockNarrowsWithFlexion) {
    const auto& m = default_model();
    const auto abd = m.dof_index("index.MCP.abd");
    const auto [lo0, hi0] = m.effective_range(abd, m.rest_posture());
    const auto flexed = m.posture_from_degrees({{"index.MCP.flex", 60.0}});
    const auto [lo1, hi1] = m.effective_range(abd, flexed);
    EXPECT_LT(hi1 - lo1, hi0 - lo0);
}
