#include "acb/protocols.hpp"
#include "acb/server.hpp"
#include "acb/service.hpp"

#include <boost/asio/connect.hpp>
#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <gtest/gtest.h>

using namespace acb;
using namespace acb::service;
using nlohmann::json;

namespace {

std::shared_ptr<const HandModel> model() {
    static const auto m = std::make_shared<const HandModel>(default_model_data());
    return m;
}

json msg(const std::string& type, std::int64_t seq, json payload = json::object()) {
    return {{"type", type}, {"seq", seq}, {"payload", std::move(payload)}};
}

}  // namespace

TEST(Session, HelloDescribesModel) {
    Session s(model());
    const auto h = s.hello();
    EXPECT_EQ(h["type"], "hello");
    EXPECT_EQ(h["payload"]["muscles"].size(), model()->muscle_count());
    EXPECT_EQ(h["payload"]["presets"]["grasp"].size(), 33u);
    EXPECT_EQ(h["payload"]["presets"]["synergy"].size(), protocols::synergy_scenarios().size());
}

TEST(Session, ZeroActivationFromRest) {
    Session s(model());
    const auto r = s.handle(msg("set_activation", 1, {{"activation", json::object()}}));
    ASSERT_EQ(r["type"], "state");
    EXPECT_EQ(r["seq"], 1);
    EXPECT_EQ(r["payload"]["converged"], true);
    EXPECT_EQ(s.posture(), model()->rest_posture());
    EXPECT_EQ(r["payload"]["mode"], "active");
    EXPECT_EQ(r["payload"]["bones"].size(), model()->data().bones.size());
}

TEST(Session, ClawMatchesBatchSolve) {
    Session s(model());
    const auto& sc = protocols::synergy_scenario("claw");
    const auto r = s.handle(msg("set_activation", 1, {{"activation", sc.activation}}));
    const auto batch = protocols::synergy_posture(*model(), sc);
    EXPECT_EQ(s.posture(), batch.report.posture);
    EXPECT_EQ(r["payload"]["residual"].get<double>(), batch.report.residual);
    EXPECT_EQ(s.handle(msg("load_preset", 2, {{"name", "claw"}}))["payload"]["posture_deg"], r["payload"]["posture_deg"]);
}

TEST(Session, PartialUpdateKeepsOtherMuscles) {
    Session s(model());
    s.handle(msg("set_activation", 1, {{"activation", {{"FDP_index", 0.3}, {"EDC_index", 0.2}}}}));
    const auto r = s.handle(msg("set_activation", 2, {{"activation", {{"FDP_index", 0.5}}}}));
    EXPECT_DOUBLE_EQ(r["payload"]["activation"]["EDC_index"].get<double>(), 0.2);
    EXPECT_DOUBLE_EQ(r["payload"]["activation"]["FDP_index"].get<double>(), 0.5);
    const auto reset = s.handle(msg("set_activation", 3, {{"activation", {{"FDP_index", 0.5}}}, {"reset", true}}));
    EXPECT_DOUBLE_EQ(reset["payload"]["activation"]["EDC_index"].get<double>(), 0.0);
}

TEST(Session, SlaveGroupMembersMoveTogether) {
    Session s(model());
    const auto r = s.handle(msg("set_activation", 1, {{"activation", {{"FDS_ring", 0.6}}}}));
    EXPECT_DOUBLE_EQ(r["payload"]["activation"]["FDS_little"].get<double>(), 0.6);
}

TEST(Session, ErrorsLeaveStateUnchanged) {
    Session s(model());
    s.handle(msg("set_activation", 1, {{"activation", {{"FDP_index", 0.3}}}}));
    const auto a = s.activation();
    const auto p = s.posture();
    const std::vector<std::pair<json, std::string>> bad = {
        {msg("set_activation", 2, {{"activation", {{"FDP_index", 0.9}, {"NOPE", 0.1}}}}), "unknown_muscle"},
        {msg("set_activation", 3, {{"activation", {{"FDP_index", 1.5}}}}), "bad_value"},
        {msg("set_activation", 4, {{"activation", 3}}), "bad_payload"},
        {msg("load_preset", 5, {{"name", "fist2"}}), "unknown_preset"},
        {msg("dance", 6), "unknown_type"},
        {msg("set_activation", 1, {{"activation", {{"FDP_index", 0.9}}}}), "stale_seq"},
        {json{{"type", "hello"}}, "bad_message"},
    };
    for (const auto& [m, code] : bad) {
        const auto r = s.handle(m);
        EXPECT_EQ(r["type"], "error");
        EXPECT_EQ(r["payload"]["code"], code);
        EXPECT_EQ(s.activation(), a);
        EXPECT_EQ(s.posture(), p);
        EXPECT_EQ(s.last_seq(), 1);
    }
    EXPECT_EQ(s.handle_text("{not json")["payload"]["code"], "bad_json");
    // A rejected seq number can be reused once valid.
    EXPECT_EQ(s.handle(msg("set_activation", 2, {{"activation", {{"FDP_index", 0.4}}}}))["type"], "state");
}

TEST(Session, SynergyPresetEqualsManualPattern) {
    Session a(model()), b(model());
    const auto ra = a.handle(msg("load_preset", 1, {{"name", "beak"}}));
    const auto rb = b.handle(msg("set_activation", 1, {{"activation", protocols::synergy_scenario("beak").activation}}));
    EXPECT_EQ(ra, rb);
}

TEST(Session, GraspPresetIsPosed) {
    Session s(model());
    const auto r = s.handle(msg("load_preset", 1, {{"name", "tip pinch"}}));
    ASSERT_EQ(r["type"], "state");
    EXPECT_EQ(r["payload"]["mode"], "posed");
    EXPECT_EQ(r["payload"]["preset"], "Tip Pinch");
    EXPECT_TRUE(r["payload"]["residual"].is_null());
    EXPECT_TRUE(s.posed());
    const auto& g = protocols::grasp_preset("Tip Pinch");
    EXPECT_EQ(s.posture(), protocols::preset_posture(*model(), g));
    for (const auto& [dof, deg] : g.posture_deg)
        EXPECT_NEAR(r["payload"]["posture_deg"][dof].get<double>(), deg, 1e-9);
    // Activation afterwards solves from the posed posture.
    const auto next = s.handle(msg("set_activation", 2, {{"activation", json::object()}}));
    EXPECT_EQ(next["payload"]["mode"], "active");
}

TEST(Session, ReplayIsDeterministic) {
    const std::vector<json> script = {
        msg("set_activation", 1, {{"activation", {{"FDP_index", 0.3}, {"OP", 0.5}}}}),
        msg("set_activation", 2, {{"activation", {{"NOPE", 1.0}}}}),
        msg("load_preset", 3, {{"name", "Power Disk"}}),
        msg("set_activation", 4, {{"activation", {{"FPL", 0.4}}}}),
        msg("load_preset", 5, {{"name", "claw"}}),
    };
    Session a(model()), b(model());
    for (const auto& m : script) EXPECT_EQ(a.handle(m), b.handle(m));
}

TEST(Server, WebsocketRoundTrip) {
    namespace beast = boost::beast;
    namespace ws = beast::websocket;
    using tcp = boost::asio::ip::tcp;

    Server server(model(), "default", "127.0.0.1", 0);
    ASSERT_NE(server.port(), 0);
    server.start();

    boost::asio::io_context ioc;
    tcp::resolver resolver(ioc);
    ws::stream<tcp::socket> client(ioc);
    boost::asio::connect(client.next_layer(), resolver.resolve("127.0.0.1", std::to_string(server.port())));
    client.handshake("127.0.0.1", "/");

    auto read = [&] {
        beast::flat_buffer buf;
        client.read(buf);
        return json::parse(beast::buffers_to_string(buf.data()));
    };
    EXPECT_EQ(read()["type"], "hello");

    client.write(boost::asio::buffer(msg("set_activation", 1, {{"activation", {{"FDP_index", 0.3}}}}).dump()));
    const auto state = read();
    Session local(model());
    EXPECT_EQ(state, local.handle(msg("set_activation", 1, {{"activation", {{"FDP_index", 0.3}}}})));

    client.write(boost::asio::buffer(std::string("garbage")));
    EXPECT_EQ(read()["payload"]["code"], "bad_json");

    client.close(ws::close_code::normal);
    server.stop();
}
