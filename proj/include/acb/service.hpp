#pragma once

#include "acb/statics.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <memory>
#include <string>

namespace acb::service {

/// One client session: current activation, warm-start posture and the last
/// accepted sequence number. Replies are a pure function of (model, state,
/// message). Messages are JSON objects {type, seq, payload}.
class Session {
public:
    explicit Session(std::shared_ptr<const HandModel> model, std::string model_id = "default",
                     statics::SolverOptions options = {});

    /// Model manifest sent on connect (type "hello").
    nlohmann::json hello() const;

    /// Process one message; returns a "state" or "error" reply. Errors leave
    /// the session unchanged.
    nlohmann::json handle(const nlohmann::json& message);
    nlohmann::json handle_text(const std::string& text);

    const ActivationPattern& activation() const { return activation_; }
    const Posture& posture() const { return posture_; }
    std::int64_t last_seq() const { return last_seq_; }
    bool posed() const { return posed_; }

private:
    nlohmann::json set_activation(std::int64_t seq, const nlohmann::json& payload);
    nlohmann::json load_preset(std::int64_t seq, const nlohmann::json& payload);
    nlohmann::json state(std::int64_t seq, const statics::EquilibriumReport* report) const;
    nlohmann::json solve_and_reply(std::int64_t seq, const ActivationPattern& a);

    std::shared_ptr<const HandModel> model_;
    std::string model_id_;
    statics::SolverOptions options_;
    ActivationPattern activation_;
    Posture posture_;
    std::int64_t last_seq_{-1};
    bool posed_{false};
};

nlohmann::json error_reply(std::int64_t seq, const std::string& code, const std::string& message);

}  // namespace acb::service
