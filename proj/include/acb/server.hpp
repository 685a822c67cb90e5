#pragma once

#include "acb/service.hpp"

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace acb::service {

/// Websocket endpoint: one Session per connection, messages processed in
/// arrival order on the connection's own thread.
class Server {
public:
    Server(std::shared_ptr<const HandModel> model, std::string model_id, std::string address, std::uint16_t port);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    /// Bound port (useful when constructed with port 0).
    std::uint16_t port() const { return port_; }

    /// Accept connections on a background thread.
    void start();
    /// Accept connections on the calling thread until stop().
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
    std::uint16_t port_{0};
};

}  // namespace acb::service
