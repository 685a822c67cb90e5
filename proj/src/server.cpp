#include "acb/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>

#include <iostream>

#include <sys/socket.h>

namespace acb::service {

namespace asio = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = asio::ip::tcp;

struct Server::Impl {
    std::shared_ptr<const HandModel> model;
    std::string model_id;
    asio::io_context ioc;
    tcp::acceptor acceptor{ioc};
    std::thread accept_thread;
    std::atomic<bool> stopping{false};
    std::mutex mutex;
    std::vector<std::shared_ptr<tcp::socket>> sockets;
    std::vector<std::thread> connections;

    void serve(std::shared_ptr<tcp::socket> socket) {
        try {
            websocket::stream<tcp::socket&> ws(*socket);
            ws.accept();
            Session session(model, model_id);
            ws.text(true);
            ws.write(asio::buffer(session.hello().dump()));
            beast::flat_buffer buffer;
            while (true) {
                ws.read(buffer);
                const std::string text = beast::buffers_to_string(buffer.data());
                buffer.consume(buffer.size());
                ws.text(true);
                ws.write(asio::buffer(session.handle_text(text).dump()));
            }
        } catch (const beast::system_error& e) {
            if (e.code() != websocket::error::closed && !stopping) {
                std::cerr << "connection ended: " << e.code().message() << "\n";
            }
        } catch (const std::exception& e) {
            std::cerr << "connection error: " << e.what() << "\n";
        }
    }

    void accept_loop() {
        while (!stopping) {
            auto socket = std::make_shared<tcp::socket>(ioc);
            beast::error_code ec;
            acceptor.accept(*socket, ec);
            if (ec) {
                if (stopping) break;
                continue;
            }
            std::lock_guard lock(mutex);
            sockets.push_back(socket);
            connections.emplace_back([this, socket] { serve(socket); });
        }
    }
};

Server::Server(std::shared_ptr<const HandModel> model, std::string model_id, std::string address, std::uint16_t port)
    : impl_(std::make_unique<Impl>()) {
    impl_->model = std::move(model);
    impl_->model_id = std::move(model_id);
    const tcp::endpoint ep(asio::ip::make_address(address), port);
    impl_->acceptor.open(ep.protocol());
    impl_->acceptor.set_option(asio::socket_base::reuse_address(true));
    impl_->acceptor.bind(ep);
    impl_->acceptor.listen();
    port_ = impl_->acceptor.local_endpoint().port();
}

Server::~Server() { stop(); }

void Server::start() {
    impl_->accept_thread = std::thread([this] { impl_->accept_loop(); });
}

void Server::run() { impl_->accept_loop(); }

void Server::stop() {
    if (impl_->stopping.exchange(true)) return;
    beast::error_code ec;
    // Shutting the listening socket down wakes the blocking accept.
    impl_->acceptor.cancel(ec);
    ::shutdown(impl_->acceptor.native_handle(), SHUT_RDWR);
    if (impl_->accept_thread.joinable()) impl_->accept_thread.join();
    impl_->acceptor.close(ec);
    std::lock_guard lock(impl_->mutex);
    for (auto& s : impl_->sockets) ::shutdown(s->native_handle(), SHUT_RDWR);
    for (auto& t : impl_->connections) {
        if (t.joinable()) t.join();
    }
    for (auto& s : impl_->sockets) s->close(ec);
}

}  // namespace acb::service
