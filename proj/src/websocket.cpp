#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <deque>
#include <memory>
#include <vector>

#include "dibg/service.hpp"

namespace dibg::service {

namespace {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

constexpr std::string_view kEndpointPath = "/session";

class Connection;

// Live connections. Only touched from the I/O thread.
struct Hub {
  std::vector<std::weak_ptr<Connection>> connections;

  void broadcast(const std::string& text);
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  Connection(tcp::socket socket, Dispatcher& dispatcher, Hub& hub)
      : ws_(std::move(socket)), dispatcher_(dispatcher), hub_(hub) {}

  void start() {
    http::async_read(ws_.next_layer(), buffer_, request_,
                     [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_http(ec); });
  }

  void send(std::shared_ptr<const std::string> text) {
    if (closed_) return;
    queue_.push_back(std::move(text));
    if (queue_.size() == 1) write_next();
  }

  void close() {
    if (closed_) return;
    closed_ = true;
    beast::error_code ignored;
    ws_.next_layer().socket().shutdown(tcp::socket::shutdown_both, ignored);
    ws_.next_layer().socket().close(ignored);
  }

 private:
  void on_http(beast::error_code ec) {
    if (ec) return;
    if (!websocket::is_upgrade(request_) || std::string_view(request_.target().data(), request_.target().size()) != kEndpointPath) {
      reject();
      return;
    }
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept(request_, [self = shared_from_this()](beast::error_code ec) {
      if (ec) return;
      self->hub_.connections.push_back(self);
      self->read_next();
    });
  }

  void reject() {
    auto res = std::make_shared<http::response<http::string_body>>(http::status::not_found, request_.version());
    res->set(http::field::content_type, "text/plain");
    res->body() = "WebSocket endpoint is " + std::string(kEndpointPath) + "\n";
    res->keep_alive(false);
    res->prepare_payload();
    http::async_write(ws_.next_layer(), *res, [self = shared_from_this(), res](beast::error_code, std::size_t) {
      self->close();
    });
  }

  void read_next() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) { self->on_read(ec); });
  }

  void on_read(beast::error_code ec) {
    if (ec) {
      close();
      return;
    }
    std::string text = beast::buffers_to_string(buffer_.data());
    buffer_.consume(buffer_.size());
    Dispatcher::Reply reply = dispatcher_.handle_text(text);
    send(std::make_shared<const std::string>(reply.response.dump()));
    if (reply.event) hub_.broadcast(reply.event->dump());
    read_next();
  }

  void write_next() {
    ws_.text(true);
    ws_.async_write(net::buffer(*queue_.front()), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) {
        self->close();
        self->queue_.clear();
        return;
      }
      self->queue_.pop_front();
      if (!self->queue_.empty()) self->write_next();
    });
  }

  websocket::stream<beast::tcp_stream> ws_;
  beast::flat_buffer buffer_;
  http::request<http::string_body> request_;
  std::deque<std::shared_ptr<const std::string>> queue_;
  Dispatcher& dispatcher_;
  Hub& hub_;
  bool closed_ = false;
};

void Hub::broadcast(const std::string& text) {
  auto shared = std::make_shared<const std::string>(text);
  std::erase_if(connections, [](const std::weak_ptr<Connection>& w) { return w.expired(); });
  for (const auto& w : connections) {
    if (auto c = w.lock()) c->send(shared);
  }
}

}  // namespace

struct WebSocketServer::Impl {
  Impl(Dispatcher& d, const std::string& host, std::uint16_t port) : dispatcher(d), acceptor(ioc) {
    beast::error_code ec;
    auto address = net::ip::make_address(host, ec);
    if (ec) throw Error(ErrorCode::Io, "invalid listen address '" + host + "': " + ec.message());
    tcp::endpoint endpoint(address, port);
    acceptor.open(endpoint.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(endpoint, ec);
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
      throw Error(ErrorCode::Io, "cannot listen on " + host + ":" + std::to_string(port) + ": " + ec.message());
    }
    accept_next();
  }

  void accept_next() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;
      std::make_shared<Connection>(std::move(socket), dispatcher, hub)->start();
      accept_next();
    });
  }

  void shutdown() {
    beast::error_code ignored;
    acceptor.close(ignored);
    for (const auto& w : hub.connections) {
      if (auto c = w.lock()) c->close();
    }
    ioc.stop();
  }

  net::io_context ioc{1};
  Dispatcher& dispatcher;
  Hub hub;
  tcp::acceptor acceptor;
};

WebSocketServer::WebSocketServer(Dispatcher& dispatcher, const std::string& host, std::uint16_t port)
    : impl_(std::make_unique<Impl>(dispatcher, host, port)) {}

WebSocketServer::~WebSocketServer() = default;

std::uint16_t WebSocketServer::port() const { return impl_->acceptor.local_endpoint().port(); }

void WebSocketServer::run() { impl_->ioc.run(); }

void WebSocketServer::stop() {
  net::post(impl_->ioc, [impl = impl_.get()] { impl->shutdown(); });
}

}  // namespace dibg::service
