#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "dibg/session.hpp"
#include "json.hpp"

namespace dibg::service {

using Json = nlohmann::json;

inline constexpr std::uint16_t kDefaultPort = 7317;

// JSON-RPC style protocol error codes; session errors use dibg::ErrorCode.
inline constexpr int kParseError = -32700;
inline constexpr int kInvalidRequest = -32600;
inline constexpr int kMethodNotFound = -32601;
inline constexpr int kInvalidParams = -32602;

Json to_json(const Status& s);
Json to_json(const EvalResult& r);
Json to_json(const HaltReason& h);
Json to_json(const SessionSnapshot& snap);

// Everything a client needs to render: mode, per-program configuration,
// conditional breakpoints and watches, and (in debug mode) the snapshot.
Json state_to_json(const DebugSession& session);

// Executes protocol requests against one session, one at a time.
class Dispatcher {
 public:
  explicit Dispatcher(std::filesystem::path base_dir = {});

  struct Reply {
    Json response;
    std::optional<Json> event;  // {"event": "snapshot", "data": state} after a successful mutation
  };

  // Thread-safe; requests are serialized.
  Reply handle(const Json& request);
  Reply handle_text(std::string_view text);

  Json state();

  // Runs `f` with exclusive access to the session.
  void with_session(const std::function<void(DebugSession&)>& f);

 private:
  Json call(const std::string& method, const Json& params, bool& changed);

  std::mutex mu_;
  DebugSession session_;
  std::filesystem::path base_dir_;
};

// Newline-delimited JSON: one request per input line; the response and any
// event are written as one line each. Returns at end of input.
void serve_stdio(Dispatcher& dispatcher, std::istream& in, std::ostream& out);

// WebSocket endpoint `/session`. Every response goes to the requesting
// connection; every snapshot event is broadcast to all connections. All
// requests run on one I/O thread, so they are serialized in arrival order.
class WebSocketServer {
 public:
  // Port 0 picks a free port. Throws Error(Io) if the endpoint can't be bound.
  WebSocketServer(Dispatcher& dispatcher, const std::string& host, std::uint16_t port);
  ~WebSocketServer();

  WebSocketServer(const WebSocketServer&) = delete;
  WebSocketServer& operator=(const WebSocketServer&) = delete;

  std::uint16_t port() const;

  // Blocks until stop() is called.
  void run();
  // Safe to call from any thread.
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace dibg::service
