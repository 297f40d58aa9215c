#pragma once

#include <memory>
#include <string>

#include "telephantom/session.hpp"

namespace telephantom {

struct ServeOptions {
  std::string address = "127.0.0.1";
  unsigned short port = 8765;  // 0 picks a free port
  double rate_hz = 60.0;
};

/// WebSocket endpoint for one operator. Client messages are queued in arrival
/// order and applied by the session loop once per tick; input messages feed a
/// zero-order-hold live source. Every tick produces a state snapshot; if the
/// socket is still busy with an older one, only the newest is kept. A second
/// concurrent client receives an `operator_present` error and is closed.
class Server {
 public:
  /// Binds immediately; throws ServeError when the port is unavailable.
  Server(Session session, const ServeOptions& options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  unsigned short port() const;
  /// Starts the network and session threads and returns.
  void start();
  /// Blocks until stop() or SIGINT/SIGTERM.
  void run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace telephantom
