#include "telephantom/server.hpp"

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <deque>
#include <thread>

#include <boost/asio.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/websocket.hpp>
#include <spdlog/spdlog.h>

#include "telephantom/error.hpp"

namespace telephantom {

namespace net = boost::asio;
namespace beast = boost::beast;
namespace websocket = beast::websocket;
using tcp = net::ip::tcp;

namespace {

struct Inbound {
  std::uint64_t connection = 0;
  ClientMessage message;
};

class Connection : public std::enable_shared_from_this<Connection> {
 public:
  using OnMessage = std::function<void(const std::string&)>;
  using OnClose = std::function<void()>;

  Connection(tcp::socket socket, std::uint64_t id) : ws_(std::move(socket)), id_(id) {}

  std::uint64_t id() const { return id_; }

  /// Operator connection: handshake, then read until the peer goes away.
  void open(OnMessage on_message, OnClose on_close) {
    on_message_ = std::move(on_message);
    on_close_ = std::move(on_close);
    ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
    ws_.async_accept([self = shared_from_this()](beast::error_code ec) {
      if (ec) return self->closed();
      self->read();
    });
  }

  /// Handshake, send one error frame, close.
  void reject(const ErrorMessage& err) {
    ws_.async_accept([self = shared_from_this(), text = serialize(ServerMessage{err})](beast::error_code ec) {
      if (ec) return;
      self->ws_.text(true);
      self->ws_.async_write(net::buffer(text), [self](beast::error_code, std::size_t) {
        self->ws_.async_close(websocket::close_reason(websocket::close_code::try_again_later, "operator present"),
                              [self](beast::error_code) {});
      });
    });
  }

  void send_error(const ErrorMessage& err) {
    errors_.push_back(serialize(ServerMessage{err}));
    pump();
  }

  /// Latest-wins: a snapshot not yet on the wire is replaced.
  void send_snapshot(std::string text) {
    snapshot_ = std::move(text);
    pump();
  }

  void close() {
    if (closed_) return;
    beast::error_code ec;
    beast::get_lowest_layer(ws_).socket().close(ec);
  }

 private:
  void read() {
    ws_.async_read(buffer_, [self = shared_from_this()](beast::error_code ec, std::size_t) {
      if (ec) return self->closed();
      const std::string text = beast::buffers_to_string(self->buffer_.data());
      self->buffer_.consume(self->buffer_.size());
      self->on_message_(text);
      self->read();
    });
  }

  void pump() {
    if (writing_ || closed_ || !accepted()) return;
    if (!errors_.empty()) {
      out_ = std::move(errors_.front());
      errors_.pop_front();
    } else if (snapshot_) {
      out_ = std::move(*snapshot_);
      snapshot_.reset();
    } else {
      return;
    }
    writing_ = true;
    ws_.text(true);
    ws_.async_write(net::buffer(out_), [self = shared_from_this()](beast::error_code ec, std::size_t) {
      self->writing_ = false;
      if (ec) return self->closed();
      self->pump();
    });
  }

  bool accepted() const { return ws_.is_open(); }

  void closed() {
    if (closed_) return;
    closed_ = true;
    if (on_close_) on_close_();
  }

  websocket::stream<beast::tcp_stream> ws_;
  std::uint64_t id_;
  beast::flat_buffer buffer_;
  OnMessage on_message_;
  OnClose on_close_;
  std::deque<std::string> errors_;
  std::optional<std::string> snapshot_;
  std::string out_;
  bool writing_ = false;
  bool closed_ = false;
};

}  // namespace

struct Server::Impl {
  Impl(Session s, const ServeOptions& o) : session(std::move(s)), options(o), acceptor(ioc), live(o.rate_hz) {
    beast::error_code ec;
    const tcp::endpoint ep(net::ip::make_address(o.address, ec), o.port);
    if (ec) throw ServeError("serve: bad address '" + o.address + "': " + ec.message());
    acceptor.open(ep.protocol(), ec);
    if (!ec) acceptor.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acceptor.bind(ep, ec);
    if (ec == net::error::address_in_use) {
      throw ServeError("serve: port " + std::to_string(o.port) + " is busy");
    }
    if (!ec) acceptor.listen(net::socket_base::max_listen_connections, ec);
    if (ec) throw ServeError("serve: cannot listen on port " + std::to_string(o.port) + ": " + ec.message());
    bound_port = acceptor.local_endpoint().port();
  }

  void accept() {
    acceptor.async_accept([this](beast::error_code ec, tcp::socket socket) {
      if (ec) return;  // acceptor closed
      auto conn = std::make_shared<Connection>(std::move(socket), ++next_id);
      if (op) {
        spdlog::info("rejecting second operator connection {}", conn->id());
        conn->reject({error_code::kOperatorPresent, "another operator is already connected"});
      } else {
        op = conn;
        spdlog::info("operator connected ({})", conn->id());
        const std::uint64_t id = conn->id();
        conn->open(
            [this, id](const std::string& text) {
              try {
                inbox.push({id, parse_client_message(text)});
              } catch (const ProtocolError& e) {
                if (op) op->send_error({e.code(), e.what()});
              }
            },
            [this, id] {
              if (op && op->id() == id) {
                spdlog::info("operator disconnected ({})", id);
                op.reset();
              }
            });
      }
      accept();
    });
  }

  // Runs on the session thread: the only place the session is touched.
  void loop() {
    const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
        std::chrono::duration<double>(1.0 / options.rate_hz));
    auto next = std::chrono::steady_clock::now();
    while (!stopping.load()) {
      for (Inbound& in : inbox.take_all()) {
        std::optional<ErrorMessage> err;
        if (const auto* input = std::get_if<InputMessage>(&in.message)) {
          live.push(input->frame);
        } else {
          err = session.handle(in.message);
        }
        if (err) post_to(in.connection, [e = *err](Connection& c) { c.send_error(e); });
      }
      if (auto frame = live.next_frame()) {
        const StepOutcome out = session.apply(InputTick{frame->wrist, frame->glove});
        if (!out.accepted()) spdlog::debug("tick rejected: {}", out.message);
      }
      std::string text = serialize(ServerMessage{session.snapshot()});
      net::post(ioc, [this, text = std::move(text)]() mutable {
        if (op) op->send_snapshot(std::move(text));
      });
      next += period;
      std::unique_lock lock(wake_mu);
      wake.wait_until(lock, next, [this] { return stopping.load(); });
    }
  }

  template <class F>
  void post_to(std::uint64_t id, F f) {
    net::post(ioc, [this, id, f = std::move(f)] {
      if (op && op->id() == id) f(*op);
    });
  }

  void start() {
    accept();
    io_thread = std::thread([this] { ioc.run(); });
    session_thread = std::thread([this] { loop(); });
  }

  void stop() {
    {
      std::lock_guard lock(wake_mu);
      stopping = true;
    }
    wake.notify_all();
    if (session_thread.joinable()) session_thread.join();
    net::post(ioc, [this] {
      beast::error_code ec;
      acceptor.close(ec);
      if (op) op->close();
      op.reset();
      ioc.stop();
    });
    work.reset();
    if (io_thread.joinable()) io_thread.join();
  }

  Session session;
  ServeOptions options;
  net::io_context ioc;
  std::optional<net::executor_work_guard<net::io_context::executor_type>> work{ioc.get_executor()};
  tcp::acceptor acceptor;
  LiveSource live;
  MessageQueue<Inbound> inbox;
  std::shared_ptr<Connection> op;  // io thread only
  std::uint64_t next_id = 0;
  std::atomic<bool> stopping{false};
  std::mutex wake_mu;
  std::condition_variable wake;
  std::thread io_thread;
  std::thread session_thread;
  bool started = false;
  unsigned short bound_port = 0;
};

Server::Server(Session session, const ServeOptions& options)
    : impl_(std::make_unique<Impl>(std::move(session), options)) {
  if (!(options.rate_hz > 0.0)) throw ServeError("serve: rate must be positive");
}

Server::~Server() { stop(); }

unsigned short Server::port() const { return impl_->bound_port; }

void Server::start() {
  if (impl_->started) return;
  impl_->started = true;
  impl_->start();
}

void Server::run() {
  start();
  net::io_context signals_ctx;
  net::signal_set signals(signals_ctx, SIGINT, SIGTERM);
  signals.async_wait([](beast::error_code, int) {});
  signals_ctx.run();
  stop();
}

void Server::stop() {
  if (!impl_ || !impl_->started) return;
  impl_->started = false;
  impl_->stop();
}

}  // namespace telephantom
