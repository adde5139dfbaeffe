#include "catmouse/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

#include "catmouse/error.hpp"
#include "catmouse/protocol.hpp"

namespace catmouse {

namespace {

constexpr std::size_t kMaxLine = 1 << 20;
constexpr int kPollMs = 100;

bool send_all(int fd, const std::string& data) {
  std::size_t sent = 0;
  while (sent < data.size()) {
    const ssize_t n = ::send(fd, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) return false;
    sent += static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace

EnvServer::EnvServer(EpisodeConfig cfg, std::string host, int port)
    : cfg_(std::move(cfg)), host_(std::move(host)), port_(port) {
  cfg_.validate();
}

EnvServer::~EnvServer() {
  stop_ = true;
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  if (listen_fd_ >= 0) ::close(listen_fd_);
}

int EnvServer::bind() {
  if (listen_fd_ >= 0) return port_;
  if (port_ < 0 || port_ > 65535) throw ConfigError("port out of range");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(port_));
  if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) throw ConfigError("bad IPv4 address " + host_);

  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw std::runtime_error(std::string("socket: ") + std::strerror(errno));
  const int one = 1;
  ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  if (::bind(fd, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(fd, 16) != 0) {
    const std::string msg = std::strerror(errno);
    ::close(fd);
    throw std::runtime_error("cannot listen on " + host_ + ":" + std::to_string(port_) + ": " + msg);
  }
  socklen_t len = sizeof addr;
  ::getsockname(fd, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);
  listen_fd_ = fd;
  return port_;
}

void EnvServer::serve() {
  bind();
  while (!stop_) {
    pollfd p{listen_fd_, POLLIN, 0};
    const int ready = ::poll(&p, 1, kPollMs);
    if (ready <= 0) continue;
    const int client = ::accept(listen_fd_, nullptr, nullptr);
    if (client < 0) continue;
    ++sessions_;
    std::lock_guard lock(mu_);
    workers_.emplace_back([this, client] { handle(client); });
  }
  std::lock_guard lock(mu_);
  for (auto& t : workers_) {
    if (t.joinable()) t.join();
  }
  workers_.clear();
}

void EnvServer::handle(int fd) {
  Session session(cfg_);
  std::string buffer;
  bool overflow = false;
  char chunk[4096];
  while (!stop_ && !session.closed()) {
    pollfd p{fd, POLLIN, 0};
    if (::poll(&p, 1, kPollMs) <= 0) continue;
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n < 0 && errno == EINTR) continue;
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t pos;
    bool alive = true;
    while (alive && (pos = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, pos);
      buffer.erase(0, pos + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string reply;
      if (overflow) {
        overflow = false;
        reply = error_reply("message too long");
      } else if (line.empty()) {
        continue;
      } else {
        reply = session.handle_line(line);
      }
      alive = send_all(fd, reply + "\n") && !session.closed();
    }
    if (!alive) break;
    if (buffer.size() > kMaxLine) {
      buffer.clear();
      overflow = true;
    }
  }
  ::close(fd);
}

}  // namespace catmouse
