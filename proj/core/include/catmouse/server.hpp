#pragma once

#include <atomic>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "catmouse/env.hpp"

namespace catmouse {

// TCP server speaking the session protocol, one thread and one environment per connection.
class EnvServer {
 public:
  EnvServer(EpisodeConfig cfg, std::string host = "127.0.0.1", int port = 0);
  ~EnvServer();
  EnvServer(const EnvServer&) = delete;
  EnvServer& operator=(const EnvServer&) = delete;

  // Binds and listens; returns the bound port (useful with port 0).
  int bind();
  // Accepts connections until stop(). Calls bind() first if needed.
  void serve();
  void stop() { stop_ = true; }
  int port() const { return port_; }
  int sessions_started() const { return sessions_; }

 private:
  void handle(int fd);

  EpisodeConfig cfg_;
  std::string host_;
  int port_;
  int listen_fd_ = -1;
  std::atomic<bool> stop_{false};
  std::atomic<int> sessions_{0};
  std::mutex mu_;
  std::vector<std::thread> workers_;
};

}  // namespace catmouse
