#pragma once

#include <atomic>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "vfc/protocol.hpp"

namespace vfc {

inline constexpr std::uint16_t kDefaultPort = 7407;

// Blocking frame I/O over a connected socket.
void write_frame(int fd, const Frame& frame);
Frame read_frame(int fd);  // throws ChannelError on EOF/short read

int connect_tcp(const std::string& host, std::uint16_t port);

// Threaded frame server driving a ServerCore; one thread per connection.
class TcpServer {
 public:
  TcpServer(ServerCore& core, std::uint16_t port, const std::string& host = "127.0.0.1");
  ~TcpServer();

  TcpServer(const TcpServer&) = delete;
  TcpServer& operator=(const TcpServer&) = delete;

  std::uint16_t port() const { return port_; }
  void stop();
  void run_blocking();  // serve on the caller's thread until stop()

 private:
  void accept_loop();

  ServerCore& core_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  bool threaded_ = false;
  std::mutex conn_mutex_;
  std::vector<int> conn_fds_;  // open connections, shut down on stop()
};

class TcpTransport : public FrameTransport {
 public:
  TcpTransport(const std::string& host, std::uint16_t port);
  ~TcpTransport() override;
  Frame request(const Frame& frame) override;

 private:
  int fd_ = -1;
};

}  // namespace vfc
