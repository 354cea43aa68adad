#include "vfc/net.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace vfc {

namespace {

void write_all(int fd, const std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::send(fd, data, len, MSG_NOSIGNAL);
    if (n <= 0) throw ChannelError("socket write failed");
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

void read_exact(int fd, std::uint8_t* data, std::size_t len) {
  while (len > 0) {
    const ssize_t n = ::recv(fd, data, len, 0);
    if (n == 0) throw ChannelError("peer closed connection");
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ChannelError(std::string("socket read failed: ") + std::strerror(errno));
    }
    data += n;
    len -= static_cast<std::size_t>(n);
  }
}

}  // namespace

void write_frame(int fd, const Frame& frame) {
  const auto bytes = encode_frame(frame);
  write_all(fd, bytes.data(), bytes.size());
}

Frame read_frame(int fd) {
  std::vector<std::uint8_t> bytes(kFrameHeaderBytes);
  read_exact(fd, bytes.data(), kFrameHeaderBytes);
  const std::uint32_t len = (static_cast<std::uint32_t>(bytes[6]) << 24) |
                            (static_cast<std::uint32_t>(bytes[7]) << 16) |
                            (static_cast<std::uint32_t>(bytes[8]) << 8) |
                            static_cast<std::uint32_t>(bytes[9]);
  bytes.resize(kFrameHeaderBytes + len);
  read_exact(fd, bytes.data() + kFrameHeaderBytes, len);
  return decode_frame(bytes);
}

int connect_tcp(const std::string& host, std::uint16_t port) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  if (fd < 0) throw ChannelError("socket creation failed");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(fd);
    throw ChannelError("invalid host address: " + host);
  }
  if (::connect(fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(fd);
    throw ChannelError("connect to " + host + ":" + std::to_string(port) +
                       " failed: " + std::strerror(errno));
  }
  const int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
  return fd;
}

TcpServer::TcpServer(ServerCore& core, std::uint16_t port, const std::string& host)
    : core_(core) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ChannelError("socket creation failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw ChannelError("invalid host address: " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw ChannelError("bind/listen on port " + std::to_string(port) +
                       " failed: " + std::strerror(errno));
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  accept_thread_ = std::thread([this] { accept_loop(); });
  threaded_ = true;
}

TcpServer::~TcpServer() { stop(); }

void TcpServer::stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    // Unblock workers still waiting on open client connections.
    std::lock_guard lock(conn_mutex_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (threaded_ && accept_thread_.joinable()) accept_thread_.join();
}

void TcpServer::run_blocking() {
  if (accept_thread_.joinable()) accept_thread_.join();
}

void TcpServer::accept_loop() {
  std::vector<std::thread> workers;
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;
    {
      std::lock_guard lock(conn_mutex_);
      conn_fds_.push_back(fd);
    }
    workers.emplace_back([this, fd] {
      try {
        for (;;) write_frame(fd, core_.handle(read_frame(fd)));
      } catch (const ChannelError&) {
        // connection closed
      } catch (const Error& e) {
        try {
          ErrorMsg msg;
          msg.code = static_cast<std::uint16_t>(ErrorCode::bad_request);
          msg.message = e.what();
          write_frame(fd, msg.to_frame());
        } catch (...) {
        }
      }
      {
        std::lock_guard lock(conn_mutex_);
        std::erase(conn_fds_, fd);
      }
      ::close(fd);
    });
  }
  for (auto& w : workers) w.join();
}

TcpTransport::TcpTransport(const std::string& host, std::uint16_t port)
    : fd_(connect_tcp(host, port)) {}

TcpTransport::~TcpTransport() {
  if (fd_ >= 0) ::close(fd_);
}

Frame TcpTransport::request(const Frame& frame) {
  write_frame(fd_, frame);
  return read_frame(fd_);
}

}  // namespace vfc
