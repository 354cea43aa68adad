#pragma once

#include <atomic>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

#include "vfc/net.hpp"
#include "vfc/protocol.hpp"

namespace vfc {

enum class TamperKind : std::uint8_t {
  additive = 0,
  replace = 1,
  fabricate = 2,
  bitflip = 3,
  forge_known_hash = 4,
};

struct TamperSpec {
  TamperKind kind = TamperKind::additive;
  // additive / replace / forge: delta or replacement for the C region only
  // (proof rows stay untouched unless the forge adjusts them consistently).
  std::optional<Matrix> payload;
  std::uint64_t bit_index = 0;  // bitflip
  std::uint64_t seed = 0;       // fabricate
  std::optional<HashVector> leaked_hash;  // forge_known_hash only

  void validate() const;
};

// Proxy-position tamper on a serialized server response. Non-result frames
// pass through unchanged.
Frame apply_tamper(const Frame& response, const TamperSpec& spec,
                   const BackendRegistry& registry);

// The known-hash forgery of the scheme's security argument: with h exposed,
// (C + M, proof + h.M) verifies cleanly. Plaintext-level negative control.
std::pair<Matrix, Matrix> forge_with_known_hash(const Matrix& c,
                                                const Matrix& proof,
                                                const HashVector& h,
                                                const Matrix& m,
                                                const PlainParams& params);

// Transport wrapper applying a tamper to every response.
class TamperingTransport : public FrameTransport {
 public:
  TamperingTransport(FrameTransport& inner, TamperSpec spec,
                     const BackendRegistry& registry)
      : inner_(inner), spec_(std::move(spec)), registry_(registry) {
    spec_.validate();
  }
  Frame request(const Frame& frame) override {
    return apply_tamper(inner_.request(frame), spec_, registry_);
  }

 private:
  FrameTransport& inner_;
  TamperSpec spec_;
  const BackendRegistry& registry_;
};

// Man-in-the-middle TCP proxy tampering Result frames in flight.
class TamperProxy {
 public:
  TamperProxy(std::uint16_t listen_port, std::string upstream_host,
              std::uint16_t upstream_port, TamperSpec spec,
              BackendRegistry registry, const std::string& listen_host = "127.0.0.1");
  ~TamperProxy();

  std::uint16_t port() const { return port_; }
  void stop();
  void run_blocking();

 private:
  void accept_loop();

  std::string upstream_host_;
  std::uint16_t upstream_port_;
  TamperSpec spec_;
  BackendRegistry registry_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread accept_thread_;
  std::mutex conn_mutex_;
  std::vector<int> conn_fds_;  // open client/upstream sockets, shut down on stop()
};

}  // namespace vfc
