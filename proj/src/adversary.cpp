#include "vfc/adversary.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <bit>
#include <cmath>
#include <cstring>

namespace vfc {

void TamperSpec::validate() const {
  if (kind == TamperKind::forge_known_hash) {
    if (!leaked_hash)
      throw TamperSpecError("forge_known_hash requires a leaked hash vector");
    if (!payload) throw TamperSpecError("forge_known_hash requires a payload M");
    return;
  }
  if (leaked_hash)
    throw TamperSpecError("only forge_known_hash may reference a hash vector");
  if ((kind == TamperKind::additive || kind == TamperKind::replace) && !payload)
    throw TamperSpecError("additive/replace tampers require a payload matrix");
}

namespace {

std::uint64_t encode_scalar(double v, double scale) {
  return std::bit_cast<std::uint64_t>(
      static_cast<std::int64_t>(std::llround(v * scale)));
}

std::uint64_t mask_seed_of(const std::vector<std::uint8_t>& payload_bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i)
    v |= static_cast<std::uint64_t>(payload_bytes[8 + i]) << (8 * i);
  return v;
}

CipherMatrix tamper_cipher(const CipherMatrix& ct, const TamperSpec& spec,
                           const BackendRegistry& registry) {
  const bool exact = ct.params.mode == Mode::exact;

  switch (spec.kind) {
    case TamperKind::additive:
    case TamperKind::forge_known_hash: {
      const Matrix& m = *spec.payload;
      const Index proof_rows = static_cast<Index>(ct.rows) - m.rows();
      if (proof_rows < 0 || m.cols() != static_cast<Index>(ct.cols))
        throw TamperSpecError("tamper payload does not fit the C region");
      Matrix delta = m;
      if (spec.kind == TamperKind::forge_known_hash) {
        // Consistent adjustment: shift the proof rows by h.M as well.
        const Matrix hm = compute_checksum(m, *spec.leaked_hash, ct.params);
        for (Index p = 0; p < proof_rows; ++p) delta = vstack(delta, hm);
      } else {
        delta = vstack(delta, zero_matrix(proof_rows, m.cols(), m.mode()));
      }
      return registry.get(ct.backend_id).add_plain(ct, delta);
    }

    case TamperKind::replace: {
      const Matrix& m = *spec.payload;
      const Index proof_rows = static_cast<Index>(ct.rows) - m.rows();
      if (proof_rows < 0 || m.cols() != static_cast<Index>(ct.cols))
        throw TamperSpecError("replacement does not fit the C region");
      auto scalars = payload::unmask(ct.payload);
      std::size_t idx = 0;
      for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
          scalars[idx++] = exact ? m.exact()(i, j) % ct.params.t
                                 : encode_scalar(m.approx()(i, j), ct.params.scale);
        }
      CipherMatrix out = ct;
      out.payload = payload::build(payload::key_check(ct.payload),
                                   mask_seed_of(ct.payload), scalars);
      return out;
    }

    case TamperKind::fabricate: {
      SplitMix64 rng(spec.seed);
      std::vector<std::uint64_t> scalars(static_cast<std::size_t>(ct.rows) *
                                         ct.cols);
      for (auto& s : scalars)
        s = exact ? rng.below(ct.params.t)
                  : encode_scalar(rng.unit_real(), ct.params.scale);
      CipherMatrix out = ct;
      out.payload =
          payload::build(payload::key_check(ct.payload), rng.next(), scalars);
      return out;
    }

    case TamperKind::bitflip: {
      CipherMatrix out = ct;
      const std::size_t scalar_bits = (out.payload.size() - payload::kHeaderBytes) * 8;
      if (scalar_bits == 0) throw TamperSpecError("empty ciphertext payload");
      const std::uint64_t bit = spec.bit_index % scalar_bits;
      out.payload[payload::kHeaderBytes + bit / 8] ^=
          static_cast<std::uint8_t>(1u << (bit % 8));
      return out;
    }
  }
  throw TamperSpecError("unknown tamper kind");
}

}  // namespace

Frame apply_tamper(const Frame& response, const TamperSpec& spec,
                   const BackendRegistry& registry) {
  spec.validate();
  if (response.msg_type != MsgType::result) return response;
  auto msg = ResultMsg::from_frame(response);
  const CipherMatrix ct = deserialize_cipher(msg.blob);
  msg.blob = serialize_cipher(tamper_cipher(ct, spec, registry));
  return msg.to_frame();
}

std::pair<Matrix, Matrix> forge_with_known_hash(const Matrix& c,
                                                const Matrix& proof,
                                                const HashVector& h,
                                                const Matrix& m,
                                                const PlainParams& params) {
  if (m.rows() != c.rows() || m.cols() != c.cols())
    throw InvalidDimensionError("forgery payload must match C");
  const Matrix hm = compute_checksum(m, h, params);
  if (c.mode() == Mode::exact) {
    MatU c2 = c.exact();
    for (Index i = 0; i < c2.rows(); ++i)
      for (Index j = 0; j < c2.cols(); ++j)
        c2(i, j) = add_mod(c2(i, j), m.exact()(i, j) % params.t, params.t);
    MatU p2 = proof.exact();
    for (Index j = 0; j < p2.cols(); ++j)
      p2(0, j) = add_mod(p2(0, j), hm.exact()(0, j), params.t);
    return {Matrix(c2), Matrix(p2)};
  }
  return {Matrix(MatR(c.approx() + m.approx())),
          Matrix(MatR(proof.approx() + hm.approx()))};
}

TamperProxy::TamperProxy(std::uint16_t listen_port, std::string upstream_host,
                         std::uint16_t upstream_port, TamperSpec spec,
                         BackendRegistry registry, const std::string& listen_host)
    : upstream_host_(std::move(upstream_host)),
      upstream_port_(upstream_port),
      spec_(std::move(spec)),
      registry_(std::move(registry)) {
  spec_.validate();
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw ChannelError("socket creation failed");
  const int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(listen_port);
  if (::inet_pton(AF_INET, listen_host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    throw ChannelError("invalid listen address: " + listen_host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0 ||
      ::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw ChannelError("proxy bind/listen failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);
  accept_thread_ = std::thread([this] { accept_loop(); });
}

TamperProxy::~TamperProxy() { stop(); }

void TamperProxy::stop() {
  if (stopping_.exchange(true)) return;
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    // Unblock workers still waiting on open connections.
    std::lock_guard lock(conn_mutex_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable()) accept_thread_.join();
}

void TamperProxy::run_blocking() {
  if (accept_thread_.joinable()) accept_thread_.join();
}

void TamperProxy::accept_loop() {
  std::vector<std::thread> workers;
  while (!stopping_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;
    {
      std::lock_guard lock(conn_mutex_);
      conn_fds_.push_back(fd);
    }
    workers.emplace_back([this, fd] {
      int up = -1;
      try {
        up = connect_tcp(upstream_host_, upstream_port_);
        {
          std::lock_guard lock(conn_mutex_);
          conn_fds_.push_back(up);
        }
        for (;;) {
          write_frame(up, read_frame(fd));
          write_frame(fd, apply_tamper(read_frame(up), spec_, registry_));
        }
      } catch (const Error&) {
        // connection closed or tamper misconfigured; drop the session
      }
      {
        std::lock_guard lock(conn_mutex_);
        std::erase(conn_fds_, fd);
        if (up >= 0) std::erase(conn_fds_, up);
      }
      if (up >= 0) ::close(up);
      ::close(fd);
    });
  }
  for (auto& w : workers) w.join();
}

}  // namespace vfc
