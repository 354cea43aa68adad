#pragma once

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "vfc/matrix.hpp"

namespace vfc {

using KeyToken = std::string;

inline constexpr std::uint8_t kExactBackendId = 0x01;
inline constexpr std::uint8_t kApproxBackendId = 0x02;

struct OpCounters {
  std::uint64_t scalar_multadds = 0;
  std::uint64_t ciphertext_ops = 0;
  std::uint64_t bytes_encrypted = 0;
};

struct BackendDescriptor {
  std::uint8_t id = 0;
  Mode mode = Mode::exact;
  std::size_t max_slots = 4096;
  double precision = 0.0;  // declared absolute precision (approximate mode)
  std::string name;
};

struct CipherMatrix {
  std::uint8_t backend_id = 0;
  PlainParams params;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> payload;  // opaque, owned by the backend
};

// Reference payload layout shared by both emulated backends:
//   key_check (8B LE) | mask_seed (8B LE) | masked 64-bit scalars (LE).
// The mask seed travels in the payload so evaluation works without the key;
// this is the emulation's stand-in for ciphertext malleability and is not
// cryptographically secure.
namespace payload {

inline constexpr std::size_t kHeaderBytes = 16;

std::vector<std::uint8_t> build(std::uint64_t key_check, std::uint64_t mask_seed,
                                const std::vector<std::uint64_t>& scalars);
std::vector<std::uint64_t> unmask(const std::vector<std::uint8_t>& bytes);
std::uint64_t key_check(const std::vector<std::uint8_t>& bytes);

}  // namespace payload

class HeBackend {
 public:
  virtual ~HeBackend() = default;

  virtual BackendDescriptor descriptor() const = 0;

  virtual CipherMatrix encrypt(const Matrix& plain, const PlainParams& params,
                               const KeyToken& key) const = 0;
  virtual Matrix decrypt(const CipherMatrix& ct, const KeyToken& key) const = 0;
  virtual CipherMatrix matmul(const CipherMatrix& a, const Matrix& b) const = 0;
  virtual CipherMatrix matmul(const CipherMatrix& a,
                              const CipherMatrix& b) const = 0;
  // Homomorphic plaintext addition; also the malleability the adversary uses.
  virtual CipherMatrix add_plain(const CipherMatrix& a,
                                 const Matrix& delta) const = 0;

  OpCounters counters() const {
    return {multadds_.load(), cipher_ops_.load(), bytes_encrypted_.load()};
  }
  void reset_counters() {
    multadds_ = 0;
    cipher_ops_ = 0;
    bytes_encrypted_ = 0;
  }

 protected:
  void count_matmul(std::uint64_t rows, std::uint64_t inner,
                    std::uint64_t cols) const {
    multadds_ += rows * inner * cols;
    ++cipher_ops_;
  }
  void count_encrypt(std::uint64_t bytes) const {
    bytes_encrypted_ += bytes;
    ++cipher_ops_;
  }
  void count_cipher_op() const { ++cipher_ops_; }

 private:
  mutable std::atomic<std::uint64_t> multadds_{0};
  mutable std::atomic<std::uint64_t> cipher_ops_{0};
  mutable std::atomic<std::uint64_t> bytes_encrypted_{0};
};

// Exact modular backend (BFV/BGV-like plaintext semantics).
class ExactBackend : public HeBackend {
 public:
  BackendDescriptor descriptor() const override;
  CipherMatrix encrypt(const Matrix& plain, const PlainParams& params,
                       const KeyToken& key) const override;
  Matrix decrypt(const CipherMatrix& ct, const KeyToken& key) const override;
  CipherMatrix matmul(const CipherMatrix& a, const Matrix& b) const override;
  CipherMatrix matmul(const CipherMatrix& a, const CipherMatrix& b) const override;
  CipherMatrix add_plain(const CipherMatrix& a, const Matrix& delta) const override;
};

// Approximate fixed-point backend (CKKS-like plaintext semantics).
class ApproxBackend : public HeBackend {
 public:
  BackendDescriptor descriptor() const override;
  CipherMatrix encrypt(const Matrix& plain, const PlainParams& params,
                       const KeyToken& key) const override;
  Matrix decrypt(const CipherMatrix& ct, const KeyToken& key) const override;
  CipherMatrix matmul(const CipherMatrix& a, const Matrix& b) const override;
  CipherMatrix matmul(const CipherMatrix& a, const CipherMatrix& b) const override;
  CipherMatrix add_plain(const CipherMatrix& a, const Matrix& delta) const override;
};

class BackendRegistry {
 public:
  void add(std::shared_ptr<HeBackend> backend);
  HeBackend& get(std::uint8_t id) const;
  bool has(std::uint8_t id) const;
  std::vector<std::uint8_t> ids() const;

 private:
  std::map<std::uint8_t, std::shared_ptr<HeBackend>> backends_;
};

BackendRegistry make_default_registry();

// Versioned ciphertext serialization:
//   magic "VFC1" | backend_id (1B) | mode (1B) | t-or-scale (8B LE)
//   | rows (4B LE) | cols (4B LE) | payload_len (4B LE) | payload.
std::vector<std::uint8_t> serialize_cipher(const CipherMatrix& ct);
CipherMatrix deserialize_cipher(const std::vector<std::uint8_t>& bytes);

std::uint64_t key_check_of(const KeyToken& key);

}  // namespace vfc
