#pragma once

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "vfc/backend.hpp"
#include "vfc/checksum.hpp"

namespace vfc {

// ---------------------------------------------------------------------------
// Framing: magic "VFHE" | version (1B, =1) | msg_type (1B)
//          | payload_len (4B big-endian) | payload.

enum class MsgType : std::uint8_t {
  ping = 0x00,
  session_init = 0x01,
  init_ack = 0x02,
  upload_operand = 0x03,
  operand_ack = 0x04,
  compute_request = 0x05,
  result = 0x06,
  error = 0x7F,
};

struct Frame {
  MsgType msg_type = MsgType::ping;
  std::vector<std::uint8_t> payload;
};

inline constexpr std::size_t kFrameHeaderBytes = 10;

std::vector<std::uint8_t> encode_frame(const Frame& frame);
Frame decode_frame(const std::vector<std::uint8_t>& bytes);

// Big-endian message field reader/writer.
class ByteWriter {
 public:
  void u8(std::uint8_t v) { out_.push_back(v); }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void str(const std::string& s);
  void blob(const std::vector<std::uint8_t>& b);
  std::vector<std::uint8_t> take() { return std::move(out_); }

 private:
  std::vector<std::uint8_t> out_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}
  std::uint8_t u8();
  std::uint16_t u16();
  std::uint32_t u32();
  std::uint64_t u64();
  std::string str();
  std::vector<std::uint8_t> blob();
  void finish() const;  // trailing bytes are a protocol error
  std::size_t offset() const { return pos_; }

 private:
  void need(std::size_t n) const;
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Messages

struct SessionInitMsg {
  std::uint8_t backend_id = kExactBackendId;
  PlainParams params;
  Frame to_frame() const;
  static SessionInitMsg from_frame(const Frame& f);
};

struct InitAckMsg {
  std::uint32_t session_id = 0;
  std::uint8_t backend_id = 0;
  PlainParams params;
  Frame to_frame() const;
  static InitAckMsg from_frame(const Frame& f);
};

struct UploadOperandMsg {
  std::uint32_t session_id = 0;
  std::string name;
  bool plaintext = false;  // plain matrix blob vs serialized ciphertext
  std::vector<std::uint8_t> blob;
  Frame to_frame() const;
  static UploadOperandMsg from_frame(const Frame& f);
};

struct OperandAckMsg {
  std::uint32_t session_id = 0;
  std::string name;
  Frame to_frame() const;
  static OperandAckMsg from_frame(const Frame& f);
};

inline constexpr std::uint8_t kOpMatmul = 0x01;

struct ComputeRequestMsg {
  std::uint32_t session_id = 0;
  std::uint8_t op = kOpMatmul;
  std::string lhs;
  std::string rhs;
  Frame to_frame() const;
  static ComputeRequestMsg from_frame(const Frame& f);
};

struct ResultMsg {
  std::uint32_t session_id = 0;
  std::vector<std::uint8_t> blob;  // serialized ciphertext of (C; C^A)
  Frame to_frame() const;
  static ResultMsg from_frame(const Frame& f);
};

enum class ErrorCode : std::uint16_t {
  bad_request = 1,
  unknown_session = 2,
  unknown_operand = 3,
  dimension_mismatch = 4,
  backend_failure = 5,
  oversize_payload = 6,
};

struct ErrorMsg {
  std::uint16_t code = 0;
  std::string message;
  Frame to_frame() const;
  static ErrorMsg from_frame(const Frame& f);
};

// Plain-matrix wire encoding used inside UploadOperand for public operands.
std::vector<std::uint8_t> encode_matrix(const Matrix& m);
Matrix decode_matrix(const std::vector<std::uint8_t>& bytes);

// ---------------------------------------------------------------------------
// Transport

class FrameTransport {
 public:
  virtual ~FrameTransport() = default;
  virtual Frame request(const Frame& frame) = 0;
};

// ---------------------------------------------------------------------------
// Server

class ServerCore {
 public:
  explicit ServerCore(BackendRegistry registry);

  // Thread-safe; every request frame yields exactly one response frame.
  Frame handle(const Frame& request);

  // Server-resident operands, visible to every session by name.
  void preload(const std::string& name, Matrix m);

  OpCounters backend_counters(std::uint8_t backend_id) const;

 private:
  struct Stored {
    bool plaintext = false;
    Matrix plain;
    CipherMatrix ct;
  };
  struct Session {
    std::uint8_t backend_id = 0;
    PlainParams params;
    std::map<std::string, Stored> operands;
  };

  Frame handle_locked(const Frame& request);

  BackendRegistry registry_;
  std::map<std::uint32_t, Session> sessions_;
  std::map<std::string, Matrix> resident_;
  std::uint32_t next_session_ = 1;
  mutable std::mutex mutex_;
};

// Loopback transport driving a ServerCore directly; records client-to-server
// bytes so tests can assert hash secrecy on captured traffic.
class InProcTransport : public FrameTransport {
 public:
  explicit InProcTransport(ServerCore& core) : core_(core) {}
  Frame request(const Frame& frame) override;
  const std::vector<std::uint8_t>& captured_outbound() const { return capture_; }

 private:
  ServerCore& core_;
  std::vector<std::uint8_t> capture_;
};

// ---------------------------------------------------------------------------
// Client

enum class TaskMode : std::uint8_t { plain = 0, with_error = 1, dual = 2 };
enum class BOwnership : std::uint8_t {
  public_plain = 0,
  client_secret = 1,
  server_resident = 2,
};

struct TaskSpec {
  Matrix a;
  std::optional<Matrix> b;  // absent when server-resident
  std::string b_handle;     // server-resident operand name
  BOwnership b_ownership = BOwnership::public_plain;
  TaskMode mode = TaskMode::plain;
  PlainParams params;
  std::uint8_t backend_id = kExactBackendId;
  KeyToken key = "client-key";
  std::uint64_t hash_seed = 1;
  HashMode hash_mode = HashMode::uniform;
  bool nonzero_hash = false;
  std::uint64_t error_r = 1024;
  std::uint64_t error_seed = 2;
  SplitStrategy square_strategy = SplitStrategy::row_split;
};

struct ClientResult {
  Matrix result;
  VerificationReport report;
  bool integrity_violation() const { return report.verdict == Verdict::fail; }
};

// Full client pipeline: normalize, hash, attach, encrypt, upload,
// compute, decrypt, split, verify. Transport failures and server error
// frames throw; a failed verification is reported, not thrown.
ClientResult client_execute(const TaskSpec& task, FrameTransport& channel,
                            const BackendRegistry& registry);

}  // namespace vfc
