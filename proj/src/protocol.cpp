#include "vfc/protocol.hpp"

#include <bit>
#include <cstring>

namespace vfc {

namespace {

bool known_msg_type(std::uint8_t t) {
  switch (static_cast<MsgType>(t)) {
    case MsgType::ping:
    case MsgType::session_init:
    case MsgType::init_ack:
    case MsgType::upload_operand:
    case MsgType::operand_ack:
    case MsgType::compute_request:
    case MsgType::result:
    case MsgType::error:
      return true;
  }
  return false;
}

}  // namespace

std::vector<std::uint8_t> encode_frame(const Frame& frame) {
  std::vector<std::uint8_t> out;
  out.reserve(kFrameHeaderBytes + frame.payload.size());
  out.insert(out.end(), {'V', 'F', 'H', 'E'});
  out.push_back(1);  // version
  out.push_back(static_cast<std::uint8_t>(frame.msg_type));
  const auto len = static_cast<std::uint32_t>(frame.payload.size());
  out.push_back(static_cast<std::uint8_t>(len >> 24));
  out.push_back(static_cast<std::uint8_t>(len >> 16));
  out.push_back(static_cast<std::uint8_t>(len >> 8));
  out.push_back(static_cast<std::uint8_t>(len));
  out.insert(out.end(), frame.payload.begin(), frame.payload.end());
  return out;
}

Frame decode_frame(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kFrameHeaderBytes)
    throw IncompleteFrameError("frame header truncated", bytes.size());
  if (std::memcmp(bytes.data(), "VFHE", 4) != 0)
    throw ProtocolError("bad frame magic", 0);
  if (bytes[4] != 1) throw ProtocolError("unsupported frame version", 4);
  if (!known_msg_type(bytes[5])) throw ProtocolError("unknown message type", 5);
  const std::uint32_t len = (static_cast<std::uint32_t>(bytes[6]) << 24) |
                            (static_cast<std::uint32_t>(bytes[7]) << 16) |
                            (static_cast<std::uint32_t>(bytes[8]) << 8) |
                            static_cast<std::uint32_t>(bytes[9]);
  if (bytes.size() < kFrameHeaderBytes + len)
    throw IncompleteFrameError("frame payload truncated", 6);
  if (bytes.size() > kFrameHeaderBytes + len)
    throw ProtocolError("trailing bytes after frame payload",
                        kFrameHeaderBytes + len);
  Frame f;
  f.msg_type = static_cast<MsgType>(bytes[5]);
  f.payload.assign(bytes.begin() + kFrameHeaderBytes, bytes.end());
  return f;
}

void ByteWriter::u16(std::uint16_t v) {
  out_.push_back(static_cast<std::uint8_t>(v >> 8));
  out_.push_back(static_cast<std::uint8_t>(v));
}

void ByteWriter::u32(std::uint32_t v) {
  u16(static_cast<std::uint16_t>(v >> 16));
  u16(static_cast<std::uint16_t>(v));
}

void ByteWriter::u64(std::uint64_t v) {
  u32(static_cast<std::uint32_t>(v >> 32));
  u32(static_cast<std::uint32_t>(v));
}

void ByteWriter::str(const std::string& s) {
  if (s.size() > UINT16_MAX) throw ProtocolError("string too long", 0);
  u16(static_cast<std::uint16_t>(s.size()));
  out_.insert(out_.end(), s.begin(), s.end());
}

void ByteWriter::blob(const std::vector<std::uint8_t>& b) {
  u32(static_cast<std::uint32_t>(b.size()));
  out_.insert(out_.end(), b.begin(), b.end());
}

void ByteReader::need(std::size_t n) const {
  if (pos_ + n > bytes_.size())
    throw ProtocolError("message payload truncated", pos_);
}

std::uint8_t ByteReader::u8() {
  need(1);
  return bytes_[pos_++];
}

std::uint16_t ByteReader::u16() {
  need(2);
  const std::uint16_t v = (static_cast<std::uint16_t>(bytes_[pos_]) << 8) |
                          bytes_[pos_ + 1];
  pos_ += 2;
  return v;
}

std::uint32_t ByteReader::u32() {
  const std::uint32_t hi = u16();
  return (hi << 16) | u16();
}

std::uint64_t ByteReader::u64() {
  const std::uint64_t hi = u32();
  return (hi << 32) | u32();
}

std::string ByteReader::str() {
  const std::uint16_t n = u16();
  need(n);
  std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return s;
}

std::vector<std::uint8_t> ByteReader::blob() {
  const std::uint32_t n = u32();
  need(n);
  std::vector<std::uint8_t> b(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                              bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
  pos_ += n;
  return b;
}

void ByteReader::finish() const {
  if (pos_ != bytes_.size())
    throw ProtocolError("trailing bytes in message payload", pos_);
}

namespace {

void write_params(ByteWriter& w, const PlainParams& p) {
  w.u8(static_cast<std::uint8_t>(p.mode));
  w.u64(p.mode == Mode::exact ? p.t : std::bit_cast<std::uint64_t>(p.scale));
  w.u32(p.slot_count);
}

PlainParams read_params(ByteReader& r) {
  PlainParams p;
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw ProtocolError("unknown params mode", r.offset() - 1);
  p.mode = static_cast<Mode>(mode);
  const std::uint64_t ts = r.u64();
  if (p.mode == Mode::exact)
    p.t = ts;
  else
    p.scale = std::bit_cast<double>(ts);
  p.slot_count = r.u32();
  return p;
}

Frame expect(const Frame& f, MsgType t) {
  if (f.msg_type != t) throw ProtocolError("unexpected message type", 5);
  return f;
}

}  // namespace

Frame SessionInitMsg::to_frame() const {
  ByteWriter w;
  w.u8(backend_id);
  write_params(w, params);
  return {MsgType::session_init, w.take()};
}

SessionInitMsg SessionInitMsg::from_frame(const Frame& f) {
  expect(f, MsgType::session_init);
  ByteReader r(f.payload);
  SessionInitMsg m;
  m.backend_id = r.u8();
  m.params = read_params(r);
  r.finish();
  return m;
}

Frame InitAckMsg::to_frame() const {
  ByteWriter w;
  w.u32(session_id);
  w.u8(backend_id);
  write_params(w, params);
  return {MsgType::init_ack, w.take()};
}

InitAckMsg InitAckMsg::from_frame(const Frame& f) {
  expect(f, MsgType::init_ack);
  ByteReader r(f.payload);
  InitAckMsg m;
  m.session_id = r.u32();
  m.backend_id = r.u8();
  m.params = read_params(r);
  r.finish();
  return m;
}

Frame UploadOperandMsg::to_frame() const {
  ByteWriter w;
  w.u32(session_id);
  w.str(name);
  w.u8(plaintext ? 1 : 0);
  w.blob(blob);
  return {MsgType::upload_operand, w.take()};
}

UploadOperandMsg UploadOperandMsg::from_frame(const Frame& f) {
  expect(f, MsgType::upload_operand);
  ByteReader r(f.payload);
  UploadOperandMsg m;
  m.session_id = r.u32();
  m.name = r.str();
  m.plaintext = r.u8() != 0;
  m.blob = r.blob();
  r.finish();
  return m;
}

Frame OperandAckMsg::to_frame() const {
  ByteWriter w;
  w.u32(session_id);
  w.str(name);
  return {MsgType::operand_ack, w.take()};
}

OperandAckMsg OperandAckMsg::from_frame(const Frame& f) {
  expect(f, MsgType::operand_ack);
  ByteReader r(f.payload);
  OperandAckMsg m;
  m.session_id = r.u32();
  m.name = r.str();
  r.finish();
  return m;
}

Frame ComputeRequestMsg::to_frame() const {
  ByteWriter w;
  w.u32(session_id);
  w.u8(op);
  w.str(lhs);
  w.str(rhs);
  return {MsgType::compute_request, w.take()};
}

ComputeRequestMsg ComputeRequestMsg::from_frame(const Frame& f) {
  expect(f, MsgType::compute_request);
  ByteReader r(f.payload);
  ComputeRequestMsg m;
  m.session_id = r.u32();
  m.op = r.u8();
  m.lhs = r.str();
  m.rhs = r.str();
  r.finish();
  return m;
}

Frame ResultMsg::to_frame() const {
  ByteWriter w;
  w.u32(session_id);
  w.blob(blob);
  return {MsgType::result, w.take()};
}

ResultMsg ResultMsg::from_frame(const Frame& f) {
  expect(f, MsgType::result);
  ByteReader r(f.payload);
  ResultMsg m;
  m.session_id = r.u32();
  m.blob = r.blob();
  r.finish();
  return m;
}

Frame ErrorMsg::to_frame() const {
  ByteWriter w;
  w.u16(code);
  w.str(message);
  return {MsgType::error, w.take()};
}

ErrorMsg ErrorMsg::from_frame(const Frame& f) {
  expect(f, MsgType::error);
  ByteReader r(f.payload);
  ErrorMsg m;
  m.code = r.u16();
  m.message = r.str();
  r.finish();
  return m;
}

std::vector<std::uint8_t> encode_matrix(const Matrix& m) {
  ByteWriter w;
  w.u8(static_cast<std::uint8_t>(m.mode()));
  w.u32(static_cast<std::uint32_t>(m.rows()));
  w.u32(static_cast<std::uint32_t>(m.cols()));
  if (m.mode() == Mode::exact) {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j) w.u64(m.exact()(i, j));
  } else {
    for (Index i = 0; i < m.rows(); ++i)
      for (Index j = 0; j < m.cols(); ++j)
        w.u64(std::bit_cast<std::uint64_t>(m.approx()(i, j)));
  }
  return w.take();
}

Matrix decode_matrix(const std::vector<std::uint8_t>& bytes) {
  ByteReader r(bytes);
  const std::uint8_t mode = r.u8();
  if (mode > 1) throw ProtocolError("unknown matrix mode", 0);
  const std::uint32_t rows = r.u32();
  const std::uint32_t cols = r.u32();
  if (static_cast<std::uint64_t>(rows) * cols * 8 + 9 != bytes.size())
    throw ProtocolError("matrix entry count disagrees with dimensions", 9);
  if (mode == 0) {
    MatU m(rows, cols);
    for (std::uint32_t i = 0; i < rows; ++i)
      for (std::uint32_t j = 0; j < cols; ++j) m(i, j) = r.u64();
    r.finish();
    return Matrix(m);
  }
  MatR m(rows, cols);
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j)
      m(i, j) = std::bit_cast<double>(r.u64());
  r.finish();
  return Matrix(m);
}

Frame InProcTransport::request(const Frame& frame) {
  const auto bytes = encode_frame(frame);
  capture_.insert(capture_.end(), bytes.begin(), bytes.end());
  // Round-trip through the codec so the captured bytes are what a socket
  // would carry.
  return core_.handle(decode_frame(bytes));
}

}  // namespace vfc
