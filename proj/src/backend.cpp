#include "vfc/backend.hpp"

#include <bit>
#include <cmath>
#include <cstring>

namespace vfc {

namespace {

void put_u32_le(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64_le(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32_le(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64_le(const std::uint8_t* p) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return v;
}

std::uint64_t fresh_mask_seed(std::uint64_t parent_seed, std::uint64_t salt) {
  SplitMix64 rng(parent_seed ^ (salt * 0x9e3779b97f4a7c15ULL + 1));
  return rng.next();
}

void check_same_params(const CipherMatrix& a, const PlainParams& p,
                       const PlainParams& q) {
  (void)a;
  if (p.mode != q.mode) throw BackendError("operand params disagree: mode");
  if (p.mode == Mode::exact && p.t != q.t)
    throw BackendError("operand params disagree: modulus");
  if (p.mode == Mode::approximate && p.scale != q.scale)
    throw BackendError("operand params disagree: scale");
}

}  // namespace

std::uint64_t key_check_of(const KeyToken& key) {
  return fnv1a64(key.data(), key.size());
}

namespace payload {

std::vector<std::uint8_t> build(std::uint64_t key_check, std::uint64_t mask_seed,
                                const std::vector<std::uint64_t>& scalars) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderBytes + scalars.size() * 8);
  put_u64_le(out, key_check);
  put_u64_le(out, mask_seed);
  SplitMix64 stream(mask_seed);
  for (std::uint64_t s : scalars) put_u64_le(out, s ^ stream.next());
  return out;
}

std::vector<std::uint64_t> unmask(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes || (bytes.size() - kHeaderBytes) % 8 != 0)
    throw BackendError("malformed ciphertext payload");
  const std::size_t count = (bytes.size() - kHeaderBytes) / 8;
  SplitMix64 stream(get_u64_le(bytes.data() + 8));
  std::vector<std::uint64_t> scalars(count);
  for (std::size_t i = 0; i < count; ++i)
    scalars[i] = get_u64_le(bytes.data() + kHeaderBytes + 8 * i) ^ stream.next();
  return scalars;
}

std::uint64_t key_check(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < kHeaderBytes)
    throw BackendError("malformed ciphertext payload");
  return get_u64_le(bytes.data());
}

}  // namespace payload

// ---------------------------------------------------------------------------
// Exact backend

BackendDescriptor ExactBackend::descriptor() const {
  return {kExactBackendId, Mode::exact, 8192, 0.0, "exact-modular"};
}

CipherMatrix ExactBackend::encrypt(const Matrix& plain, const PlainParams& params,
                                   const KeyToken& key) const {
  params.validate();
  if (plain.mode() != Mode::exact)
    throw ModeMismatchError("exact backend expects exact-mode plaintext");
  const MatU& m = plain.exact();
  std::vector<std::uint64_t> scalars;
  scalars.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (m(i, j) >= params.t)
        throw OutOfDomainError("plaintext entry not reduced below t");
      scalars.push_back(m(i, j));
    }
  }
  CipherMatrix ct;
  ct.backend_id = kExactBackendId;
  ct.params = params;
  ct.rows = static_cast<std::uint32_t>(m.rows());
  ct.cols = static_cast<std::uint32_t>(m.cols());
  const std::uint64_t seed =
      fresh_mask_seed(key_check_of(key), fnv1a64(scalars.data(), scalars.size() * 8));
  ct.payload = payload::build(key_check_of(key), seed, scalars);
  count_encrypt(ct.payload.size());
  return ct;
}

Matrix ExactBackend::decrypt(const CipherMatrix& ct, const KeyToken& key) const {
  if (ct.backend_id != kExactBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (payload::key_check(ct.payload) != key_check_of(key))
    throw AuthenticationError("decryption key does not match");
  const auto scalars = payload::unmask(ct.payload);
  if (scalars.size() != static_cast<std::size_t>(ct.rows) * ct.cols)
    throw BackendError("payload scalar count disagrees with dimensions");
  MatU m(ct.rows, ct.cols);
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < ct.rows; ++i)
    for (std::uint32_t j = 0; j < ct.cols; ++j) m(i, j) = scalars[idx++] % ct.params.t;
  return Matrix(m);
}

CipherMatrix ExactBackend::matmul(const CipherMatrix& a, const Matrix& b) const {
  if (a.backend_id != kExactBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (b.mode() != Mode::exact)
    throw ModeMismatchError("exact backend expects exact-mode operand");
  if (static_cast<Index>(a.cols) != b.rows())
    throw InvalidDimensionError("matmul inner dimensions disagree");
  const auto scalars = payload::unmask(a.payload);
  MatU lhs(a.rows, a.cols);
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < a.rows; ++i)
    for (std::uint32_t j = 0; j < a.cols; ++j) lhs(i, j) = scalars[idx++] % a.params.t;
  const MatU prod = mat_mul_mod(lhs, b.exact(), a.params.t);
  count_matmul(a.rows, a.cols, static_cast<std::uint64_t>(b.cols()));
  std::vector<std::uint64_t> out(prod.data(), prod.data() + prod.size());
  CipherMatrix ct;
  ct.backend_id = kExactBackendId;
  ct.params = a.params;
  ct.rows = a.rows;
  ct.cols = static_cast<std::uint32_t>(b.cols());
  ct.payload = payload::build(payload::key_check(a.payload),
                              fresh_mask_seed(get_u64_le(a.payload.data() + 8), 1),
                              out);
  return ct;
}

CipherMatrix ExactBackend::matmul(const CipherMatrix& a,
                                  const CipherMatrix& b) const {
  if (a.backend_id != kExactBackendId || b.backend_id != kExactBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (payload::key_check(a.payload) != payload::key_check(b.payload))
    throw BackendError("operands encrypted under different keys");
  check_same_params(a, a.params, b.params);
  const auto sb = payload::unmask(b.payload);
  MatU rhs(b.rows, b.cols);
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < b.rows; ++i)
    for (std::uint32_t j = 0; j < b.cols; ++j) rhs(i, j) = sb[idx++] % b.params.t;
  return matmul(a, Matrix(rhs));
}

CipherMatrix ExactBackend::add_plain(const CipherMatrix& a,
                                     const Matrix& delta) const {
  if (a.backend_id != kExactBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (delta.mode() != Mode::exact)
    throw ModeMismatchError("exact backend expects exact-mode operand");
  if (static_cast<Index>(a.rows) != delta.rows() ||
      static_cast<Index>(a.cols) != delta.cols())
    throw InvalidDimensionError("add_plain dimensions disagree");
  auto scalars = payload::unmask(a.payload);
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < a.rows; ++i)
    for (std::uint32_t j = 0; j < a.cols; ++j) {
      scalars[idx] = add_mod(scalars[idx] % a.params.t,
                             delta.exact()(i, j) % a.params.t, a.params.t);
      ++idx;
    }
  count_cipher_op();
  CipherMatrix ct = a;
  ct.payload = payload::build(payload::key_check(a.payload),
                              fresh_mask_seed(get_u64_le(a.payload.data() + 8), 2),
                              scalars);
  return ct;
}

// ---------------------------------------------------------------------------
// Approximate backend

namespace {

std::uint64_t quantize(double v, double scale) {
  return std::bit_cast<std::uint64_t>(
      static_cast<std::int64_t>(std::llround(v * scale)));
}

double dequantize(std::uint64_t q, double scale) {
  return static_cast<double>(std::bit_cast<std::int64_t>(q)) / scale;
}

MatR decode_approx(const CipherMatrix& ct) {
  const auto scalars = payload::unmask(ct.payload);
  if (scalars.size() != static_cast<std::size_t>(ct.rows) * ct.cols)
    throw BackendError("payload scalar count disagrees with dimensions");
  MatR m(ct.rows, ct.cols);
  std::size_t idx = 0;
  for (std::uint32_t i = 0; i < ct.rows; ++i)
    for (std::uint32_t j = 0; j < ct.cols; ++j)
      m(i, j) = dequantize(scalars[idx++], ct.params.scale);
  return m;
}

}  // namespace

BackendDescriptor ApproxBackend::descriptor() const {
  return {kApproxBackendId, Mode::approximate, 8192, 0x1.0p-19,
          "approximate-fixed-point"};
}

CipherMatrix ApproxBackend::encrypt(const Matrix& plain, const PlainParams& params,
                                    const KeyToken& key) const {
  params.validate();
  if (plain.mode() != Mode::approximate)
    throw ModeMismatchError("approximate backend expects approximate-mode plaintext");
  const MatR& m = plain.approx();
  std::vector<std::uint64_t> scalars;
  scalars.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j) scalars.push_back(quantize(m(i, j), params.scale));
  CipherMatrix ct;
  ct.backend_id = kApproxBackendId;
  ct.params = params;
  ct.params.mode = Mode::approximate;
  ct.rows = static_cast<std::uint32_t>(m.rows());
  ct.cols = static_cast<std::uint32_t>(m.cols());
  const std::uint64_t seed =
      fresh_mask_seed(key_check_of(key), fnv1a64(scalars.data(), scalars.size() * 8));
  ct.payload = payload::build(key_check_of(key), seed, scalars);
  count_encrypt(ct.payload.size());
  return ct;
}

Matrix ApproxBackend::decrypt(const CipherMatrix& ct, const KeyToken& key) const {
  if (ct.backend_id != kApproxBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (payload::key_check(ct.payload) != key_check_of(key))
    throw AuthenticationError("decryption key does not match");
  return Matrix(decode_approx(ct));
}

CipherMatrix ApproxBackend::matmul(const CipherMatrix& a, const Matrix& b) const {
  if (a.backend_id != kApproxBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (b.mode() != Mode::approximate)
    throw ModeMismatchError("approximate backend expects approximate-mode operand");
  if (static_cast<Index>(a.cols) != b.rows())
    throw InvalidDimensionError("matmul inner dimensions disagree");
  const MatR lhs = decode_approx(a);
  const MatR prod = lhs * b.approx();
  count_matmul(a.rows, a.cols, static_cast<std::uint64_t>(b.cols()));
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(prod.size()));
  for (Index i = 0; i < prod.rows(); ++i)
    for (Index j = 0; j < prod.cols(); ++j)
      out.push_back(quantize(prod(i, j), a.params.scale));
  CipherMatrix ct;
  ct.backend_id = kApproxBackendId;
  ct.params = a.params;
  ct.rows = a.rows;
  ct.cols = static_cast<std::uint32_t>(b.cols());
  ct.payload = payload::build(payload::key_check(a.payload),
                              fresh_mask_seed(get_u64_le(a.payload.data() + 8), 1),
                              out);
  return ct;
}

CipherMatrix ApproxBackend::matmul(const CipherMatrix& a,
                                   const CipherMatrix& b) const {
  if (a.backend_id != kApproxBackendId || b.backend_id != kApproxBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (payload::key_check(a.payload) != payload::key_check(b.payload))
    throw BackendError("operands encrypted under different keys");
  check_same_params(a, a.params, b.params);
  return matmul(a, Matrix(decode_approx(b)));
}

CipherMatrix ApproxBackend::add_plain(const CipherMatrix& a,
                                      const Matrix& delta) const {
  if (a.backend_id != kApproxBackendId)
    throw BackendError("ciphertext belongs to a different backend");
  if (delta.mode() != Mode::approximate)
    throw ModeMismatchError("approximate backend expects approximate-mode operand");
  if (static_cast<Index>(a.rows) != delta.rows() ||
      static_cast<Index>(a.cols) != delta.cols())
    throw InvalidDimensionError("add_plain dimensions disagree");
  const MatR sum = decode_approx(a) + delta.approx();
  std::vector<std::uint64_t> out;
  out.reserve(static_cast<std::size_t>(sum.size()));
  for (Index i = 0; i < sum.rows(); ++i)
    for (Index j = 0; j < sum.cols(); ++j)
      out.push_back(quantize(sum(i, j), a.params.scale));
  count_cipher_op();
  CipherMatrix ct = a;
  ct.payload = payload::build(payload::key_check(a.payload),
                              fresh_mask_seed(get_u64_le(a.payload.data() + 8), 2),
                              out);
  return ct;
}

// ---------------------------------------------------------------------------
// Registry and serialization

void BackendRegistry::add(std::shared_ptr<HeBackend> backend) {
  const auto id = backend->descriptor().id;
  backends_[id] = std::move(backend);
}

HeBackend& BackendRegistry::get(std::uint8_t id) const {
  const auto it = backends_.find(id);
  if (it == backends_.end())
    throw BackendError("no backend registered with id " + std::to_string(id));
  return *it->second;
}

bool BackendRegistry::has(std::uint8_t id) const {
  return backends_.count(id) != 0;
}

std::vector<std::uint8_t> BackendRegistry::ids() const {
  std::vector<std::uint8_t> out;
  for (const auto& [id, _] : backends_) out.push_back(id);
  return out;
}

BackendRegistry make_default_registry() {
  BackendRegistry reg;
  reg.add(std::make_shared<ExactBackend>());
  reg.add(std::make_shared<ApproxBackend>());
  return reg;
}

std::vector<std::uint8_t> serialize_cipher(const CipherMatrix& ct) {
  std::vector<std::uint8_t> out;
  out.reserve(26 + ct.payload.size());
  out.insert(out.end(), {'V', 'F', 'C', '1'});
  out.push_back(ct.backend_id);
  out.push_back(static_cast<std::uint8_t>(ct.params.mode));
  if (ct.params.mode == Mode::exact)
    put_u64_le(out, ct.params.t);
  else
    put_u64_le(out, std::bit_cast<std::uint64_t>(ct.params.scale));
  put_u32_le(out, ct.rows);
  put_u32_le(out, ct.cols);
  put_u32_le(out, static_cast<std::uint32_t>(ct.payload.size()));
  out.insert(out.end(), ct.payload.begin(), ct.payload.end());
  return out;
}

CipherMatrix deserialize_cipher(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 26)
    throw IncompleteFrameError("ciphertext header truncated", bytes.size());
  if (std::memcmp(bytes.data(), "VFC1", 4) != 0)
    throw ProtocolError("bad ciphertext magic", 0);
  CipherMatrix ct;
  ct.backend_id = bytes[4];
  if (ct.backend_id != kExactBackendId && ct.backend_id != kApproxBackendId)
    throw ProtocolError("unknown backend id", 4);
  const std::uint8_t mode = bytes[5];
  if (mode > 1) throw ProtocolError("unknown ciphertext mode", 5);
  ct.params.mode = static_cast<Mode>(mode);
  if (ct.params.mode == Mode::exact)
    ct.params.t = get_u64_le(bytes.data() + 6);
  else
    ct.params.scale = std::bit_cast<double>(get_u64_le(bytes.data() + 6));
  ct.rows = get_u32_le(bytes.data() + 14);
  ct.cols = get_u32_le(bytes.data() + 18);
  const std::uint32_t len = get_u32_le(bytes.data() + 22);
  if (bytes.size() != 26 + static_cast<std::size_t>(len))
    throw IncompleteFrameError("ciphertext payload length mismatch", 22);
  ct.payload.assign(bytes.begin() + 26, bytes.end());
  return ct;
}

}  // namespace vfc
