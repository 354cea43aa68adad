#pragma once

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

#include "vfc/matrix.hpp"

namespace vfc {

enum class HashMode : std::uint8_t { uniform = 0, pow2 = 1 };

// Client-secret hash vector. Never crosses the wire; the protocol layer
// asserts this on captured traffic.
class HashVector {
 public:
  HashVector() = default;
  HashVector(std::vector<std::uint64_t> entries, HashMode mode,
             std::vector<std::uint8_t> exponents = {})
      : entries_(std::move(entries)),
        exponents_(std::move(exponents)),
        mode_(mode) {}

  Index length() const { return static_cast<Index>(entries_.size()); }
  HashMode mode() const { return mode_; }
  const std::vector<std::uint64_t>& entries() const { return entries_; }
  // pow2 mode only: entry i equals 2^exponents()[i] mod t.
  const std::vector<std::uint8_t>& exponents() const { return exponents_; }
  bool secret() const { return secret_; }

 private:
  std::vector<std::uint64_t> entries_;
  std::vector<std::uint8_t> exponents_;
  HashMode mode_ = HashMode::uniform;
  bool secret_ = true;
};

// Secret error term for the hash-with-error variant: a scalar modulus r
// dividing t, and a row of random multiples of r.
class ErrorConfig {
 public:
  static ErrorConfig generate(Index n, std::uint64_t r, const PlainParams& params,
                              std::uint64_t seed);
  // Rebuild from stored secret material; entries must be multiples of r.
  static ErrorConfig from_parts(std::uint64_t r, std::vector<std::uint64_t> entries,
                                std::uint64_t seed);

  std::uint64_t r() const { return r_; }
  const std::vector<std::uint64_t>& entries() const { return entries_; }
  std::uint64_t seed() const { return seed_; }
  Index length() const { return static_cast<Index>(entries_.size()); }

 private:
  std::uint64_t r_ = 0;
  std::vector<std::uint64_t> entries_;
  std::uint64_t seed_ = 0;
};

enum class ChecksumKind : std::uint8_t { plain = 0, with_error = 1 };

struct ChecksumRowInfo {
  Index row;          // index within the stacked matrix
  ChecksumKind kind;
  std::uint32_t hash_id = 0;  // which hash vector produced the row
};

struct RowMap {
  Index base_rows = 0;
  Index base_cols = 0;
  std::vector<ChecksumRowInfo> checksum_rows;
  Index checksum_cols = 0;  // dual-sided mode: trailing proof columns
};

// Matrix with checksum rows appended below the base (and, in dual-sided
// mode, checksum columns appended to the right).
class CheckedMatrix {
 public:
  CheckedMatrix() = default;
  CheckedMatrix(Matrix stacked, RowMap map)
      : stacked_(std::move(stacked)), map_(std::move(map)) {}

  const Matrix& stacked() const { return stacked_; }
  const RowMap& row_map() const { return map_; }
  Index base_rows() const { return map_.base_rows; }
  Index checksum_row_count() const {
    return static_cast<Index>(map_.checksum_rows.size());
  }

 private:
  Matrix stacked_;
  RowMap map_;
};

struct ResultBundle {
  Matrix result;                     // C, m x k
  Matrix proof_rows;                 // C^A, p x k
  std::optional<Matrix> proof_cols;  // C h_B^T, m x q (dual)
  std::optional<Matrix> corner;      // h_A C h_B^T, p x q (dual)
};

enum class Verdict : std::uint8_t { pass = 0, fail = 1 };
enum class VerifyMode : std::uint8_t { plain = 0, with_error = 1, dual = 2 };

struct VerificationReport {
  Verdict verdict = Verdict::fail;
  VerifyMode mode = VerifyMode::plain;
  std::vector<std::uint64_t> residuals_exact;
  std::vector<double> residuals_approx;
  std::size_t mismatch_count = 0;
  double tolerance_used = 0.0;
  std::uint64_t ops = 0;  // scalar mult-adds plus comparisons spent verifying

  bool passed() const { return verdict == Verdict::pass; }
};

struct Rational {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  Rational() = default;
  Rational(std::uint64_t n, std::uint64_t d) : num(n), den(d) {
    const std::uint64_t g = std::gcd(num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  bool operator==(const Rational&) const = default;
};

struct OverheadModel {
  Rational plaintext_expansion;         // 1/m
  Rational ciphertext_expansion_bound;  // 1 + 1/m
  Rational server_ratio;                // (m+1)/m
  std::uint64_t server_multadds_plain = 0;    // m n k
  std::uint64_t server_multadds_checked = 0;  // (m+1) n k
  std::uint64_t client_checksum_gen = 0;      // m n mult-adds (shift-adds in pow2)
  std::uint64_t client_verify = 0;            // m k + k
};

enum class SplitStrategy : std::uint8_t { row_split = 0, pad = 1 };

// Output of normalize_square: blocks plus what recombine() needs.
struct NormalizedBlocks {
  std::vector<Matrix> blocks;
  SplitStrategy strategy = SplitStrategy::row_split;
  bool transformed = false;  // false: input was already non-square
  Index original_rows = 0;
};

HashVector gen_hash_vector(Index m, HashMode mode, const PlainParams& params,
                           std::uint64_t seed, bool nonzero_hash = false);

// h . A, one scalar per column. pow2 hashes are evaluated shift-add; the
// result is identical to multiply-add evaluation.
Matrix compute_checksum(const Matrix& a, const HashVector& h,
                        const PlainParams& params);

// h . A + r^A (mod t).
Matrix compute_checksum_with_error(const Matrix& a, const HashVector& h,
                                   const ErrorConfig& err,
                                   const PlainParams& params);

CheckedMatrix attach_checksum(const Matrix& a, const Matrix& rows,
                              ChecksumKind kind = ChecksumKind::plain,
                              std::uint32_t hash_id = 0);

// Dual-sided mode: append checksum columns to the right of B.
CheckedMatrix attach_checksum_cols(const Matrix& b, const Matrix& cols);

// Inverse of attach_checksum: (base, checksum rows).
std::pair<Matrix, Matrix> detach_checksum(const CheckedMatrix& cm);

// Split a decrypted stacked product into result and proof parts.
ResultBundle split_result(const Matrix& stacked, Index proof_row_count,
                          Index proof_col_count = 0);

VerificationReport verify(const ResultBundle& bundle, const HashVector& h,
                          const PlainParams& params);

VerificationReport verify_with_error(const ResultBundle& bundle,
                                     const HashVector& h, const ErrorConfig& err,
                                     const PlainParams& params);

VerificationReport verify_dual(const ResultBundle& bundle, const HashVector& ha,
                               const HashVector& hb, const PlainParams& params);

NormalizedBlocks normalize_square(const Matrix& a, SplitStrategy strategy);

// Reassemble the product of the original A from per-block products.
Matrix recombine(const NormalizedBlocks& norm,
                 const std::vector<Matrix>& block_results);

OverheadModel predict_overheads(std::uint64_t m, std::uint64_t n, std::uint64_t k);

}  // namespace vfc
