#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <variant>

#include "vfc/errors.hpp"
#include "vfc/rng.hpp"

namespace vfc {

using Index = Eigen::Index;

// Row-major to match the wire layouts, which are all row-major scans.
using MatU =
    Eigen::Matrix<std::uint64_t, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MatR =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class Mode : std::uint8_t { exact = 0, approximate = 1 };

struct PlainParams {
  Mode mode = Mode::exact;
  std::uint64_t t = 65537;   // plaintext modulus (exact mode; hash range in both)
  double scale = 0x1.0p20;   // fixed-point scale (approximate mode)
  std::uint32_t slot_count = 4096;

  void validate() const {
    if (mode == Mode::exact && t < 2) throw ConfigError("modulus t must be >= 2");
    if (mode == Mode::approximate && !(scale > 0))
      throw ConfigError("scale must be positive");
    if (t < 2) throw ConfigError("hash range t must be >= 2");
  }
};

inline std::uint64_t mul_mod(std::uint64_t a, std::uint64_t b, std::uint64_t t) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(a) * b) % t);
}

inline std::uint64_t add_mod(std::uint64_t a, std::uint64_t b, std::uint64_t t) {
  const std::uint64_t s = a + b;  // operands reduced, no overflow for t < 2^63
  return s >= t ? s - t : s;
}

inline std::uint64_t sub_mod(std::uint64_t a, std::uint64_t b, std::uint64_t t) {
  return a >= b ? a - b : a + t - b;
}

// Value over either scalar domain. Exact-mode entries are kept reduced in
// [0, t) by the operations that produce them.
class Matrix {
 public:
  Matrix() : data_(MatU()) {}
  explicit Matrix(MatU m) : data_(std::move(m)) {}
  explicit Matrix(MatR m) : data_(std::move(m)) {}

  Mode mode() const {
    return std::holds_alternative<MatU>(data_) ? Mode::exact : Mode::approximate;
  }
  Index rows() const {
    return std::visit([](const auto& m) { return m.rows(); }, data_);
  }
  Index cols() const {
    return std::visit([](const auto& m) { return m.cols(); }, data_);
  }

  const MatU& exact() const {
    if (mode() != Mode::exact) throw ModeMismatchError("matrix is not exact-mode");
    return std::get<MatU>(data_);
  }
  const MatR& approx() const {
    if (mode() != Mode::approximate)
      throw ModeMismatchError("matrix is not approximate-mode");
    return std::get<MatR>(data_);
  }
  MatU& exact() {
    if (mode() != Mode::exact) throw ModeMismatchError("matrix is not exact-mode");
    return std::get<MatU>(data_);
  }
  MatR& approx() {
    if (mode() != Mode::approximate)
      throw ModeMismatchError("matrix is not approximate-mode");
    return std::get<MatR>(data_);
  }

  bool operator==(const Matrix& other) const {
    if (mode() != other.mode() || rows() != other.rows() || cols() != other.cols())
      return false;
    if (rows() == 0 || cols() == 0) return true;
    if (mode() == Mode::exact) return exact() == other.exact();
    return approx() == other.approx();
  }

 private:
  std::variant<MatU, MatR> data_;
};

// Modular matrix product. Uses the plain Eigen product when the accumulator
// cannot overflow, otherwise a 128-bit scalar loop.
inline MatU mat_mul_mod(const MatU& a, const MatU& b, std::uint64_t t) {
  if (a.cols() != b.rows())
    throw InvalidDimensionError("matmul inner dimensions disagree");
  const std::uint64_t tm1 = t - 1;
  const bool fast =
      tm1 < (1ULL << 32) &&
      (a.cols() == 0 ||
       static_cast<unsigned __int128>(tm1) * tm1 * a.cols() <=
           static_cast<unsigned __int128>(UINT64_MAX));
  if (fast) {
    MatU c = a * b;
    return c.unaryExpr([t](std::uint64_t v) { return v % t; });
  }
  MatU c(a.rows(), b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      unsigned __int128 acc = 0;
      for (Index l = 0; l < a.cols(); ++l) {
        acc += static_cast<unsigned __int128>(a(i, l)) * b(l, j);
        if (acc >> 126) acc %= t;
      }
      c(i, j) = static_cast<std::uint64_t>(acc % t);
    }
  }
  return c;
}

inline Matrix mat_mul(const Matrix& a, const Matrix& b, const PlainParams& params) {
  if (a.mode() != b.mode()) throw ModeMismatchError("operand modes disagree");
  if (a.cols() != b.rows())
    throw InvalidDimensionError("matmul inner dimensions disagree");
  if (a.mode() == Mode::exact)
    return Matrix(mat_mul_mod(a.exact(), b.exact(), params.t));
  return Matrix(MatR(a.approx() * b.approx()));
}

inline Matrix block(const Matrix& m, Index row0, Index col0, Index nrows,
                    Index ncols) {
  if (row0 + nrows > m.rows() || col0 + ncols > m.cols())
    throw InvalidDimensionError("block exceeds matrix extent");
  if (m.mode() == Mode::exact)
    return Matrix(MatU(m.exact().block(row0, col0, nrows, ncols)));
  return Matrix(MatR(m.approx().block(row0, col0, nrows, ncols)));
}

inline Matrix vstack(const Matrix& a, const Matrix& b) {
  if (a.mode() != b.mode()) throw ModeMismatchError("vstack modes disagree");
  if (a.cols() != b.cols()) throw InvalidDimensionError("vstack column mismatch");
  if (a.mode() == Mode::exact) {
    MatU m(a.rows() + b.rows(), a.cols());
    m.topRows(a.rows()) = a.exact();
    m.bottomRows(b.rows()) = b.exact();
    return Matrix(m);
  }
  MatR m(a.rows() + b.rows(), a.cols());
  m.topRows(a.rows()) = a.approx();
  m.bottomRows(b.rows()) = b.approx();
  return Matrix(m);
}

inline Matrix hstack(const Matrix& a, const Matrix& b) {
  if (a.mode() != b.mode()) throw ModeMismatchError("hstack modes disagree");
  if (a.rows() != b.rows()) throw InvalidDimensionError("hstack row mismatch");
  if (a.mode() == Mode::exact) {
    MatU m(a.rows(), a.cols() + b.cols());
    m.leftCols(a.cols()) = a.exact();
    m.rightCols(b.cols()) = b.exact();
    return Matrix(m);
  }
  MatR m(a.rows(), a.cols() + b.cols());
  m.leftCols(a.cols()) = a.approx();
  m.rightCols(b.cols()) = b.approx();
  return Matrix(m);
}

inline Matrix transposed(const Matrix& m) {
  if (m.mode() == Mode::exact) return Matrix(MatU(m.exact().transpose()));
  return Matrix(MatR(m.approx().transpose()));
}

inline Matrix zero_matrix(Index rows, Index cols, Mode mode) {
  if (mode == Mode::exact) return Matrix(MatU(MatU::Zero(rows, cols)));
  return Matrix(MatR(MatR::Zero(rows, cols)));
}

inline Matrix random_matrix(Index rows, Index cols, const PlainParams& params,
                            std::uint64_t seed) {
  SplitMix64 rng(seed);
  if (params.mode == Mode::exact) {
    MatU m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j) m(i, j) = rng.below(params.t);
    return Matrix(m);
  }
  MatR m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) m(i, j) = rng.unit_real();
  return Matrix(m);
}

}  // namespace vfc
