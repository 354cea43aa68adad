#include "vfc/checksum.hpp"

#include <bit>
#include <cmath>
#include <cstdlib>

namespace vfc {

namespace {

constexpr double kApproxTolerance = 0x1.0p-20;

// One checksum scalar: sum_i h_i * col_i, shift-add when the hash is pow2.
std::uint64_t checksum_entry_exact(const MatU& a, const HashVector& h, Index col,
                                   std::uint64_t t) {
  std::uint64_t acc = 0;
  if (h.mode() == HashMode::pow2) {
    for (Index i = 0; i < a.rows(); ++i) {
      const unsigned __int128 shifted =
          static_cast<unsigned __int128>(a(i, col)) << h.exponents()[i];
      acc = add_mod(acc, static_cast<std::uint64_t>(shifted % t), t);
    }
  } else {
    for (Index i = 0; i < a.rows(); ++i)
      acc = add_mod(acc, mul_mod(h.entries()[i], a(i, col), t), t);
  }
  return acc;
}

double checksum_entry_approx(const MatR& a, const HashVector& h, Index col) {
  double acc = 0.0;
  for (Index i = 0; i < a.rows(); ++i)
    acc += static_cast<double>(h.entries()[i]) * a(i, col);
  return acc;
}

double max_abs(const Matrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  return m.approx().cwiseAbs().maxCoeff();
}

// Hash weights amplify the fixed-point quantization noise of the result by
// up to its L1 norm, so the approximate-mode tolerance must scale with it.
double hash_l1(const HashVector& h) {
  double sum = 0.0;
  for (std::uint64_t v : h.entries()) sum += static_cast<double>(v);
  return sum;
}

}  // namespace

HashVector gen_hash_vector(Index m, HashMode mode, const PlainParams& params,
                           std::uint64_t seed, bool nonzero_hash) {
  params.validate();
  if (m < 1) throw InvalidDimensionError("hash vector length must be >= 1");
  if (mode == HashMode::pow2 && params.t == 2)
    throw DegenerateDomainError("pow2 hash over t=2 admits only the entry 1");
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> entries(static_cast<std::size_t>(m));
  std::vector<std::uint8_t> exponents;
  if (mode == HashMode::pow2) {
    exponents.resize(static_cast<std::size_t>(m));
    const unsigned width = std::bit_width(params.t);
    for (Index i = 0; i < m; ++i) {
      for (;;) {
        const auto e = static_cast<std::uint8_t>(rng.below(width));
        const std::uint64_t v =
            static_cast<std::uint64_t>((static_cast<unsigned __int128>(1) << e) %
                                       params.t);
        if (nonzero_hash && v == 0) continue;
        exponents[static_cast<std::size_t>(i)] = e;
        entries[static_cast<std::size_t>(i)] = v;
        break;
      }
    }
  } else {
    for (Index i = 0; i < m; ++i) {
      std::uint64_t v;
      do {
        v = rng.below(params.t);
      } while (nonzero_hash && v == 0);
      entries[static_cast<std::size_t>(i)] = v;
    }
  }
  return HashVector(std::move(entries), mode, std::move(exponents));
}

Matrix compute_checksum(const Matrix& a, const HashVector& h,
                        const PlainParams& params) {
  if (h.length() != a.rows())
    throw InvalidDimensionError("hash length does not match matrix rows");
  if (a.mode() == Mode::exact) {
    MatU row(1, a.cols());
    for (Index j = 0; j < a.cols(); ++j)
      row(0, j) = checksum_entry_exact(a.exact(), h, j, params.t);
    return Matrix(row);
  }
  MatR row(1, a.cols());
  for (Index j = 0; j < a.cols(); ++j)
    row(0, j) = checksum_entry_approx(a.approx(), h, j);
  return Matrix(row);
}

ErrorConfig ErrorConfig::generate(Index n, std::uint64_t r,
                                  const PlainParams& params, std::uint64_t seed) {
  params.validate();
  if (n < 1) throw InvalidDimensionError("error vector length must be >= 1");
  if (r <= 1) throw InvalidErrorConfigError("error modulus r=1 verifies nothing");
  if (r >= params.t)
    throw InvalidErrorConfigError("error modulus r must be smaller than t");
  if (params.t % r != 0)
    throw InvalidErrorConfigError("error modulus r must divide t");
  ErrorConfig cfg;
  cfg.r_ = r;
  cfg.seed_ = seed;
  cfg.entries_.resize(static_cast<std::size_t>(n));
  SplitMix64 rng(seed);
  for (auto& e : cfg.entries_) e = r * rng.below(params.t / r);
  return cfg;
}

ErrorConfig ErrorConfig::from_parts(std::uint64_t r,
                                    std::vector<std::uint64_t> entries,
                                    std::uint64_t seed) {
  if (r <= 1) throw InvalidErrorConfigError("error modulus r=1 verifies nothing");
  for (std::uint64_t e : entries)
    if (e % r != 0)
      throw InvalidErrorConfigError("error entries must be multiples of r");
  ErrorConfig cfg;
  cfg.r_ = r;
  cfg.entries_ = std::move(entries);
  cfg.seed_ = seed;
  return cfg;
}

Matrix compute_checksum_with_error(const Matrix& a, const HashVector& h,
                                   const ErrorConfig& err,
                                   const PlainParams& params) {
  if (err.length() != a.cols())
    throw InvalidDimensionError("error vector length does not match matrix cols");
  Matrix row = compute_checksum(a, h, params);
  if (a.mode() == Mode::exact) {
    for (Index j = 0; j < row.cols(); ++j)
      row.exact()(0, j) = add_mod(row.exact()(0, j),
                                  err.entries()[static_cast<std::size_t>(j)] %
                                      params.t,
                                  params.t);
  }
  // Approximate mode: the residue structure (r^A . B multiple of r) only
  // survives when B is integer-valued, so no error term is blended in; the
  // residue check then runs against a zero honest residual.
  return row;
}

CheckedMatrix attach_checksum(const Matrix& a, const Matrix& rows,
                              ChecksumKind kind, std::uint32_t hash_id) {
  if (rows.cols() != a.cols())
    throw InvalidDimensionError("checksum row length does not match matrix cols");
  RowMap map;
  map.base_rows = a.rows();
  map.base_cols = a.cols();
  for (Index p = 0; p < rows.rows(); ++p)
    map.checksum_rows.push_back(
        {a.rows() + p, kind, hash_id + static_cast<std::uint32_t>(p)});
  return CheckedMatrix(vstack(a, rows), std::move(map));
}

CheckedMatrix attach_checksum_cols(const Matrix& b, const Matrix& cols) {
  if (cols.rows() != b.rows())
    throw InvalidDimensionError("checksum column length does not match matrix rows");
  RowMap map;
  map.base_rows = b.rows();
  map.base_cols = b.cols();
  map.checksum_cols = cols.cols();
  return CheckedMatrix(hstack(b, cols), std::move(map));
}

std::pair<Matrix, Matrix> detach_checksum(const CheckedMatrix& cm) {
  const auto& map = cm.row_map();
  const Index p = cm.checksum_row_count();
  const Matrix& s = cm.stacked();
  return {block(s, 0, 0, map.base_rows, s.cols()),
          block(s, map.base_rows, 0, p, s.cols())};
}

ResultBundle split_result(const Matrix& stacked, Index proof_row_count,
                          Index proof_col_count) {
  const Index m = stacked.rows() - proof_row_count;
  const Index k = stacked.cols() - proof_col_count;
  if (m < 0 || k < 0 || proof_row_count < 0 || proof_col_count < 0)
    throw InvalidDimensionError("proof extents exceed stacked result");
  ResultBundle bundle;
  bundle.result = block(stacked, 0, 0, m, k);
  bundle.proof_rows = block(stacked, m, 0, proof_row_count, k);
  if (proof_col_count > 0) {
    bundle.proof_cols = block(stacked, 0, k, m, proof_col_count);
    bundle.corner = block(stacked, m, k, proof_row_count, proof_col_count);
  }
  return bundle;
}

namespace {

// Compare a computed hash row against a proof row, accumulating into the
// report. Returns ops spent (mult-adds already counted by the caller).
void compare_exact(const MatU& computed, const MatU& proof, std::uint64_t t,
                   VerificationReport& rep) {
  for (Index j = 0; j < computed.cols(); ++j) {
    const std::uint64_t d = sub_mod(computed(0, j), proof(0, j) % t, t);
    rep.residuals_exact.push_back(d);
    if (d != 0) ++rep.mismatch_count;
    ++rep.ops;
  }
}

void compare_approx(const MatR& computed, const MatR& proof, double tol,
                    VerificationReport& rep) {
  for (Index j = 0; j < computed.cols(); ++j) {
    const double d = std::abs(computed(0, j) - proof(0, j));
    rep.residuals_approx.push_back(d);
    if (d > tol) ++rep.mismatch_count;
    ++rep.ops;
  }
}

}  // namespace

VerificationReport verify(const ResultBundle& bundle, const HashVector& h,
                          const PlainParams& params) {
  if (bundle.proof_rows.rows() < 1)
    throw InvalidDimensionError("bundle carries no proof rows");
  if (h.length() != bundle.result.rows())
    throw InvalidDimensionError("hash length does not match result rows");
  VerificationReport rep;
  rep.mode = VerifyMode::plain;
  const Matrix hc = compute_checksum(bundle.result, h, params);
  rep.ops += static_cast<std::uint64_t>(bundle.result.rows()) *
             static_cast<std::uint64_t>(bundle.result.cols());
  const Matrix proof = block(bundle.proof_rows, 0, 0, 1, bundle.proof_rows.cols());
  if (bundle.result.mode() == Mode::exact) {
    compare_exact(hc.exact(), proof.exact(), params.t, rep);
  } else {
    rep.tolerance_used =
        kApproxTolerance * (1.0 + hash_l1(h) + max_abs(proof));
    compare_approx(hc.approx(), proof.approx(), rep.tolerance_used, rep);
  }
  rep.verdict = rep.mismatch_count == 0 ? Verdict::pass : Verdict::fail;
  return rep;
}

VerificationReport verify_with_error(const ResultBundle& bundle,
                                     const HashVector& h, const ErrorConfig& err,
                                     const PlainParams& params) {
  if (bundle.proof_rows.rows() < 1)
    throw InvalidDimensionError("bundle carries no proof rows");
  if (h.length() != bundle.result.rows())
    throw InvalidDimensionError("hash length does not match result rows");
  VerificationReport rep;
  rep.mode = VerifyMode::with_error;
  const Matrix hc = compute_checksum(bundle.result, h, params);
  rep.ops += static_cast<std::uint64_t>(bundle.result.rows()) *
             static_cast<std::uint64_t>(bundle.result.cols());
  const std::uint64_t r = err.r();
  if (bundle.result.mode() == Mode::exact) {
    for (Index j = 0; j < hc.cols(); ++j) {
      // Honest residual is r^A . B, a multiple of r surviving mod-t reduction.
      const std::uint64_t d = sub_mod(bundle.proof_rows.exact()(0, j) % params.t,
                                      hc.exact()(0, j), params.t) %
                              r;
      rep.residuals_exact.push_back(d);
      if (d != 0) ++rep.mismatch_count;
      ++rep.ops;
    }
  } else {
    rep.tolerance_used =
        kApproxTolerance * (1.0 + hash_l1(h) + max_abs(bundle.proof_rows));
    const auto rd = static_cast<double>(r);
    for (Index j = 0; j < hc.cols(); ++j) {
      const double d = bundle.proof_rows.approx()(0, j) - hc.approx()(0, j);
      const double dist = std::abs(d - rd * std::round(d / rd));
      rep.residuals_approx.push_back(dist);
      if (dist > rep.tolerance_used) ++rep.mismatch_count;
      ++rep.ops;
    }
  }
  rep.verdict = rep.mismatch_count == 0 ? Verdict::pass : Verdict::fail;
  return rep;
}

VerificationReport verify_dual(const ResultBundle& bundle, const HashVector& ha,
                               const HashVector& hb, const PlainParams& params) {
  if (!bundle.proof_cols || !bundle.corner)
    throw ModeMismatchError("bundle lacks dual-sided proof parts");
  if (bundle.proof_rows.rows() < 1)
    throw InvalidDimensionError("bundle carries no proof rows");
  if (ha.length() != bundle.result.rows() || hb.length() != bundle.result.cols())
    throw InvalidDimensionError("hash lengths do not match result extents");
  VerificationReport rep;
  rep.mode = VerifyMode::dual;
  const Index m = bundle.result.rows();
  const Index k = bundle.result.cols();

  const Matrix row_hash = compute_checksum(bundle.result, ha, params);
  const Matrix col_hash =
      transposed(compute_checksum(transposed(bundle.result), hb, params));
  // Corner from the column proof image: ha . (C hb^T).
  const Matrix corner_hash = compute_checksum(col_hash, ha, params);
  rep.ops += 2ULL * static_cast<std::uint64_t>(m) * static_cast<std::uint64_t>(k) +
             static_cast<std::uint64_t>(m);

  const Matrix row_proof = block(bundle.proof_rows, 0, 0, 1, k);
  const Matrix col_proof = transposed(block(*bundle.proof_cols, 0, 0, m, 1));
  const Matrix corner_proof = block(*bundle.corner, 0, 0, 1, 1);
  if (bundle.result.mode() == Mode::exact) {
    compare_exact(row_hash.exact(), row_proof.exact(), params.t, rep);
    compare_exact(transposed(col_hash).exact(), col_proof.exact(), params.t, rep);
    compare_exact(corner_hash.exact(), corner_proof.exact(), params.t, rep);
  } else {
    double mx = std::max(max_abs(row_proof), max_abs(col_proof));
    mx = std::max(mx, max_abs(corner_proof));
    rep.tolerance_used =
        kApproxTolerance * (1.0 + hash_l1(ha) + hash_l1(hb) + mx);
    compare_approx(row_hash.approx(), row_proof.approx(), rep.tolerance_used, rep);
    compare_approx(transposed(col_hash).approx(), col_proof.approx(),
                   rep.tolerance_used, rep);
    compare_approx(corner_hash.approx(), corner_proof.approx(),
                   rep.tolerance_used, rep);
  }
  rep.verdict = rep.mismatch_count == 0 ? Verdict::pass : Verdict::fail;
  return rep;
}

NormalizedBlocks normalize_square(const Matrix& a, SplitStrategy strategy) {
  NormalizedBlocks out;
  out.strategy = strategy;
  out.original_rows = a.rows();
  if (a.rows() != a.cols()) {
    out.blocks.push_back(a);
    out.transformed = false;
    return out;
  }
  out.transformed = true;
  if (strategy == SplitStrategy::row_split) {
    if (a.rows() < 2)
      throw CannotSplitError("1x1 matrix cannot be row-split; use pad");
    const Index top = (a.rows() + 1) / 2;
    out.blocks.push_back(block(a, 0, 0, top, a.cols()));
    out.blocks.push_back(block(a, top, 0, a.rows() - top, a.cols()));
  } else {
    out.blocks.push_back(vstack(a, zero_matrix(1, a.cols(), a.mode())));
  }
  return out;
}

Matrix recombine(const NormalizedBlocks& norm,
                 const std::vector<Matrix>& block_results) {
  if (block_results.size() != norm.blocks.size())
    throw InvalidDimensionError("block result count does not match block count");
  if (!norm.transformed) return block_results[0];
  if (norm.strategy == SplitStrategy::row_split)
    return vstack(block_results[0], block_results[1]);
  const Matrix& padded = block_results[0];
  return block(padded, 0, 0, padded.rows() - 1, padded.cols());
}

OverheadModel predict_overheads(std::uint64_t m, std::uint64_t n,
                                std::uint64_t k) {
  if (m < 1 || n < 1 || k < 1)
    throw InvalidDimensionError("overhead model requires positive dimensions");
  OverheadModel model;
  model.plaintext_expansion = Rational(1, m);
  model.ciphertext_expansion_bound = Rational(m + 1, m);
  model.server_ratio = Rational(m + 1, m);
  model.server_multadds_plain = m * n * k;
  model.server_multadds_checked = (m + 1) * n * k;
  model.client_checksum_gen = m * n;
  model.client_verify = m * k + k;
  return model;
}

}  // namespace vfc
