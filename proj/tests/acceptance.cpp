// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion is self-contained and uses fixed seeds, so the
// verdicts are reproducible run to run.
#include <algorithm>
#include <cstdio>
#include <cstring>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "vfc/adversary.hpp"
#include "vfc/bench.hpp"
#include "vfc/checksum.hpp"
#include "vfc/protocol.hpp"

using namespace vfc;

namespace {

int failures = 0;

void report(int criterion, const char* what, bool ok, const std::string& detail) {
  std::printf("criterion %d [%s]: %s%s%s\n", criterion, what,
              ok ? "PASS" : "FAIL", detail.empty() ? "" : " — ",
              detail.c_str());
  if (!ok) ++failures;
}

PlainParams exact_params(std::uint64_t t) {
  PlainParams p;
  p.mode = Mode::exact;
  p.t = t;
  return p;
}

PlainParams approx_params(std::uint64_t hash_range) {
  PlainParams p;
  p.mode = Mode::approximate;
  p.scale = 0x1.0p20;
  p.t = hash_range;
  return p;
}

bool contains_bytes(const std::vector<std::uint8_t>& haystack,
                    const std::vector<std::uint8_t>& needle) {
  return std::search(haystack.begin(), haystack.end(), needle.begin(),
                     needle.end()) != haystack.end();
}

std::vector<std::uint8_t> u64s_bytes(const std::vector<std::uint64_t>& vals,
                                     bool big_endian) {
  std::vector<std::uint8_t> out;
  for (std::uint64_t v : vals)
    for (int i = 0; i < 8; ++i) {
      const int shift = big_endian ? 8 * (7 - i) : 8 * i;
      out.push_back(static_cast<std::uint8_t>(v >> shift));
    }
  return out;
}

// ---------------------------------------------------------------------------
// 1. Exhaustive soundness over Z_5: every A, B, h with 2x2 operands satisfies
//    (h.A).B == h.(A.B) and verifies, with zero violations.
void criterion1() {
  const std::uint64_t t = 5;
  const PlainParams p = exact_params(t);
  std::uint64_t checked = 0, violations = 0;

  MatU a(2, 2), b(2, 2);
  for (std::uint64_t a0 = 0; a0 < t; ++a0)
    for (std::uint64_t a1 = 0; a1 < t; ++a1)
      for (std::uint64_t a2 = 0; a2 < t; ++a2)
        for (std::uint64_t a3 = 0; a3 < t; ++a3) {
          a << a0, a1, a2, a3;
          for (std::uint64_t b0 = 0; b0 < t; ++b0)
            for (std::uint64_t b1 = 0; b1 < t; ++b1)
              for (std::uint64_t b2 = 0; b2 < t; ++b2)
                for (std::uint64_t b3 = 0; b3 < t; ++b3) {
                  b << b0, b1, b2, b3;
                  const MatU c = oracle::matmul_mod(a, b, t);
                  for (std::uint64_t h0 = 0; h0 < t; ++h0)
                    for (std::uint64_t h1 = 0; h1 < t; ++h1) {
                      const HashVector h({h0, h1}, HashMode::uniform);
                      const MatU ha =
                          compute_checksum(Matrix(a), h, p).exact();
                      const MatU proof = oracle::matmul_mod(ha, b, t);
                      ResultBundle bundle;
                      bundle.result = Matrix(c);
                      bundle.proof_rows = Matrix(proof);
                      ++checked;
                      if (!verify(bundle, h, p).passed()) ++violations;
                      const auto hc =
                          oracle::vecmat_mod({h0, h1}, c, t);
                      if (proof(0, 0) != hc[0] || proof(0, 1) != hc[1])
                        ++violations;
                    }
                }
        }
  report(1, "exhaustive soundness mod 5", violations == 0,
         std::to_string(checked) + " combinations, " +
             std::to_string(violations) + " violations");
}

// ---------------------------------------------------------------------------
// Shared state between criteria 2 and 9: captured client traffic plus the
// secret hash byte patterns that must never appear in it.
struct CaptureRecord {
  std::vector<std::uint8_t> wire;
  std::vector<std::vector<std::uint8_t>> needles;
};
std::vector<CaptureRecord> g_captures;

// 2. 200 randomized end-to-end runs over both backends and all three
//    verification modes; every run verifies and returns the right product.
void criterion2() {
  ServerCore core(make_default_registry());
  const BackendRegistry reg = make_default_registry();
  SplitMix64 rng(20250823);
  int runs = 0, passed = 0;

  for (int i = 0; i < 200; ++i) {
    const bool exact = i % 2 == 0;
    const TaskMode mode = static_cast<TaskMode>((i / 2) % 3);

    TaskSpec task;
    task.mode = mode;
    task.params = mode == TaskMode::with_error
                      ? (exact ? exact_params(1u << 20) : approx_params(1u << 20))
                      : (exact ? exact_params(65537) : approx_params(65537));
    task.backend_id = exact ? kExactBackendId : kApproxBackendId;
    const Index m = static_cast<Index>(2 + rng.below(7));
    Index n = static_cast<Index>(2 + rng.below(7));
    const Index k = static_cast<Index>(2 + rng.below(7));
    const bool square = m == n && i % 5 == 0;  // exercise normalization too
    if (m == n && !square) n = n == 8 ? 7 : n + 1;
    task.a = random_matrix(m, n, task.params, rng.next());
    task.b = random_matrix(n, k, task.params, rng.next());
    task.hash_seed = rng.next();
    task.error_r = 1u << 10;
    task.error_seed = rng.next();
    task.key = "key-" + std::to_string(i);
    if (mode == TaskMode::dual)
      task.b_ownership = BOwnership::client_secret;
    else
      task.b_ownership =
          i % 4 < 2 ? BOwnership::public_plain : BOwnership::client_secret;
    task.square_strategy =
        i % 10 == 0 ? SplitStrategy::pad : SplitStrategy::row_split;

    InProcTransport channel(core);
    ++runs;
    bool ok = false;
    try {
      const ClientResult out = client_execute(task, channel, reg);
      ok = !out.integrity_violation();
      if (ok && exact) {
        ok = out.result.exact() ==
             oracle::matmul_mod(task.a.exact(), task.b->exact(), task.params.t);
      } else if (ok) {
        const MatR direct = task.a.approx() * task.b->approx();
        ok = (out.result.approx() - direct).cwiseAbs().maxCoeff() <
             1e-3 * (1.0 + direct.cwiseAbs().maxCoeff());
      }
    } catch (const Error&) {
      ok = false;
    }
    if (ok) ++passed;

    // record the traffic and the secrets for criterion 9
    CaptureRecord rec;
    rec.wire = channel.captured_outbound();
    const NormalizedBlocks norm = normalize_square(task.a, task.square_strategy);
    for (std::size_t blk = 0; blk < norm.blocks.size(); ++blk) {
      const HashVector h =
          gen_hash_vector(norm.blocks[blk].rows(), task.hash_mode, task.params,
                          task.hash_seed + blk, task.nonzero_hash);
      rec.needles.push_back(u64s_bytes(h.entries(), false));
      rec.needles.push_back(u64s_bytes(h.entries(), true));
    }
    if (mode == TaskMode::dual) {
      const HashVector hb =
          gen_hash_vector(task.b->cols(), task.hash_mode, task.params,
                          task.hash_seed + 0x10000, task.nonzero_hash);
      rec.needles.push_back(u64s_bytes(hb.entries(), false));
      rec.needles.push_back(u64s_bytes(hb.entries(), true));
    }
    g_captures.push_back(std::move(rec));
  }
  report(2, "200 randomized end-to-end runs", passed == runs,
         std::to_string(passed) + "/" + std::to_string(runs) + " passed");
}

// ---------------------------------------------------------------------------
// 3. Tamper detection at t=65537: 10,000 single-entry additive tampers are
//    detected at >= 99.9%; 1,000 fabricated results are all detected.
void criterion3() {
  const PlainParams p = exact_params(65537);
  SplitMix64 rng(3001);

  int tampers = 0, detected = 0;
  for (int i = 0; i < 10000; ++i) {
    const Index m = static_cast<Index>(2 + rng.below(5));
    const Index n = static_cast<Index>(2 + rng.below(5));
    const Index k = static_cast<Index>(2 + rng.below(5));
    const Matrix a = random_matrix(m, n, p, rng.next());
    const Matrix b = random_matrix(n, k, p, rng.next());
    const HashVector h = gen_hash_vector(m, HashMode::uniform, p, rng.next());

    MatU c = oracle::matmul_mod(a.exact(), b.exact(), p.t);
    const MatU proof =
        oracle::matmul_mod(compute_checksum(a, h, p).exact(), b.exact(), p.t);
    const Index ti = static_cast<Index>(rng.below(static_cast<std::uint64_t>(m)));
    const Index tj = static_cast<Index>(rng.below(static_cast<std::uint64_t>(k)));
    const std::uint64_t delta = 1 + rng.below(p.t - 1);
    c(ti, tj) = add_mod(c(ti, tj), delta, p.t);

    ResultBundle bundle;
    bundle.result = Matrix(c);
    bundle.proof_rows = Matrix(proof);
    ++tampers;
    if (!verify(bundle, h, p).passed()) ++detected;
  }
  const double rate = 100.0 * detected / tampers;

  int fabs = 0, fab_detected = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index m = static_cast<Index>(2 + rng.below(5));
    const Index n = static_cast<Index>(2 + rng.below(5));
    const Index k = static_cast<Index>(2 + rng.below(5));
    const Matrix a = random_matrix(m, n, p, rng.next());
    const HashVector h = gen_hash_vector(m, HashMode::uniform, p, rng.next());
    (void)n;
    ResultBundle bundle;
    bundle.result = random_matrix(m, k, p, rng.next());
    bundle.proof_rows = random_matrix(1, k, p, rng.next());
    ++fabs;
    if (!verify(bundle, h, p).passed()) ++fab_detected;
  }

  const bool ok = rate >= 99.9 && fab_detected == fabs;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "additive detection %.3f%% (need >= 99.9), fabricated %d/%d",
                rate, fab_detected, fabs);
  report(3, "tamper detection", ok, buf);
}

// ---------------------------------------------------------------------------
// 4. Forgery boundary: 1,000 known-hash forgeries all verify (the scheme's
//    stated limit); 10,000 guessed-hash forgeries fail at >= 99.9%.
void criterion4() {
  const PlainParams p = exact_params(65537);
  SplitMix64 rng(4001);

  int known = 0, known_pass = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index m = static_cast<Index>(2 + rng.below(5));
    const Index n = static_cast<Index>(2 + rng.below(5));
    const Index k = static_cast<Index>(2 + rng.below(5));
    const Matrix a = random_matrix(m, n, p, rng.next());
    const Matrix b = random_matrix(n, k, p, rng.next());
    const HashVector h = gen_hash_vector(m, HashMode::uniform, p, rng.next());
    const Matrix c = Matrix(oracle::matmul_mod(a.exact(), b.exact(), p.t));
    const Matrix proof = Matrix(
        oracle::matmul_mod(compute_checksum(a, h, p).exact(), b.exact(), p.t));
    const Matrix delta = random_matrix(m, k, p, rng.next());

    const auto [c2, proof2] = forge_with_known_hash(c, proof, h, delta, p);
    ResultBundle bundle;
    bundle.result = c2;
    bundle.proof_rows = proof2;
    ++known;
    if (verify(bundle, h, p).passed()) ++known_pass;
  }

  int guessed = 0, guessed_fail = 0;
  for (int i = 0; i < 10000; ++i) {
    const Index m = static_cast<Index>(2 + rng.below(5));
    const Index n = static_cast<Index>(2 + rng.below(5));
    const Index k = static_cast<Index>(2 + rng.below(5));
    const Matrix a = random_matrix(m, n, p, rng.next());
    const Matrix b = random_matrix(n, k, p, rng.next());
    const HashVector h = gen_hash_vector(m, HashMode::uniform, p, rng.next());
    const HashVector guess = gen_hash_vector(m, HashMode::uniform, p, rng.next());
    const Matrix c = Matrix(oracle::matmul_mod(a.exact(), b.exact(), p.t));
    const Matrix proof = Matrix(
        oracle::matmul_mod(compute_checksum(a, h, p).exact(), b.exact(), p.t));
    const Matrix delta = random_matrix(m, k, p, rng.next());

    const auto [c2, proof2] = forge_with_known_hash(c, proof, guess, delta, p);
    ResultBundle bundle;
    bundle.result = c2;
    bundle.proof_rows = proof2;
    ++guessed;
    if (!verify(bundle, h, p).passed()) ++guessed_fail;
  }
  const double fail_rate = 100.0 * guessed_fail / guessed;

  const bool ok = known_pass == known && fail_rate >= 99.9;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "known-hash %d/%d verify, guessed-hash %.3f%% rejected",
                known_pass, known, fail_rate);
  report(4, "forgery boundary", ok, buf);
}

// ---------------------------------------------------------------------------
// 5 + 6. Overheads. One timed benchmark drives both: exact counter ratios at
// m=n=k=64 plus wall-clock bounds at 64^3 and 512^3 with a monotone predicted
// curve in between.
void criteria5and6() {
  BenchConfig cfg;
  cfg.points = {{64, 64, 64}, {128, 128, 128}, {256, 256, 256}, {512, 512, 512}};
  cfg.trials = 7;
  cfg.seed = 56001;
  const BenchReport rep = run_benchmark(cfg);
  const BenchRow& r64 = rep.rows[0];
  const BenchRow& r512 = rep.rows[3];

  const bool counters_ok =
      r64.multadds_plain == 64ull * 64 * 64 &&
      r64.multadds_checked == 65ull * 64 * 64 &&
      r64.ratio_measured == 65.0 / 64.0 &&
      r64.ratio_predicted == Rational(65, 64) &&
      r64.pt_expansion == Rational(1, 64) &&
      r64.verify_ops == 64ull * 64 + 64;
  const double ct_ratio = static_cast<double>(r64.ct_bytes_checked) /
                          static_cast<double>(r64.ct_bytes_plain);
  const double wall64 = r64.server_ms_checked / r64.server_ms_plain;
  const bool c5 = counters_ok && ct_ratio <= 1.0 + 1.0 / 64.0 && wall64 <= 1.05;
  char buf5[200];
  std::snprintf(buf5, sizeof(buf5),
                "counter ratio 65/64 %s, ct bytes x%.6f (bound 1.015625), "
                "verify ops %llu, wall x%.4f (bound 1.05)",
                counters_ok ? "exact" : "WRONG", ct_ratio,
                static_cast<unsigned long long>(r64.verify_ops), wall64);
  report(5, "overhead accounting at 64", c5, buf5);

  const double wall512 = r512.server_ms_checked / r512.server_ms_plain;
  bool monotone = true;
  for (std::size_t i = 1; i < rep.rows.size(); ++i)
    if (rep.rows[i].ratio_predicted.value() >=
        rep.rows[i - 1].ratio_predicted.value())
      monotone = false;
  const bool c6 = wall64 <= 1.10 && wall512 <= 1.03 && monotone;
  char buf6[200];
  std::snprintf(buf6, sizeof(buf6),
                "wall overhead x%.4f at 64^3 (bound 1.10), x%.4f at 512^3 "
                "(bound 1.03), predicted curve %s",
                wall64, wall512, monotone ? "monotone" : "NOT monotone");
  report(6, "scaling overheads", c6, buf6);
}

// ---------------------------------------------------------------------------
// 7. Hash-with-error completeness at t=2^20, r=2^10: over 1,000 runs the
//    verification residual equals r^A.B exactly and vanishes mod r; a unit
//    perturbation is detected iff it is not a multiple of r.
void criterion7() {
  const PlainParams p = exact_params(1u << 20);
  const std::uint64_t r = 1u << 10;
  SplitMix64 rng(7001);
  int runs = 0, good = 0;

  for (int i = 0; i < 1000; ++i) {
    const Index m = static_cast<Index>(2 + rng.below(5));
    const Index n = static_cast<Index>(2 + rng.below(5));
    const Index k = static_cast<Index>(2 + rng.below(5));
    const Matrix a = random_matrix(m, n, p, rng.next());
    const Matrix b = random_matrix(n, k, p, rng.next());
    const HashVector h = gen_hash_vector(m, HashMode::uniform, p, rng.next());
    const ErrorConfig err = ErrorConfig::generate(n, r, p, rng.next());

    const MatU proof = oracle::matmul_mod(
        compute_checksum_with_error(a, h, err, p).exact(), b.exact(), p.t);
    const MatU c = oracle::matmul_mod(a.exact(), b.exact(), p.t);
    const auto hc = oracle::vecmat_mod(h.entries(), c, p.t);

    MatU ra(1, n);
    for (Index j = 0; j < n; ++j)
      ra(0, j) = err.entries()[static_cast<std::size_t>(j)];
    const MatU rab = oracle::matmul_mod(ra, b.exact(), p.t);

    bool ok = true;
    for (Index j = 0; j < k; ++j) {
      const std::uint64_t residual =
          sub_mod(proof(0, j), hc[static_cast<std::size_t>(j)], p.t);
      if (residual != rab(0, j) || residual % r != 0) ok = false;
    }

    ResultBundle bundle;
    bundle.result = Matrix(c);
    bundle.proof_rows = Matrix(proof);
    if (!verify_with_error(bundle, h, err, p).passed()) ok = false;

    // unit perturbation (not a multiple of r): must be detected
    ResultBundle unit = bundle;
    unit.proof_rows.exact()(0, 0) = add_mod(unit.proof_rows.exact()(0, 0), 1, p.t);
    if (verify_with_error(unit, h, err, p).passed()) ok = false;

    // perturbation by exactly r: invisible to the mod-r check, by design
    ResultBundle byr = bundle;
    byr.proof_rows.exact()(0, 0) = add_mod(byr.proof_rows.exact()(0, 0), r, p.t);
    if (!verify_with_error(byr, h, err, p).passed()) ok = false;

    ++runs;
    if (ok) ++good;
  }
  report(7, "hash-with-error completeness", good == runs,
         std::to_string(good) + "/" + std::to_string(runs) +
             " runs matched the residual model");
}

// ---------------------------------------------------------------------------
// 8. Power-of-two hashes and square normalization: shift-add evaluation is
//    bit-identical to multiply-add over 1,000 vectors; every square size up
//    to 16 recombines exactly under both strategies.
void criterion8() {
  const PlainParams p = exact_params(65537);
  SplitMix64 rng(8001);

  int vectors = 0, equal = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index m = static_cast<Index>(1 + rng.below(16));
    const Index n = static_cast<Index>(1 + rng.below(16));
    const Matrix a = random_matrix(m, n, p, rng.next());
    const HashVector shift = gen_hash_vector(m, HashMode::pow2, p, rng.next());
    const HashVector mult(shift.entries(), HashMode::uniform);
    ++vectors;
    if (compute_checksum(a, shift, p).exact() ==
        compute_checksum(a, mult, p).exact())
      ++equal;
  }

  bool recombine_ok = true;
  for (Index size = 2; size <= 16; ++size) {
    const Matrix a = random_matrix(size, size, p, rng.next());
    const Matrix b = random_matrix(size, 3, p, rng.next());
    const MatU direct = oracle::matmul_mod(a.exact(), b.exact(), p.t);
    for (SplitStrategy s : {SplitStrategy::row_split, SplitStrategy::pad}) {
      const NormalizedBlocks norm = normalize_square(a, s);
      std::vector<Matrix> results;
      for (const Matrix& blk : norm.blocks)
        results.push_back(
            Matrix(oracle::matmul_mod(blk.exact(), b.exact(), p.t)));
      if (!(recombine(norm, results).exact() == direct)) recombine_ok = false;
    }
  }

  report(8, "pow2 hashing and normalization",
         equal == vectors && recombine_ok,
         std::to_string(equal) + "/" + std::to_string(vectors) +
             " shift-add identical" +
             (recombine_ok ? ", recombination exact to 16x16"
                           : ", recombination BROKEN"));
}

// ---------------------------------------------------------------------------
// 9. Wire discipline: golden encodings, 20 malformed inputs rejected with
//    structured errors, and no captured client traffic from criterion 2
//    contains a hash vector's bytes.
void criterion9() {
  int checks = 0, good = 0;

  // golden frame
  ++checks;
  const std::vector<std::uint8_t> ping_golden = {'V', 'F', 'H', 'E', 1,
                                                 0x00, 0, 0, 0, 0};
  if (encode_frame(Frame{MsgType::ping, {}}) == ping_golden) ++good;

  // golden ciphertext header
  ++checks;
  {
    ExactBackend be;
    const PlainParams p = exact_params(65537);
    const auto bytes = serialize_cipher(
        be.encrypt(Matrix(oracle::from_rows({{1, 2}, {3, 4}})), p, "k"));
    if (bytes.size() >= 26 && std::memcmp(bytes.data(), "VFC1", 4) == 0 &&
        bytes[4] == kExactBackendId && bytes[5] == 0 && bytes[6] == 0x01 &&
        bytes[7] == 0x00 && bytes[8] == 0x01 &&  // 65537 little-endian
        bytes[14] == 2 && bytes[18] == 2)
      ++good;
  }

  // 20 malformed inputs, each rejected with a structured protocol error
  const auto rejects = [](const std::vector<std::uint8_t>& bytes, bool cipher) {
    try {
      if (cipher)
        (void)deserialize_cipher(bytes);
      else
        (void)decode_frame(bytes);
      return false;
    } catch (const ProtocolError&) {
      // structured rejection; IncompleteFrameError is a ProtocolError too
      return true;
    }
  };

  const auto good_frame = encode_frame(Frame{MsgType::result, {1, 2, 3}});
  ExactBackend be;
  const auto good_ct = serialize_cipher(be.encrypt(
      Matrix(oracle::from_rows({{1, 2}})), exact_params(65537), "k"));

  std::vector<std::pair<std::vector<std::uint8_t>, bool>> malformed;
  auto mutate = [](std::vector<std::uint8_t> v, std::size_t at, std::uint8_t to) {
    v[at] = to;
    return v;
  };
  // frames
  malformed.push_back({{}, false});                                   // empty
  malformed.push_back({{'V', 'F', 'H'}, false});                      // short
  malformed.push_back({mutate(good_frame, 0, 'X'), false});           // magic
  malformed.push_back({mutate(good_frame, 3, 'F'), false});           // magic
  malformed.push_back({mutate(good_frame, 4, 2), false});             // version
  malformed.push_back({mutate(good_frame, 4, 0), false});             // version
  malformed.push_back({mutate(good_frame, 5, 0x10), false});          // type
  malformed.push_back({mutate(good_frame, 5, 0xFE), false});          // type
  {
    auto v = good_frame;
    v.pop_back();
    malformed.push_back({v, false});  // truncated payload
  }
  {
    auto v = good_frame;
    v.push_back(0);
    malformed.push_back({v, false});  // trailing bytes
  }
  {
    auto v = good_frame;
    v[9] = 0xFF;  // declared length far beyond the buffer
    malformed.push_back({v, false});
  }
  malformed.push_back({std::vector<std::uint8_t>(10, 0xAA), false});  // garbage
  // ciphertexts
  malformed.push_back({{}, true});                                    // empty
  malformed.push_back({{'V', 'F', 'C', '1'}, true});                  // header cut
  malformed.push_back({mutate(good_ct, 0, 'W'), true});               // magic
  malformed.push_back({mutate(good_ct, 4, 0x09), true});              // backend
  malformed.push_back({mutate(good_ct, 5, 7), true});                 // mode
  {
    auto v = good_ct;
    v.pop_back();
    malformed.push_back({v, true});  // payload short
  }
  {
    auto v = good_ct;
    v.push_back(0);
    malformed.push_back({v, true});  // payload long
  }
  {
    auto v = good_ct;
    v[22] = 0xFF;  // length field lies
    malformed.push_back({v, true});
  }

  for (const auto& [bytes, cipher] : malformed) {
    ++checks;
    if (rejects(bytes, cipher)) ++good;
  }

  // hash secrecy across every criterion-2 capture
  ++checks;
  bool secrecy = !g_captures.empty();
  for (const auto& rec : g_captures)
    for (const auto& needle : rec.needles)
      if (contains_bytes(rec.wire, needle)) secrecy = false;
  if (secrecy) ++good;

  report(9, "wire goldens, malformed inputs, hash secrecy", good == checks,
         std::to_string(good) + "/" + std::to_string(checks) +
             " checks passed (" + std::to_string(malformed.size()) +
             " malformed inputs)");
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criteria5and6();
  criterion7();
  criterion8();
  criterion9();
  if (failures == 0) {
    std::printf("acceptance: all criteria passed\n");
    return 0;
  }
  std::printf("acceptance: %d criteria FAILED\n", failures);
  return 1;
}
