#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vfc/backend.hpp"
#include "vfc/checksum.hpp"

namespace vfc {

struct BenchPoint {
  std::uint64_t m = 0, n = 0, k = 0;
};

struct BenchConfig {
  std::vector<BenchPoint> points;
  std::vector<std::uint8_t> backend_ids = {kExactBackendId};
  int trials = 5;
  std::uint64_t seed = 1;
  std::uint64_t t = 65537;
  bool diagonal_a = false;  // the diagonal-workload shape of the n=64 benchmark
  HashMode hash_mode = HashMode::uniform;
  bool counters_only = false;  // skip wall-clock timing
  bool parallel = false;       // counter-only sweeps may run points in parallel

  void validate() const;
};

struct BenchRow {
  std::uint64_t m = 0, n = 0, k = 0;
  std::string mode = "plain";
  std::string backend;
  std::uint64_t multadds_plain = 0;
  std::uint64_t multadds_checked = 0;
  Rational ratio_predicted;
  // Counter ratio; equals ratio_predicted exactly since counters are
  // deterministic.
  double ratio_measured = 0.0;
  double enc_ms = 0.0, dec_ms = 0.0, verify_ms = 0.0;
  double server_ms_plain = 0.0, server_ms_checked = 0.0;
  Rational pt_expansion;
  std::uint64_t ct_bytes_plain = 0;
  std::uint64_t ct_bytes_checked = 0;
  std::uint64_t verify_ops = 0;
  OverheadModel predicted;
};

struct BenchReport {
  std::vector<BenchRow> rows;
};

BenchReport run_benchmark(const BenchConfig& cfg);

enum class ReportFormat : std::uint8_t { csv = 0, table = 1 };

std::string emit_report(const BenchReport& report, ReportFormat format);

}  // namespace vfc
