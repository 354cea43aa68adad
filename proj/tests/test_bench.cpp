#include <doctest.h>

#include <sstream>

#include "vfc/bench.hpp"

using namespace vfc;

namespace {

BenchConfig counters_config(std::vector<BenchPoint> points) {
  BenchConfig cfg;
  cfg.points = std::move(points);
  cfg.counters_only = true;
  return cfg;
}

}  // namespace

TEST_CASE("bench config validation") {
  BenchConfig cfg = counters_config({{4, 4, 4}});
  CHECK_NOTHROW(cfg.validate());

  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);

  cfg = counters_config({{0, 4, 4}});
  CHECK_THROWS_AS(cfg.validate(), InvalidDimensionError);

  cfg = counters_config({{4, 4, 4}});
  cfg.parallel = true;
  CHECK_NOTHROW(cfg.validate());
  cfg.counters_only = false;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("counter ratios are exact: (m+1)/m") {
  const BenchReport rep = run_benchmark(counters_config({{64, 64, 64}, {1, 8, 8}}));
  REQUIRE(rep.rows.size() == 2);

  const BenchRow& r64 = rep.rows[0];
  CHECK(r64.multadds_plain == 64ull * 64 * 64);
  CHECK(r64.multadds_checked == 65ull * 64 * 64);
  CHECK(r64.ratio_measured == 65.0 / 64.0);
  CHECK(r64.ratio_predicted == Rational(65, 64));
  CHECK(r64.pt_expansion == Rational(1, 64));
  CHECK(r64.verify_ops == 64ull * 64 + 64);

  const BenchRow& r1 = rep.rows[1];  // worst case m=1: ratio 2
  CHECK(r1.multadds_plain == 64);
  CHECK(r1.multadds_checked == 128);
  CHECK(r1.ratio_measured == 2.0);
  CHECK(r1.ratio_predicted == Rational(2, 1));
}

TEST_CASE("ciphertext byte overhead stays within 1 + 1/m") {
  const BenchReport rep = run_benchmark(counters_config({{64, 64, 64}}));
  const BenchRow& r = rep.rows[0];
  CHECK(r.ct_bytes_checked > r.ct_bytes_plain);
  CHECK(static_cast<double>(r.ct_bytes_checked) /
            static_cast<double>(r.ct_bytes_plain) <=
        1.0 + 1.0 / 64.0);
}

TEST_CASE("both backends can be swept") {
  BenchConfig cfg = counters_config({{8, 8, 8}});
  cfg.backend_ids = {kExactBackendId, kApproxBackendId};
  const BenchReport rep = run_benchmark(cfg);
  REQUIRE(rep.rows.size() == 2);
  CHECK(rep.rows[0].backend != rep.rows[1].backend);
  CHECK(rep.rows[0].ratio_measured == rep.rows[1].ratio_measured);
}

TEST_CASE("parallel counter-only sweep equals the serial sweep") {
  BenchConfig cfg = counters_config({{4, 6, 8}, {8, 8, 8}, {16, 4, 4}});
  const BenchReport serial = run_benchmark(cfg);
  cfg.parallel = true;
  const BenchReport parallel = run_benchmark(cfg);
  REQUIRE(serial.rows.size() == parallel.rows.size());
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].multadds_plain == parallel.rows[i].multadds_plain);
    CHECK(serial.rows[i].multadds_checked == parallel.rows[i].multadds_checked);
    CHECK(serial.rows[i].ct_bytes_checked == parallel.rows[i].ct_bytes_checked);
  }
}

TEST_CASE("csv report: header, shape, determinism") {
  const std::string header =
      "m,n,k,mode,backend,multadds_plain,multadds_checked,ratio_measured,"
      "ratio_predicted,enc_ms,dec_ms,verify_ms,server_ms_plain,"
      "server_ms_checked,pt_expansion,ct_bytes_plain,ct_bytes_checked";

  // empty report is header-only
  CHECK(emit_report(BenchReport{}, ReportFormat::csv) == header + "\n");

  const BenchReport rep = run_benchmark(counters_config({{8, 8, 8}}));
  const std::string csv = emit_report(rep, ReportFormat::csv);
  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == header);
  REQUIRE(std::getline(lines, line));
  CHECK(line.rfind("8,8,8,plain,exact-modular,512,576,", 0) == 0);
  CHECK_FALSE(std::getline(lines, line));  // exactly two lines

  // re-emitting the same report is byte-identical
  CHECK(emit_report(rep, ReportFormat::csv) == csv);

  const std::string table = emit_report(rep, ReportFormat::table);
  CHECK(table.find("9/8") != std::string::npos);
}

TEST_CASE("diagonal workload keeps the same counter model") {
  BenchConfig cfg = counters_config({{8, 8, 8}});
  cfg.diagonal_a = true;
  const BenchReport rep = run_benchmark(cfg);
  CHECK(rep.rows[0].multadds_plain == 512);  // counters model dense kernels
  CHECK(rep.rows[0].ratio_measured == 9.0 / 8.0);
}
