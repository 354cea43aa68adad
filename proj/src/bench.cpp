#include "vfc/bench.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <thread>

namespace vfc {

namespace {

using Clock = std::chrono::steady_clock;

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

Matrix bench_operand(std::uint64_t rows, std::uint64_t cols,
                     const PlainParams& params, std::uint64_t seed,
                     bool diagonal) {
  Matrix m = random_matrix(static_cast<Index>(rows), static_cast<Index>(cols),
                           params, seed);
  if (!diagonal) return m;
  Matrix z = zero_matrix(m.rows(), m.cols(), m.mode());
  for (Index i = 0; i < std::min(m.rows(), m.cols()); ++i) {
    if (m.mode() == Mode::exact)
      z.exact()(i, i) = m.exact()(i, i);
    else
      z.approx()(i, i) = m.approx()(i, i);
  }
  return z;
}

// Repeat tiny kernels so one timing sample is not dominated by clock
// granularity.
int repeats_for(std::uint64_t multadds) {
  if (multadds >= 8'000'000) return 1;
  return static_cast<int>(8'000'000 / std::max<std::uint64_t>(multadds, 1)) + 1;
}

BenchRow run_point(const BenchPoint& pt, std::uint8_t backend_id,
                   const BenchConfig& cfg) {
  // Fresh backend instances per point so counters are isolated.
  const BackendRegistry registry = make_default_registry();
  HeBackend& backend = registry.get(backend_id);
  PlainParams params;
  params.mode = backend.descriptor().mode;
  params.t = cfg.t;

  BenchRow row;
  row.m = pt.m;
  row.n = pt.n;
  row.k = pt.k;
  row.backend = backend.descriptor().name;
  row.predicted = predict_overheads(pt.m, pt.n, pt.k);
  row.ratio_predicted = row.predicted.server_ratio;
  row.pt_expansion = row.predicted.plaintext_expansion;

  const Matrix a = bench_operand(pt.m, pt.n, params, cfg.seed, cfg.diagonal_a);
  const Matrix b = bench_operand(pt.n, pt.k, params, cfg.seed + 1, false);
  const KeyToken key = "bench-key";
  const int reps = cfg.counters_only ? 1 : repeats_for(pt.m * pt.n * pt.k);

  std::vector<double> enc_ms, dec_ms, verify_ms, plain_ms, checked_ms;
  const int trials = cfg.counters_only ? 1 : cfg.trials;

  const auto run_plain = [&] {
    backend.reset_counters();
    const CipherMatrix ct_plain = backend.encrypt(a, params, key);
    const auto start = Clock::now();
    CipherMatrix prod_plain;
    for (int r = 0; r < reps; ++r) prod_plain = backend.matmul(ct_plain, b);
    plain_ms.push_back(ms_since(start) / reps);
    (void)backend.decrypt(prod_plain, key);
    row.multadds_plain =
        backend.counters().scalar_multadds / static_cast<unsigned>(reps);
    row.ct_bytes_plain = serialize_cipher(ct_plain).size();
  };
  const auto run_checked = [&](int trial) {
    backend.reset_counters();
    const HashVector h = gen_hash_vector(a.rows(), cfg.hash_mode, params,
                                         cfg.seed + 2 + static_cast<std::uint64_t>(trial));
    const Matrix checksum = compute_checksum(a, h, params);
    const CheckedMatrix cm = attach_checksum(a, checksum);
    auto start = Clock::now();
    const CipherMatrix ct_checked = backend.encrypt(cm.stacked(), params, key);
    enc_ms.push_back(ms_since(start));
    start = Clock::now();
    CipherMatrix prod_checked;
    for (int r = 0; r < reps; ++r) prod_checked = backend.matmul(ct_checked, b);
    checked_ms.push_back(ms_since(start) / reps);
    start = Clock::now();
    const Matrix stacked = backend.decrypt(prod_checked, key);
    dec_ms.push_back(ms_since(start));
    const ResultBundle bundle = split_result(stacked, 1);
    start = Clock::now();
    const VerificationReport rep = verify(bundle, h, params);
    verify_ms.push_back(ms_since(start));
    row.verify_ops = rep.ops;
    row.multadds_checked =
        backend.counters().scalar_multadds / static_cast<unsigned>(reps);
    row.ct_bytes_checked = serialize_cipher(ct_checked).size();
  };

  // Warm caches and let the clock governor settle before any timed sample.
  if (!cfg.counters_only)
    (void)backend.matmul(backend.encrypt(a, params, key), b);

  for (int trial = 0; trial < trials; ++trial) {
    // Alternate phase order so slow drift (thermal, scheduler) cannot bias
    // the checked/plain ratio; medians then see both orderings equally.
    if (trial % 2 == 0) {
      run_plain();
      run_checked(trial);
    } else {
      run_checked(trial);
      run_plain();
    }
  }

  row.ratio_measured = static_cast<double>(row.multadds_checked) /
                       static_cast<double>(row.multadds_plain);
  if (!cfg.counters_only) {
    row.enc_ms = median(enc_ms);
    row.dec_ms = median(dec_ms);
    row.verify_ms = median(verify_ms);
    row.server_ms_plain = median(plain_ms);
    row.server_ms_checked = median(checked_ms);
  }
  return row;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << std::fixed << v;
  return os.str();
}

}  // namespace

void BenchConfig::validate() const {
  if (trials < 1) throw ConfigError("trials must be >= 1");
  for (const auto& p : points)
    if (p.m < 1 || p.n < 1 || p.k < 1)
      throw InvalidDimensionError("benchmark dimensions must be >= 1");
  if (parallel && !counters_only)
    throw ConfigError("parallel sweeps are counter-only (timing fidelity)");
}

BenchReport run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  BenchReport report;
  std::vector<std::pair<BenchPoint, std::uint8_t>> work;
  for (const auto& pt : cfg.points)
    for (std::uint8_t id : cfg.backend_ids) work.emplace_back(pt, id);
  report.rows.resize(work.size());
  if (cfg.parallel) {
    std::vector<std::thread> threads;
    for (std::size_t i = 0; i < work.size(); ++i)
      threads.emplace_back([&, i] {
        report.rows[i] = run_point(work[i].first, work[i].second, cfg);
      });
    for (auto& th : threads) th.join();
  } else {
    for (std::size_t i = 0; i < work.size(); ++i)
      report.rows[i] = run_point(work[i].first, work[i].second, cfg);
  }
  return report;
}

std::string emit_report(const BenchReport& report, ReportFormat format) {
  std::ostringstream os;
  if (format == ReportFormat::csv) {
    os << "m,n,k,mode,backend,multadds_plain,multadds_checked,ratio_measured,"
          "ratio_predicted,enc_ms,dec_ms,verify_ms,server_ms_plain,"
          "server_ms_checked,pt_expansion,ct_bytes_plain,ct_bytes_checked\n";
    for (const auto& r : report.rows) {
      os << r.m << ',' << r.n << ',' << r.k << ',' << r.mode << ',' << r.backend
         << ',' << r.multadds_plain << ',' << r.multadds_checked << ','
         << fmt(r.ratio_measured) << ',' << fmt(r.ratio_predicted.value()) << ','
         << fmt(r.enc_ms) << ',' << fmt(r.dec_ms) << ',' << fmt(r.verify_ms)
         << ',' << fmt(r.server_ms_plain) << ',' << fmt(r.server_ms_checked)
         << ',' << fmt(r.pt_expansion.value()) << ',' << r.ct_bytes_plain << ','
         << r.ct_bytes_checked << '\n';
    }
    return os.str();
  }
  os << "  m    n    k  backend                 ratio     server(ms)  checked(ms)"
        "  enc(ms)  verify(ms)\n";
  for (const auto& r : report.rows) {
    os << ' ' << r.m << ' ' << r.n << ' ' << r.k << "  " << r.backend << "  "
       << r.ratio_predicted.num << '/' << r.ratio_predicted.den << "  "
       << fmt(r.server_ms_plain) << "  " << fmt(r.server_ms_checked) << "  "
       << fmt(r.enc_ms) << "  " << fmt(r.verify_ms) << '\n';
  }
  return os.str();
}

}  // namespace vfc
