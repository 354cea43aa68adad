#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "vfc/adversary.hpp"
#include "vfc/bench.hpp"
#include "vfc/io.hpp"
#include "vfc/net.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIntegrity = 3;

vfc::Mode parse_mode(const std::string& s) {
  if (s == "exact") return vfc::Mode::exact;
  if (s == "approximate" || s == "approx") return vfc::Mode::approximate;
  throw CLI::ValidationError("mode", "expected exact|approximate");
}

std::uint8_t parse_backend(const std::string& s) {
  if (s == "exact") return vfc::kExactBackendId;
  if (s == "approximate" || s == "approx") return vfc::kApproxBackendId;
  throw CLI::ValidationError("backend", "expected exact|approximate");
}

vfc::HashMode parse_hash_mode(const std::string& s) {
  if (s == "uniform") return vfc::HashMode::uniform;
  if (s == "pow2") return vfc::HashMode::pow2;
  throw CLI::ValidationError("hash_mode", "expected uniform|pow2");
}

// Flat key=value config file; flags override file values, unknown keys are
// rejected.
std::map<std::string, std::string> load_config(const std::string& path) {
  static const std::set<std::string> known = {"t",    "mode", "backend",
                                              "host", "port", "seed",
                                              "hash_mode", "error_r", "output"};
  std::ifstream in(path);
  if (!in) throw vfc::IoError("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw vfc::ConfigError(path + ":" + std::to_string(lineno) +
                             ": expected key=value");
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t");
      const auto e = s.find_last_not_of(" \t");
      return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (!known.count(key))
      throw vfc::ConfigError(path + ": unknown config key: " + key);
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

struct CommonOpts {
  std::uint64_t t = 65537;
  std::string mode = "exact";
  std::string backend = "exact";
  std::string host = "127.0.0.1";
  std::uint16_t port = vfc::kDefaultPort;
  std::uint64_t seed = 1;
  std::string hash_mode = "uniform";
  std::uint64_t error_r = 1024;
  std::string output;
  std::string config_path;

  void apply_config() {
    if (config_path.empty()) return;
    const auto kv = load_config(config_path);
    // Only fill values the command line left at defaults.
    auto get = [&](const char* key) -> const std::string* {
      const auto it = kv.find(key);
      return it == kv.end() ? nullptr : &it->second;
    };
    if (const auto* v = get("t"); v && !t_set) t = std::stoull(*v);
    if (const auto* v = get("mode"); v && !mode_set) mode = *v;
    if (const auto* v = get("backend"); v && !backend_set) backend = *v;
    if (const auto* v = get("host"); v && !host_set) host = *v;
    if (const auto* v = get("port"); v && !port_set)
      port = static_cast<std::uint16_t>(std::stoul(*v));
    if (const auto* v = get("seed"); v && !seed_set) seed = std::stoull(*v);
    if (const auto* v = get("hash_mode"); v && !hash_mode_set) hash_mode = *v;
    if (const auto* v = get("error_r"); v && !error_r_set) error_r = std::stoull(*v);
    if (const auto* v = get("output"); v && !output_set) output = *v;
  }

  bool t_set = false, mode_set = false, backend_set = false, host_set = false,
       port_set = false, seed_set = false, hash_mode_set = false,
       error_r_set = false, output_set = false;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--config", config_path, "flat key=value config file");
    cmd->add_option("--t", t, "plaintext modulus")->trigger_on_parse()
        ->each([this](const std::string&) { t_set = true; });
    cmd->add_option("--mode", mode, "scalar mode: exact|approximate")
        ->each([this](const std::string&) { mode_set = true; });
    cmd->add_option("--backend", backend, "backend: exact|approximate")
        ->each([this](const std::string&) { backend_set = true; });
    cmd->add_option("--host", host, "server host")
        ->each([this](const std::string&) { host_set = true; });
    cmd->add_option("--port", port, "server port")
        ->each([this](const std::string&) { port_set = true; });
    cmd->add_option("--seed", seed, "randomness seed")
        ->each([this](const std::string&) { seed_set = true; });
    cmd->add_option("--hash-mode", hash_mode, "hash mode: uniform|pow2")
        ->each([this](const std::string&) { hash_mode_set = true; });
    cmd->add_option("--error-r", error_r, "error modulus r (with_error mode)")
        ->each([this](const std::string&) { error_r_set = true; });
    cmd->add_option("--output,-o", output, "output path")
        ->each([this](const std::string&) { output_set = true; });
  }

  vfc::PlainParams params() const {
    vfc::PlainParams p;
    p.mode = parse_mode(mode);
    p.t = t;
    return p;
  }
};

int cmd_protect(const CommonOpts& opts, const std::string& in_path,
                const std::string& out_path, const std::string& secret_path,
                bool with_error, bool nonzero_hash) {
  const vfc::PlainParams params = opts.params();
  const vfc::Matrix a = vfc::read_matrix_text(in_path, params.mode);
  const auto registry = vfc::make_default_registry();
  vfc::HeBackend& backend = registry.get(
      params.mode == vfc::Mode::exact ? vfc::kExactBackendId : vfc::kApproxBackendId);

  vfc::SecretFile secret;
  vfc::SplitMix64 keyrng(opts.seed ^ 0x5ec2e7f11e5ULL);
  std::ostringstream key;
  key << "k" << std::hex << keyrng.next() << keyrng.next();
  secret.key = key.str();
  secret.params = params;
  secret.hash_mode = parse_hash_mode(opts.hash_mode);
  secret.hash = vfc::gen_hash_vector(a.rows(), secret.hash_mode, params, opts.seed,
                                     nonzero_hash);
  secret.base_rows = a.rows();

  vfc::Matrix checksum;
  if (with_error) {
    secret.error =
        vfc::ErrorConfig::generate(a.cols(), opts.error_r, params, opts.seed + 1);
    checksum =
        vfc::compute_checksum_with_error(a, secret.hash, *secret.error, params);
  } else {
    checksum = vfc::compute_checksum(a, secret.hash, params);
  }
  const vfc::CheckedMatrix cm = vfc::attach_checksum(
      a, checksum,
      with_error ? vfc::ChecksumKind::with_error : vfc::ChecksumKind::plain);
  const auto ct = backend.encrypt(cm.stacked(), params, secret.key);
  vfc::write_file_bytes(out_path, vfc::serialize_cipher(ct));
  secret.save(secret_path);
  std::cout << "protected " << a.rows() << "x" << a.cols() << " matrix -> "
            << out_path << " (+1 checksum row)\n";
  return kExitOk;
}

int cmd_serve(const CommonOpts& opts,
              const std::vector<std::string>& preloads) {
  vfc::ServerCore core(vfc::make_default_registry());
  for (const auto& spec : preloads) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos)
      throw vfc::ConfigError("--preload expects NAME=FILE");
    core.preload(spec.substr(0, eq),
                 vfc::read_matrix_text(spec.substr(eq + 1), opts.params().mode));
  }
  vfc::TcpServer server(core, opts.port, opts.host);
  std::cout << "serving on " << opts.host << ":" << server.port() << std::endl;
  server.run_blocking();
  return kExitOk;
}

int cmd_compute(const CommonOpts& opts, const std::string& a_path,
                const std::string& b_path, const std::string& b_handle,
                bool b_secret, const std::string& mode_str,
                const std::string& strategy) {
  vfc::TaskSpec task;
  task.params = opts.params();
  task.backend_id = parse_backend(opts.backend);
  task.a = vfc::read_matrix_text(a_path, task.params.mode);
  if (!b_handle.empty()) {
    task.b_ownership = vfc::BOwnership::server_resident;
    task.b_handle = b_handle;
  } else {
    if (b_path.empty()) throw vfc::ConfigError("either --b or --b-handle required");
    task.b = vfc::read_matrix_text(b_path, task.params.mode);
    task.b_ownership = b_secret ? vfc::BOwnership::client_secret
                                : vfc::BOwnership::public_plain;
  }
  if (mode_str == "plain")
    task.mode = vfc::TaskMode::plain;
  else if (mode_str == "with_error")
    task.mode = vfc::TaskMode::with_error;
  else if (mode_str == "dual")
    task.mode = vfc::TaskMode::dual;
  else
    throw CLI::ValidationError("task-mode", "expected plain|with_error|dual");
  if (task.mode == vfc::TaskMode::dual) task.b_ownership = vfc::BOwnership::client_secret;
  task.hash_seed = opts.seed;
  task.hash_mode = parse_hash_mode(opts.hash_mode);
  task.error_r = opts.error_r;
  task.error_seed = opts.seed + 1;
  task.square_strategy =
      strategy == "pad" ? vfc::SplitStrategy::pad : vfc::SplitStrategy::row_split;
  std::ostringstream key;
  vfc::SplitMix64 keyrng(opts.seed ^ 0xc11e47ULL);
  key << "k" << std::hex << keyrng.next();
  task.key = key.str();

  const auto registry = vfc::make_default_registry();
  vfc::TcpTransport channel(opts.host, opts.port);
  const vfc::ClientResult out = vfc::client_execute(task, channel, registry);

  if (!opts.output.empty())
    vfc::write_matrix_text(opts.output, out.result);
  else
    std::cout << vfc::format_matrix(out.result);
  if (out.integrity_violation()) {
    std::cout << "verdict: FAIL (integrity violation, " << out.report.mismatch_count
              << " mismatching checks)\n";
    return kExitIntegrity;
  }
  std::cout << "verdict: PASS\n";
  return kExitOk;
}

int cmd_attack(const CommonOpts& opts, std::uint16_t listen_port,
               const std::string& upstream_host, std::uint16_t upstream_port,
               const std::string& kind, const std::string& payload_path,
               std::uint64_t bit, const std::string& secret_path) {
  vfc::TamperSpec spec;
  spec.seed = opts.seed;
  spec.bit_index = bit;
  const vfc::Mode mode = opts.params().mode;
  if (kind == "additive")
    spec.kind = vfc::TamperKind::additive;
  else if (kind == "replace")
    spec.kind = vfc::TamperKind::replace;
  else if (kind == "fabricate")
    spec.kind = vfc::TamperKind::fabricate;
  else if (kind == "bitflip")
    spec.kind = vfc::TamperKind::bitflip;
  else if (kind == "forge")
    spec.kind = vfc::TamperKind::forge_known_hash;
  else
    throw CLI::ValidationError("kind",
                               "expected additive|replace|fabricate|bitflip|forge");
  if (!payload_path.empty())
    spec.payload = vfc::read_matrix_text(payload_path, mode);
  if (spec.kind == vfc::TamperKind::forge_known_hash) {
    if (secret_path.empty())
      throw vfc::ConfigError("forge requires --secret with the leaked hash");
    spec.leaked_hash = vfc::SecretFile::load(secret_path).hash;
  }
  vfc::TamperProxy proxy(listen_port, upstream_host, upstream_port, std::move(spec),
                         vfc::make_default_registry());
  std::cout << "tamper proxy (" << kind << ") on port " << proxy.port()
            << " -> " << upstream_host << ":" << upstream_port << std::endl;
  proxy.run_blocking();
  return kExitOk;
}

int cmd_bench(const CommonOpts& opts, const std::string& sweep,
              const std::string& points, int trials, bool diagonal,
              const std::string& format, bool counters_only, bool parallel,
              bool both_backends) {
  vfc::BenchConfig cfg;
  cfg.trials = trials;
  cfg.seed = opts.seed;
  cfg.t = opts.t;
  cfg.diagonal_a = diagonal;
  cfg.hash_mode = parse_hash_mode(opts.hash_mode);
  cfg.counters_only = counters_only;
  cfg.parallel = parallel;
  cfg.backend_ids = {parse_backend(opts.backend)};
  if (both_backends) cfg.backend_ids = {vfc::kExactBackendId, vfc::kApproxBackendId};

  auto parse_u64_list = [](const std::string& s, char sep) {
    std::vector<std::uint64_t> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep))
      if (!item.empty()) out.push_back(std::stoull(item));
    return out;
  };
  for (std::uint64_t n : parse_u64_list(sweep, ',')) cfg.points.push_back({n, n, n});
  if (!points.empty()) {
    std::stringstream ss(points);
    std::string item;
    while (std::getline(ss, item, ';')) {
      const auto dims = parse_u64_list(item, ':');
      if (dims.size() != 3) throw vfc::ConfigError("--points expects m:n:k;...");
      cfg.points.push_back({dims[0], dims[1], dims[2]});
    }
  }

  const vfc::BenchReport report = vfc::run_benchmark(cfg);
  const std::string text = vfc::emit_report(
      report, format == "table" ? vfc::ReportFormat::table : vfc::ReportFormat::csv);
  if (!opts.output.empty()) {
    std::ofstream out(opts.output);
    if (!out) throw vfc::IoError("cannot write report: " + opts.output);
    out << text;
  } else {
    std::cout << text;
  }
  return kExitOk;
}

int cmd_verify(const std::string& result_path, const std::string& proof_path,
               const std::string& secret_path) {
  const vfc::SecretFile secret = vfc::SecretFile::load(secret_path);
  vfc::ResultBundle bundle;
  bundle.result = vfc::read_matrix_text(result_path, secret.params.mode);
  bundle.proof_rows = vfc::read_matrix_text(proof_path, secret.params.mode);
  const vfc::VerificationReport report =
      secret.error
          ? vfc::verify_with_error(bundle, secret.hash, *secret.error, secret.params)
          : vfc::verify(bundle, secret.hash, secret.params);
  if (report.passed()) {
    std::cout << "verdict: PASS\n";
    return kExitOk;
  }
  std::cout << "verdict: FAIL (" << report.mismatch_count
            << " mismatching columns)\n";
  return kExitIntegrity;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"verifiable outsourced matrix multiplication with blind-hash checksums"};
  app.require_subcommand(1);

  CommonOpts opts;

  auto* protect = app.add_subcommand("protect", "attach checksum and encrypt a matrix");
  std::string in_path, out_path, secret_path;
  bool with_error = false, nonzero_hash = false;
  protect->add_option("--in", in_path, "input matrix file")->required();
  protect->add_option("--out", out_path, "output ciphertext file")->required();
  protect->add_option("--secret", secret_path, "client-secret output file")->required();
  protect->add_flag("--with-error", with_error, "use hash-with-error checksums");
  protect->add_flag("--nonzero-hash", nonzero_hash, "resample zero hash entries");
  opts.add_to(protect);

  auto* serve = app.add_subcommand("serve", "run the computation server");
  std::vector<std::string> preloads;
  serve->add_option("--preload", preloads, "server-resident operand NAME=FILE");
  opts.add_to(serve);

  auto* compute = app.add_subcommand("compute", "run a verified computation");
  std::string a_path, b_path, b_handle, task_mode = "plain",
              strategy = "row_split";
  bool b_secret = false;
  compute->add_option("--a", a_path, "operand A matrix file")->required();
  compute->add_option("--b", b_path, "operand B matrix file");
  compute->add_option("--b-handle", b_handle, "server-resident operand name");
  compute->add_flag("--b-secret", b_secret, "encrypt operand B");
  compute->add_option("--task-mode", task_mode, "plain|with_error|dual");
  compute->add_option("--strategy", strategy, "square normalization: row_split|pad");
  opts.add_to(compute);

  auto* attack = app.add_subcommand("attack", "run the tamper proxy");
  std::uint16_t listen_port = 7408, upstream_port = vfc::kDefaultPort;
  std::string upstream_host = "127.0.0.1", kind = "additive", payload_path,
              attack_secret;
  std::uint64_t bit = 0;
  attack->add_option("--listen-port", listen_port, "proxy listen port");
  attack->add_option("--upstream-host", upstream_host, "server host");
  attack->add_option("--upstream-port", upstream_port, "server port");
  attack->add_option("--kind", kind, "additive|replace|fabricate|bitflip|forge");
  attack->add_option("--payload", payload_path, "tamper payload matrix file");
  attack->add_option("--bit", bit, "bit index for bitflip");
  attack->add_option("--secret", attack_secret, "leaked secret file (forge)");
  opts.add_to(attack);

  auto* bench = app.add_subcommand("bench", "measure blind-hash overheads");
  std::string sweep, points, format = "csv";
  int trials = 5;
  bool diagonal = false, counters_only = false, parallel = false,
       both_backends = false;
  bench->add_option("--sweep", sweep, "square sizes, e.g. 8,64,512");
  bench->add_option("--points", points, "explicit points m:n:k;m:n:k;...");
  bench->add_option("--trials", trials, "trials per point (median reported)");
  bench->add_flag("--diagonal", diagonal, "diagonal A workload");
  bench->add_option("--format", format, "csv|table");
  bench->add_flag("--counters-only", counters_only, "skip wall-clock timing");
  bench->add_flag("--parallel", parallel, "parallel counter-only sweep");
  bench->add_flag("--both-backends", both_backends, "bench exact and approximate");
  opts.add_to(bench);

  auto* verify = app.add_subcommand("verify", "offline verdict from files");
  std::string result_path, proof_path, verify_secret;
  verify->add_option("--result", result_path, "result matrix file")->required();
  verify->add_option("--proof", proof_path, "proof row file")->required();
  verify->add_option("--secret", verify_secret, "client-secret file")->required();

  try {
    app.parse(argc, argv);
    opts.apply_config();
    if (protect->parsed())
      return cmd_protect(opts, in_path, out_path, secret_path, with_error,
                         nonzero_hash);
    if (serve->parsed()) return cmd_serve(opts, preloads);
    if (compute->parsed())
      return cmd_compute(opts, a_path, b_path, b_handle, b_secret, task_mode,
                         strategy);
    if (attack->parsed())
      return cmd_attack(opts, listen_port, upstream_host, upstream_port, kind,
                        payload_path, bit, attack_secret);
    if (bench->parsed())
      return cmd_bench(opts, sweep, points, trials, diagonal, format,
                       counters_only, parallel, both_backends);
    if (verify->parsed()) return cmd_verify(result_path, proof_path, verify_secret);
    return kExitUsage;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  } catch (const vfc::ConfigError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const vfc::IoError& e) {
    std::cerr << "io error: " << e.what() << '\n';
    return kExitIo;
  } catch (const vfc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  }
}
