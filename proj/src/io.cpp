#include "vfc/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace vfc {

Matrix read_matrix_text(const std::string& path, Mode mode) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open matrix file: " + path);
  Index rows = 0, cols = 0;
  if (!(in >> rows >> cols) || rows < 0 || cols < 0)
    throw IoError("bad matrix header in " + path);
  if (mode == Mode::exact) {
    MatU m(rows, cols);
    for (Index i = 0; i < rows; ++i)
      for (Index j = 0; j < cols; ++j)
        if (!(in >> m(i, j))) throw IoError("short matrix file: " + path);
    return Matrix(m);
  }
  MatR m(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j)
      if (!(in >> m(i, j))) throw IoError("short matrix file: " + path);
  return Matrix(m);
}

std::string format_matrix(const Matrix& m) {
  std::ostringstream os;
  os << m.rows() << ' ' << m.cols() << '\n';
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j) os << ' ';
      if (m.mode() == Mode::exact)
        os << m.exact()(i, j);
      else
        os << m.approx()(i, j);
    }
    os << '\n';
  }
  return os.str();
}

void write_matrix_text(const std::string& path, const Matrix& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write matrix file: " + path);
  out << format_matrix(m);
  if (!out) throw IoError("write failed: " + path);
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file_bytes(const std::string& path,
                      const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write file: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

void SecretFile::save(const std::string& path) const {
  nlohmann::json j;
  j["key"] = key;
  j["mode"] = params.mode == Mode::exact ? "exact" : "approximate";
  j["t"] = params.t;
  j["scale"] = params.scale;
  j["hash_mode"] = hash_mode == HashMode::uniform ? "uniform" : "pow2";
  j["hash_entries"] = hash.entries();
  j["hash_exponents"] = hash.exponents();
  j["base_rows"] = base_rows;
  if (error) {
    j["error"] = {{"r", error->r()},
                  {"entries", error->entries()},
                  {"seed", error->seed()}};
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write secret file: " + path);
  out << j.dump(2) << '\n';
  if (!out) throw IoError("write failed: " + path);
}

SecretFile SecretFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open secret file: " + path);
  nlohmann::json j;
  try {
    in >> j;
    SecretFile s;
    s.key = j.at("key").get<std::string>();
    s.params.mode =
        j.at("mode").get<std::string>() == "exact" ? Mode::exact : Mode::approximate;
    s.params.t = j.at("t").get<std::uint64_t>();
    s.params.scale = j.at("scale").get<double>();
    s.hash_mode = j.at("hash_mode").get<std::string>() == "uniform"
                      ? HashMode::uniform
                      : HashMode::pow2;
    s.hash = HashVector(j.at("hash_entries").get<std::vector<std::uint64_t>>(),
                        s.hash_mode,
                        j.at("hash_exponents").get<std::vector<std::uint8_t>>());
    s.base_rows = j.at("base_rows").get<Index>();
    if (j.contains("error")) {
      const auto& e = j.at("error");
      s.error = ErrorConfig::from_parts(
          e.at("r").get<std::uint64_t>(),
          e.at("entries").get<std::vector<std::uint64_t>>(),
          e.at("seed").get<std::uint64_t>());
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("malformed secret file " + path + ": " + e.what());
  }
}

}  // namespace vfc
