#pragma once

#include <optional>
#include <string>
#include <vector>

#include "vfc/backend.hpp"
#include "vfc/checksum.hpp"

namespace vfc {

// Text matrix files: first line "rows cols", then row-major entries
// (integers in exact mode, decimals in approximate mode).
Matrix read_matrix_text(const std::string& path, Mode mode);
void write_matrix_text(const std::string& path, const Matrix& m);
std::string format_matrix(const Matrix& m);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);
void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes);

// Client-secret material: key token, hash vector(s), optional error config.
// Lives in one file so secrets never appear on a command line.
struct SecretFile {
  KeyToken key;
  PlainParams params;
  HashMode hash_mode = HashMode::uniform;
  HashVector hash;
  std::optional<ErrorConfig> error;
  Index base_rows = 0;

  void save(const std::string& path) const;
  static SecretFile load(const std::string& path);
};

}  // namespace vfc
