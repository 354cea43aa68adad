#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace vfc {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidDimensionError : Error {
  using Error::Error;
};

struct OutOfDomainError : Error {
  using Error::Error;
};

struct InvalidErrorConfigError : Error {
  using Error::Error;
};

// pow2 hash over t=2 admits only the entry 1; flagged rather than silently
// degraded.
struct DegenerateDomainError : Error {
  using Error::Error;
};

struct CannotSplitError : Error {
  using Error::Error;
};

struct AuthenticationError : Error {
  using Error::Error;
};

struct BackendError : Error {
  using Error::Error;
};

struct ModeMismatchError : Error {
  using Error::Error;
};

struct ProtocolError : Error {
  ProtocolError(const std::string& what, std::size_t offset)
      : Error(what + " (offset " + std::to_string(offset) + ")"),
        offset(offset) {}
  std::size_t offset = 0;
};

struct IncompleteFrameError : ProtocolError {
  using ProtocolError::ProtocolError;
};

struct ChannelError : Error {
  using Error::Error;
};

// Error frame received from the peer.
struct RemoteError : Error {
  RemoteError(std::uint16_t code, const std::string& message)
      : Error("remote error " + std::to_string(code) + ": " + message),
        code(code),
        message(message) {}
  std::uint16_t code;
  std::string message;
};

struct ConfigError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct TamperSpecError : Error {
  using Error::Error;
};

}  // namespace vfc
