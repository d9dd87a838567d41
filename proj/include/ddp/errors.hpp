#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddp {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// raster-ops
class OutOfBounds : public Error { using Error::Error; };
class DimensionMismatch : public Error { using Error::Error; };
class InvalidArgument : public Error { using Error::Error; };
class UnsupportedFormat : public Error { using Error::Error; };
class CorruptData : public Error { using Error::Error; };

// vlm-gateway
class GatewayError : public Error { using Error::Error; };
class ExhaustedRetries : public GatewayError { using GatewayError::GatewayError; };
class AuthFailure : public GatewayError { using GatewayError::GatewayError; };
class ScriptExhausted : public GatewayError { using GatewayError::GatewayError; };
class UnmatchedDigest : public GatewayError { using GatewayError::GatewayError; };

class ConfigError : public Error { using Error::Error; };

// harness
class ManifestParseError : public Error {
 public:
  ManifestParseError(std::size_t line, const std::string& what)
      : Error("manifest line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};
class DuplicateId : public Error { using Error::Error; };
class MissingImage : public Error { using Error::Error; };
class EmptyRecordSet : public Error { using Error::Error; };

}  // namespace ddp
