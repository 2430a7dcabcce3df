#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mapdist {

enum class ErrorCode {
  InvalidFeature,
  ZeroVector,
  NegativeFeature,
  DimensionMismatch,
  DomainMismatch,
  UnknownClass,
  EmptyGallery,
  InvalidConfig,
  InvalidSpec,
  DegenerateCase,
  ParseError,
  IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Base exception for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Malformed input file. The message is prefixed with `file:line:`.
class ParseError : public Error {
 public:
  ParseError(std::string file, std::size_t line, const std::string& message);

  const std::string& file() const noexcept { return file_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string file_;
  std::size_t line_;
};

}  // namespace mapdist
