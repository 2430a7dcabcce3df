#include "mapdist/error.hpp"

#include "mapdist/execution.hpp"

namespace mapdist {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidFeature: return "InvalidFeature";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::NegativeFeature: return "NegativeFeature";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::UnknownClass: return "UnknownClass";
    case ErrorCode::EmptyGallery: return "EmptyGallery";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DegenerateCase: return "DegenerateCase";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

ParseError::ParseError(std::string file, std::size_t line, const std::string& message)
    : Error(ErrorCode::ParseError, file + ":" + std::to_string(line) + ": " + message),
      file_(std::move(file)),
      line_(line) {}

void Matrix::append_row(std::span<const double> values) {
  if (rows_ == 0 && cols_ == 0) cols_ = values.size();
  assert(values.size() == cols_);
  data_.insert(data_.end(), values.begin(), values.end());
  ++rows_;
}

}  // namespace mapdist
