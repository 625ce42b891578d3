#include "edgesched/errors.hpp"

namespace edgesched {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
  case ErrorCode::InvalidSpec: return "InvalidSpec";
  case ErrorCode::InvalidConfig: return "InvalidConfig";
  case ErrorCode::NotFound: return "NotFound";
  case ErrorCode::TooLarge: return "TooLarge";
  case ErrorCode::ShapeError: return "ShapeError";
  case ErrorCode::Unreachable: return "Unreachable";
  case ErrorCode::Empty: return "Empty";
  case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

} // namespace edgesched
