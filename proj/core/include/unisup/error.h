#pragma once

#include <stdexcept>
#include <string>

namespace unisup {

// Values double as CLI exit codes.
enum class ErrorKind {
  kUsage = 1,
  kValidation = 2,
  kIo = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowValidation(const std::string& message) {
  throw Error(ErrorKind::kValidation, message);
}

[[noreturn]] inline void ThrowIo(const std::string& message) {
  throw Error(ErrorKind::kIo, message);
}

}  // namespace unisup
