#pragma once

#include <stdexcept>
#include <string>

namespace hhls {

// Category mirrors the CLI exit-code contract: validation failures, timing
// infeasibility and I/O problems are reported differently.
enum class ErrorKind { Invalid, Infeasible, Io };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(const std::string& message) {
  throw Error(ErrorKind::Invalid, message);
}

[[noreturn]] inline void fail_infeasible(const std::string& message) {
  throw Error(ErrorKind::Infeasible, message);
}

[[noreturn]] inline void fail_io(const std::string& message) {
  throw Error(ErrorKind::Io, message);
}

}  // namespace hhls
