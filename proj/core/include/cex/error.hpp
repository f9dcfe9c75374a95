#pragma once

#include <stdexcept>
#include <string>

namespace cex {

// Maps one-to-one onto the CLI exit codes (1, 2, 2, 3).
enum class ErrorKind { runtime, invalid_input, cap_exceeded, convergence };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail_input(const std::string& what) {
  throw Error(ErrorKind::invalid_input, what);
}

[[noreturn]] inline void fail_cap(const std::string& what) {
  throw Error(ErrorKind::cap_exceeded, what);
}

}  // namespace cex
