#pragma once

#include <stdexcept>
#include <string>

namespace growup {

// Failure classes. The numeric values double as CLI exit codes.
enum class ErrorKind : int {
  Config = 2,
  Regime = 3,
  Numerical = 4,
  Acceptance = 5,
  Io = 6,
  Domain = 7,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string tag, const std::string& what)
      : std::runtime_error(what), kind_(kind), tag_(std::move(tag)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable identifier, e.g. "sigma_ge_sigma_star".
  const std::string& tag() const noexcept { return tag_; }

 private:
  ErrorKind kind_;
  std::string tag_;
};

[[noreturn]] inline void fail(ErrorKind kind, std::string tag, const std::string& what) {
  throw Error(kind, std::move(tag), what);
}

}  // namespace growup
