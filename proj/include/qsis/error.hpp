#pragma once

#include <stdexcept>
#include <string>

namespace qsis {

enum class ErrorKind {
  usage,
  domain,
  range,
  accuracy,
  conditioning,
  solvability,
  numeric,
  degeneracy,
  io,
};

const char* error_kind_name(ErrorKind kind) noexcept;

// Every library failure is an Error. The optional value carries the number
// that triggered it (tail estimate, condition number, ...).
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, double value = 0.0)
      : std::runtime_error(message), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

}  // namespace qsis
