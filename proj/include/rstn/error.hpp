#pragma once

#include <stdexcept>
#include <string>

namespace rstn {

enum class ErrorKind {
  parse,
  validation,
  size_cap,
  infeasible,
  singular,
  degenerate,
  zero_weight,
  unsupported,
  not_single_sector,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

const char* to_string(ErrorKind kind) noexcept;

}  // namespace rstn
