// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace neuronscope {

// Coarse classification used by the CLI to pick an exit status.
enum class ErrorKind {
  usage,  // bad arguments or an invalid request
  data,   // malformed or inconsistent input data
  io,     // filesystem / stream failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void throw_data_error(const std::string& message) {
  throw Error(ErrorKind::data, message);
}

[[noreturn]] inline void throw_usage_error(const std::string& message) {
  throw Error(ErrorKind::usage, message);
}

[[noreturn]] inline void throw_io_error(const std::string& message) {
  throw Error(ErrorKind::io, message);
}

}  // namespace neuronscope
