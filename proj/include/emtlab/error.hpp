#pragma once

#include <stdexcept>
#include <string>

namespace emtlab {

// Error taxonomy shared by all modules.  The CLI maps any Error to exit
// code 1 with the message on stderr.
enum class ErrorKind {
  invalid_metric,
  parameter,
  shape,
  insufficient_jet,
  contract_violation,
  out_of_scope,
  parse,
  validation,
  io,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string msg) : std::runtime_error(std::move(msg)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) { throw Error(kind, msg); }

}  // namespace emtlab
