#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>

namespace xplane {

// Base for every error raised by the library on bad input or infeasible
// requests. Precondition violations by callers raise std::invalid_argument.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

// Raised when a request cannot be satisfied by the available hardware.
// `resource` names the binding resource or constraint family.
class InfeasibleError : public Error {
 public:
  InfeasibleError(std::string resource, const std::string& what)
      : Error(what), resource_(std::move(resource)) {}

  const std::string& resource() const noexcept { return resource_; }

 private:
  std::string resource_;
};

}  // namespace xplane
