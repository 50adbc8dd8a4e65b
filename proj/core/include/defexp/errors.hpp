#pragma once

#include <stdexcept>
#include <string>

namespace defexp {

// Error taxonomy shared by the library and the CLI exit-code contract.
enum class errc {
  validation,   // malformed input: bad shapes, bad JSON, violated preconditions
  domain,       // argument outside the mathematical domain (v <= 0, zero density entries)
  numerical,    // an iteration failed to converge
  quadrature,   // adaptive quadrature could not reach the requested tolerance
  unsupported,  // the operation is not defined for this configuration
};

const char* errc_name(errc kind) noexcept;

class error : public std::runtime_error {
 public:
  error(errc kind, const std::string& message, std::string path = {})
      : std::runtime_error(message), kind_(kind), path_(std::move(path)) {}

  errc kind() const noexcept { return kind_; }
  // JSON-pointer-ish location of the offending input, when known (e.g. "base_density[2]").
  const std::string& path() const noexcept { return path_; }

 private:
  errc kind_;
  std::string path_;
};

[[noreturn]] inline void fail(errc kind, const std::string& message, std::string path = {}) {
  throw error(kind, message, std::move(path));
}

}  // namespace defexp
