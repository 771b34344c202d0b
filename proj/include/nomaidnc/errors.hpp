#pragma once

#include <stdexcept>
#include <string>

namespace nomaidnc {

/// Invalid user-supplied configuration (bad file, bad flag, out-of-range value).
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

/// An operation precondition was violated by the caller.
class ContractError : public std::logic_error {
 public:
  explicit ContractError(const std::string& what) : std::logic_error(what) {}
};

/// An exhaustive reference search refused an oversized input.
class OracleRefusedError : public std::runtime_error {
 public:
  explicit OracleRefusedError(const std::string& what) : std::runtime_error(what) {}
};

inline void require(bool condition, const char* message) {
  if (!condition) throw ContractError(message);
}

}  // namespace nomaidnc
