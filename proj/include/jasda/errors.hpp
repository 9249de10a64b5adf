#pragma once

#include <stdexcept>
#include <string>

namespace jasda {

// Malformed or invariant-violating configuration; message carries the
// offending field path (e.g. "policy.lambda").
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message) {}
};

// Trace self-consistency violation found during replay.
class AuditError : public std::runtime_error {
 public:
  explicit AuditError(const std::string& message)
      : std::runtime_error(message) {}
};

// Missing or unreadable/unwritable file.
class IoError : public std::runtime_error {
 public:
  explicit IoError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace jasda
