#pragma once

#include <stdexcept>
#include <string>

namespace uavlink {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Scheduling an event earlier than the current simulation time.
class CausalityError : public Error {
 public:
  using Error::Error;
};

enum class WireErrorKind {
  kMalformed,  // wrong length
  kCorrupt,    // decodes, but violates a field invariant
  kInvalid,    // refused at encode time
};

class WireError : public Error {
 public:
  WireError(WireErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  WireErrorKind kind() const noexcept { return kind_; }

 private:
  WireErrorKind kind_;
};

class GeometryError : public Error {
 public:
  using Error::Error;
};

// Metric requested on an input for which it is not defined (empty series,
// zero transmissions).
class MetricError : public Error {
 public:
  using Error::Error;
};

enum class ConfigErrorKind { kMissingFile, kParse, kValidation };

class ConfigError : public Error {
 public:
  ConfigError(ConfigErrorKind kind, const std::string& what)
      : Error(what), kind_(kind) {}
  ConfigErrorKind kind() const noexcept { return kind_; }

 private:
  ConfigErrorKind kind_;
};

class OutputError : public Error {
 public:
  using Error::Error;
};

}  // namespace uavlink
