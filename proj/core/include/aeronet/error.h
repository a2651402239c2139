#ifndef AERONET_ERROR_H_
#define AERONET_ERROR_H_

#include <stdexcept>
#include <string>

namespace aeronet {

// Base for every error the library raises. Callers that only care about
// "config problem vs. runtime problem" can catch ConfigError / Error.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Anything wrong with user-supplied configuration. The CLI maps this to
// exit code 1.
class ConfigError : public Error {
 public:
  using Error::Error;
};

class SchemaError : public ConfigError {
 public:
  SchemaError(std::string path, const std::string& what)
      : ConfigError(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

class ConstraintError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class DegenerateTrajectory : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

class PastEvent : public Error {
 public:
  using Error::Error;
};

class NoCandidates : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class UnknownGnb : public Error {
 public:
  using Error::Error;
};

class InvalidTarget : public Error {
 public:
  using Error::Error;
};

class ColdStart : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class NonFiniteLoss : public Error {
 public:
  using Error::Error;
};

class TrajectoryMismatch : public Error {
 public:
  using Error::Error;
};

}  // namespace aeronet

#endif  // AERONET_ERROR_H_
