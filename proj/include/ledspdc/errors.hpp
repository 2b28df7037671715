#pragma once

#include <stdexcept>
#include <string>

namespace ledspdc {

/// Input outside the mathematical domain of an operation (non-positive length,
/// non-physical density matrix, failed bracket).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Malformed measurement input: missing or duplicated settings, bad counts.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Configuration file or preset violates the schema.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

/// Iterative fit that did not converge.
class FitError : public std::runtime_error {
 public:
  FitError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace ledspdc
