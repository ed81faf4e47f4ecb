// Exception hierarchy shared by all aoi2d modules.
#pragma once

#include <stdexcept>
#include <string>

namespace aoi2d {

/// Input outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

/// Invalid or inconsistent configuration. `key_path` names the offending key
/// when the error originates from a config file.
class ConfigError : public std::invalid_argument {
public:
  explicit ConfigError(const std::string& what, std::string key_path = {})
      : std::invalid_argument(key_path.empty() ? what : key_path + ": " + what),
        key_path_(std::move(key_path)) {}
  const std::string& key_path() const noexcept { return key_path_; }

private:
  std::string key_path_;
};

/// Queue with utilization >= 1.
class StabilityError : public DomainError {
public:
  using DomainError::DomainError;
};

/// Numerical method failed to meet its tolerance or a matrix was not PD.
class NumericError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Parameters at a removable singularity of a closed form.
class DegenerateParameterError : public DomainError {
public:
  using DomainError::DomainError;
};

}  // namespace aoi2d
