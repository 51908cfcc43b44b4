#pragma once

#include <stdexcept>
#include <string>

namespace uavtraj {

/// Base class for every error raised by this library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Scenario configuration problem; `key()` names the offending key.
class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& message)
        : Error(message), key_(std::move(key)) {}

    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

class MissingKeyError final : public ConfigError {
public:
    explicit MissingKeyError(const std::string& key)
        : ConfigError(key, "missing required key '" + key + "'") {}
};

class UnknownKeyError final : public ConfigError {
public:
    explicit UnknownKeyError(const std::string& key)
        : ConfigError(key, "unknown key '" + key + "'") {}
};

class MalformedNumberError final : public ConfigError {
public:
    MalformedNumberError(const std::string& key, const std::string& text)
        : ConfigError(key, "malformed number '" + text + "' for key '" + key + "'") {}
};

class NonPositiveParameterError final : public ConfigError {
public:
    explicit NonPositiveParameterError(const std::string& key,
                                       const std::string& detail = "must be positive")
        : ConfigError(key, "parameter '" + key + "' " + detail) {}
};

class LengthMismatchError final : public Error {
public:
    using Error::Error;
};

class DimensionMismatchError final : public Error {
public:
    using Error::Error;
};

class IndexOutOfRangeError final : public Error {
public:
    using Error::Error;
};

class NotOptimalError final : public Error {
public:
    using Error::Error;
};

/// A trajectory handed to an operation that requires feasibility failed validation.
class InfeasibleTrajectoryError final : public Error {
public:
    using Error::Error;
};

}  // namespace uavtraj
