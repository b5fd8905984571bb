#ifndef SLIMNET_ERRORS_HPP
#define SLIMNET_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace slimnet {

/// Base class for all slimnet errors. `exit_code()` is what the CLI
/// returns when the error escapes: 2 usage, 3 format, 4 divergence.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
    virtual int exit_code() const noexcept { return 2; }
};

/// Bad arguments or call sequence (empty batch, threshold out of range, ...).
class UsageError : public Error {
public:
    using Error::Error;
};

/// Inconsistent layer geometry in a network description.
class ConfigError : public UsageError {
public:
    using UsageError::UsageError;
};

/// Vector length does not match what the receiving layer expects.
class DimensionError : public UsageError {
public:
    using UsageError::UsageError;
};

/// Non-finite or otherwise unusable input data.
class InputError : public UsageError {
public:
    using UsageError::UsageError;
};

/// Object shapes disagree (trace vs. network, selection vs. widths).
class StructuralError : public UsageError {
public:
    using UsageError::UsageError;
};

/// Malformed file contents (bad magic, truncation, unparsable line).
class FormatError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 3; }
};

/// Training produced a non-finite loss.
class DivergenceError : public Error {
public:
    using Error::Error;
    int exit_code() const noexcept override { return 4; }
};

} // namespace slimnet

#endif
