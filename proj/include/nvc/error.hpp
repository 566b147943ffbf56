#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace nvc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An input violates a documented invariant or precondition.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Configuration could not be parsed or is incomplete.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what, std::vector<std::string> missing = {})
        : Error(what), missing_keys(std::move(missing)) {}

    std::vector<std::string> missing_keys;
};

/// Malformed measurement data (CSV ingestion etc). `row` is 1-based, 0 when unknown.
class DataError : public Error {
public:
    DataError(const std::string& what, std::size_t row_number = 0)
        : Error(what), row(row_number) {}

    std::size_t row;
};

/// The resonance tracker left its linear capture range.
class LockLossError : public Error {
public:
    using Error::Error;
};

/// Iterative fit did not converge; carries the last iterate.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, std::vector<double> last, double residual)
        : Error(what), last_iterate(std::move(last)), residual_norm(residual) {}

    std::vector<double> last_iterate;
    double residual_norm;
};

/// File system failure, message includes the path.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace nvc
