#pragma once

#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace ilcbench {

enum class ErrorCode {
    InvalidParameter,
    Incompatible,
    Aliasing,
    Overflow,
    Range,
    Instability,
    InversionSingularity,
    UnsupportedIntegrator,
    PreviewBudget,
    Infeasible,
    FixedPointUndefined,
    DimensionMismatch,
    SingularUpdate,
    Config,
    Io,
};

const char* to_string(ErrorCode code) noexcept;

/// Base class of every error raised by the library. `code()` identifies the
/// failure class; derived types carry the extra payload some classes need.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// A recursion produced a non-finite sample.
class OverflowError : public Error {
public:
    OverflowError(std::size_t index, const std::string& what);
    std::size_t index() const noexcept { return index_; }

private:
    std::size_t index_;
};

/// Closed-loop denominator has roots on or outside the unit circle.
class InstabilityError : public Error {
public:
    InstabilityError(std::vector<std::complex<double>> roots, const std::string& what);
    const std::vector<std::complex<double>>& roots() const noexcept { return roots_; }

private:
    std::vector<std::complex<double>> roots_;
};

/// Anticausal inverse needs more preview than the caller allowed.
class PreviewBudgetError : public Error {
public:
    PreviewBudgetError(std::size_t required, const std::string& what);
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t required_;
};

/// No robustness filter satisfies the contraction condition on the mask.
class InfeasibleError : public Error {
public:
    InfeasibleError(double worst_frequency, const std::string& what);
    double worst_frequency() const noexcept { return worst_frequency_; }

private:
    double worst_frequency_;
};

struct ConfigViolation {
    std::string field;
    std::string message;
};

/// Config parse failure. Syntax errors carry a 1-based line/column; semantic
/// failures carry every violation found, not only the first.
class ConfigError : public Error {
public:
    ConfigError(std::size_t line, std::size_t column, const std::string& what);
    explicit ConfigError(std::vector<ConfigViolation> violations);

    bool is_syntax_error() const noexcept { return line_ != 0; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::vector<ConfigViolation>& violations() const noexcept { return violations_; }

private:
    std::size_t line_ = 0;
    std::size_t column_ = 0;
    std::vector<ConfigViolation> violations_;
};

} // namespace ilcbench
