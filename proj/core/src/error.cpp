#include "ilcbench/error.hpp"

#include <sstream>

namespace ilcbench {

const char* to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::InvalidParameter: return "invalid-parameter";
    case ErrorCode::Incompatible: return "incompatible";
    case ErrorCode::Aliasing: return "aliasing";
    case ErrorCode::Overflow: return "overflow";
    case ErrorCode::Range: return "range";
    case ErrorCode::Instability: return "instability";
    case ErrorCode::InversionSingularity: return "inversion-singularity";
    case ErrorCode::UnsupportedIntegrator: return "unsupported-integrator";
    case ErrorCode::PreviewBudget: return "preview-budget";
    case ErrorCode::Infeasible: return "infeasible";
    case ErrorCode::FixedPointUndefined: return "fixed-point-undefined";
    case ErrorCode::DimensionMismatch: return "dimension-mismatch";
    case ErrorCode::SingularUpdate: return "singular-update";
    case ErrorCode::Config: return "config";
    case ErrorCode::Io: return "io";
    }
    return "unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

OverflowError::OverflowError(std::size_t index, const std::string& what)
    : Error(ErrorCode::Overflow, what), index_(index) {}

InstabilityError::InstabilityError(std::vector<std::complex<double>> roots, const std::string& what)
    : Error(ErrorCode::Instability, what), roots_(std::move(roots)) {}

PreviewBudgetError::PreviewBudgetError(std::size_t required, const std::string& what)
    : Error(ErrorCode::PreviewBudget, what), required_(required) {}

InfeasibleError::InfeasibleError(double worst_frequency, const std::string& what)
    : Error(ErrorCode::Infeasible, what), worst_frequency_(worst_frequency) {}

namespace {

std::string syntax_message(std::size_t line, std::size_t column, const std::string& what) {
    std::ostringstream os;
    os << "syntax error at line " << line << ", column " << column << ": " << what;
    return os.str();
}

std::string violations_message(const std::vector<ConfigViolation>& v) {
    std::ostringstream os;
    os << v.size() << " violation" << (v.size() == 1 ? "" : "s");
    for (const auto& x : v) os << "\n  " << x.field << ": " << x.message;
    return os.str();
}

} // namespace

ConfigError::ConfigError(std::size_t line, std::size_t column, const std::string& what)
    : Error(ErrorCode::Config, syntax_message(line, column, what)), line_(line), column_(column) {}

ConfigError::ConfigError(std::vector<ConfigViolation> violations)
    : Error(ErrorCode::Config, violations_message(violations)), violations_(std::move(violations)) {}

} // namespace ilcbench
