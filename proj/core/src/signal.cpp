#include "ilcbench/signal.hpp"

#include "ilcbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ilcbench {

Signal::Signal(std::vector<double> samples, double ts) : samples_(std::move(samples)), ts_(ts) {
    if (!(ts > 0.0) || !std::isfinite(ts))
        throw Error(ErrorCode::InvalidParameter, "sample time must be finite and > 0");
    if (samples_.empty()) throw Error(ErrorCode::InvalidParameter, "signal must have at least one sample");
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        if (!std::isfinite(samples_[i]))
            throw Error(ErrorCode::InvalidParameter, "non-finite sample at index " + std::to_string(i));
    }
}

Signal Signal::zeros(std::size_t n, double ts) { return Signal(std::vector<double>(n, 0.0), ts); }

Signal Signal::impulse(std::size_t n, double ts, std::size_t at) {
    if (at >= n) throw Error(ErrorCode::InvalidParameter, "impulse position outside the record");
    std::vector<double> x(n, 0.0);
    x[at] = 1.0;
    return Signal(std::move(x), ts);
}

double Signal::norm2() const {
    double s = 0.0;
    for (double x : samples_) s += x * x;
    return std::sqrt(s);
}

double Signal::rms() const { return norm2() / std::sqrt(static_cast<double>(samples_.size())); }

double Signal::max_abs() const {
    double m = 0.0;
    for (double x : samples_) m = std::max(m, std::abs(x));
    return m;
}

Signal& Signal::operator+=(const Signal& other) {
    require_compatible(*this, other, "signal addition");
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] += other.samples_[i];
    return *this;
}

Signal& Signal::operator-=(const Signal& other) {
    require_compatible(*this, other, "signal subtraction");
    for (std::size_t i = 0; i < samples_.size(); ++i) samples_[i] -= other.samples_[i];
    return *this;
}

Signal& Signal::operator*=(double k) {
    for (double& x : samples_) x *= k;
    return *this;
}

bool same_ts(double a, double b) noexcept { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

void require_same_ts(double a, double b, const char* context) {
    if (!same_ts(a, b))
        throw Error(ErrorCode::Incompatible, std::string(context) + ": sample times differ (" +
                                                 std::to_string(a) + " vs " + std::to_string(b) + ")");
}

void require_compatible(const Signal& a, const Signal& b, const char* context) {
    require_same_ts(a.ts(), b.ts(), context);
    if (a.size() != b.size())
        throw Error(ErrorCode::Incompatible, std::string(context) + ": lengths differ (" +
                                                 std::to_string(a.size()) + " vs " + std::to_string(b.size()) + ")");
}

} // namespace ilcbench
