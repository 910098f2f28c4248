#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ilcbench {

/// Finite, uniformly sampled, real-valued sequence. Samples are in the SI
/// unit of the carried quantity; `ts()` is the sample time in seconds.
class Signal {
public:
    Signal(std::vector<double> samples, double ts);

    static Signal zeros(std::size_t n, double ts);
    static Signal impulse(std::size_t n, double ts, std::size_t at = 0);

    std::size_t size() const noexcept { return samples_.size(); }
    double ts() const noexcept { return ts_; }
    double duration() const noexcept { return ts_ * static_cast<double>(samples_.size()); }

    std::span<const double> samples() const noexcept { return samples_; }
    const std::vector<double>& values() const noexcept { return samples_; }
    double operator[](std::size_t i) const { return samples_[i]; }

    double norm2() const;
    double rms() const;
    double max_abs() const;

    Signal& operator+=(const Signal& other);
    Signal& operator-=(const Signal& other);
    Signal& operator*=(double k);

    friend Signal operator+(Signal a, const Signal& b) { return a += b; }
    friend Signal operator-(Signal a, const Signal& b) { return a -= b; }
    friend Signal operator*(Signal a, double k) { return a *= k; }
    friend Signal operator*(double k, Signal a) { return a *= k; }
    friend Signal operator-(Signal a) { return a *= -1.0; }

    bool operator==(const Signal& other) const = default;

private:
    std::vector<double> samples_;
    double ts_;
};

/// Sample times are considered equal within 1e-12 relative.
bool same_ts(double a, double b) noexcept;

/// Throws ErrorCode::Incompatible if sample times differ.
void require_same_ts(double a, double b, const char* context);
void require_compatible(const Signal& a, const Signal& b, const char* context);

} // namespace ilcbench
