#pragma once

#include "ilcbench/polynomial.hpp"
#include "ilcbench/signal.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace ilcbench {

/// Discrete-time rational system
///
///     H(q) = (b0 + b1 q + ... ) / (a0 + a1 q + ...),  q = z^-1
///
/// The denominator is normalised so that a0 == 1. With a nonzero a0 the system
/// is always proper; `delay()` records the number of leading zero numerator
/// coefficients (the relative degree in samples).
class TransferFunction {
public:
    TransferFunction(poly::Coeffs num, poly::Coeffs den, double ts);

    static TransferFunction gain(double k, double ts);
    static TransferFunction delay(std::size_t d, double ts);

    const poly::Coeffs& num() const noexcept { return num_; }
    const poly::Coeffs& den() const noexcept { return den_; }
    double ts() const noexcept { return ts_; }

    std::size_t delay() const noexcept;
    bool is_strictly_proper() const noexcept { return delay() > 0; }
    bool is_zero() const noexcept { return poly::is_zero(num_); }

    poly::Roots poles() const;
    poly::Roots zeros() const;

    /// H(e^{j omega Ts}); no Nyquist range check.
    std::complex<double> evaluate(double omega) const;

    bool operator==(const TransferFunction& other) const = default;

private:
    poly::Coeffs num_;
    poly::Coeffs den_;
    double ts_;
};

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b);
TransferFunction operator+(const TransferFunction& a, const TransferFunction& b);
TransferFunction operator-(const TransferFunction& a);
TransferFunction operator-(const TransferFunction& a, const TransferFunction& b);
TransferFunction operator*(double k, const TransferFunction& a);

/// Cancel numerator/denominator roots that coincide within `tolerance`
/// (relative). Returns the input unchanged when nothing cancels.
TransferFunction reduce(const TransferFunction& sys, double tolerance = 1e-6);

/// Roots on or outside |z| = 1 - 1e-9 are treated as unstable.
inline constexpr double kStabilityRadius = 1.0 - 1e-9;

bool is_stable(const TransferFunction& sys);

/// Zero-initial-condition response; output has the length of `u`.
/// Throws OverflowError carrying the first non-finite sample index.
Signal simulate(const TransferFunction& sys, const Signal& u);

/// First n Markov parameters, computed by power-series division.
std::vector<double> impulse_response(const TransferFunction& sys, std::size_t n);

struct ClosedLoop {
    TransferFunction sensitivity;          ///< S  = 1 / (1 + G K)
    TransferFunction process_sensitivity;  ///< PS = G S
};

/// S and GS of the standard feedback loop, reduced. Throws InstabilityError
/// listing offending closed-loop roots.
ClosedLoop closed_loop_maps(const TransferFunction& plant, const TransferFunction& controller);

} // namespace ilcbench
