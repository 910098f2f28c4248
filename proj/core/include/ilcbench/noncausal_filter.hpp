#pragma once

#include "ilcbench/signal.hpp"
#include "ilcbench/transfer_function.hpp"

#include <complex>
#include <cstddef>
#include <vector>

namespace ilcbench {

/// Two-sided FIR filter
///
///     y[t] = sum_{k=-preview}^{past} tap(k) x[t - k]
///
/// Negative lags read future samples (preview); they are legal because the
/// whole task record exists before the filter runs. Taps are stored from lag
/// -preview upward.
class NoncausalFilter {
public:
    NoncausalFilter(std::vector<double> taps, std::size_t preview, double ts);

    static NoncausalFilter identity(double ts);
    static NoncausalFilter zero(double ts);
    /// Pure preview z^{+d}.
    static NoncausalFilter advance(std::size_t d, double ts);
    /// First n Markov parameters of a causal system.
    static NoncausalFilter from_causal(const TransferFunction& sys, std::size_t n);

    const std::vector<double>& taps() const noexcept { return taps_; }
    std::size_t preview() const noexcept { return preview_; }
    std::size_t past() const noexcept { return taps_.size() - 1 - preview_; }
    double ts() const noexcept { return ts_; }
    std::size_t size() const noexcept { return taps_.size(); }

    /// Tap at signed lag k; zero outside the support.
    double tap(long lag) const noexcept;
    bool is_zero() const noexcept;
    bool is_symmetric(double tol = 0.0) const noexcept;

    std::complex<double> evaluate(double omega) const;

    /// Time reversal, i.e. the l2 adjoint.
    NoncausalFilter adjoint() const;
    NoncausalFilter scaled(double k) const;

    bool operator==(const NoncausalFilter&) const = default;

private:
    std::vector<double> taps_;
    std::size_t preview_;
    double ts_;
};

/// Series composition (two-sided convolution of taps).
NoncausalFilter compose(const NoncausalFilter& a, const NoncausalFilter& b);
/// Parallel sum aligned by lag.
NoncausalFilter add(const NoncausalFilter& a, const NoncausalFilter& b);

/// Finite-window two-sided convolution with zero extension outside the record.
Signal apply_noncausal(const NoncausalFilter& filter, const Signal& x);

} // namespace ilcbench
