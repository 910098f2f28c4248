#pragma once

#include "ilcbench/transfer_function.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <vector>

namespace ilcbench {

/// Nonparametric frequency response: strictly increasing grid in (0, pi/Ts]
/// rad/s with an n_out x n_in complex matrix per grid point.
class Frf {
public:
    Frf(std::vector<double> frequencies, std::vector<Eigen::MatrixXcd> values, double ts);
    Frf(std::vector<double> frequencies, const std::vector<std::complex<double>>& values, double ts);

    std::size_t size() const noexcept { return frequencies_.size(); }
    double ts() const noexcept { return ts_; }
    Eigen::Index rows() const noexcept { return rows_; }
    Eigen::Index cols() const noexcept { return cols_; }
    bool is_scalar() const noexcept { return rows_ == 1 && cols_ == 1; }

    const std::vector<double>& frequencies() const noexcept { return frequencies_; }
    const Eigen::MatrixXcd& matrix(std::size_t k) const { return values_[k]; }

    /// Scalar value at grid index k; throws DimensionMismatch for MIMO FRFs.
    std::complex<double> value(std::size_t k) const;

private:
    std::vector<double> frequencies_;
    std::vector<Eigen::MatrixXcd> values_;
    double ts_;
    Eigen::Index rows_ = 1;
    Eigen::Index cols_ = 1;
};

/// Boolean selection over an Frf grid.
using FrequencyMask = std::vector<bool>;

/// 400 log-spaced points in [2 pi * 1 Hz, pi/Ts].
std::vector<double> default_grid(double ts);
std::vector<double> log_grid(double omega_lo, double omega_hi, std::size_t n);

FrequencyMask full_mask(const std::vector<double>& grid);
/// Points with lo_hz <= omega/(2 pi) <= hi_hz.
FrequencyMask band_mask(const std::vector<double>& grid, double lo_hz, double hi_hz);

/// Evaluates the rational function on the unit circle. Throws ErrorCode::Range
/// if a grid point lies outside (0, pi/Ts].
Frf freq_response(const TransferFunction& sys, const std::vector<double>& grid);

} // namespace ilcbench
