#include "ilcbench/frf.hpp"

#include "ilcbench/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ilcbench {

namespace {

void check_grid(const std::vector<double>& f, double ts) {
    if (!(ts > 0.0)) throw Error(ErrorCode::InvalidParameter, "sample time must be > 0");
    const double nyquist = std::numbers::pi / ts;
    for (std::size_t k = 0; k < f.size(); ++k) {
        if (!(f[k] > 0.0) || f[k] > nyquist * (1.0 + 1e-12))
            throw Error(ErrorCode::Range, "grid point " + std::to_string(k) + " (" + std::to_string(f[k]) +
                                              " rad/s) outside (0, pi/Ts]");
        if (k > 0 && !(f[k] > f[k - 1]))
            throw Error(ErrorCode::InvalidParameter, "frequency grid must be strictly increasing");
    }
}

} // namespace

Frf::Frf(std::vector<double> frequencies, std::vector<Eigen::MatrixXcd> values, double ts)
    : frequencies_(std::move(frequencies)), values_(std::move(values)), ts_(ts) {
    check_grid(frequencies_, ts_);
    if (frequencies_.size() != values_.size())
        throw Error(ErrorCode::DimensionMismatch, "FRF grid and value counts differ");
    if (!values_.empty()) {
        rows_ = values_.front().rows();
        cols_ = values_.front().cols();
    }
    for (const auto& v : values_) {
        if (v.rows() != rows_ || v.cols() != cols_)
            throw Error(ErrorCode::DimensionMismatch, "FRF value shape changes across the grid");
        if (!v.allFinite()) throw Error(ErrorCode::InvalidParameter, "FRF has non-finite values");
    }
}

Frf::Frf(std::vector<double> frequencies, const std::vector<std::complex<double>>& values, double ts)
    : Frf(std::move(frequencies),
          [&] {
              std::vector<Eigen::MatrixXcd> m;
              m.reserve(values.size());
              for (const auto& v : values) m.push_back(Eigen::MatrixXcd::Constant(1, 1, v));
              return m;
          }(),
          ts) {}

std::complex<double> Frf::value(std::size_t k) const {
    if (!is_scalar()) throw Error(ErrorCode::DimensionMismatch, "scalar access to a matrix-valued FRF");
    return values_[k](0, 0);
}

std::vector<double> log_grid(double omega_lo, double omega_hi, std::size_t n) {
    if (!(omega_lo > 0.0) || !(omega_hi > omega_lo) || n < 2)
        throw Error(ErrorCode::InvalidParameter, "log grid needs 0 < lo < hi and n >= 2");
    std::vector<double> g(n);
    const double a = std::log10(omega_lo);
    const double b = std::log10(omega_hi);
    for (std::size_t k = 0; k < n; ++k)
        g[k] = std::pow(10.0, a + (b - a) * static_cast<double>(k) / static_cast<double>(n - 1));
    g.front() = omega_lo;
    g.back() = omega_hi;
    return g;
}

std::vector<double> default_grid(double ts) { return log_grid(2.0 * std::numbers::pi, std::numbers::pi / ts, 400); }

FrequencyMask full_mask(const std::vector<double>& grid) { return FrequencyMask(grid.size(), true); }

FrequencyMask band_mask(const std::vector<double>& grid, double lo_hz, double hi_hz) {
    FrequencyMask m(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const double hz = grid[k] / (2.0 * std::numbers::pi);
        m[k] = hz >= lo_hz * (1.0 - 1e-12) && hz <= hi_hz * (1.0 + 1e-12);
    }
    return m;
}

Frf freq_response(const TransferFunction& sys, const std::vector<double>& grid) {
    check_grid(grid, sys.ts());
    std::vector<std::complex<double>> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = sys.evaluate(grid[k]);
    return Frf(grid, v, sys.ts());
}

} // namespace ilcbench
