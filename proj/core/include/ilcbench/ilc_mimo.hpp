#pragma once

#include "ilcbench/frf.hpp"
#include "ilcbench/ilc_frequency.hpp"
#include "ilcbench/noncausal_filter.hpp"
#include "ilcbench/signal.hpp"
#include "ilcbench/transfer_function.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <vector>

namespace ilcbench {

using SignalVector = std::vector<Signal>;

/// Row-major matrix of transfer functions sharing one sample time. An entry
/// may be kept as a sum of parallel branches; simulation then runs each
/// branch on its own instead of one high-order combined polynomial.
class TfMatrix {
public:
    TfMatrix(std::size_t rows, std::size_t cols, std::vector<TransferFunction> entries);
    static TfMatrix diagonal(const std::vector<TransferFunction>& d);
    static TfMatrix parallel(std::size_t rows, std::size_t cols,
                             std::vector<std::vector<TransferFunction>> branches);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    double ts() const noexcept { return entries_.front().ts(); }
    /// The entry as a single transfer function (branches summed).
    const TransferFunction& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    const std::vector<TransferFunction>& branches(std::size_t i, std::size_t j) const {
        return branches_[i * cols_ + j];
    }

    Eigen::MatrixXcd evaluate(double omega) const;

private:
    TfMatrix() = default;

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<TransferFunction> entries_;
    std::vector<std::vector<TransferFunction>> branches_;
};

/// Row-major matrix of two-sided FIR filters.
class FilterMatrix {
public:
    FilterMatrix(std::size_t rows, std::size_t cols, std::vector<NoncausalFilter> entries);
    static FilterMatrix diagonal(const std::vector<NoncausalFilter>& d);
    static FilterMatrix identity(std::size_t n, double ts);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    const NoncausalFilter& operator()(std::size_t i, std::size_t j) const { return entries_[i * cols_ + j]; }
    std::size_t max_preview() const noexcept;

    Eigen::MatrixXcd evaluate(double omega) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<NoncausalFilter> entries_;
};

Frf freq_response(const TfMatrix& sys, const std::vector<double>& grid);
SignalVector simulate(const TfMatrix& sys, const SignalVector& u);
SignalVector apply_noncausal(const FilterMatrix& filter, const SignalVector& x);

/// rho(omega) = sigma_max(Q (I - GS L)) over the masked grid. Throws
/// ErrorCode::DimensionMismatch unless GS is square and L, Q conform.
ConvergenceReport check_convergence_mimo(const Frf& frf_gs, const FilterMatrix& L,
                                         const FilterMatrix& Q, const FrequencyMask& mask);

struct MimoHistory {
    std::vector<double> error_norms;  ///< sqrt of the summed squared channel norms
    SignalVector e_final;
    SignalVector f_final;
    bool diverged = false;
    std::optional<std::size_t> diverged_at;
    std::optional<std::size_t> first_rising;
};

/// Noise-free multivariable iteration e_j = S r - PS f_j with the same
/// update, tail window and divergence rule as run_ilc.
MimoHistory run_ilc_mimo(const TfMatrix& sensitivity, const TfMatrix& process_sensitivity,
                         const SignalVector& r, const FilterMatrix& L, const FilterMatrix& Q,
                         const IlcOptions& options = {});

/// Two identical axes with symmetric coupling c,
///     G = [[1, c], [c, 1]] g,
/// each closed by the SISO controller K. The loop decouples along [1, 1] and
/// [1, -1] into scalar loops with plants (1 + c) g and (1 - c) g.
struct CoupledPair {
    double coupling;
    ClosedLoop plus;   ///< loop of (1 + c) g
    ClosedLoop minus;  ///< loop of (1 - c) g
    TfMatrix sensitivity;
    TfMatrix process_sensitivity;
};

CoupledPair make_coupled_pair(const TransferFunction& g, const TransferFunction& controller,
                              double coupling);

/// L = V diag(Lp, Lm) V^T from the two modal learning filters.
FilterMatrix modal_to_physical(const NoncausalFilter& l_plus, const NoncausalFilter& l_minus);

} // namespace ilcbench
