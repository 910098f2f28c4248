#pragma once

#include "ilcbench/signal.hpp"

#include <cstddef>
#include <vector>

namespace ilcbench {

/// Error records of n_exp >= 2 repetitions of the same task.
class ErrorEnsemble {
public:
    explicit ErrorEnsemble(std::vector<Signal> errors);

    std::size_t size() const noexcept { return errors_.size(); }
    std::size_t length() const noexcept { return errors_.front().size(); }
    double ts() const noexcept { return errors_.front().ts(); }
    const std::vector<Signal>& errors() const noexcept { return errors_; }
    const Signal& operator[](std::size_t j) const { return errors_[j]; }

private:
    std::vector<Signal> errors_;
};

/// m_e(t) = (1/n_exp) sum_j e_j(t).
Signal sample_mean(const ErrorEnsemble& ens);

struct Decomposition {
    Signal reproducible;            ///< m_e
    std::vector<Signal> residuals;  ///< e_j - m_e
};

Decomposition decompose(const ErrorEnsemble& ens);

struct PerformanceReport {
    double mean_norm;                     ///< ||m_e||_2
    std::vector<double> task_norms;       ///< ||e_j||_2
    std::vector<double> residual_norms;   ///< ||e_j - m_e||_2
    double residual_rms;                  ///< RMS over j of residual_norms
    /// ||m_e||_2 / residual_rms; 0 when `unbounded` is set.
    double improvement_factor;
    bool unbounded;
};

/// The reproducible part is what learning can remove; the residual norms are
/// the floor it cannot go below.
PerformanceReport performance_bound(const ErrorEnsemble& ens);

} // namespace ilcbench
