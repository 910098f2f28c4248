#include "ilcbench/repro_analysis.hpp"

#include "ilcbench/error.hpp"

#include <algorithm>
#include <cmath>

namespace ilcbench {

ErrorEnsemble::ErrorEnsemble(std::vector<Signal> errors) : errors_(std::move(errors)) {
    if (errors_.size() < 2) throw Error(ErrorCode::InvalidParameter, "an ensemble needs at least two tasks");
    for (const auto& e : errors_) require_compatible(errors_.front(), e, "error ensemble");
}

Signal sample_mean(const ErrorEnsemble& ens) {
    std::vector<double> m(ens.length(), 0.0);
    for (const auto& e : ens.errors())
        for (std::size_t t = 0; t < m.size(); ++t) m[t] += e[t];
    const double inv = 1.0 / static_cast<double>(ens.size());
    for (double& x : m) x *= inv;
    return Signal(std::move(m), ens.ts());
}

Decomposition decompose(const ErrorEnsemble& ens) {
    Signal mean = sample_mean(ens);
    std::vector<Signal> residuals;
    residuals.reserve(ens.size());
    for (const auto& e : ens.errors()) residuals.push_back(e - mean);
    return {std::move(mean), std::move(residuals)};
}

PerformanceReport performance_bound(const ErrorEnsemble& ens) {
    const Decomposition d = decompose(ens);
    PerformanceReport r{};
    r.mean_norm = d.reproducible.norm2();
    double sq = 0.0;
    for (std::size_t j = 0; j < ens.size(); ++j) {
        r.task_norms.push_back(ens[j].norm2());
        r.residual_norms.push_back(d.residuals[j].norm2());
        sq += r.residual_norms.back() * r.residual_norms.back();
    }
    r.residual_rms = std::sqrt(sq / static_cast<double>(ens.size()));

    double scale = 0.0;
    for (double x : r.task_norms) scale = std::max(scale, x);
    r.unbounded = r.residual_rms <= 1e-12 * scale || r.residual_rms == 0.0;
    r.improvement_factor = r.unbounded ? 0.0 : r.mean_norm / r.residual_rms;
    return r;
}

} // namespace ilcbench
