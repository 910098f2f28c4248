#include "ilcbench/ilc_mimo.hpp"

#include "ilcbench/error.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

namespace ilcbench {

TfMatrix::TfMatrix(std::size_t rows, std::size_t cols, std::vector<TransferFunction> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0 || entries_.size() != rows_ * cols_)
        throw Error(ErrorCode::DimensionMismatch, "transfer function matrix needs rows * cols entries");
    for (const auto& e : entries_) {
        require_same_ts(e.ts(), entries_.front().ts(), "transfer function matrix");
        branches_.push_back({e});
    }
}

TfMatrix TfMatrix::parallel(std::size_t rows, std::size_t cols, std::vector<std::vector<TransferFunction>> branches) {
    if (rows == 0 || cols == 0 || branches.size() != rows * cols)
        throw Error(ErrorCode::DimensionMismatch, "transfer function matrix needs rows * cols entries");
    TfMatrix m;
    m.rows_ = rows;
    m.cols_ = cols;
    for (const auto& b : branches) {
        if (b.empty()) throw Error(ErrorCode::DimensionMismatch, "matrix entry without branches");
        TransferFunction sum = b.front();
        for (std::size_t k = 1; k < b.size(); ++k) sum = sum + b[k];
        m.entries_.push_back(std::move(sum));
    }
    for (const auto& b : branches)
        for (const auto& e : b) require_same_ts(e.ts(), m.entries_.front().ts(), "transfer function matrix");
    m.branches_ = std::move(branches);
    return m;
}

TfMatrix TfMatrix::diagonal(const std::vector<TransferFunction>& d) {
    if (d.empty()) throw Error(ErrorCode::DimensionMismatch, "empty diagonal");
    std::vector<TransferFunction> e;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) e.push_back(i == j ? d[i] : TransferFunction::gain(0.0, d[i].ts()));
    return TfMatrix(d.size(), d.size(), std::move(e));
}

Eigen::MatrixXcd TfMatrix::evaluate(double omega) const {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) {
            std::complex<double> v = 0.0;
            for (const auto& b : branches(i, j)) v += b.evaluate(omega);
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    return m;
}

FilterMatrix::FilterMatrix(std::size_t rows, std::size_t cols, std::vector<NoncausalFilter> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (rows_ == 0 || cols_ == 0 || entries_.size() != rows_ * cols_)
        throw Error(ErrorCode::DimensionMismatch, "filter matrix needs rows * cols entries");
    for (const auto& e : entries_) require_same_ts(e.ts(), entries_.front().ts(), "filter matrix");
}

FilterMatrix FilterMatrix::diagonal(const std::vector<NoncausalFilter>& d) {
    if (d.empty()) throw Error(ErrorCode::DimensionMismatch, "empty diagonal");
    std::vector<NoncausalFilter> e;
    for (std::size_t i = 0; i < d.size(); ++i)
        for (std::size_t j = 0; j < d.size(); ++j) e.push_back(i == j ? d[i] : NoncausalFilter::zero(d[i].ts()));
    return FilterMatrix(d.size(), d.size(), std::move(e));
}

FilterMatrix FilterMatrix::identity(std::size_t n, double ts) {
    return diagonal(std::vector<NoncausalFilter>(n, NoncausalFilter::identity(ts)));
}

std::size_t FilterMatrix::max_preview() const noexcept {
    std::size_t p = 0;
    for (const auto& e : entries_) p = std::max(p, e.preview());
    return p;
}

Eigen::MatrixXcd FilterMatrix::evaluate(double omega) const {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(rows_), static_cast<Eigen::Index>(cols_));
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = (*this)(i, j).evaluate(omega);
    return m;
}

Frf freq_response(const TfMatrix& sys, const std::vector<double>& grid) {
    std::vector<Eigen::MatrixXcd> v;
    v.reserve(grid.size());
    for (double w : grid) v.push_back(sys.evaluate(w));
    return Frf(grid, std::move(v), sys.ts());
}

SignalVector simulate(const TfMatrix& sys, const SignalVector& u) {
    if (u.size() != sys.cols()) throw Error(ErrorCode::DimensionMismatch, "input count differs from system columns");
    SignalVector y;
    for (std::size_t i = 0; i < sys.rows(); ++i) {
        Signal acc = Signal::zeros(u.front().size(), u.front().ts());
        for (std::size_t j = 0; j < sys.cols(); ++j)
            for (const auto& b : sys.branches(i, j))
                if (!b.is_zero()) acc += simulate(b, u[j]);
        y.push_back(std::move(acc));
    }
    return y;
}

SignalVector apply_noncausal(const FilterMatrix& filter, const SignalVector& x) {
    if (x.size() != filter.cols()) throw Error(ErrorCode::DimensionMismatch, "input count differs from filter columns");
    SignalVector y;
    for (std::size_t i = 0; i < filter.rows(); ++i) {
        Signal acc = apply_noncausal(filter(i, 0), x[0]);
        for (std::size_t j = 1; j < filter.cols(); ++j)
            if (!filter(i, j).is_zero()) acc += apply_noncausal(filter(i, j), x[j]);
        y.push_back(std::move(acc));
    }
    return y;
}

ConvergenceReport check_convergence_mimo(const Frf& frf_gs, const FilterMatrix& L, const FilterMatrix& Q,
                                         const FrequencyMask& mask) {
    const auto n = static_cast<std::size_t>(frf_gs.rows());
    if (frf_gs.rows() != frf_gs.cols()) throw Error(ErrorCode::DimensionMismatch, "process sensitivity FRF must be square");
    if (L.rows() != n || L.cols() != n || Q.rows() != n || Q.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "L and Q must be " + std::to_string(n) + "x" + std::to_string(n));
    if (mask.size() != frf_gs.size()) throw Error(ErrorCode::DimensionMismatch, "mask size differs from the FRF grid");
    if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
        throw Error(ErrorCode::InvalidParameter, "frequency mask selects no grid point");

    ConvergenceReport rep{frf_gs.frequencies(), std::vector<double>(frf_gs.size(), std::numeric_limits<double>::quiet_NaN()),
                          mask, 0.0, 0.0};
    const auto N = static_cast<Eigen::Index>(n);
    for (std::size_t k = 0; k < frf_gs.size(); ++k) {
        if (!mask[k]) continue;
        const double w = rep.grid[k];
        const Eigen::MatrixXcd m = Q.evaluate(w) * (Eigen::MatrixXcd::Identity(N, N) - frf_gs.matrix(k) * L.evaluate(w));
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
        rep.rho[k] = svd.singularValues()(0);
        if (rep.omega_at_sup == 0.0 || rep.rho[k] > rep.sup_rho) {
            rep.sup_rho = rep.rho[k];
            rep.omega_at_sup = w;
        }
    }
    return rep;
}

namespace {

double stacked_norm(const SignalVector& x) {
    double s = 0.0;
    for (const auto& c : x) s += c.norm2() * c.norm2();
    return std::sqrt(s);
}

} // namespace

MimoHistory run_ilc_mimo(const TfMatrix& sensitivity, const TfMatrix& process_sensitivity, const SignalVector& r,
                         const FilterMatrix& L, const FilterMatrix& Q, const IlcOptions& options) {
    if (options.n_iter < 1) throw Error(ErrorCode::InvalidParameter, "n_iter must be >= 1");
    if (!(options.alpha > 0.0 && options.alpha <= 1.0))
        throw Error(ErrorCode::InvalidParameter, "learning gain alpha must lie in (0, 1]");
    if (r.empty()) throw Error(ErrorCode::DimensionMismatch, "no reference channels");
    const std::size_t n = r.front().size();
    const std::size_t tail = options.tail_margin.value_or(L.max_preview() + Q.max_preview());

    const SignalVector e0 = simulate(sensitivity, r);
    SignalVector f(process_sensitivity.cols(), Signal::zeros(n, r.front().ts()));
    MimoHistory h;
    for (std::size_t j = 0; j <= options.n_iter; ++j) {
        SignalVector e = e0;
        const SignalVector y = simulate(process_sensitivity, f);
        for (std::size_t i = 0; i < e.size(); ++i) e[i] -= y[i];
        const double en = stacked_norm(e);
        h.error_norms.push_back(en);
        if (j > 0 && !h.first_rising && en > h.error_norms[j - 1]) h.first_rising = j;
        h.e_final = e;
        h.f_final = f;
        if (j > 0 && en > options.divergence_factor * h.error_norms.front()) {
            h.diverged = true;
            h.diverged_at = j;
            break;
        }
        if (j == options.n_iter) break;
        SignalVector step = apply_noncausal(L, e);
        for (std::size_t i = 0; i < step.size(); ++i) {
            step[i] *= options.alpha;
            step[i] += f[i];
        }
        f = apply_noncausal(Q, step);
        for (auto& c : f) c = apply_tail_window(std::move(c), tail);
    }
    return h;
}

CoupledPair make_coupled_pair(const TransferFunction& g, const TransferFunction& controller, double coupling) {
    if (!std::isfinite(coupling) || std::abs(coupling) >= 1.0)
        throw Error(ErrorCode::InvalidParameter, "coupling must satisfy |c| < 1");
    ClosedLoop plus = closed_loop_maps((1.0 + coupling) * g, controller);
    ClosedLoop minus = closed_loop_maps((1.0 - coupling) * g, controller);
    auto mix = [](const TransferFunction& a, const TransferFunction& b) {
        const std::vector<TransferFunction> d{0.5 * a, 0.5 * b};
        const std::vector<TransferFunction> o{0.5 * a, -0.5 * b};
        return TfMatrix::parallel(2, 2, {d, o, o, d});
    };
    TfMatrix s = mix(plus.sensitivity, minus.sensitivity);
    TfMatrix ps = mix(plus.process_sensitivity, minus.process_sensitivity);
    return {coupling, std::move(plus), std::move(minus), std::move(s), std::move(ps)};
}

FilterMatrix modal_to_physical(const NoncausalFilter& l_plus, const NoncausalFilter& l_minus) {
    const NoncausalFilter d = add(l_plus, l_minus).scaled(0.5);
    const NoncausalFilter o = add(l_plus, l_minus.scaled(-1.0)).scaled(0.5);
    return FilterMatrix(2, 2, {d, o, o, d});
}

} // namespace ilcbench
