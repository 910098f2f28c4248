#include "ilcbench/lifted.hpp"

#include "ilcbench/error.hpp"

namespace ilcbench {

Signal LiftedOperator::apply(const Signal& x) const {
    require_same_ts(ts, x.ts(), "lifted operator");
    if (static_cast<Eigen::Index>(x.size()) != matrix.cols())
        throw Error(ErrorCode::DimensionMismatch, "signal length does not match lifted operator");
    const Eigen::Map<const Eigen::VectorXd> xv(x.samples().data(), matrix.cols());
    const Eigen::VectorXd y = matrix * xv;
    return Signal(std::vector<double>(y.data(), y.data() + y.size()), ts);
}

LiftedOperator lifted_matrix(const TransferFunction& sys, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "lifted size must be >= 1");
    const std::vector<double> h = impulse_response(sys, n);
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
    for (Eigen::Index j = 0; j < N; ++j)
        for (Eigen::Index i = j; i < N; ++i) m(i, j) = h[static_cast<std::size_t>(i - j)];
    return {std::move(m), sys.ts()};
}

LiftedOperator lifted_matrix(const NoncausalFilter& filter, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "lifted size must be >= 1");
    const auto N = static_cast<Eigen::Index>(n);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(N, N);
    const long pre = static_cast<long>(filter.preview());
    for (std::size_t k = 0; k < filter.size(); ++k) {
        const double h = filter.taps()[k];
        const long lag = static_cast<long>(k) - pre;
        if (h == 0.0 || lag >= static_cast<long>(n) || -lag >= static_cast<long>(n)) continue;
        // M(i, j) = tap(i - j)
        for (Eigen::Index j = 0; j < N; ++j) {
            const Eigen::Index i = j + lag;
            if (i >= 0 && i < N) m(i, j) = h;
        }
    }
    return {std::move(m), filter.ts()};
}

} // namespace ilcbench
