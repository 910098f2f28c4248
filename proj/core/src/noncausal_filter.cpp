#include "ilcbench/noncausal_filter.hpp"

#include "ilcbench/error.hpp"

#include <algorithm>
#include <cmath>

namespace ilcbench {

NoncausalFilter::NoncausalFilter(std::vector<double> taps, std::size_t preview, double ts)
    : taps_(std::move(taps)), preview_(preview), ts_(ts) {
    if (!(ts_ > 0.0) || !std::isfinite(ts_)) throw Error(ErrorCode::InvalidParameter, "sample time must be finite and > 0");
    if (taps_.empty()) throw Error(ErrorCode::InvalidParameter, "filter needs at least one tap");
    if (preview_ >= taps_.size()) throw Error(ErrorCode::InvalidParameter, "preview length exceeds tap count");
    for (double t : taps_)
        if (!std::isfinite(t)) throw Error(ErrorCode::InvalidParameter, "non-finite filter tap");
}

NoncausalFilter NoncausalFilter::identity(double ts) { return NoncausalFilter({1.0}, 0, ts); }
NoncausalFilter NoncausalFilter::zero(double ts) { return NoncausalFilter({0.0}, 0, ts); }

NoncausalFilter NoncausalFilter::advance(std::size_t d, double ts) {
    std::vector<double> taps(d + 1, 0.0);
    taps[0] = 1.0;
    return NoncausalFilter(std::move(taps), d, ts);
}

NoncausalFilter NoncausalFilter::from_causal(const TransferFunction& sys, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::InvalidParameter, "need at least one Markov parameter");
    return NoncausalFilter(impulse_response(sys, n), 0, sys.ts());
}

double NoncausalFilter::tap(long lag) const noexcept {
    const long i = lag + static_cast<long>(preview_);
    if (i < 0 || i >= static_cast<long>(taps_.size())) return 0.0;
    return taps_[static_cast<std::size_t>(i)];
}

bool NoncausalFilter::is_zero() const noexcept {
    return std::all_of(taps_.begin(), taps_.end(), [](double t) { return t == 0.0; });
}

bool NoncausalFilter::is_symmetric(double tol) const noexcept {
    const long p = static_cast<long>(std::max(preview_, past()));
    for (long k = 1; k <= p; ++k)
        if (std::abs(tap(k) - tap(-k)) > tol) return false;
    return true;
}

std::complex<double> NoncausalFilter::evaluate(double omega) const {
    std::complex<double> acc = 0.0;
    const long p = static_cast<long>(preview_);
    for (std::size_t i = 0; i < taps_.size(); ++i) {
        const long lag = static_cast<long>(i) - p;
        acc += taps_[i] * std::polar(1.0, -omega * ts_ * static_cast<double>(lag));
    }
    return acc;
}

NoncausalFilter NoncausalFilter::adjoint() const {
    return NoncausalFilter(std::vector<double>(taps_.rbegin(), taps_.rend()), past(), ts_);
}

NoncausalFilter NoncausalFilter::scaled(double k) const {
    std::vector<double> t = taps_;
    for (double& x : t) x *= k;
    return NoncausalFilter(std::move(t), preview_, ts_);
}

NoncausalFilter compose(const NoncausalFilter& a, const NoncausalFilter& b) {
    require_same_ts(a.ts(), b.ts(), "filter composition");
    std::vector<double> c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a.taps()[i] * b.taps()[j];
    return NoncausalFilter(std::move(c), a.preview() + b.preview(), a.ts());
}

NoncausalFilter add(const NoncausalFilter& a, const NoncausalFilter& b) {
    require_same_ts(a.ts(), b.ts(), "filter sum");
    const std::size_t pre = std::max(a.preview(), b.preview());
    const std::size_t past = std::max(a.past(), b.past());
    std::vector<double> c(pre + past + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        const long lag = static_cast<long>(i) - static_cast<long>(pre);
        c[i] = a.tap(lag) + b.tap(lag);
    }
    return NoncausalFilter(std::move(c), pre, a.ts());
}

Signal apply_noncausal(const NoncausalFilter& filter, const Signal& x) {
    require_same_ts(filter.ts(), x.ts(), "apply_noncausal");
    const long n = static_cast<long>(x.size());
    const long pre = static_cast<long>(filter.preview());
    const auto& taps = filter.taps();
    const auto xs = x.samples();
    std::vector<double> y(x.size(), 0.0);
    for (std::size_t i = 0; i < taps.size(); ++i) {
        const double h = taps[i];
        if (h == 0.0) continue;
        const long lag = static_cast<long>(i) - pre;
        // y[t] += h x[t - lag] for 0 <= t - lag < n
        const long t0 = std::max(0L, lag);
        const long t1 = std::min(n, n + lag);
        for (long t = t0; t < t1; ++t) y[static_cast<std::size_t>(t)] += h * xs[static_cast<std::size_t>(t - lag)];
    }
    return Signal(std::move(y), x.ts());
}

} // namespace ilcbench
