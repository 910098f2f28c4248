#include "ilcbench/transfer_function.hpp"

#include "ilcbench/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace ilcbench {

namespace {

void require_finite(const poly::Coeffs& c, const char* what) {
    for (double x : c)
        if (!std::isfinite(x)) throw Error(ErrorCode::InvalidParameter, std::string(what) + " has non-finite coefficients");
}

} // namespace

TransferFunction::TransferFunction(poly::Coeffs num, poly::Coeffs den, double ts)
    : num_(std::move(num)), den_(std::move(den)), ts_(ts) {
    if (!(ts_ > 0.0) || !std::isfinite(ts_)) throw Error(ErrorCode::InvalidParameter, "sample time must be finite and > 0");
    if (num_.empty()) num_ = {0.0};
    if (den_.empty()) throw Error(ErrorCode::InvalidParameter, "empty denominator");
    require_finite(num_, "numerator");
    require_finite(den_, "denominator");
    if (den_[0] == 0.0)
        throw Error(ErrorCode::InvalidParameter, "denominator leading coefficient must be nonzero");
    const double a0 = den_[0];
    if (a0 != 1.0) {
        for (double& x : num_) x /= a0;
        for (double& x : den_) x /= a0;
    }
    num_ = poly::trim_trailing(std::move(num_));
    den_ = poly::trim_trailing(std::move(den_));
}

TransferFunction TransferFunction::gain(double k, double ts) { return TransferFunction({k}, {1.0}, ts); }

TransferFunction TransferFunction::delay(std::size_t d, double ts) {
    poly::Coeffs num(d + 1, 0.0);
    num[d] = 1.0;
    return TransferFunction(std::move(num), {1.0}, ts);
}

std::size_t TransferFunction::delay() const noexcept {
    const std::size_t d = poly::leading_zeros(num_);
    return d == num_.size() ? 0 : d;
}

poly::Roots TransferFunction::poles() const { return poly::roots(den_); }
poly::Roots TransferFunction::zeros() const { return poly::roots(num_); }

std::complex<double> TransferFunction::evaluate(double omega) const {
    const std::complex<double> q = std::polar(1.0, -omega * ts_);
    return poly::evaluate(num_, q) / poly::evaluate(den_, q);
}

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) {
    require_same_ts(a.ts(), b.ts(), "series connection");
    return TransferFunction(poly::multiply(a.num(), b.num()), poly::multiply(a.den(), b.den()), a.ts());
}

TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) {
    require_same_ts(a.ts(), b.ts(), "parallel connection");
    if (a.den() == b.den()) return TransferFunction(poly::add(a.num(), b.num()), a.den(), a.ts());
    return TransferFunction(poly::add(poly::multiply(a.num(), b.den()), poly::multiply(b.num(), a.den())),
                            poly::multiply(a.den(), b.den()), a.ts());
}

TransferFunction operator-(const TransferFunction& a) {
    return TransferFunction(poly::scale(a.num(), -1.0), a.den(), a.ts());
}

TransferFunction operator-(const TransferFunction& a, const TransferFunction& b) { return a + (-b); }

TransferFunction operator*(double k, const TransferFunction& a) {
    return TransferFunction(poly::scale(a.num(), k), a.den(), a.ts());
}

TransferFunction reduce(const TransferFunction& sys, double tolerance) {
    if (sys.is_zero()) return TransferFunction({0.0}, {1.0}, sys.ts());
    poly::Roots z = sys.zeros();
    poly::Roots p = sys.poles();
    std::vector<bool> used(p.size(), false);
    poly::Roots z_keep;
    bool cancelled = false;
    for (const auto& zi : z) {
        std::size_t best = p.size();
        double best_dist = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) {
            if (used[k]) continue;
            const double dist = std::abs(zi - p[k]);
            if (dist <= tolerance * std::max(1.0, std::abs(p[k])) && (best == p.size() || dist < best_dist)) {
                best = k;
                best_dist = dist;
            }
        }
        if (best < p.size()) {
            used[best] = true;
            cancelled = true;
        } else {
            z_keep.push_back(zi);
        }
    }
    if (!cancelled) return sys;

    poly::Roots p_keep;
    for (std::size_t k = 0; k < p.size(); ++k)
        if (!used[k]) p_keep.push_back(p[k]);
    const std::size_t d = sys.delay();
    poly::Coeffs num(d, 0.0);
    const poly::Coeffs tail = poly::from_roots(z_keep, sys.num()[d]);
    num.insert(num.end(), tail.begin(), tail.end());
    return TransferFunction(std::move(num), poly::from_roots(p_keep, 1.0), sys.ts());
}

bool is_stable(const TransferFunction& sys) {
    for (const auto& p : sys.poles())
        if (std::abs(p) >= kStabilityRadius) return false;
    return true;
}

Signal simulate(const TransferFunction& sys, const Signal& u) {
    require_same_ts(sys.ts(), u.ts(), "simulate");
    const auto& b = sys.num();
    const auto& a = sys.den();
    const std::size_t order = std::max(a.size(), b.size()) - 1;
    std::vector<double> bb(order + 1, 0.0), aa(order + 1, 0.0);
    std::copy(b.begin(), b.end(), bb.begin());
    std::copy(a.begin(), a.end(), aa.begin());

    // transposed direct form II
    std::vector<double> s(order + 1, 0.0);
    std::vector<double> y(u.size());
    for (std::size_t n = 0; n < u.size(); ++n) {
        const double x = u[n];
        const double yn = bb[0] * x + s[0];
        for (std::size_t i = 0; i < order; ++i) s[i] = bb[i + 1] * x - aa[i + 1] * yn + s[i + 1];
        if (!std::isfinite(yn))
            throw OverflowError(n, "simulation produced a non-finite sample at index " + std::to_string(n));
        y[n] = yn;
    }
    return Signal(std::move(y), u.ts());
}

std::vector<double> impulse_response(const TransferFunction& sys, std::size_t n) {
    const auto& b = sys.num();
    const auto& a = sys.den();
    std::vector<double> h(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        double acc = k < b.size() ? b[k] : 0.0;
        const std::size_t m = std::min(k, a.size() - 1);
        for (std::size_t i = 1; i <= m; ++i) acc -= a[i] * h[k - i];
        h[k] = acc;
    }
    return h;
}

ClosedLoop closed_loop_maps(const TransferFunction& plant, const TransferFunction& controller) {
    require_same_ts(plant.ts(), controller.ts(), "closed loop");
    const poly::Coeffs dd = poly::multiply(plant.den(), controller.den());
    const poly::Coeffs nn = poly::multiply(plant.num(), controller.num());
    const poly::Coeffs den = poly::trim_trailing(poly::add(dd, nn));
    if (poly::is_zero(den)) throw Error(ErrorCode::InvalidParameter, "1 + G K is identically zero");
    if (den[0] == 0.0) throw Error(ErrorCode::InvalidParameter, "feedback loop has an algebraic loop with 1 + G K = 0 at q = 0");

    poly::Roots bad;
    for (const auto& r : poly::roots(den))
        if (std::abs(r) >= kStabilityRadius) bad.push_back(r);
    if (!bad.empty()) {
        std::ostringstream os;
        os << "closed loop is unstable; roots outside |z| < 1:";
        for (const auto& r : bad) os << ' ' << r.real() << (r.imag() < 0 ? "-" : "+") << std::abs(r.imag()) << 'j';
        throw InstabilityError(std::move(bad), os.str());
    }

    TransferFunction s(dd, den, plant.ts());
    TransferFunction ps(poly::multiply(plant.num(), controller.den()), den, plant.ts());
    return {reduce(s), reduce(ps)};
}

} // namespace ilcbench
