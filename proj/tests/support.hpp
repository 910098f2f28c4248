#pragma once

#include <ilcbench/ilcbench.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

namespace testing {

using namespace ilcbench;

inline constexpr double kTs = 1e-3;

inline Signal random_signal(std::size_t n, double ts, std::uint64_t seed, double scale = 1.0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, scale);
    std::vector<double> x(n);
    for (double& v : x) v = dist(rng);
    return Signal(std::move(x), ts);
}

// Random stable rational system: real and complex-pair poles of radius < 0.9.
inline TransferFunction random_stable_tf(std::mt19937_64& rng, std::size_t order, double ts) {
    std::uniform_real_distribution<double> radius(0.1, 0.9), angle(0.1, 3.0), coef(-1.0, 1.0);
    poly::Roots poles;
    while (poles.size() < order) {
        if (order - poles.size() >= 2 && coef(rng) > 0.0) {
            const auto p = std::polar(radius(rng), angle(rng));
            poles.push_back(p);
            poles.push_back(std::conj(p));
        } else {
            poles.emplace_back(coef(rng) * 0.9, 0.0);
        }
    }
    // den(q) = prod (1 - p q)
    std::vector<std::complex<double>> den{1.0};
    for (const auto& p : poles) {
        std::vector<std::complex<double>> next(den.size() + 1, 0.0);
        for (std::size_t i = 0; i < den.size(); ++i) {
            next[i] += den[i];
            next[i + 1] -= p * den[i];
        }
        den = next;
    }
    std::vector<double> d, n;
    for (const auto& c : den) d.push_back(c.real());
    for (std::size_t i = 0; i <= order; ++i) n.push_back(coef(rng));
    return TransferFunction(n, d, ts);
}

// Plain difference equation, written independently of the library's realization.
inline std::vector<double> naive_filter(const std::vector<double>& b, const std::vector<double>& a,
                                        const std::vector<double>& u) {
    std::vector<double> y(u.size(), 0.0);
    for (std::size_t k = 0; k < u.size(); ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < b.size() && i <= k; ++i) acc += b[i] * u[k - i];
        for (std::size_t i = 1; i < a.size() && i <= k; ++i) acc -= a[i] * y[k - i];
        y[k] = acc / a[0];
    }
    return y;
}

inline Eigen::VectorXd to_vector(const Signal& s) {
    return Eigen::Map<const Eigen::VectorXd>(s.values().data(), static_cast<Eigen::Index>(s.size()));
}

inline double max_abs_diff(const Signal& a, const Signal& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

inline double relative_diff(const Signal& a, const Signal& b) { return (a - b).norm2() / b.norm2(); }

// The canonical move: 0.1 m, 4th order, embedded in a 2 s record after 0.1 s of rest.
inline MotionBounds canonical_bounds() { return {0.4, 4.0, 200.0, 2e4}; }

inline MotionProfile canonical_profile(double displacement = 0.1, std::size_t length = 2000) {
    return embed(fourth_order_profile(displacement, canonical_bounds(), kTs), 100, length);
}

// The belt-mode model the "accurate" learning filter is built from: 10%
// heavier, mode 25% stiffer and less damped than the plant.
inline TransferFunction mismatched_process_sensitivity(const Scenario& sc) {
    const auto model = discretize_zoh(make_modal_plant(1.1, {{-1.0 / 1.1, 0.1, 2.0 * M_PI * 75.0}}), kTs);
    return closed_loop_maps(model, sc.controller()).process_sensitivity;
}

} // namespace testing
