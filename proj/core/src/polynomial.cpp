#include "ilcbench/polynomial.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>

namespace ilcbench::poly {

Coeffs multiply(const Coeffs& a, const Coeffs& b) {
    if (a.empty() || b.empty()) return {0.0};
    Coeffs c(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

Coeffs add(const Coeffs& a, const Coeffs& b) {
    Coeffs c(std::max(a.size(), b.size()), 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) c[i] += a[i];
    for (std::size_t i = 0; i < b.size(); ++i) c[i] += b[i];
    return c;
}

Coeffs scale(Coeffs a, double k) {
    for (double& x : a) x *= k;
    return a;
}

Coeffs trim_trailing(Coeffs a) {
    while (a.size() > 1 && a.back() == 0.0) a.pop_back();
    if (a.empty()) a.push_back(0.0);
    return a;
}

std::size_t leading_zeros(const Coeffs& a) {
    std::size_t d = 0;
    while (d < a.size() && a[d] == 0.0) ++d;
    return d;
}

Roots roots(const Coeffs& a) {
    const std::size_t d = leading_zeros(a);
    if (d == a.size()) return {};
    Coeffs b(a.begin() + static_cast<std::ptrdiff_t>(d), a.end());
    b = trim_trailing(std::move(b));
    const std::size_t n = b.size() - 1;
    if (n == 0) return {};

    // b0 z^n + b1 z^(n-1) + ... + bn, companion form
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (std::size_t j = 0; j < n; ++j) c(0, static_cast<Eigen::Index>(j)) = -b[j + 1] / b[0];
    for (std::size_t i = 1; i < n; ++i) c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i - 1)) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> es(c, false);
    Roots r;
    r.reserve(n);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) r.push_back(es.eigenvalues()[i]);
    return r;
}

Coeffs from_roots(const Roots& roots, double lead) {
    std::vector<std::complex<double>> c{1.0};
    for (const auto& z : roots) {
        std::vector<std::complex<double>> next(c.size() + 1, 0.0);
        for (std::size_t i = 0; i < c.size(); ++i) {
            next[i] += c[i];
            next[i + 1] -= z * c[i];
        }
        c = std::move(next);
    }
    Coeffs out(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) out[i] = lead * c[i].real();
    return out;
}

std::complex<double> evaluate(const Coeffs& a, std::complex<double> q) {
    std::complex<double> acc = 0.0;
    for (auto it = a.rbegin(); it != a.rend(); ++it) acc = acc * q + *it;
    return acc;
}

bool is_zero(const Coeffs& a) noexcept {
    return std::all_of(a.begin(), a.end(), [](double x) { return x == 0.0; });
}

} // namespace ilcbench::poly
