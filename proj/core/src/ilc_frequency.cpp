#include "ilcbench/ilc_frequency.hpp"

#include "ilcbench/error.hpp"

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>

namespace ilcbench {

namespace {

std::size_t series_length(double radius, double tolerance, std::size_t cap) {
    if (radius < 1e-3) radius = 1e-3;
    const double n = std::ceil(std::log(tolerance) / std::log(radius)) + 50.0;
    return std::min(cap, static_cast<std::size_t>(std::max(1.0, n)));
}

double max_abs(const std::vector<double>& x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

double l1(const std::vector<double>& x) {
    double s = 0.0;
    for (double v : x) s += std::abs(v);
    return s;
}

// Geometric estimate of the l1 mass beyond the last kept coefficient of a
// series decaying at `radius` per step.
double tail_estimate(const std::vector<double>& h, double radius) {
    if (h.empty() || radius <= 0.0) return 0.0;
    return std::abs(h.back()) * radius / (1.0 - radius);
}

} // namespace

InverseDesign design_inverse_L(const TransferFunction& model, std::size_t preview_budget, const InverseOptions& options) {
    if (model.is_zero()) throw Error(ErrorCode::InversionSingularity, "cannot invert a zero model");
    const double uct = options.unit_circle_tolerance;
    for (const auto& p : model.poles())
        if (std::abs(p - 1.0) < uct)
            throw Error(ErrorCode::UnsupportedIntegrator,
                        "model has a pole at z = 1; inversion with an integrating controller is not supported");

    const std::size_t d = model.delay();
    const double b0 = model.num()[d];
    poly::Roots inside, outside;
    for (const auto& z : model.zeros()) {
        if (std::abs(z - 1.0) < uct)
            throw Error(ErrorCode::UnsupportedIntegrator,
                        "model has a zero at z = 1 (integrator in the controller); inversion is not supported");
        if (std::abs(std::abs(z) - 1.0) < uct)
            throw Error(ErrorCode::InversionSingularity, "model has a zero on the unit circle at " +
                                                             std::to_string(z.real()) + (z.imag() < 0 ? "-" : "+") +
                                                             std::to_string(std::abs(z.imag())) + "j");
        (std::abs(z) < 1.0 ? inside : outside).push_back(z);
    }
    const double ts = model.ts();

    // causal part: 1 / prod(1 - z_i q) for the zeros inside the circle
    double r_in = 0.0;
    for (const auto& z : inside) r_in = std::max(r_in, std::abs(z));
    std::vector<double> hc{1.0};
    if (!inside.empty()) {
        const std::size_t n = series_length(r_in, options.tolerance, options.max_series_length);
        hc = impulse_response(TransferFunction({1.0}, poly::from_roots(inside), ts), n);
    }

    // anticausal part: power series in z of 1 / prod(z - z_i) for the zeros outside
    double r_out = 0.0;
    std::vector<double> ha{1.0};
    if (!outside.empty()) {
        double min_mag = std::numeric_limits<double>::infinity();
        poly::Roots inv;
        std::complex<double> lead = 1.0;
        for (const auto& z : outside) {
            min_mag = std::min(min_mag, std::abs(z));
            inv.push_back(1.0 / z);
            lead *= -z;
        }
        r_out = 1.0 / min_mag;
        const std::size_t n = series_length(r_out, options.tolerance, options.max_series_length);
        ha = impulse_response(TransferFunction({1.0}, poly::from_roots(inv, lead.real()), ts), n);
    }

    const double bound = (tail_estimate(hc, r_in) * l1(ha) + tail_estimate(ha, r_out) * l1(hc)) *
                         l1(model.den()) / std::abs(b0);

    std::vector<double> causal = poly::multiply(hc, model.den());
    for (double& x : causal) x /= b0;
    std::vector<double> rev(ha.rbegin(), ha.rend());
    std::vector<double> full = poly::multiply(rev, causal);
    std::size_t preview = d + outside.size() + ha.size() - 1;

    // drop negligible taps at both ends
    const double floor = options.tolerance * max_abs(full);
    std::size_t first = 0;
    while (first < preview && first + 1 < full.size() && std::abs(full[first]) < floor) ++first;
    std::size_t last = full.size();
    while (last > first + 1 && std::abs(full[last - 1]) < floor) --last;
    std::vector<double> taps(full.begin() + static_cast<std::ptrdiff_t>(first),
                             full.begin() + static_cast<std::ptrdiff_t>(last));
    preview -= first;
    if (taps.size() <= preview) taps.resize(preview + 1, 0.0);

    if (preview > preview_budget)
        throw PreviewBudgetError(preview, "inverse needs " + std::to_string(preview) + " preview samples, budget is " +
                                              std::to_string(preview_budget));
    return {NoncausalFilter(std::move(taps), preview, ts), bound};
}

NoncausalFilter rigid_body_learning_filter(double mass, const TransferFunction& controller) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorCode::InvalidParameter, "mass must be finite and > 0");
    if (controller.den().size() != 1)
        throw Error(ErrorCode::InvalidParameter, "rigid-body learning filter needs an FIR controller");
    const double ts = controller.ts();
    const double k = mass / (ts * ts);
    const auto& kn = controller.num();
    std::vector<double> taps(std::max<std::size_t>(3, kn.size() + 1), 0.0);
    taps[0] = k;
    taps[1] = -2.0 * k;
    taps[2] = k;
    for (std::size_t i = 0; i < kn.size(); ++i) taps[i + 1] += kn[i];
    return NoncausalFilter(std::move(taps), 1, ts);
}

namespace {

void require_mask(const Frf& frf, const FrequencyMask& mask) {
    if (mask.size() != frf.size()) throw Error(ErrorCode::DimensionMismatch, "mask size differs from the FRF grid");
    if (std::none_of(mask.begin(), mask.end(), [](bool b) { return b; }))
        throw Error(ErrorCode::InvalidParameter, "frequency mask selects no grid point");
}

NoncausalFilter lowpass_prototype(double passband_edge, double ts) {
    const double width = passband_edge;
    auto m = static_cast<std::size_t>(std::ceil(6.6 * std::numbers::pi / (width * ts)));
    if (m % 2 == 0) ++m;
    const double half = static_cast<double>(m - 1) / 2.0;
    std::vector<double> h(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double n = static_cast<double>(i) - half;
        const double x = passband_edge * ts * n;
        const double sinc = n == 0.0 ? 1.0 : std::sin(x) / x;
        const double window = m == 1 ? 1.0 : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(m - 1));
        h[i] = sinc * window;
        sum += h[i];
    }
    for (double& x : h) x /= sum;
    // H(2 - H): unit gain at DC and no ripple above one
    std::vector<double> s(2 * m - 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) s[i + j] -= h[i] * h[j];
    for (std::size_t i = 0; i < m; ++i) s[i + (m - 1) / 2] += 2.0 * h[i];
    return NoncausalFilter(std::move(s), m - 1, ts);
}

} // namespace

QDesign design_Q(const Frf& frf_gs, const NoncausalFilter& L, const FrequencyMask& mask, const QDesignOptions& options) {
    require_same_ts(frf_gs.ts(), L.ts(), "design_Q");
    require_mask(frf_gs, mask);
    if (!frf_gs.is_scalar()) throw Error(ErrorCode::DimensionMismatch, "design_Q needs a scalar FRF");
    const auto& w = frf_gs.frequencies();

    std::vector<double> g(w.size(), 0.0);
    std::optional<double> cutoff;
    double g_sup = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        if (!mask[k]) continue;
        g[k] = std::abs(1.0 - frf_gs.value(k) * L.evaluate(w[k]));
        g_sup = std::max(g_sup, g[k]);
        if (!cutoff && g[k] >= options.cutoff_level) cutoff = w[k];
    }
    if (!cutoff) {
        const auto id = NoncausalFilter::identity(L.ts());
        return {id, id, std::nullopt, g_sup, 1.0 - g_sup};
    }

    double lowest = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (mask[k]) {
            lowest = w[k];
            break;
        }
    if (*cutoff == lowest)
        throw InfeasibleError(lowest, "|1 - GS L| already reaches " + std::to_string(options.cutoff_level) +
                                          " at the lowest masked frequency; L does not invert GS anywhere on the mask");
    double worst = *cutoff;
    double edge = *cutoff;
    for (std::size_t step = 0; step < options.max_candidates; ++step, edge *= options.sweep_factor) {
        // a passband below the whole mask would stop learning altogether
        if (edge < lowest || 6.6 * std::numbers::pi / (edge * L.ts()) > 1e5) break;
        const NoncausalFilter proto = lowpass_prototype(edge, L.ts());
        double sup = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) {
            if (!mask[k]) continue;
            const double rho = std::norm(proto.evaluate(w[k])) * g[k];
            if (rho > sup) {
                sup = rho;
                worst = w[k];
            }
        }
        if (sup < options.target) {
            NoncausalFilter q = compose(proto.adjoint(), proto);
            return {std::move(q), proto, edge, sup, 1.0 - sup};
        }
    }
    throw InfeasibleError(worst, "no robustness filter meets |Q| |1 - GS L| < " + std::to_string(options.target) +
                                     "; worst frequency " + std::to_string(worst) + " rad/s");
}

Frf zero_phase_magnitude(const NoncausalFilter& qt, const std::vector<double>& grid) {
    const NoncausalFilter q = compose(qt.adjoint(), qt);
    std::vector<std::complex<double>> v(grid.size());
    for (std::size_t k = 0; k < grid.size(); ++k) v[k] = q.evaluate(grid[k]);
    return Frf(grid, v, qt.ts());
}

ConvergenceReport check_convergence(const Frf& frf_gs, const NoncausalFilter& L, const NoncausalFilter& Q,
                                    const FrequencyMask& mask) {
    require_same_ts(frf_gs.ts(), L.ts(), "check_convergence");
    require_same_ts(frf_gs.ts(), Q.ts(), "check_convergence");
    if (!frf_gs.is_scalar()) throw Error(ErrorCode::DimensionMismatch, "check_convergence needs a scalar FRF");
    require_mask(frf_gs, mask);
    ConvergenceReport rep{frf_gs.frequencies(), std::vector<double>(frf_gs.size(), std::numeric_limits<double>::quiet_NaN()),
                          mask, 0.0, 0.0};
    for (std::size_t k = 0; k < frf_gs.size(); ++k) {
        if (!mask[k]) continue;
        const double w = rep.grid[k];
        rep.rho[k] = std::abs(Q.evaluate(w)) * std::abs(1.0 - frf_gs.value(k) * L.evaluate(w));
        if (rep.omega_at_sup == 0.0 || rep.rho[k] > rep.sup_rho) {
            rep.sup_rho = rep.rho[k];
            rep.omega_at_sup = w;
        }
    }
    return rep;
}

Signal ilc_update(const Signal& f, const Signal& e, const NoncausalFilter& L, const NoncausalFilter& Q, double alpha) {
    if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::InvalidParameter, "learning gain alpha must lie in (0, 1]");
    require_compatible(f, e, "ilc_update");
    // Q and L are merged before filtering so the edges of L e are not cut
    // off ahead of Q; the plain cascade leaks L's high-frequency gain there.
    Signal step = apply_noncausal(compose(Q, L), e);
    step *= alpha;
    step += apply_noncausal(Q, f);
    return step;
}

std::size_t default_tail_margin(const NoncausalFilter& L, const NoncausalFilter& Q) { return L.preview() + Q.preview(); }

Signal apply_tail_window(Signal f, std::size_t margin) {
    if (margin == 0) return f;
    std::vector<double> x = f.values();
    const std::size_t start = margin >= x.size() ? 0 : x.size() - margin;
    std::fill(x.begin() + static_cast<std::ptrdiff_t>(start), x.end(), 0.0);
    return Signal(std::move(x), f.ts());
}

TrialHistory run_ilc(const Scenario& sc, const Signal& r, const NoncausalFilter& L, const NoncausalFilter& Q,
                     const IlcOptions& options) {
    if (options.n_iter < 1) throw Error(ErrorCode::InvalidParameter, "n_iter must be >= 1");
    if (!(options.alpha > 0.0 && options.alpha <= 1.0))
        throw Error(ErrorCode::InvalidParameter, "learning gain alpha must lie in (0, 1]");
    require_same_ts(sc.ts(), r.ts(), "run_ilc");
    require_same_ts(sc.ts(), L.ts(), "run_ilc");
    require_same_ts(sc.ts(), Q.ts(), "run_ilc");

    TrialHistory h{{}, {}, {}, {}, Signal::zeros(r.size(), r.ts()), 0, false, std::nullopt, std::nullopt};
    h.tail_margin = options.tail_margin.value_or(default_tail_margin(L, Q));
    if (h.tail_margin >= r.size()) throw Error(ErrorCode::InvalidParameter, "tail margin covers the whole record");

    Signal f = Signal::zeros(r.size(), r.ts());
    for (std::size_t j = 0; j <= options.n_iter; ++j) {
        TaskResult res = [&] {
            try {
                return run_task(sc, r, f, j);
            } catch (const OverflowError& ex) {
                throw OverflowError(ex.index(), "task " + std::to_string(j) + ": " + ex.what());
            }
        }();
        const double en = res.e.norm2();
        h.error_norms.push_back(en);
        h.feedforward_norms.push_back(f.norm2());
        if (options.keep_signals || j == options.n_iter) {
            h.errors.push_back(res.e);
            h.feedforward.push_back(f);
        }
        if (j > 0 && !h.first_rising && en > h.error_norms[j - 1]) h.first_rising = j;
        if (j > 0 && en > options.divergence_factor * h.error_norms.front()) {
            h.diverged = true;
            h.diverged_at = j;
            if (!options.keep_signals) {
                h.errors.assign(1, res.e);
                h.feedforward.assign(1, f);
            }
            break;
        }
        if (j == options.n_iter) break;
        f = apply_tail_window(ilc_update(f, res.e, L, Q, options.alpha), h.tail_margin);
    }
    h.f_final = f;
    return h;
}

namespace {

// Values of a two-sided filter at the bins of an n-point DFT.
std::vector<std::complex<double>> filter_bins(const NoncausalFilter& h, std::size_t n, Eigen::FFT<double>& fft) {
    std::vector<std::complex<double>> buf(n, 0.0), out;
    const long p = static_cast<long>(h.preview());
    const long nn = static_cast<long>(n);
    for (std::size_t i = 0; i < h.size(); ++i) {
        const long lag = static_cast<long>(i) - p;
        buf[static_cast<std::size_t>(((lag % nn) + nn) % nn)] += h.taps()[i];
    }
    fft.fwd(out, buf);
    return out;
}

std::vector<std::complex<double>> poly_bins(const poly::Coeffs& c, std::size_t n, Eigen::FFT<double>& fft) {
    std::vector<std::complex<double>> buf(n, 0.0), out;
    for (std::size_t i = 0; i < c.size(); ++i) buf[i % n] += c[i];
    fft.fwd(out, buf);
    return out;
}

enum class FixedPoint { Error, Feedforward };

Signal fixed_point(const TransferFunction& gs, const NoncausalFilter& L, const NoncausalFilter& Q, const Signal& e0,
                   FixedPoint which) {
    require_same_ts(gs.ts(), e0.ts(), "asymptotic error");
    require_same_ts(L.ts(), e0.ts(), "asymptotic error");
    require_same_ts(Q.ts(), e0.ts(), "asymptotic error");
    const std::size_t n = e0.size();
    std::size_t nfft = 1;
    while (nfft < 4 * n) nfft <<= 1;

    Eigen::FFT<double> fft;
    const auto num = poly_bins(gs.num(), nfft, fft);
    const auto den = poly_bins(gs.den(), nfft, fft);
    const auto lb = filter_bins(L, nfft, fft);
    const auto qb = filter_bins(Q, nfft, fft);

    std::vector<std::complex<double>> x(nfft, 0.0), spec;
    for (std::size_t i = 0; i < n; ++i) x[i] = e0[i];
    fft.fwd(spec, x);

    for (std::size_t k = 0; k < nfft; ++k) {
        const std::complex<double> g = num[k] / den[k];
        const std::complex<double> loop = qb[k] * (1.0 - g * lb[k]);
        if (!(std::abs(loop) < 1.0)) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(std::min(k, nfft - k)) /
                             (static_cast<double>(nfft) * e0.ts());
            throw Error(ErrorCode::FixedPointUndefined, "|Q (1 - GS L)| = " + std::to_string(std::abs(loop)) +
                                                            " >= 1 at " + std::to_string(w) + " rad/s");
        }
        const std::complex<double> num_k = which == FixedPoint::Error ? 1.0 - qb[k] : qb[k] * lb[k];
        spec[k] *= num_k / (1.0 - loop);
    }
    std::vector<std::complex<double>> y;
    fft.inv(y, spec);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = y[i].real();
    return Signal(std::move(out), e0.ts());
}

} // namespace

Signal asymptotic_error(const TransferFunction& gs, const NoncausalFilter& L, const NoncausalFilter& Q, const Signal& e0) {
    return fixed_point(gs, L, Q, e0, FixedPoint::Error);
}

Signal asymptotic_feedforward(const TransferFunction& gs, const NoncausalFilter& L, const NoncausalFilter& Q,
                              const Signal& e0) {
    return fixed_point(gs, L, Q, e0, FixedPoint::Feedforward);
}

namespace {

using Matvec = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

// Lanczos with full reorthogonalisation on the symmetric operator B = A^T A.
double lanczos_sigma_max(const Matvec& normal_op, Eigen::Index n, double tolerance, std::size_t max_steps) {
    const auto steps = static_cast<Eigen::Index>(std::min<std::size_t>(max_steps, static_cast<std::size_t>(n)));
    Eigen::MatrixXd V(n, steps + 1);
    std::vector<double> alpha, beta;

    std::mt19937_64 gen(0x5eed);
    std::normal_distribution<double> nd;
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = nd(gen);
    V.col(0) = v / v.norm();

    double theta = 0.0;
    double theta_prev = -1.0;
    for (Eigen::Index k = 0; k < steps; ++k) {
        Eigen::VectorXd w = normal_op(V.col(k));
        const double a = V.col(k).dot(w);
        alpha.push_back(a);
        for (int pass = 0; pass < 2; ++pass) w -= V.leftCols(k + 1) * (V.leftCols(k + 1).transpose() * w);
        const double b = w.norm();

        const bool check = (k + 1) % 5 == 0 || k + 1 == steps || b <= 1e-14 * std::max(1.0, std::abs(a));
        if (check) {
            const auto m = static_cast<Eigen::Index>(alpha.size());
            Eigen::MatrixXd T = Eigen::MatrixXd::Zero(m, m);
            for (Eigen::Index i = 0; i < m; ++i) {
                T(i, i) = alpha[static_cast<std::size_t>(i)];
                if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[static_cast<std::size_t>(i)];
            }
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T, Eigen::EigenvaluesOnly);
            theta = es.eigenvalues().maxCoeff();
            if (std::abs(theta - theta_prev) <= tolerance * std::max(theta, 1e-300)) break;
            theta_prev = theta;
        }
        if (b <= 1e-14 * std::max(1.0, std::abs(a))) break;
        beta.push_back(b);
        V.col(k + 1) = w / b;
    }
    return std::sqrt(std::max(theta, 0.0));
}

} // namespace

double largest_singular_value(const Eigen::MatrixXd& a, double tolerance, std::size_t max_steps) {
    if (a.size() == 0) return 0.0;
    return lanczos_sigma_max([&](const Eigen::VectorXd& x) -> Eigen::VectorXd { return a.transpose() * (a * x); },
                             a.cols(), tolerance, max_steps);
}

namespace {

// sigma_max of x -> W (Q x - QL J x), W zeroing the tail window.
double contraction_sigma(const Eigen::MatrixXd& J, const Eigen::MatrixXd& QL, const Eigen::MatrixXd& Q,
                         std::size_t tail_margin) {
    const Eigen::Index n = J.rows();
    const Eigen::Index keep = n - static_cast<Eigen::Index>(std::min<std::size_t>(tail_margin, static_cast<std::size_t>(n)));
    auto apply = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        Eigen::VectorXd y = Q * x - QL * (J * x);
        y.tail(n - keep).setZero();
        return y;
    };
    auto apply_t = [&](const Eigen::VectorXd& y) -> Eigen::VectorXd {
        Eigen::VectorXd u = y;
        u.tail(n - keep).setZero();
        return Q.transpose() * u - J.transpose() * (QL.transpose() * u);
    };
    return lanczos_sigma_max([&](const Eigen::VectorXd& x) { return apply_t(apply(x)); }, n, 1e-10, 300);
}

} // namespace

double lifted_contraction_oracle(const LiftedOperator& J, const LiftedOperator& L, const LiftedOperator& Q,
                                 std::size_t tail_margin) {
    const Eigen::Index n = J.size();
    if (L.size() != n || Q.size() != n || J.matrix.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "lifted operators differ in size");
    return contraction_sigma(J.matrix, Q.matrix * L.matrix, Q.matrix, tail_margin);
}

double lifted_contraction_oracle(const Scenario& sc, const NoncausalFilter& L, const NoncausalFilter& Q, std::size_t n,
                                 std::optional<std::size_t> tail_margin) {
    // Same operator run_ilc applies: Q and L merged into one filter.
    return contraction_sigma(lifted_matrix(sc.process_sensitivity(), n).matrix, lifted_matrix(compose(Q, L), n).matrix,
                             lifted_matrix(Q, n).matrix, tail_margin.value_or(default_tail_margin(L, Q)));
}

} // namespace ilcbench
