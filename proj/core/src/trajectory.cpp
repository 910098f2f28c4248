#include "ilcbench/trajectory.hpp"

#include "ilcbench/error.hpp"

#include <algorithm>
#include <cmath>

namespace ilcbench {

namespace {

struct Phase {
    std::size_t n;
    double top;  // snap (order 4) or jerk (order 3), constant over the phase
};

std::size_t samples_for(double t, double ts) {
    const double n = std::ceil(t / ts - 1e-9);
    return n > 0.0 ? static_cast<std::size_t>(n) : 0;
}

void validate(double displacement, const MotionBounds& b, double ts, int order) {
    auto positive = [](double x) { return x > 0.0 && std::isfinite(x); };
    if (!positive(ts)) throw Error(ErrorCode::InvalidParameter, "sample time must be finite and > 0");
    if (!(displacement != 0.0) || !std::isfinite(displacement))
        throw Error(ErrorCode::InvalidParameter, "displacement must be finite and nonzero");
    if (!positive(b.velocity) || !positive(b.acceleration) || !positive(b.jerk))
        throw Error(ErrorCode::InvalidParameter, "velocity, acceleration and jerk bounds must be finite and > 0");
    if (order == 4 && !positive(b.snap)) throw Error(ErrorCode::InvalidParameter, "snap bound must be finite and > 0");
}

// Mirror the acceleration half of the move, with a dwell in between.
std::vector<Phase> symmetric(const std::vector<Phase>& accel, std::size_t dwell) {
    std::vector<Phase> p = accel;
    p.push_back({dwell, 0.0});
    for (const auto& ph : accel) p.push_back({ph.n, -ph.top});
    std::erase_if(p, [](const Phase& ph) { return ph.n == 0; });
    return p;
}

MotionProfile sample(int order, double displacement, const MotionBounds& bounds, double amplitude,
                     const std::vector<Phase>& phases, double ts) {
    std::size_t total = 0;
    for (const auto& ph : phases) total += ph.n;
    const std::size_t n = total + 1;
    std::vector<double> p(n, 0.0), v(n, 0.0), a(n, 0.0), j(n, 0.0), s(n, 0.0);
    std::vector<std::size_t> switches{0};

    double p0 = 0.0, v0 = 0.0, a0 = 0.0, j0 = 0.0;
    std::size_t k0 = 0;
    for (const auto& ph : phases) {
        const double sn = order == 4 ? ph.top : 0.0;
        if (order == 3) j0 = ph.top;
        auto eval = [&](double t, double& pp, double& vv, double& aa, double& jj) {
            const double t2 = t * t, t3 = t2 * t, t4 = t3 * t;
            pp = p0 + v0 * t + a0 * t2 / 2.0 + j0 * t3 / 6.0 + sn * t4 / 24.0;
            vv = v0 + a0 * t + j0 * t2 / 2.0 + sn * t3 / 6.0;
            aa = a0 + j0 * t + sn * t2 / 2.0;
            jj = j0 + sn * t;
        };
        for (std::size_t i = 0; i < ph.n; ++i) {
            const std::size_t k = k0 + i;
            eval(static_cast<double>(i) * ts, p[k], v[k], a[k], j[k]);
            s[k] = sn;
            if (order == 3) j[k] = ph.top;
        }
        double jj = 0.0;
        eval(static_cast<double>(ph.n) * ts, p0, v0, a0, jj);
        j0 = order == 4 ? jj : 0.0;
        k0 += ph.n;
        switches.push_back(k0);
    }
    p[total] = p0;
    v[total] = v0;
    a[total] = a0;
    j[total] = 0.0;

    const double sign = displacement < 0.0 ? -1.0 : 1.0;
    auto signed_signal = [&](std::vector<double>& x) {
        for (double& e : x) e *= sign;
        return Signal(std::move(x), ts);
    };
    std::optional<Signal> snap;
    if (order == 4) snap = signed_signal(s);
    return MotionProfile{order,
                         bounds,
                         displacement,
                         amplitude,
                         signed_signal(p),
                         signed_signal(v),
                         signed_signal(a),
                         signed_signal(j),
                         std::move(snap),
                         std::move(switches)};
}

} // namespace

MotionProfile fourth_order_profile(double displacement, const MotionBounds& bounds, double ts) {
    validate(displacement, bounds, ts, 4);
    const double D = std::abs(displacement);
    const double V = bounds.velocity, A = bounds.acceleration, J = bounds.jerk, S = bounds.snap;

    // continuous phase durations: snap t1, constant jerk t2, constant acc t3
    const double t1 = std::min({J / S, std::sqrt(A / S), std::cbrt(V / (2.0 * S)), std::pow(D / (8.0 * S), 0.25)});
    const double t2_acc = A / (S * t1) - t1;
    const double t2_vel = (-3.0 * t1 + std::sqrt(t1 * t1 + 4.0 * V / (S * t1))) / 2.0;
    auto dist_t2 = [&](double t2) { return 2.0 * S * t1 * (t1 + t2) * (2.0 * t1 + t2) * (2.0 * t1 + t2); };
    double lo = 0.0, hi = std::max(t1, 1e-12);
    while (dist_t2(hi) < D) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dist_t2(mid) < D ? lo : hi) = mid;
    }
    const double t2 = std::max(0.0, std::min({t2_acc, t2_vel, hi}));
    const double c = S * t1 * (t1 + t2);
    const double a2 = 2.0 * t1 + t2;
    const double t3 = std::max(0.0, std::min(V / c - a2, (-3.0 * a2 + std::sqrt(a2 * a2 + 4.0 * D / c)) / 2.0));

    const std::size_t n1 = std::max<std::size_t>(1, samples_for(t1, ts));
    const std::size_t n2 = samples_for(t2, ts);
    const std::size_t n3 = samples_for(t3, ts);
    const double T1 = static_cast<double>(n1) * ts;
    const double T2 = static_cast<double>(n2) * ts;
    const double T3 = static_cast<double>(n3) * ts;

    // velocity reached per unit snap, and the snap level that respects every bound
    const double cv = T1 * (T1 + T2) * (2.0 * T1 + T2 + T3);
    const double s1 = std::min({S, J / T1, A / (T1 * (T1 + T2)), V / cv});
    const double tv = 4.0 * T1 + 2.0 * T2 + T3;
    const std::size_t n4 = samples_for(D / (s1 * cv) - tv, ts);
    const double s2 = D / (cv * (tv + static_cast<double>(n4) * ts));

    const std::vector<Phase> accel{{n1, s2}, {n2, 0.0}, {n1, -s2}, {n3, 0.0}, {n1, -s2}, {n2, 0.0}, {n1, s2}};
    return sample(4, displacement, bounds, s2, symmetric(accel, n4), ts);
}

MotionProfile third_order_profile(double displacement, const MotionBounds& bounds, double ts) {
    validate(displacement, bounds, ts, 3);
    const double D = std::abs(displacement);
    const double V = bounds.velocity, A = bounds.acceleration, J = bounds.jerk;

    const double tj = std::min({A / J, std::sqrt(V / J), std::cbrt(D / (2.0 * J))});
    const double t3 =
        std::max(0.0, std::min(V / (J * tj) - tj, (-3.0 * tj + std::sqrt(tj * tj + 4.0 * D / (J * tj))) / 2.0));

    const std::size_t nj = std::max<std::size_t>(1, samples_for(tj, ts));
    const std::size_t n3 = samples_for(t3, ts);
    const double Tj = static_cast<double>(nj) * ts;
    const double T3 = static_cast<double>(n3) * ts;

    const double cv = Tj * (Tj + T3);
    const double j1 = std::min({J, A / Tj, V / cv});
    const double tv = 2.0 * Tj + T3;
    const std::size_t n4 = samples_for(D / (j1 * cv) - tv, ts);
    const double j2 = D / (cv * (tv + static_cast<double>(n4) * ts));

    const std::vector<Phase> accel{{nj, j2}, {n3, 0.0}, {nj, -j2}};
    return sample(3, displacement, bounds, j2, symmetric(accel, n4), ts);
}

MotionProfile embed(const MotionProfile& profile, std::size_t lead_in, std::size_t length) {
    if (lead_in + profile.size() > length)
        throw Error(ErrorCode::InvalidParameter, "record too short for lead-in plus move");
    const double ts = profile.ts();
    auto pad = [&](const Signal& x, double hold) {
        std::vector<double> y(length, hold);
        std::fill(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(lead_in), 0.0);
        std::copy(x.values().begin(), x.values().end(), y.begin() + static_cast<std::ptrdiff_t>(lead_in));
        return Signal(std::move(y), ts);
    };
    std::optional<Signal> snap;
    if (profile.snap) snap = pad(*profile.snap, 0.0);
    std::vector<std::size_t> sw;
    for (auto k : profile.switches) sw.push_back(k + lead_in);
    return MotionProfile{profile.order,
                         profile.bounds,
                         profile.displacement,
                         profile.amplitude,
                         pad(profile.position, profile.position[profile.size() - 1]),
                         pad(profile.velocity, 0.0),
                         pad(profile.acceleration, 0.0),
                         pad(profile.jerk, 0.0),
                         std::move(snap),
                         std::move(sw)};
}

double derivative_consistency_error(const MotionProfile& profile) {
    const std::size_t n = profile.size();
    const double h = profile.ts();
    double worst = 0.0;
    std::size_t next = 0;
    for (std::size_t k = 0; k + 2 < n; ++k) {
        while (next < profile.switches.size() && profile.switches[next] < k + 1) ++next;
        if (next < profile.switches.size() && profile.switches[next] == k + 1) continue;
        const auto& p = profile.position;
        const double d2 = (p[k + 2] - 2.0 * p[k + 1] + p[k]) / (h * h);
        double expected = profile.acceleration[k + 1];
        if (profile.snap) expected += h * h * (*profile.snap)[k] / 12.0;
        worst = std::max(worst, std::abs(d2 - expected));
    }
    return worst;
}

} // namespace ilcbench
