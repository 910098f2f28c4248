#include "ilcbench/modal.hpp"

#include "ilcbench/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace ilcbench {

ContinuousModal make_modal_plant(double mass, std::vector<FlexibleMode> modes) {
    if (!(mass > 0.0) || !std::isfinite(mass)) throw Error(ErrorCode::InvalidParameter, "mass must be finite and > 0");
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto& m = modes[i];
        const std::string tag = "mode " + std::to_string(i) + ": ";
        if (!(m.natural_frequency > 0.0) || !std::isfinite(m.natural_frequency))
            throw Error(ErrorCode::InvalidParameter, tag + "natural frequency must be finite and > 0");
        if (!(m.damping >= 0.0 && m.damping < 1.0))
            throw Error(ErrorCode::InvalidParameter, tag + "damping must lie in [0, 1)");
        if (!std::isfinite(m.residue)) throw Error(ErrorCode::InvalidParameter, tag + "residue must be finite");
    }
    return ContinuousModal(mass, std::move(modes));
}

std::complex<double> ContinuousModal::evaluate(std::complex<double> s) const {
    std::complex<double> g = 1.0 / (mass_ * s * s);
    for (const auto& m : modes_) {
        const double w = m.natural_frequency;
        g += m.residue / (s * s + 2.0 * m.damping * w * s + w * w);
    }
    return g;
}

double ContinuousModal::step_response(double t) const {
    if (t <= 0.0) return 0.0;
    double y = t * t / (2.0 * mass_);
    for (const auto& m : modes_) {
        const double w = m.natural_frequency;
        const double sigma = m.damping * w;
        const double wd = w * std::sqrt(1.0 - m.damping * m.damping);
        y += m.residue / (w * w) *
             (1.0 - std::exp(-sigma * t) * (std::cos(wd * t) + sigma / wd * std::sin(wd * t)));
    }
    return y;
}

namespace {

TransferFunction zoh_mode(const FlexibleMode& m, double ts) {
    const double w = m.natural_frequency;
    const double sigma = m.damping * w;
    const double wd = w * std::sqrt(1.0 - m.damping * m.damping);
    const double e = std::exp(-sigma * ts);
    const double c = std::cos(wd * ts);
    const double s = std::sin(wd * ts);

    // state x = (position, velocity), x' = A x + B u with B = (0, r)
    const double a11 = e * (c + sigma / wd * s);
    const double a12 = e * s / wd;
    const double a21 = -e * w * w * s / wd;
    const double a22 = e * (c - sigma / wd * s);

    // Bd = A^-1 (Ad - I) B
    const double r = m.residue;
    const double bd1 = r * (1.0 - a22 - 2.0 * sigma * a12) / (w * w);
    const double bd2 = r * a12;

    const double trace = a11 + a22;
    const double det = a11 * a22 - a12 * a21;
    return TransferFunction({0.0, bd1, a12 * bd2 - a22 * bd1}, {1.0, -trace, det}, ts);
}

} // namespace

TransferFunction discretize_zoh(const ContinuousModal& model, double ts) {
    if (!(ts > 0.0) || !std::isfinite(ts)) throw Error(ErrorCode::InvalidParameter, "sample time must be finite and > 0");
    const double nyquist = std::numbers::pi / ts;
    for (std::size_t i = 0; i < model.modes().size(); ++i) {
        if (model.modes()[i].natural_frequency >= nyquist)
            throw Error(ErrorCode::Aliasing, "mode " + std::to_string(i) + " at " +
                                                 std::to_string(model.modes()[i].natural_frequency) +
                                                 " rad/s is at or above the Nyquist frequency " + std::to_string(nyquist));
    }
    const double k = ts * ts / (2.0 * model.mass());
    TransferFunction g({0.0, k, k}, {1.0, -2.0, 1.0}, ts);
    for (const auto& m : model.modes()) g = g + zoh_mode(m, ts);
    return g;
}

} // namespace ilcbench
