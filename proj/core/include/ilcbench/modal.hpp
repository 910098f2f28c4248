#pragma once

#include "ilcbench/transfer_function.hpp"

#include <complex>
#include <vector>

namespace ilcbench {

struct FlexibleMode {
    double residue;            ///< r_i [1/kg]
    double damping;            ///< zeta_i, in [0, 1)
    double natural_frequency;  ///< omega_i [rad/s], > 0

    bool operator==(const FlexibleMode&) const = default;
};

/// Rigid body plus flexible modes:
///
///     G(s) = 1/(m s^2) + sum_i r_i / (s^2 + 2 zeta_i omega_i s + omega_i^2)
class ContinuousModal {
public:
    double mass() const noexcept { return mass_; }
    const std::vector<FlexibleMode>& modes() const noexcept { return modes_; }

    /// G(s) at a complex Laplace variable.
    std::complex<double> evaluate(std::complex<double> s) const;

    /// Analytic unit-step response at time t >= 0.
    double step_response(double t) const;

    bool operator==(const ContinuousModal&) const = default;

private:
    friend ContinuousModal make_modal_plant(double mass, std::vector<FlexibleMode> modes);
    ContinuousModal(double mass, std::vector<FlexibleMode> modes)
        : mass_(mass), modes_(std::move(modes)) {}

    double mass_;
    std::vector<FlexibleMode> modes_;
};

ContinuousModal make_modal_plant(double mass, std::vector<FlexibleMode> modes = {});

/// Exact zero-order-hold discretization, mode by mode, summed into one
/// rational function. Throws ErrorCode::Aliasing if any omega_i >= pi/Ts.
TransferFunction discretize_zoh(const ContinuousModal& model, double ts);

} // namespace ilcbench
