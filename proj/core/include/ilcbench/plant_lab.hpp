#pragma once

#include "ilcbench/modal.hpp"
#include "ilcbench/signal.hpp"
#include "ilcbench/transfer_function.hpp"

#include <cstdint>
#include <optional>

namespace ilcbench {

/// Virtual servo setup: plant, feedback controller and measurement chain.
///
/// The disturbance v_j enters at the plant output. It is the sum of the
/// optional repeating disturbance and white Gaussian noise drawn from a
/// generator seeded with `rng_seed() ^ task_index`, so every task is
/// reproducible on its own.
class Scenario {
public:
    Scenario(TransferFunction plant, TransferFunction controller, double encoder_resolution,
             double noise_std, std::optional<Signal> repeating_disturbance, std::uint64_t rng_seed);

    const TransferFunction& plant() const noexcept { return plant_; }
    const TransferFunction& controller() const noexcept { return controller_; }
    double encoder_resolution() const noexcept { return encoder_resolution_; }
    double noise_std() const noexcept { return noise_std_; }
    const std::optional<Signal>& repeating_disturbance() const noexcept { return disturbance_; }
    std::uint64_t rng_seed() const noexcept { return rng_seed_; }
    double ts() const noexcept { return plant_.ts(); }

    const TransferFunction& sensitivity() const noexcept { return loop_.sensitivity; }
    const TransferFunction& process_sensitivity() const noexcept { return loop_.process_sensitivity; }

    /// Same loop with noise, quantization and repeating disturbance removed.
    Scenario noise_free() const;
    Scenario with_seed(std::uint64_t seed) const;

    bool operator==(const Scenario& other) const;

private:
    TransferFunction plant_;
    TransferFunction controller_;
    double encoder_resolution_;
    double noise_std_;
    std::optional<Signal> disturbance_;
    std::uint64_t rng_seed_;
    ClosedLoop loop_;
};

struct TaskResult {
    Signal e;          ///< measured error r - y
    Signal y;          ///< measured (quantized) position
    Signal f_applied;  ///< feedforward injected at the plant input
};

/// K(z) = kp + kd (1 - z^-1) / Ts.
TransferFunction pd_controller(double kp, double kd, double ts);

/// One task of the feedback loop: e = S r - PS f - S v_j, with the measured
/// position rounded to the encoder grid.
TaskResult run_task(const Scenario& sc, const Signal& r, const Signal& f, std::uint64_t task_index);

/// Numbers of the canonical virtual printer. All of them are artifact
/// choices; the belt mode is placed so that a rigid-body learning filter
/// violates the contraction condition just above the servo bandwidth.
struct PrinterParameters {
    double ts = 1e-3;
    double mass = 1.0;                  // kg
    double belt_residue = -1.0;         // 1/kg
    double belt_damping = 0.15;
    double belt_frequency_hz = 60.0;
    double kp = 312.0;                  // N/m
    double kd = 29.8;                   // N s/m
    double encoder_resolution = 1e-6;   // m
    double noise_std = 2e-6;            // m
    std::uint64_t seed = 2020;
};

ContinuousModal printer_model(const PrinterParameters& p = {});
Scenario make_printer_scenario(const PrinterParameters& p);
Scenario default_printer_scenario();

} // namespace ilcbench
