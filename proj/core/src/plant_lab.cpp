#include "ilcbench/plant_lab.hpp"

#include "ilcbench/error.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace ilcbench {

Scenario::Scenario(TransferFunction plant, TransferFunction controller, double encoder_resolution,
                   double noise_std, std::optional<Signal> repeating_disturbance, std::uint64_t rng_seed)
    : plant_(std::move(plant)),
      controller_(std::move(controller)),
      encoder_resolution_(encoder_resolution),
      noise_std_(noise_std),
      disturbance_(std::move(repeating_disturbance)),
      rng_seed_(rng_seed),
      loop_(closed_loop_maps(plant_, controller_)) {
    if (!(encoder_resolution_ >= 0.0) || !std::isfinite(encoder_resolution_))
        throw Error(ErrorCode::InvalidParameter, "encoder resolution must be finite and >= 0");
    if (!(noise_std_ >= 0.0) || !std::isfinite(noise_std_))
        throw Error(ErrorCode::InvalidParameter, "noise standard deviation must be finite and >= 0");
    if (disturbance_) require_same_ts(disturbance_->ts(), plant_.ts(), "repeating disturbance");
}

Scenario Scenario::noise_free() const { return Scenario(plant_, controller_, 0.0, 0.0, std::nullopt, rng_seed_); }

Scenario Scenario::with_seed(std::uint64_t seed) const {
    return Scenario(plant_, controller_, encoder_resolution_, noise_std_, disturbance_, seed);
}

bool Scenario::operator==(const Scenario& other) const {
    return plant_ == other.plant_ && controller_ == other.controller_ &&
           encoder_resolution_ == other.encoder_resolution_ && noise_std_ == other.noise_std_ &&
           disturbance_ == other.disturbance_ && rng_seed_ == other.rng_seed_;
}

TransferFunction pd_controller(double kp, double kd, double ts) {
    if (!(kp > 0.0) || !std::isfinite(kp)) throw Error(ErrorCode::InvalidParameter, "kp must be finite and > 0");
    if (!(kd >= 0.0) || !std::isfinite(kd)) throw Error(ErrorCode::InvalidParameter, "kd must be finite and >= 0");
    if (!(ts > 0.0)) throw Error(ErrorCode::InvalidParameter, "sample time must be > 0");
    return TransferFunction({kp + kd / ts, -kd / ts}, {1.0}, ts);
}

TaskResult run_task(const Scenario& sc, const Signal& r, const Signal& f, std::uint64_t task_index) {
    require_compatible(r, f, "run_task");
    require_same_ts(r.ts(), sc.ts(), "run_task");
    const std::size_t n = r.size();

    std::vector<double> v(n, 0.0);
    if (const auto& d = sc.repeating_disturbance()) {
        if (d->size() != n) throw Error(ErrorCode::Incompatible, "repeating disturbance length differs from the reference");
        for (std::size_t i = 0; i < n; ++i) v[i] = (*d)[i];
    }
    if (sc.noise_std() > 0.0) {
        std::mt19937_64 gen(sc.rng_seed() ^ task_index);
        std::normal_distribution<double> noise(0.0, sc.noise_std());
        for (auto& x : v) x += noise(gen);
    }

    Signal e = simulate(sc.sensitivity(), r) - simulate(sc.process_sensitivity(), f);
    if (sc.repeating_disturbance() || sc.noise_std() > 0.0) e -= simulate(sc.sensitivity(), Signal(std::move(v), r.ts()));

    const double res = sc.encoder_resolution();
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double pos = r[i] - e[i];
        y[i] = res > 0.0 ? std::round(pos / res) * res : pos;
    }
    if (res > 0.0) {
        std::vector<double> eq(n);
        for (std::size_t i = 0; i < n; ++i) eq[i] = r[i] - y[i];
        e = Signal(std::move(eq), r.ts());
    }
    return {std::move(e), Signal(std::move(y), r.ts()), f};
}

ContinuousModal printer_model(const PrinterParameters& p) {
    return make_modal_plant(p.mass, {{p.belt_residue, p.belt_damping, 2.0 * std::numbers::pi * p.belt_frequency_hz}});
}

Scenario make_printer_scenario(const PrinterParameters& p) {
    return Scenario(discretize_zoh(printer_model(p), p.ts), pd_controller(p.kp, p.kd, p.ts), p.encoder_resolution,
                    p.noise_std, std::nullopt, p.seed);
}

Scenario default_printer_scenario() { return make_printer_scenario(PrinterParameters{}); }

} // namespace ilcbench
