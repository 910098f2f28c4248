#pragma once

#include "ilcbench/plant_lab.hpp"
#include "ilcbench/trajectory.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace ilcbench {

struct ModeConfig {
    double residue_per_kg;
    double damping;
    double frequency_hz;

    bool operator==(const ModeConfig&) const = default;
};

/// Either a modal model (mass_kg + modes) or raw delay-operator coefficients.
struct PlantConfig {
    std::optional<double> mass_kg;
    std::vector<ModeConfig> modes;
    std::vector<double> numerator;
    std::vector<double> denominator;

    bool is_modal() const noexcept { return mass_kg.has_value(); }
    bool operator==(const PlantConfig&) const = default;
};

struct ControllerConfig {
    double kp_n_per_m;
    double kd_n_s_per_m;

    bool operator==(const ControllerConfig&) const = default;
};

struct MeasurementConfig {
    double encoder_resolution_m = 0.0;
    double noise_std_m = 0.0;
    std::uint64_t seed = 0;

    bool operator==(const MeasurementConfig&) const = default;
};

struct ReferenceConfig {
    int order = 4;
    double displacement_m;
    double v_max_m_per_s;
    double a_max_m_per_s2;
    double j_max_m_per_s3;
    std::optional<double> s_max_m_per_s4;
    double lead_in_s = 0.0;
    double duration_s;

    bool operator==(const ReferenceConfig&) const = default;
};

struct LearningConfig {
    /// "model_inverse", "rigid_body" or "zero".
    std::string source = "model_inverse";
    /// Model to invert; the true plant when absent.
    std::optional<PlantConfig> model;
    std::size_t preview_budget_samples = 2000;
    double gain = 1.0;

    bool operator==(const LearningConfig&) const = default;
};

struct RobustnessConfig {
    /// "identity" or "design".
    std::string policy = "identity";
    double cutoff_level = 0.9;
    double target = 0.95;

    bool operator==(const RobustnessConfig&) const = default;
};

struct BasisConfig {
    std::vector<std::string> generators;
    double w_e = 1.0;
    double w_dtheta = 0.0;

    bool operator==(const BasisConfig&) const = default;
};

struct IlcConfig {
    LearningConfig learning;
    RobustnessConfig robustness;
    double alpha = 1.0;
    std::size_t n_iter = 10;
    std::optional<std::size_t> tail_margin_samples;
    std::optional<BasisConfig> basis;

    bool operator==(const IlcConfig&) const = default;
};

struct EnsembleConfig {
    std::size_t n_exp = 10;

    bool operator==(const EnsembleConfig&) const = default;
};

struct CheckConfig {
    double band_lo_hz = 1.0;
    /// Upper band edge; Nyquist when absent.
    std::optional<double> band_hi_hz;
    std::size_t grid_points = 400;
    bool require_pass = true;

    bool operator==(const CheckConfig&) const = default;
};

struct OutputConfig {
    /// Relative paths resolve against the output root.
    std::optional<std::string> dir;
    bool write_signals = false;

    bool operator==(const OutputConfig&) const = default;
};

struct ScenarioConfig {
    std::string name = "experiment";
    double ts_s;
    PlantConfig plant;
    ControllerConfig controller;
    MeasurementConfig measurement;
    ReferenceConfig reference;
    IlcConfig ilc;
    EnsembleConfig ensemble;
    CheckConfig check;
    OutputConfig output;

    bool operator==(const ScenarioConfig&) const = default;
};

/// Parses and validates a JSON config. Throws ConfigError: with line/column
/// for malformed JSON, otherwise with every violation found. Unknown keys
/// are violations.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

/// Canonical JSON: every field written, keys sorted, two-space indent.
std::string serialize_config(const ScenarioConfig& cfg);

Scenario make_scenario(const ScenarioConfig& cfg);
TransferFunction make_plant(const PlantConfig& plant, double ts);
/// The move embedded in a record of duration_s after lead_in_s of rest.
MotionProfile make_reference(const ScenarioConfig& cfg);

} // namespace ilcbench
