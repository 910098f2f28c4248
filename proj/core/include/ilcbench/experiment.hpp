#pragma once

#include "ilcbench/config.hpp"
#include "ilcbench/ilc_frequency.hpp"
#include "ilcbench/noncausal_filter.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace ilcbench {

enum class Mode { Check, Run, Analyze, Profile };

Mode mode_from_string(const std::string& verb);

namespace exit_status {
inline constexpr int ok = 0;
inline constexpr int config_error = 2;
inline constexpr int divergence = 3;
inline constexpr int certification_failure = 4;
} // namespace exit_status

struct ExperimentOutcome {
    int exit_code = exit_status::ok;
    std::vector<std::filesystem::path> files;
    std::vector<std::string> messages;
};

struct IlcDesign {
    NoncausalFilter L;
    NoncausalFilter Q;
    std::optional<QDesign> q_design;
};

/// Learning and robustness filters as the config describes them.
IlcDesign make_design(const ScenarioConfig& cfg, const Scenario& sc);

/// --out wins; otherwise output.dir (or the config name) below
/// $ILCBENCH_OUT, falling back to ./ilcbench_out.
std::filesystem::path resolve_output_dir(const ScenarioConfig& cfg,
                                         const std::optional<std::string>& cli_out);

/// Writes the artifacts of `mode` into `out_dir` (created if needed).
///   check:   convergence.json
///   run:     convergence.json, history.csv, run.json, signals/<task>.csv
///   analyze: analysis.json
///   profile: profile.csv
/// Exit code 3 if the iteration diverged, 4 if the certificate failed and
/// check.require_pass is set. Throws Error(ErrorCode::Io) on write failure.
ExperimentOutcome run_experiment(const ScenarioConfig& cfg, Mode mode,
                                 const std::filesystem::path& out_dir);

} // namespace ilcbench
