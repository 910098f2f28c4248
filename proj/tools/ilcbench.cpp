// Command-line front end: ilcbench <check|run|analyze|profile> --config PATH

#include <ilcbench/config.hpp>
#include <ilcbench/error.hpp>
#include <ilcbench/experiment.hpp>

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

void print_config_error(const ilcbench::ConfigError& e) {
    if (e.is_syntax_error()) {
        std::cerr << "config syntax error at line " << e.line() << ", column " << e.column() << ": " << e.what() << "\n";
        return;
    }
    std::cerr << "config has " << e.violations().size() << " violation(s):\n";
    for (const auto& v : e.violations()) std::cerr << "  " << v.field << ": " << v.message << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Iterative learning control design and simulation bench"};
    app.require_subcommand(1);

    std::string config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed_override;
    bool quiet = false;

    const std::pair<const char*, const char*> verbs[] = {
        {"check", "certify monotonic convergence of the configured design"},
        {"run", "run the full learning experiment"},
        {"analyze", "decompose a repeated-task ensemble without learning"},
        {"profile", "write the reference trajectory"},
    };
    for (const auto& [name, help] : verbs) {
        CLI::App* sub = app.add_subcommand(name, help);
        sub->add_option("--config", config_path, "scenario JSON file")->required();
        sub->add_option("--out", out_dir, "output directory (overrides $ILCBENCH_OUT)");
        sub->add_option("--seed-override", seed_override, "replace measurement.seed");
        sub->add_flag("--quiet", quiet, "print nothing on success");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : ilcbench::exit_status::config_error;
    }

    const std::string verb = app.get_subcommands().front()->get_name();
    ilcbench::ScenarioConfig cfg;
    try {
        cfg = ilcbench::load_config(config_path);
    } catch (const ilcbench::ConfigError& e) {
        print_config_error(e);
        return ilcbench::exit_status::config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return ilcbench::exit_status::config_error;
    }
    if (seed_override) cfg.measurement.seed = *seed_override;

    try {
        const auto dir = ilcbench::resolve_output_dir(cfg, out_dir);
        const ilcbench::ExperimentOutcome outcome =
            ilcbench::run_experiment(cfg, ilcbench::mode_from_string(verb), dir);
        if (!quiet || outcome.exit_code != 0) {
            for (const auto& m : outcome.messages) std::cout << m << "\n";
            for (const auto& f : outcome.files) std::cout << "wrote " << f.string() << "\n";
        }
        return outcome.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
