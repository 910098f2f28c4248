#include "ilcbench/experiment.hpp"

#include "ilcbench/error.hpp"
#include "ilcbench/frf.hpp"
#include "ilcbench/ilc_basis.hpp"
#include "ilcbench/lifted.hpp"
#include "ilcbench/repro_analysis.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>

namespace ilcbench {

using nlohmann::json;
namespace fs = std::filesystem;

Mode mode_from_string(const std::string& verb) {
    if (verb == "check") return Mode::Check;
    if (verb == "run") return Mode::Run;
    if (verb == "analyze") return Mode::Analyze;
    if (verb == "profile") return Mode::Profile;
    throw Error(ErrorCode::InvalidParameter, "unknown mode '" + verb + "'");
}

IlcDesign make_design(const ScenarioConfig& cfg, const Scenario& sc) {
    const double ts = cfg.ts_s;
    const auto& lc = cfg.ilc.learning;
    NoncausalFilter L = NoncausalFilter::zero(ts);
    if (lc.source == "rigid_body") {
        const PlantConfig& src = lc.model ? *lc.model : cfg.plant;
        if (!src.is_modal()) throw Error(ErrorCode::InvalidParameter, "rigid_body learning needs a modal model");
        L = rigid_body_learning_filter(*src.mass_kg, sc.controller());
    } else if (lc.source == "model_inverse") {
        const TransferFunction gs = lc.model ? closed_loop_maps(make_plant(*lc.model, ts), sc.controller()).process_sensitivity
                                             : sc.process_sensitivity();
        L = design_inverse_L(gs, lc.preview_budget_samples).filter;
    }
    if (lc.gain != 1.0) L = L.scaled(lc.gain);

    IlcDesign d{L, NoncausalFilter::identity(ts), std::nullopt};
    if (cfg.ilc.robustness.policy == "design") {
        const auto grid = log_grid(2.0 * std::numbers::pi, std::numbers::pi / ts, cfg.check.grid_points);
        const double hi = cfg.check.band_hi_hz.value_or(0.5 / ts);
        QDesignOptions opt;
        opt.cutoff_level = cfg.ilc.robustness.cutoff_level;
        opt.target = cfg.ilc.robustness.target;
        d.q_design = design_Q(freq_response(sc.process_sensitivity(), grid), L, band_mask(grid, cfg.check.band_lo_hz, hi), opt);
        d.Q = d.q_design->filter;
    }
    return d;
}

fs::path resolve_output_dir(const ScenarioConfig& cfg, const std::optional<std::string>& cli_out) {
    if (cli_out) return fs::path(*cli_out);
    const char* env = std::getenv("ILCBENCH_OUT");
    const fs::path root = env && *env ? fs::path(env) : fs::path("ilcbench_out");
    const fs::path sub = cfg.output.dir ? fs::path(*cfg.output.dir) : fs::path(cfg.name);
    return sub.is_absolute() ? sub : root / sub;
}

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_file(const fs::path& path, const std::string& content, ExperimentOutcome& out) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::Io, "cannot write '" + path.string() + "'");
    f << content;
    if (!f) throw Error(ErrorCode::Io, "write failed for '" + path.string() + "'");
    out.files.push_back(path);
}

json optional_index(const std::optional<std::size_t>& x) { return x ? json(*x) : json(nullptr); }

json report_json(const ConvergenceReport& rep) {
    json rho = json::array();
    for (double r : rep.rho) rho.push_back(std::isfinite(r) ? json(r) : json(nullptr));
    return {{"grid_rad_s", rep.grid},
            {"rho", rho},
            {"mask", rep.mask},
            {"sup_rho", rep.sup_rho},
            {"omega_at_sup_rad_s", rep.omega_at_sup},
            {"verdict", rep.pass() ? "pass" : "fail"}};
}

struct Certified {
    ConvergenceReport report;
    IlcDesign design;
};

std::optional<Certified> certify(const ScenarioConfig& cfg, const Scenario& sc, const fs::path& dir, ExperimentOutcome& out) {
    const double ts = cfg.ts_s;
    json doc;
    std::optional<Certified> result;
    try {
        IlcDesign design = make_design(cfg, sc);
        const auto grid = log_grid(2.0 * std::numbers::pi, std::numbers::pi / ts, cfg.check.grid_points);
        const auto mask = band_mask(grid, cfg.check.band_lo_hz, cfg.check.band_hi_hz.value_or(0.5 / ts));
        ConvergenceReport rep = check_convergence(freq_response(sc.process_sensitivity(), grid), design.L, design.Q, mask);
        doc = report_json(rep);
        doc["l_preview_samples"] = design.L.preview();
        doc["l_taps"] = design.L.size();
        doc["q_policy"] = cfg.ilc.robustness.policy;
        doc["q_preview_samples"] = design.Q.preview();
        if (design.q_design && design.q_design->passband_edge)
            doc["q_passband_edge_rad_s"] = *design.q_design->passband_edge;
        out.messages.push_back(std::string("sup rho = ") + num(rep.sup_rho) + " (" + (rep.pass() ? "pass" : "fail") + ")");
        result = Certified{std::move(rep), std::move(design)};
    } catch (const InfeasibleError& e) {
        doc = {{"verdict", "fail"}, {"error", e.what()}, {"worst_frequency_rad_s", e.worst_frequency()}};
        out.messages.push_back(e.what());
    } catch (const PreviewBudgetError& e) {
        doc = {{"verdict", "fail"}, {"error", e.what()}, {"required_preview_samples", e.required()}};
        out.messages.push_back(e.what());
    }
    write_file(dir / "convergence.json", doc.dump(2) + "\n", out);
    return result;
}

void run_mode(const ScenarioConfig& cfg, const Scenario& sc, const fs::path& dir, ExperimentOutcome& out) {
    const auto cert = certify(cfg, sc, dir, out);
    if (!cert) {
        out.exit_code = exit_status::certification_failure;
        return;
    }
    const MotionProfile ref = make_reference(cfg);
    const Signal& r = ref.position;
    const double ts = cfg.ts_s;

    IlcOptions opt;
    opt.alpha = cfg.ilc.alpha;
    opt.n_iter = cfg.ilc.n_iter;
    opt.tail_margin = cfg.ilc.tail_margin_samples;
    opt.keep_signals = cfg.output.write_signals;
    const TrialHistory h = run_ilc(sc, r, cert->design.L, cert->design.Q, opt);

    std::string csv = "task,e_norm_2,f_norm_2\n";
    for (std::size_t j = 0; j < h.tasks(); ++j)
        csv += std::to_string(j) + "," + num(h.error_norms[j]) + "," + num(h.feedforward_norms[j]) + "\n";
    write_file(dir / "history.csv", csv, out);

    if (cfg.output.write_signals) {
        fs::create_directories(dir / "signals");
        for (std::size_t j = 0; j < h.errors.size(); ++j) {
            std::string s = "t,r,e,f\n";
            for (std::size_t k = 0; k < r.size(); ++k)
                s += num(static_cast<double>(k) * ts) + "," + num(r[k]) + "," + num(h.errors[j][k]) + "," +
                     num(h.feedforward[j][k]) + "\n";
            write_file(dir / "signals" / (std::to_string(j) + ".csv"), s, out);
        }
    }

    json run = {{"tasks", h.tasks()},
                {"e0_norm_2", h.error_norms.front()},
                {"final_e_norm_2", h.error_norms.back()},
                {"diverged", h.diverged},
                {"diverged_at", optional_index(h.diverged_at)},
                {"first_rising_iteration", optional_index(h.first_rising)},
                {"tail_margin_samples", h.tail_margin},
                {"sup_rho", cert->report.sup_rho},
                {"verdict", cert->report.pass() ? "pass" : "fail"}};

    if (cfg.ilc.basis) {
        BasisSpec spec;
        for (const auto& g : cfg.ilc.basis->generators) spec.generators.push_back(basis_generator_from_string(g));
        const auto& lc = cfg.ilc.learning;
        const TransferFunction gs = lc.model ? closed_loop_maps(make_plant(*lc.model, ts), sc.controller()).process_sensitivity
                                             : sc.process_sensitivity();
        const BasisHistory b = run_basis_ilc(sc, r, build_basis(ref, spec), lifted_matrix(gs, r.size()), cfg.ilc.n_iter,
                                             {cfg.ilc.basis->w_e, cfg.ilc.basis->w_dtheta});
        std::string bcsv = "task,e_norm_2";
        for (const auto& g : cfg.ilc.basis->generators) bcsv += ",theta_" + g;
        bcsv += "\n";
        for (std::size_t j = 0; j < b.error_norms.size(); ++j) {
            bcsv += std::to_string(j) + "," + num(b.error_norms[j]);
            for (Eigen::Index i = 0; i < b.thetas[j].size(); ++i) bcsv += "," + num(b.thetas[j](i));
            bcsv += "\n";
        }
        write_file(dir / "basis_history.csv", bcsv, out);
        run["basis_final_e_norm_2"] = b.error_norms.back();
    }
    write_file(dir / "run.json", run.dump(2) + "\n", out);

    if (h.diverged) {
        out.exit_code = exit_status::divergence;
        out.messages.push_back("iteration diverged at task " + std::to_string(*h.diverged_at));
    } else if (!cert->report.pass() && cfg.check.require_pass) {
        out.exit_code = exit_status::certification_failure;
    }
    if (h.first_rising) out.messages.push_back("first rising iteration: " + std::to_string(*h.first_rising));
}

void analyze_mode(const ScenarioConfig& cfg, const Scenario& sc, const fs::path& dir, ExperimentOutcome& out) {
    const MotionProfile ref = make_reference(cfg);
    const Signal zero = Signal::zeros(ref.size(), cfg.ts_s);
    std::vector<Signal> errors;
    for (std::size_t j = 0; j < cfg.ensemble.n_exp; ++j) errors.push_back(run_task(sc, ref.position, zero, j).e);
    const ErrorEnsemble ens(std::move(errors));
    const PerformanceReport rep = performance_bound(ens);

    double total = 0.0, resid = 0.0;
    for (double x : rep.task_norms) total += x * x;
    for (double x : rep.residual_norms) resid += x * x;
    const json doc = {{"n_exp", ens.size()},
                      {"samples", ens.length()},
                      {"mean_norm_2", rep.mean_norm},
                      {"task_norms_2", rep.task_norms},
                      {"residual_norms_2", rep.residual_norms},
                      {"residual_rms_2", rep.residual_rms},
                      {"improvement_factor", rep.unbounded ? json(nullptr) : json(rep.improvement_factor)},
                      {"unbounded", rep.unbounded},
                      {"energy",
                       {{"total", total},
                        {"reproducible", static_cast<double>(ens.size()) * rep.mean_norm * rep.mean_norm},
                        {"residual", resid}}}};
    write_file(dir / "analysis.json", doc.dump(2) + "\n", out);
    out.messages.push_back("improvement factor " + (rep.unbounded ? std::string("unbounded") : num(rep.improvement_factor)));
}

void profile_mode(const ScenarioConfig& cfg, const fs::path& dir, ExperimentOutcome& out) {
    const MotionProfile p = make_reference(cfg);
    std::string csv = p.snap ? "t,pos,vel,acc,jerk,snap\n" : "t,pos,vel,acc,jerk\n";
    for (std::size_t k = 0; k < p.size(); ++k) {
        csv += num(static_cast<double>(k) * cfg.ts_s) + "," + num(p.position[k]) + "," + num(p.velocity[k]) + "," +
               num(p.acceleration[k]) + "," + num(p.jerk[k]);
        if (p.snap) csv += "," + num((*p.snap)[k]);
        csv += "\n";
    }
    write_file(dir / "profile.csv", csv, out);
}

} // namespace

ExperimentOutcome run_experiment(const ScenarioConfig& cfg, Mode mode, const fs::path& out_dir) {
    ExperimentOutcome out;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::Io, "cannot create '" + out_dir.string() + "': " + ec.message());

    const Scenario sc = make_scenario(cfg);
    switch (mode) {
    case Mode::Check: {
        const auto cert = certify(cfg, sc, out_dir, out);
        if ((!cert || !cert->report.pass()) && cfg.check.require_pass) out.exit_code = exit_status::certification_failure;
        break;
    }
    case Mode::Run: run_mode(cfg, sc, out_dir, out); break;
    case Mode::Analyze: analyze_mode(cfg, sc, out_dir, out); break;
    case Mode::Profile: profile_mode(cfg, out_dir, out); break;
    }
    return out;
}

} // namespace ilcbench
