#include "ilcbench/config.hpp"

#include "ilcbench/error.hpp"
#include "ilcbench/modal.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

namespace ilcbench {

using nlohmann::json;

namespace {

// Collects every violation while walking the document.
class Reader {
public:
    std::vector<ConfigViolation> violations;

    void fail(const std::string& field, const std::string& msg) { violations.push_back({field, msg}); }

    static std::string join(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    bool object(const json& j, const std::string& path) {
        if (!j.is_object()) {
            fail(path.empty() ? "<root>" : path, "expected an object");
            return false;
        }
        return true;
    }

    void allow(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        std::set<std::string> ok(keys.begin(), keys.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!ok.contains(it.key())) fail(join(path, it.key()), "unknown key");
    }

    std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required) {
        const std::string f = join(path, key);
        if (!obj.contains(key)) {
            if (required) fail(f, "required");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(f, "expected a number");
            return std::nullopt;
        }
        const double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(f, "must be finite");
            return std::nullopt;
        }
        return x;
    }

    std::optional<std::uint64_t> count(const json& obj, const std::string& path, const char* key, bool required) {
        const std::string f = join(path, key);
        if (!obj.contains(key)) {
            if (required) fail(f, "required");
            return std::nullopt;
        }
        const json& v = obj.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
            fail(f, "expected a non-negative integer");
            return std::nullopt;
        }
        return v.get<std::uint64_t>();
    }

    std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required) {
        const std::string f = join(path, key);
        if (!obj.contains(key)) {
            if (required) fail(f, "required");
            return std::nullopt;
        }
        if (!obj.at(key).is_string()) {
            fail(f, "expected a string");
            return std::nullopt;
        }
        return obj.at(key).get<std::string>();
    }

    std::optional<bool> boolean(const json& obj, const std::string& path, const char* key) {
        if (!obj.contains(key)) return std::nullopt;
        if (!obj.at(key).is_boolean()) {
            fail(join(path, key), "expected true or false");
            return std::nullopt;
        }
        return obj.at(key).get<bool>();
    }

    std::vector<double> numbers(const json& obj, const std::string& path, const char* key) {
        const std::string f = join(path, key);
        std::vector<double> out;
        if (!obj.contains(key)) {
            fail(f, "required");
            return out;
        }
        const json& v = obj.at(key);
        if (!v.is_array() || v.empty()) {
            fail(f, "expected a non-empty array of numbers");
            return out;
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number() || !std::isfinite(v[i].get<double>())) {
                fail(f + "[" + std::to_string(i) + "]", "expected a finite number");
                continue;
            }
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    void positive(const std::optional<double>& x, const std::string& field) {
        if (x && !(*x > 0.0)) fail(field, "must be > 0");
    }
    void non_negative(const std::optional<double>& x, const std::string& field) {
        if (x && !(*x >= 0.0)) fail(field, "must be >= 0");
    }
};

PlantConfig read_plant(Reader& rd, const json& j, const std::string& path, double ts) {
    PlantConfig p;
    if (!rd.object(j, path)) return p;
    rd.allow(j, path, {"mass_kg", "modes", "numerator", "denominator"});
    const bool modal = j.contains("mass_kg") || j.contains("modes");
    const bool coeffs = j.contains("numerator") || j.contains("denominator");
    if (modal && coeffs) {
        rd.fail(path, "give either mass_kg/modes or numerator/denominator, not both");
        return p;
    }
    if (coeffs) {
        p.numerator = rd.numbers(j, path, "numerator");
        p.denominator = rd.numbers(j, path, "denominator");
        if (!p.denominator.empty() && p.denominator.front() == 0.0)
            rd.fail(Reader::join(path, "denominator[0]"), "leading denominator coefficient must be nonzero");
        return p;
    }
    p.mass_kg = rd.number(j, path, "mass_kg", true);
    rd.positive(p.mass_kg, Reader::join(path, "mass_kg"));
    if (!p.mass_kg) p.mass_kg = 0.0;
    if (j.contains("modes")) {
        const json& modes = j.at("modes");
        const std::string mp = Reader::join(path, "modes");
        if (!modes.is_array()) {
            rd.fail(mp, "expected an array");
            return p;
        }
        for (std::size_t i = 0; i < modes.size(); ++i) {
            const std::string ip = mp + "[" + std::to_string(i) + "]";
            if (!rd.object(modes[i], ip)) continue;
            rd.allow(modes[i], ip, {"residue_per_kg", "damping", "frequency_hz"});
            const auto r = rd.number(modes[i], ip, "residue_per_kg", true);
            const auto z = rd.number(modes[i], ip, "damping", true);
            const auto f = rd.number(modes[i], ip, "frequency_hz", true);
            if (z && !(*z >= 0.0 && *z < 1.0)) rd.fail(ip + ".damping", "must lie in [0, 1)");
            rd.positive(f, ip + ".frequency_hz");
            if (f && ts > 0.0 && *f >= 0.5 / ts)
                rd.fail(ip + ".frequency_hz", "at or above the Nyquist frequency " + std::to_string(0.5 / ts) + " Hz");
            p.modes.push_back({r.value_or(0.0), z.value_or(0.0), f.value_or(0.0)});
        }
    }
    return p;
}

json plant_json(const PlantConfig& p) {
    json j = json::object();
    if (p.is_modal()) {
        j["mass_kg"] = *p.mass_kg;
        j["modes"] = json::array();
        for (const auto& m : p.modes)
            j["modes"].push_back({{"residue_per_kg", m.residue_per_kg}, {"damping", m.damping}, {"frequency_hz", m.frequency_hz}});
    } else {
        j["numerator"] = p.numerator;
        j["denominator"] = p.denominator;
    }
    return j;
}

std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < end; ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace

ScenarioConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        const auto [line, col] = line_column(text, e.byte);
        std::string what = e.what();
        if (const auto pos = what.find("]: "); pos != std::string::npos) what = what.substr(pos + 3);
        throw ConfigError(line, col, what);
    }

    Reader rd;
    ScenarioConfig c{};
    if (!rd.object(doc, "")) throw ConfigError(std::move(rd.violations));
    rd.allow(doc, "", {"name", "ts_s", "plant", "controller", "measurement", "reference", "ilc", "ensemble", "check", "output"});

    if (auto n = rd.string(doc, "", "name", false)) c.name = *n;
    const auto ts = rd.number(doc, "", "ts_s", true);
    rd.positive(ts, "ts_s");
    c.ts_s = ts.value_or(0.0);
    const double tsv = c.ts_s > 0.0 ? c.ts_s : 0.0;

    if (doc.contains("plant")) c.plant = read_plant(rd, doc.at("plant"), "plant", tsv);
    else rd.fail("plant", "required");

    if (!doc.contains("controller")) {
        rd.fail("controller", "required");
    } else if (rd.object(doc.at("controller"), "controller")) {
        const json& j = doc.at("controller");
        rd.allow(j, "controller", {"kp_n_per_m", "kd_n_s_per_m"});
        const auto kp = rd.number(j, "controller", "kp_n_per_m", true);
        const auto kd = rd.number(j, "controller", "kd_n_s_per_m", true);
        rd.positive(kp, "controller.kp_n_per_m");
        rd.non_negative(kd, "controller.kd_n_s_per_m");
        c.controller = {kp.value_or(0.0), kd.value_or(0.0)};
    }

    if (doc.contains("measurement") && rd.object(doc.at("measurement"), "measurement")) {
        const json& j = doc.at("measurement");
        rd.allow(j, "measurement", {"encoder_resolution_m", "noise_std_m", "seed"});
        const auto res = rd.number(j, "measurement", "encoder_resolution_m", false);
        const auto noise = rd.number(j, "measurement", "noise_std_m", false);
        rd.non_negative(res, "measurement.encoder_resolution_m");
        rd.non_negative(noise, "measurement.noise_std_m");
        c.measurement.encoder_resolution_m = res.value_or(0.0);
        c.measurement.noise_std_m = noise.value_or(0.0);
        c.measurement.seed = rd.count(j, "measurement", "seed", false).value_or(0);
    }

    if (!doc.contains("reference")) {
        rd.fail("reference", "required");
    } else if (rd.object(doc.at("reference"), "reference")) {
        const json& j = doc.at("reference");
        const std::string p = "reference";
        rd.allow(j, p, {"order", "displacement_m", "v_max_m_per_s", "a_max_m_per_s2", "j_max_m_per_s3", "s_max_m_per_s4",
                        "lead_in_s", "duration_s"});
        auto& r = c.reference;
        if (auto o = rd.count(j, p, "order", false)) {
            if (*o != 3 && *o != 4) rd.fail("reference.order", "must be 3 or 4");
            r.order = static_cast<int>(*o);
        }
        const auto d = rd.number(j, p, "displacement_m", true);
        if (d && *d == 0.0) rd.fail("reference.displacement_m", "must be nonzero");
        const auto v = rd.number(j, p, "v_max_m_per_s", true);
        const auto a = rd.number(j, p, "a_max_m_per_s2", true);
        const auto jm = rd.number(j, p, "j_max_m_per_s3", true);
        r.s_max_m_per_s4 = rd.number(j, p, "s_max_m_per_s4", r.order == 4);
        rd.positive(v, "reference.v_max_m_per_s");
        rd.positive(a, "reference.a_max_m_per_s2");
        rd.positive(jm, "reference.j_max_m_per_s3");
        rd.positive(r.s_max_m_per_s4, "reference.s_max_m_per_s4");
        const auto lead = rd.number(j, p, "lead_in_s", false);
        rd.non_negative(lead, "reference.lead_in_s");
        const auto dur = rd.number(j, p, "duration_s", true);
        rd.positive(dur, "reference.duration_s");
        r.displacement_m = d.value_or(0.0);
        r.v_max_m_per_s = v.value_or(0.0);
        r.a_max_m_per_s2 = a.value_or(0.0);
        r.j_max_m_per_s3 = jm.value_or(0.0);
        r.lead_in_s = lead.value_or(0.0);
        r.duration_s = dur.value_or(0.0);
    }

    if (doc.contains("ilc") && rd.object(doc.at("ilc"), "ilc")) {
        const json& j = doc.at("ilc");
        rd.allow(j, "ilc", {"learning", "robustness", "alpha", "n_iter", "tail_margin_samples", "basis"});
        auto& il = c.ilc;
        if (j.contains("learning") && rd.object(j.at("learning"), "ilc.learning")) {
            const json& l = j.at("learning");
            const std::string p = "ilc.learning";
            rd.allow(l, p, {"source", "model", "preview_budget_samples", "gain"});
            if (auto s = rd.string(l, p, "source", false)) {
                if (*s != "model_inverse" && *s != "rigid_body" && *s != "zero")
                    rd.fail(p + ".source", "must be one of model_inverse, rigid_body, zero");
                il.learning.source = *s;
            }
            if (l.contains("model")) il.learning.model = read_plant(rd, l.at("model"), p + ".model", tsv);
            if (auto b = rd.count(l, p, "preview_budget_samples", false)) il.learning.preview_budget_samples = *b;
            const auto g = rd.number(l, p, "gain", false);
            rd.positive(g, p + ".gain");
            il.learning.gain = g.value_or(1.0);
            if (il.learning.source == "rigid_body") {
                const PlantConfig& src = il.learning.model ? *il.learning.model : c.plant;
                if (!src.is_modal()) rd.fail(p + ".source", "rigid_body needs a modal plant or model with mass_kg");
            }
        }
        if (j.contains("robustness") && rd.object(j.at("robustness"), "ilc.robustness")) {
            const json& q = j.at("robustness");
            const std::string p = "ilc.robustness";
            rd.allow(q, p, {"policy", "cutoff_level", "target"});
            if (auto s = rd.string(q, p, "policy", false)) {
                if (*s != "identity" && *s != "design") rd.fail(p + ".policy", "must be identity or design");
                il.robustness.policy = *s;
            }
            const auto cl = rd.number(q, p, "cutoff_level", false);
            const auto tg = rd.number(q, p, "target", false);
            if (cl && !(*cl > 0.0 && *cl <= 1.0)) rd.fail(p + ".cutoff_level", "must lie in (0, 1]");
            if (tg && !(*tg > 0.0 && *tg <= 1.0)) rd.fail(p + ".target", "must lie in (0, 1]");
            il.robustness.cutoff_level = cl.value_or(0.9);
            il.robustness.target = tg.value_or(0.95);
        }
        const auto alpha = rd.number(j, "ilc", "alpha", false);
        if (alpha && !(*alpha > 0.0 && *alpha <= 1.0)) rd.fail("ilc.alpha", "must lie in (0, 1]");
        il.alpha = alpha.value_or(1.0);
        if (auto n = rd.count(j, "ilc", "n_iter", false)) {
            if (*n < 1) rd.fail("ilc.n_iter", "must be >= 1");
            il.n_iter = *n;
        }
        if (auto t = rd.count(j, "ilc", "tail_margin_samples", false)) il.tail_margin_samples = *t;
        if (j.contains("basis") && rd.object(j.at("basis"), "ilc.basis")) {
            const json& b = j.at("basis");
            const std::string p = "ilc.basis";
            rd.allow(b, p, {"generators", "w_e", "w_dtheta"});
            BasisConfig bc;
            if (!b.contains("generators") || !b.at("generators").is_array() || b.at("generators").empty()) {
                rd.fail(p + ".generators", "expected a non-empty array of names");
            } else {
                static const std::set<std::string> names{"position", "velocity", "acceleration", "jerk", "snap"};
                for (std::size_t i = 0; i < b.at("generators").size(); ++i) {
                    const json& g = b.at("generators")[i];
                    if (!g.is_string() || !names.contains(g.get<std::string>()))
                        rd.fail(p + ".generators[" + std::to_string(i) + "]",
                                "must be one of position, velocity, acceleration, jerk, snap");
                    else bc.generators.push_back(g.get<std::string>());
                }
            }
            const auto we = rd.number(b, p, "w_e", false);
            const auto wd = rd.number(b, p, "w_dtheta", false);
            rd.positive(we, p + ".w_e");
            rd.non_negative(wd, p + ".w_dtheta");
            bc.w_e = we.value_or(1.0);
            bc.w_dtheta = wd.value_or(0.0);
            il.basis = bc;
        }
    }

    if (doc.contains("ensemble") && rd.object(doc.at("ensemble"), "ensemble")) {
        const json& j = doc.at("ensemble");
        rd.allow(j, "ensemble", {"n_exp"});
        if (auto n = rd.count(j, "ensemble", "n_exp", false)) {
            if (*n < 2) rd.fail("ensemble.n_exp", "must be >= 2");
            c.ensemble.n_exp = *n;
        }
    }

    if (doc.contains("check") && rd.object(doc.at("check"), "check")) {
        const json& j = doc.at("check");
        rd.allow(j, "check", {"band_lo_hz", "band_hi_hz", "grid_points", "require_pass"});
        const auto lo = rd.number(j, "check", "band_lo_hz", false);
        const auto hi = rd.number(j, "check", "band_hi_hz", false);
        rd.positive(lo, "check.band_lo_hz");
        c.check.band_lo_hz = lo.value_or(1.0);
        c.check.band_hi_hz = hi;
        if (hi && !(*hi > c.check.band_lo_hz)) rd.fail("check.band_hi_hz", "must exceed band_lo_hz");
        if (hi && tsv > 0.0 && *hi > 0.5 / tsv * (1.0 + 1e-12)) rd.fail("check.band_hi_hz", "above the Nyquist frequency");
        if (auto g = rd.count(j, "check", "grid_points", false)) {
            if (*g < 2) rd.fail("check.grid_points", "must be >= 2");
            c.check.grid_points = *g;
        }
        if (auto b = rd.boolean(j, "check", "require_pass")) c.check.require_pass = *b;
    }

    if (doc.contains("output") && rd.object(doc.at("output"), "output")) {
        const json& j = doc.at("output");
        rd.allow(j, "output", {"dir", "write_signals"});
        c.output.dir = rd.string(j, "output", "dir", false);
        if (auto b = rd.boolean(j, "output", "write_signals")) c.output.write_signals = *b;
    }

    if (!rd.violations.empty()) throw ConfigError(std::move(rd.violations));

    // semantic checks that need the constructed objects
    try {
        (void)make_scenario(c);
    } catch (const Error& e) {
        rd.fail("plant", e.what());
    }
    try {
        (void)make_reference(c);
    } catch (const Error& e) {
        rd.fail("reference", e.what());
    }
    if (!rd.violations.empty()) throw ConfigError(std::move(rd.violations));
    return c;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const ScenarioConfig& c) {
    json j;
    j["name"] = c.name;
    j["ts_s"] = c.ts_s;
    j["plant"] = plant_json(c.plant);
    j["controller"] = {{"kp_n_per_m", c.controller.kp_n_per_m}, {"kd_n_s_per_m", c.controller.kd_n_s_per_m}};
    j["measurement"] = {{"encoder_resolution_m", c.measurement.encoder_resolution_m},
                        {"noise_std_m", c.measurement.noise_std_m},
                        {"seed", c.measurement.seed}};
    const auto& r = c.reference;
    j["reference"] = {{"order", r.order},
                      {"displacement_m", r.displacement_m},
                      {"v_max_m_per_s", r.v_max_m_per_s},
                      {"a_max_m_per_s2", r.a_max_m_per_s2},
                      {"j_max_m_per_s3", r.j_max_m_per_s3},
                      {"lead_in_s", r.lead_in_s},
                      {"duration_s", r.duration_s}};
    if (r.s_max_m_per_s4) j["reference"]["s_max_m_per_s4"] = *r.s_max_m_per_s4;

    const auto& il = c.ilc;
    json learning = {{"source", il.learning.source},
                     {"preview_budget_samples", il.learning.preview_budget_samples},
                     {"gain", il.learning.gain}};
    if (il.learning.model) learning["model"] = plant_json(*il.learning.model);
    j["ilc"] = {{"learning", learning},
                {"robustness",
                 {{"policy", il.robustness.policy},
                  {"cutoff_level", il.robustness.cutoff_level},
                  {"target", il.robustness.target}}},
                {"alpha", il.alpha},
                {"n_iter", il.n_iter}};
    if (il.tail_margin_samples) j["ilc"]["tail_margin_samples"] = *il.tail_margin_samples;
    if (il.basis)
        j["ilc"]["basis"] = {{"generators", il.basis->generators}, {"w_e", il.basis->w_e}, {"w_dtheta", il.basis->w_dtheta}};

    j["ensemble"] = {{"n_exp", c.ensemble.n_exp}};
    j["check"] = {{"band_lo_hz", c.check.band_lo_hz},
                  {"grid_points", c.check.grid_points},
                  {"require_pass", c.check.require_pass}};
    if (c.check.band_hi_hz) j["check"]["band_hi_hz"] = *c.check.band_hi_hz;
    j["output"] = {{"write_signals", c.output.write_signals}};
    if (c.output.dir) j["output"]["dir"] = *c.output.dir;
    return j.dump(2) + "\n";
}

TransferFunction make_plant(const PlantConfig& p, double ts) {
    if (!p.is_modal()) return TransferFunction(p.numerator, p.denominator, ts);
    std::vector<FlexibleMode> modes;
    for (const auto& m : p.modes)
        modes.push_back({m.residue_per_kg, m.damping, 2.0 * std::numbers::pi * m.frequency_hz});
    return discretize_zoh(make_modal_plant(*p.mass_kg, std::move(modes)), ts);
}

Scenario make_scenario(const ScenarioConfig& c) {
    return Scenario(make_plant(c.plant, c.ts_s), pd_controller(c.controller.kp_n_per_m, c.controller.kd_n_s_per_m, c.ts_s),
                    c.measurement.encoder_resolution_m, c.measurement.noise_std_m, std::nullopt, c.measurement.seed);
}

MotionProfile make_reference(const ScenarioConfig& c) {
    const auto& r = c.reference;
    MotionBounds b{r.v_max_m_per_s, r.a_max_m_per_s2, r.j_max_m_per_s3};
    if (r.s_max_m_per_s4) b.snap = *r.s_max_m_per_s4;
    const MotionProfile move = r.order == 4 ? fourth_order_profile(r.displacement_m, b, c.ts_s)
                                            : third_order_profile(r.displacement_m, b, c.ts_s);
    const auto length = static_cast<std::size_t>(std::llround(r.duration_s / c.ts_s));
    const auto lead = static_cast<std::size_t>(std::llround(r.lead_in_s / c.ts_s));
    return embed(move, lead, length);
}

} // namespace ilcbench
