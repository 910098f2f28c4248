#include "support.hpp"

#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace ilcbench;

namespace {

std::string config_dir() {
    const char* dir = std::getenv("ILCBENCH_CONFIG_DIR");
    REQUIRE(dir != nullptr);
    return dir;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const char* kMinimal = R"({
  "ts_s": 0.001,
  "plant": { "mass_kg": 2.0 },
  "controller": { "kp_n_per_m": 500.0, "kd_n_s_per_m": 40.0 },
  "reference": {
    "displacement_m": 0.05, "v_max_m_per_s": 0.4, "a_max_m_per_s2": 4.0,
    "j_max_m_per_s3": 200.0, "s_max_m_per_s4": 20000.0, "duration_s": 1.0
  }
})";

std::vector<std::string> violated_fields(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        CHECK_FALSE(e.is_syntax_error());
        std::vector<std::string> out;
        for (const auto& v : e.violations()) out.push_back(v.field);
        return out;
    }
    FAIL("config was accepted");
    return {};
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
    return std::find(v.begin(), v.end(), s) != v.end();
}

std::string replace(std::string text, const std::string& from, const std::string& to) {
    const auto pos = text.find(from);
    REQUIRE(pos != std::string::npos);
    return text.replace(pos, from.size(), to);
}

} // namespace

TEST_CASE("minimal config takes defaults") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.name == "experiment");
    CHECK(cfg.reference.order == 4);
    CHECK(cfg.ilc.learning.source == "model_inverse");
    CHECK(cfg.ilc.robustness.policy == "identity");
    CHECK(cfg.ilc.n_iter == 10);
    CHECK(cfg.ensemble.n_exp == 10);
    CHECK(cfg.check.require_pass);
    CHECK_FALSE(cfg.output.write_signals);
}

TEST_CASE("serialization round trip") {
    for (const char* name : {"printer.json", "printer_rigid_body.json", "printer_basis.json"}) {
        CAPTURE(name);
        const auto cfg = load_config(config_dir() + "/" + name);
        const auto text = serialize_config(cfg);
        CHECK(parse_config(text) == cfg);
        CHECK(serialize_config(parse_config(text)) == text);
    }
    CHECK(parse_config(serialize_config(parse_config(kMinimal))) == parse_config(kMinimal));
}

TEST_CASE("shipped printer config is the canonical scenario") {
    const auto cfg = load_config(config_dir() + "/printer.json");
    CHECK(make_scenario(cfg) == default_printer_scenario());
    const auto ref = make_reference(cfg);
    CHECK(ref.size() == 2000);
    CHECK(ref.position == testing::canonical_profile().position);
}

TEST_CASE("semantic violations") {
    SUBCASE("negative mass names the field") {
        const auto fields = violated_fields(replace(kMinimal, "\"mass_kg\": 2.0", "\"mass_kg\": -1.0"));
        CHECK(contains(fields, "plant.mass_kg"));
    }
    SUBCASE("unknown keys are rejected") {
        const auto fields = violated_fields(replace(kMinimal, "\"ts_s\": 0.001,", "\"ts_s\": 0.001, \"tss\": 1,"));
        CHECK(contains(fields, "tss"));
    }
    SUBCASE("every violation is reported") {
        auto text = replace(kMinimal, "\"mass_kg\": 2.0", "\"mass_kg\": 0.0");
        text = replace(text, "\"kp_n_per_m\": 500.0", "\"kp_n_per_m\": -5.0");
        text = replace(text, "\"displacement_m\": 0.05", "\"displacement_m\": 0.0");
        const auto fields = violated_fields(text);
        CHECK(fields.size() >= 3);
        CHECK(contains(fields, "plant.mass_kg"));
        CHECK(contains(fields, "controller.kp_n_per_m"));
        CHECK(contains(fields, "reference.displacement_m"));
    }
    SUBCASE("missing required fields") {
        const auto fields = violated_fields(R"({"ts_s": 0.001})");
        CHECK(contains(fields, "plant"));
        CHECK(contains(fields, "controller"));
        CHECK(contains(fields, "reference"));
    }
    SUBCASE("type errors") {
        const auto fields = violated_fields(replace(kMinimal, "\"ts_s\": 0.001", "\"ts_s\": \"fast\""));
        CHECK(contains(fields, "ts_s"));
    }
    SUBCASE("unknown learning source") {
        const auto text = replace(kMinimal, "\"ts_s\": 0.001,", "\"ts_s\": 0.001, \"ilc\": {\"learning\": {\"source\": \"oracle\"}},");
        CHECK(contains(violated_fields(text), "ilc.learning.source"));
    }
}

TEST_CASE("syntax errors carry a position") {
    const std::string text = "{\n  \"ts_s\": 0.001,\n  \"plant\": { \"mass_kg\" 1.0 }\n}";
    try {
        (void)parse_config(text);
        FAIL("malformed JSON accepted");
    } catch (const ConfigError& e) {
        CHECK(e.is_syntax_error());
        CHECK(e.line() == 3);
        CHECK(e.column() > 10);
    }
}

TEST_CASE("load_config") {
    CHECK_THROWS_AS(load_config(config_dir() + "/does_not_exist.json"), Error);
    const auto text = read_file(config_dir() + "/printer.json");
    CHECK(load_config(config_dir() + "/printer.json") == parse_config(text));
}

TEST_CASE("raw coefficient plant") {
    auto text = replace(kMinimal, R"("plant": { "mass_kg": 2.0 })",
                        R"("plant": { "numerator": [0.0, 1e-6], "denominator": [1.0, -0.9] })");
    const auto cfg = parse_config(text);
    CHECK_FALSE(cfg.plant.is_modal());
    const auto g = make_plant(cfg.plant, 0.001);
    CHECK(g.num() == std::vector<double>{0.0, 1e-6});
    CHECK(contains(violated_fields(replace(text, R"("denominator": [1.0, -0.9])", R"("denominator": [0.0, 1.0])")),
                   "plant.denominator[0]"));
}
