#include <doctest.h>

#include <filesystem>

#include "satqkd/error.hpp"
#include "satqkd/io.hpp"
#include "satqkd/scenario.hpp"

using namespace satqkd;
using namespace satqkd::scenario;
namespace fs = std::filesystem;

namespace {
fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("satqkd_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string error_field(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field() + "|" + e.what();
    }
    return "no error";
}
}  // namespace

TEST_CASE("empty document yields the defaults") {
    const auto blank = parse_config("");
    const auto empty = parse_config("{}");
    const ScenarioConfig defaults;
    CHECK(to_json(blank) == to_json(defaults));
    CHECK(to_json(empty) == to_json(defaults));
    CHECK(blank.link.orbit.altitude_m == 750e3);
    CHECK(blank.link.transmitter.divergence_half_angle_rad == 48.5e-6);
    CHECK(blank.link.orbit.min_elevation_rad == deg_to_rad(10.0));
}

TEST_CASE("validation errors name the field") {
    auto cfg = parse_config(R"({"orbit": {"altitude_m": -1}})");
    try {
        cfg.validate();
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.field()).rfind("orbit.altitude", 0) == 0);
    }
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK(error_field(R"({"foo": 1})").find("foo") != std::string::npos);
    CHECK(error_field(R"({"turbulence": {"hv_b": 1}})").find("turbulence.hv_b") != std::string::npos);
    CHECK(error_field(R"({"e91": {"angles_deg": {"a2": 1}}})").find("e91.angles_deg.a2") != std::string::npos);
}

TEST_CASE("type and enum errors") {
    CHECK(error_field(R"({"orbit": {"altitude_m": "high"}})").rfind("orbit.altitude_m|", 0) == 0);
    CHECK(error_field(R"({"scenario": "qkd"})").find("budget, bb84, e91, sweep") != std::string::npos);
    CHECK(error_field(R"({"bb84": {"n_trials": 1.5}})").rfind("bb84.n_trials|", 0) == 0);
    CHECK(parse_config(R"({"bb84": {"n_trials": 1e5}})").bb84.n_trials == 100000);
}

TEST_CASE("syntax errors report line and column") {
    const std::string msg = error_field("{\n  \"orbit\": {\n    \"altitude_m\": 1,\n  }\n}");
    CHECK(msg.find("<config>:4:3") != std::string::npos);
}

TEST_CASE("config round-trips through its JSON form") {
    const auto cfg = parse_config(R"({
        "seed": 99, "scenario": "e91",
        "orbit": {"altitude_m": 600000, "min_elevation_deg": 12.3},
        "transmitter": {"divergence_half_angle_urad": 47.123},
        "turbulence": {"pointing_error_urad": 0.9, "pointing_beam_divergence_urad": 2.5},
        "e91": {"angles_deg": {"b1": 21.7}},
        "sweep": {"altitudes_km": [450, 550.5]}
    })");
    const auto echo = to_json(cfg).dump();
    const auto again = parse_config(echo);
    CHECK(to_json(again).dump() == echo);
    CHECK(again.link.orbit.min_elevation_rad == cfg.link.orbit.min_elevation_rad);
    CHECK(again.link.turbulence.pointing_beam_divergence_rad == cfg.link.turbulence.pointing_beam_divergence_rad);
    CHECK(again.e91.angles.b1 == cfg.e91.angles.b1);
    CHECK(again.sweep_altitudes_m == cfg.sweep_altitudes_m);
    CHECK(to_json(cfg)["orbit"]["min_elevation_deg"].get<double>() == 12.3);
}

TEST_CASE("budget serialization round-trips bit-identically") {
    const link::LinkModel model{link::LinkConfig{}};
    const auto b = model.budget(deg_to_rad(37.0), 0.4);
    const auto text = budget_entries_to_json(b).dump();
    const auto back = budget_from_json(Json::parse(text));
    CHECK(back.total_db == b.total_db);
    CHECK(back.elevation_rad == b.elevation_rad);
    REQUIRE(back.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < b.entries.size(); ++i) CHECK(back.entries[i] == b.entries[i]);
}

TEST_CASE("budget scenario writes ten channels and a total") {
    ScenarioConfig cfg;
    cfg.output_dir = scratch("budget");
    const auto report = run(cfg);
    const auto doc = Json::parse(io::read_file(cfg.output_dir / "budget.json"));
    CHECK(doc["channels"].size() == 10);
    CHECK(doc.contains("total_db"));
    CHECK(doc["metadata"].contains("detection_probability"));
    CHECK(report.summary.find("mean_off_pointing") != std::string::npos);
    CHECK(fs::exists(cfg.output_dir / "config_echo.json"));
}

TEST_CASE("sweep writes one budget per altitude, ordered by loss") {
    ScenarioConfig cfg;
    cfg.scenario = ScenarioKind::sweep;
    cfg.output_dir = scratch("sweep");
    run(cfg);
    double prev = 0.0;
    for (const char* name : {"400km", "500km", "600km", "750km"}) {
        const auto doc = Json::parse(io::read_file(cfg.output_dir / ("budget_" + std::string(name) + ".json")));
        const double g = doc["channels"]["geometric"].get<double>();
        CHECK(g > prev);
        prev = g;
    }
}

TEST_CASE("scenarios are byte-deterministic and the echo reproduces them") {
    for (auto kind : {ScenarioKind::budget, ScenarioKind::bb84, ScenarioKind::e91, ScenarioKind::sweep}) {
        CAPTURE(to_string(kind));
        ScenarioConfig cfg;
        cfg.scenario = kind;
        cfg.seed = 2024;
        cfg.e91.n_pairs_per_step = 10000;
        cfg.output_dir = scratch("det");
        const auto first = run(cfg);
        std::vector<std::string> contents;
        for (const auto& f : first.files) contents.push_back(io::read_file(f));

        const auto second = run(cfg);
        for (std::size_t i = 0; i < second.files.size(); ++i) CHECK(io::read_file(second.files[i]) == contents[i]);

        auto echoed = load_config(cfg.output_dir / "config_echo.json");
        const auto third = run(echoed);
        REQUIRE(third.files.size() == first.files.size());
        for (std::size_t i = 0; i < third.files.size(); ++i) CHECK(io::read_file(third.files[i]) == contents[i]);
    }
}

TEST_CASE("structured errors") {
    const auto j = error_to_json(ConfigError("orbit.altitude_m", "must be > 0"));
    CHECK(j["error"]["type"] == "config_error");
    CHECK(j["error"]["field"] == "orbit.altitude_m");
    const auto c = error_to_json(ChannelError("geometric", "bad"));
    CHECK(c["error"]["channel"] == "geometric");
}

TEST_CASE("number formatting") {
    CHECK(io::format_number(28.209041970052513) == "28.209");
    CHECK(io::format_number(0.00175514321) == "0.00175514");
    CHECK(io::format_number(-0.0) == "0");
    CHECK(io::format_number(1.5e8) == "1.5e+08");
    CHECK(io::round_sig6(3.14159265) == 3.14159);
    CHECK_THROWS_AS(io::format_number(std::nan("")), NumericError);
}
