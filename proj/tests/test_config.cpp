#include <doctest.h>

#include <algorithm>
#include <string>

#include "ffst/config.hpp"

using namespace ffst;

namespace {

std::vector<std::string> errors_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.errors;
    }
    return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
    return std::ranges::any_of(errs, [&](const std::string& e) { return e.find(what) != std::string::npos; });
}

}  // namespace

TEST_CASE("minimal sta config fills defaults") {
    auto c = parse_config(R"({"scenario": "sta", "T_F": 20, "delta_omega0": 30})");
    CHECK(c.scenario == Scenario::sta);
    CHECK(c.T_F == 20.0);
    CHECK(c.T == 1.0);
    CHECK(c.n_phase == 512);
    CHECK(c.default_support == Support::span);
    CHECK(c.baselines == std::vector<std::string>{"unmodified"});
    CHECK_FALSE(c.plans.has_value());
    CHECK(c.formats == std::vector<std::string>{"csv", "json"});
}

TEST_CASE("negative T_F names the field") {
    auto errs = errors_of(R"({"scenario": "sta", "T_F": -1})");
    REQUIRE(errs.size() == 1);
    CHECK(errs[0].find("T_F") == 0);
}

TEST_CASE("all problems are reported together") {
    auto errs = errors_of(R"({
        "scenario": "accelerate", "T_F": "fast", "colour": 3,
        "grid": {"n_phase": 64, "n_step": 10},
        "bridge_bounds": {"min_width": -1},
        "baselines": ["unmodified"]
    })");
    CHECK(errs.size() == 6);
    CHECK(mentions(errs, "T_F: expected a number"));
    CHECK(mentions(errs, "colour: unknown key"));
    CHECK(mentions(errs, "grid.n_phase: must be at least 256"));
    CHECK(mentions(errs, "grid.n_step: unknown key"));
    CHECK(mentions(errs, "bridge_bounds.min_width"));
    CHECK(mentions(errs, "baselines[0]"));
}

TEST_CASE("scenario requirements") {
    CHECK(mentions(errors_of(R"({"scenario": "decelerate"})"), "T_F: required"));
    CHECK(mentions(errors_of(R"({"T_F": 1})"), "scenario: required"));
    CHECK(mentions(errors_of(R"({"scenario": "warp"})"), "scenario: must be one of"));
    CHECK(mentions(errors_of(R"({"scenario": "device-map"})"), "device.control_file"));
    CHECK(mentions(errors_of(R"({"scenario": "accelerate", "T_F": 1.2})"), "T_F <= T"));
    CHECK(mentions(errors_of(R"({"scenario": "sta", "T_F": 5, "schema_version": 2})"), "unsupported version"));
    CHECK(mentions(errors_of("{\"scenario\": "), "document"));
    CHECK(mentions(errors_of("[1, 2]"), "expected an object"));
}

TEST_CASE("crossing plans") {
    auto c = parse_config(R"({
        "scenario": "decelerate", "T_F": 1.1,
        "crossing_plans": [
            {"name": "VT-A", "crossings": [{"gap": 1, "to": "Y"}]},
            {"name": "VT-B", "start": "X", "crossings": [{"gap": 0, "to": "Y", "support": "span"}]}
        ]
    })");
    REQUIRE(c.plans);
    REQUIRE(c.plans->size() == 2);
    CHECK((*c.plans)[0].name == "VT-A");
    CHECK((*c.plans)[0].crossings[0].gap == 1);
    CHECK((*c.plans)[0].crossings[0].support == Support::local);
    CHECK((*c.plans)[1].crossings[0].support == Support::span);

    auto a = parse_config(R"({"scenario": "accelerate", "T_F": 0.9, "crossing_plans": "auto"})");
    REQUIRE(a.plans);
    CHECK(a.plans->empty());

    auto errs = errors_of(R"({"scenario": "decelerate", "T_F": 1.1,
        "crossing_plans": [{"name": "p", "crossings": [{"gap": -1, "to": "Z"}, {"to": "X"}]},
                           {"name": "p", "crossings": []}]})");
    CHECK(mentions(errs, "crossing_plans[0].crossings[0].gap"));
    CHECK(mentions(errs, "crossing_plans[0].crossings[0].to"));
    CHECK(mentions(errs, "crossing_plans[0].crossings[1].gap: required"));
    CHECK(mentions(errs, "duplicate plan name"));
}

TEST_CASE("device and output blocks") {
    auto c = parse_config(R"({
        "scenario": "accelerate", "T_F": 0.9,
        "device": {"ej_max": 31, "g_ghz": 0.01, "omega2_ghz": 6.4, "anharmonicity_ghz": -0.2},
        "output": {"directory": "x", "formats": ["json"], "beta_map": false},
        "optimizer": {"max_evaluations": 100, "tolerance": 1e-5},
        "sweep_T_F": [0.8, 0.9]
    })");
    REQUIRE(c.device);
    CHECK(c.device->transmon.ej_max == 31.0);
    CHECK_FALSE(c.device->ecc_given);
    CHECK(*c.device->omega2_ghz == 6.4);
    CHECK(c.output_dir == "x");
    CHECK_FALSE(c.write_beta_map);
    CHECK(c.optimizer.max_evaluations == 100);
    CHECK(c.sweep_T_F.size() == 2);
    auto errs = errors_of(R"({"scenario": "accelerate", "T_F": 0.9,
        "device": {"d": 1.5, "anharmonicity_ghz": 0}, "output": {"formats": ["xml"]}, "sweep_T_F": [0]})");
    CHECK(errs.size() == 4);
}
