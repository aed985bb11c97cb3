#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ffst/device.hpp"
#include "ffst/itt.hpp"
#include "ffst/nelder_mead.hpp"
#include "ffst/sta.hpp"

namespace ffst {

enum class Scenario { accelerate, decelerate, sta, reference_only, device_map };

std::string to_string(Scenario s);

struct DeviceConfig {
    device::TransmonSpec transmon;
    bool ecc_given = false;
    double g_ghz = 0.009;
    std::optional<double> omega2_ghz;  // defaults to the fixed qubit's frequency
    std::string control = "itt";       // which synthesized control to map
    std::string control_file;          // device-map scenario input
    std::optional<double> anharmonicity_ghz;  // defaults to -E_C
};

struct RunConfig {
    int schema_version = 1;
    Scenario scenario = Scenario::reference_only;
    double T = 1.0;
    double T_F = 1.0;
    double delta_omega0 = 30.0;
    std::size_t n_steps = 0;      // control grid, 0 = default for the duration
    std::size_t ref_n_steps = 0;  // reference grid
    std::size_t n_phase = 512;
    std::size_t map_time_samples = 401;
    double link_threshold = default_link_threshold;
    Branch branch = Branch::upper;
    std::optional<std::vector<CrossingPlan>> plans;  // empty optional = scenario default
    Support default_support = Support::local;
    BridgeBounds bounds;
    NelderMeadOptions optimizer;
    std::vector<std::string> baselines;
    std::vector<double> sweep_T_F;
    std::optional<DeviceConfig> device;
    std::string output_dir = "out";
    std::vector<std::string> formats{"csv", "json"};
    bool write_beta_map = true;
};

struct ConfigError : std::runtime_error {
    explicit ConfigError(std::vector<std::string> errors);
    std::vector<std::string> errors;
};

// JSON document; every problem is collected before throwing
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace ffst
