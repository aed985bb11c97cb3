#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ffst/config.hpp"

namespace ffst {

enum class Stage { reference, map, synthesize, verify, sta, device, full };

struct PipelineOptions {
    Stage stage = Stage::full;
    std::optional<std::string> out_dir;  // overrides the config
    std::optional<double> require_fidelity;
    unsigned threads = 1;
    std::string control_file;  // verify / device stages
};

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int failure = 1;
inline constexpr int config = 2;
inline constexpr int synthesis = 3;
inline constexpr int below_threshold = 4;
}  // namespace exit_code

struct PipelineResult {
    int exit_code = exit_code::ok;
    nlohmann::ordered_json summary;
};

inline constexpr int summary_schema_version = 1;

// writes tables and summary.json under the output directory; errors are mapped to exit codes
PipelineResult run_pipeline(const RunConfig& config, const PipelineOptions& options = {});

}  // namespace ffst
