#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "ffst/config.hpp"
#include "ffst/pipeline.hpp"

namespace {

void report(const nlohmann::ordered_json& s) {
    if (s.contains("errors"))
        for (const auto& e : s["errors"]) std::cerr << "error: " << e.get<std::string>() << '\n';
    if (s.contains("controls"))
        for (const auto& [label, c] : s["controls"].items())
            std::cout << label << " fidelity " << c["fidelity"].dump() << '\n';
    if (s.contains("plans"))
        for (const auto& [name, p] : s["plans"].items())
            if (p.contains("shift_count")) std::cout << name << " shifts " << p["shift_count"].dump() << '\n';
    if (s.contains("device") && s["device"].contains("feasible"))
        std::cout << "device feasible " << s["device"]["feasible"].dump() << '\n';
    if (s.contains("sweep"))
        for (const auto& r : s["sweep"])
            std::cout << r["directory"].get<std::string>() << " exit " << r["exit_code"].dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fast-forward control synthesis for a driven two-level system"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, control_file;
    double require = -1.0;
    unsigned threads = 1;
    bool seed_free = false;
    app.add_option("--config", config_path, "run configuration (JSON)")->required()->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory, overrides the config");
    app.add_option("--require-fidelity", require, "exit 4 when a synthesized control falls below this")
        ->check(CLI::Range(0.0, 1.0));
    app.add_option("--threads", threads, "worker threads for maps and sweeps")->check(CLI::Range(1u, 256u));
    app.add_flag("--seed-free", seed_free, "fail unless the run used no random numbers");

    const std::map<std::string, ffst::Stage> stages{
        {"reference", ffst::Stage::reference}, {"map", ffst::Stage::map},  {"synthesize", ffst::Stage::synthesize},
        {"verify", ffst::Stage::verify},       {"sta", ffst::Stage::sta},  {"device", ffst::Stage::device},
        {"full", ffst::Stage::full}};
    const std::map<std::string, std::string> help{
        {"reference", "integrate the reference sweep"},
        {"map", "residual map, speed-controlled trajectories and gaps"},
        {"synthesize", "optimize virtual trajectories and write controls"},
        {"verify", "re-integrate controls (or --control FILE) against the target"},
        {"sta", "shortcut-to-adiabaticity run"},
        {"device", "map a control (or --control FILE) onto transmon flux"},
        {"full", "every stage the scenario supports"}};
    for (const auto& [name, stage] : stages) {
        auto* sub = app.add_subcommand(name, help.at(name));
        if (name == "verify" || name == "device")
            sub->add_option("--control", control_file, "control table with t, delta_omega_ff, coupling_ff")
                ->check(CLI::ExistingFile);
    }
    CLI11_PARSE(app, argc, argv);

    ffst::PipelineOptions opt;
    for (const auto& [name, stage] : stages)
        if (app.got_subcommand(name)) opt.stage = stage;
    if (!out_dir.empty()) opt.out_dir = out_dir;
    if (require >= 0.0) opt.require_fidelity = require;
    opt.threads = threads;
    opt.control_file = control_file;

    ffst::RunConfig cfg;
    try {
        cfg = ffst::load_config(config_path);
    } catch (const ffst::ConfigError& e) {
        for (const auto& msg : e.errors) std::cerr << "config: " << msg << '\n';
        return ffst::exit_code::config;
    }
    auto result = ffst::run_pipeline(cfg, opt);
    report(result.summary);
    if (seed_free && result.summary.value("rng_used", false)) {
        std::cerr << "error: random numbers were used\n";
        return ffst::exit_code::failure;
    }
    return result.exit_code;
}
