#include "ffst/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>

#include "ffst/analysis.hpp"
#include "ffst/device.hpp"
#include "ffst/drives.hpp"
#include "ffst/errors.hpp"
#include "ffst/ffst.hpp"
#include "ffst/itt.hpp"
#include "ffst/sta.hpp"
#include "ffst/table.hpp"

namespace ffst {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

struct Run {
    const RunConfig& cfg;
    const PipelineOptions& opt;
    fs::path dir;
    ojson& s;

    bool csv() const { return std::ranges::find(cfg.formats, "csv") != cfg.formats.end(); }
    void table(const std::string& name, const Table& t) const {
        if (csv()) write_csv((dir / name).string(), t);
    }
};

// computed control plus what is needed to report it
struct Arm {
    ControlSchedule control;
    bool synthesized = false;  // subject to --require-fidelity
    std::vector<double> f2;    // lifted phase, empty for baselines
};

double finite_or_nan(double x) { return std::isfinite(x) ? x : std::nan(""); }

std::vector<double> times(const TimeGrid& g) {
    std::vector<double> t(g.size());
    for (std::size_t k = 0; k < t.size(); ++k) t[k] = g.time(k);
    return t;
}

Table trajectory_table(const ReferenceTrajectory& r) {
    Table t;
    std::size_t n = r.states.size();
    std::vector<double> re1(n), im1(n), re2(n), im2(n), p1(n), p2(n);
    for (std::size_t k = 0; k < n; ++k) {
        re1[k] = r.states[k].phi1.real();
        im1[k] = r.states[k].phi1.imag();
        re2[k] = r.states[k].phi2.real();
        im2[k] = r.states[k].phi2.imag();
        p1[k] = r.states[k].population1();
        p2[k] = r.states[k].population2();
    }
    t.add("t", times(r.grid));
    t.add("delta_omega", r.drive.delta_omega);
    t.add("coupling", r.drive.coupling);
    t.add("re_phi1", re1);
    t.add("im_phi1", im1);
    t.add("re_phi2", re2);
    t.add("im_phi2", im2);
    t.add("population1", p1);
    t.add("population2", p2);
    return t;
}

Table control_table(const Arm& arm, const MagnificationProfile* prof) {
    const auto& c = arm.control;
    Table t;
    t.add("t", times(c.grid));
    if (prof) {
        t.add("alpha", prof->alpha);
        t.add("lambda", prof->lambda);
    }
    std::vector<double> f2(c.grid.size(), 0.0), lifted(c.grid.size(), 0.0);
    if (!arm.f2.empty()) {
        lifted = arm.f2;
        for (std::size_t k = 0; k < f2.size(); ++k) f2[k] = wrap_phase(lifted[k]);
    }
    t.add("f2", f2);
    t.add("f2_lifted", lifted);
    t.add("delta_omega_ff", c.delta_omega_ff);
    t.add("d_delta_omega_ff", c.derivative);
    t.add("coupling_ff", c.coupling_ff);
    return t;
}

Table beta_table(const ResidualField& field, std::size_t time_samples, std::size_t n_phase, unsigned threads) {
    ResidualField sub;
    sub.kind = field.kind;
    std::size_t m = std::max<std::size_t>(2, time_samples) - 1;
    m = std::min(m, field.grid.n_steps());
    sub.grid = TimeGrid(field.grid.t0(), field.grid.t_end(), m);
    for (std::size_t k = 0; k <= m; ++k) {
        double t = sub.grid.time(k);
        sub.c0.push_back(interpolate_uniform(field.c0, field.grid.t0(), field.grid.h(), t));
        sub.c1.push_back(interpolate_uniform(field.c1, field.grid.t0(), field.grid.h(), t));
        sub.c2.push_back(interpolate_uniform(field.c2, field.grid.t0(), field.grid.h(), t));
    }
    auto map = build_beta_map(sub, n_phase, threads);
    std::vector<double> tt, ff, lb;
    for (std::size_t k = 0; k < map.grid.size(); ++k)
        for (std::size_t j = 0; j < map.phases.size(); ++j) {
            tt.push_back(map.grid.time(k));
            ff.push_back(map.phases[j]);
            lb.push_back(map.ln_abs(k, j));
        }
    Table t;
    t.add("t", tt);
    t.add("f2", ff);
    t.add("ln_abs_beta", lb);
    return t;
}

Table sct_table(const std::vector<SpeedControlledTrajectory>& scts, const TimeGrid& grid) {
    Table t;
    t.add("t", times(grid));
    for (std::size_t i = 0; i < scts.size(); ++i) {
        std::vector<double> v(grid.size());
        for (std::size_t k = 0; k < v.size(); ++k) v[k] = scts[i].valid_at(k) ? finite_or_nan(scts[i].f2[k]) : std::nan("");
        t.add("f2_" + scts[i].branch_id + std::to_string(i), v);
    }
    return t;
}

ojson gaps_json(const std::vector<Gap>& gaps) {
    ojson a = ojson::array();
    for (const auto& g : gaps)
        a.push_back({{"kind", g.kind == Gap::Kind::vertical ? "vertical" : "horizontal"},
                     {"t_start", g.t_start},
                     {"t_end", g.t_end}});
    return a;
}

ojson scts_json(const std::vector<SpeedControlledTrajectory>& scts) {
    ojson a = ojson::array();
    for (const auto& c : scts)
        a.push_back({{"branch", c.branch_id},
                     {"family", c.family},
                     {"t_start", c.grid.time(c.first)},
                     {"t_end", c.grid.time(c.last)}});
    return a;
}

ojson populations_json(const TwoLevelState& s) { return ojson::array({s.population1(), s.population2()}); }

std::string plan_label(const CrossingPlan& p) {
    if (p.crossings.empty()) return "ffst";
    return p.name == "auto" ? "itt" : "itt_" + p.name;
}

std::vector<CrossingPlan> plans_for(const RunConfig& cfg, const std::vector<SpeedControlledTrajectory>& scts,
                                    const std::vector<Gap>& gaps) {
    if (cfg.plans && !cfg.plans->empty()) return *cfg.plans;
    if (!cfg.plans && cfg.scenario == Scenario::decelerate) {
        CrossingPlan a{"VT-A", "X", {{1, "Y", cfg.default_support}}};
        CrossingPlan b{"VT-B", "X", {{0, "Y", cfg.default_support}, {1, "X", cfg.default_support}, {2, "Y", cfg.default_support}}};
        return {a, b};
    }
    return {auto_plan(scts, gaps, cfg.default_support)};
}

ControlSchedule load_control(const std::string& path) {
    auto t = read_csv(path);
    const auto& tt = t.column("t");
    if (tt.size() < 5) throw DomainError(path + ": control needs at least 5 samples");
    TimeGrid grid(tt.front(), tt.back(), tt.size() - 1);
    for (std::size_t k = 0; k < tt.size(); ++k)
        if (std::abs(tt[k] - grid.time(k)) > 1e-9 * std::max(1.0, std::abs(tt.back())))
            throw DomainError(path + ": time column is not uniform");
    // reference tables carry the bare drive columns
    const auto& dw = t.has("delta_omega_ff") ? t.column("delta_omega_ff") : t.column("delta_omega");
    std::vector<double> g(tt.size(), 1.0);
    if (t.has("coupling_ff")) g = t.column("coupling_ff");
    else if (t.has("coupling")) g = t.column("coupling");
    auto c = ControlSchedule::from_drive(DriveSchedule::make(grid, dw, g), "file");
    return c;
}

struct Problem {
    // filled for accelerate / decelerate
    std::optional<ReferenceTrajectory> ref;
    std::optional<MagnificationProfile> prof;
    std::optional<ScaledReference> sref;
    // filled for sta
    std::optional<AdiabaticSweep> sweep;
    TwoLevelState initial;
    TwoLevelState target;
    ResidualField field;
};

Problem setup(Run& run) {
    const auto& cfg = run.cfg;
    Problem p;
    if (cfg.scenario == Scenario::sta) {
        TimeGrid grid(0.0, cfg.T_F, cfg.n_steps ? cfg.n_steps : default_n_steps(cfg.T_F));
        p.sweep = AdiabaticSweep::cosine({cfg.delta_omega0, cfg.T_F}, grid, cfg.branch);
        auto tgt = adiabatic_target(*p.sweep);
        p.initial = p.sweep->initial_state();
        p.target = tgt.state;
        p.field = sta_residual(*p.sweep);
        run.s["target"] = {{"populations", populations_json(p.target)}, {"phase_integral", tgt.phase_integral}};
        Table t;
        t.add("t", times(grid));
        t.add("delta_omega", p.sweep->delta_omega);
        t.add("eigen_phi1", p.sweep->phi1);
        t.add("eigen_phi2", p.sweep->phi2);
        t.add("energy", p.sweep->energy);
        run.table("sweep.csv", t);
        return p;
    }
    p.ref = solve_reference({cfg.delta_omega0, cfg.T}, {}, cfg.ref_n_steps);
    run.table("reference.csv", trajectory_table(*p.ref));
    run.s["reference"] = {{"n_steps", p.ref->grid.n_steps()},
                          {"max_norm_drift", p.ref->max_norm_drift},
                          {"final_populations", populations_json(p.ref->final_state())}};
    p.initial = TwoLevelState{};
    p.target = p.ref->final_state();
    if (cfg.scenario == Scenario::reference_only || cfg.scenario == Scenario::device_map) return p;
    TimeGrid grid(0.0, cfg.T_F, cfg.n_steps ? cfg.n_steps : default_n_steps(cfg.T_F));
    p.prof = build_magnification(cfg.T, cfg.T_F, grid);
    p.sref = scale_reference(*p.ref, *p.prof);
    p.field = ffst_residual(*p.sref);
    Table t;
    t.add("t", times(grid));
    t.add("alpha", p.prof->alpha);
    t.add("lambda", p.prof->lambda);
    run.table("profile.csv", t);
    return p;
}

void gap_scan(Run& run, const Problem& p) {
    auto profiles = gap_direction_scan(run.cfg.sweep_T_F, *p.ref, run.cfg.n_steps);
    ojson a = ojson::array();
    std::vector<double> tf, opening, ndeg, zero_everywhere;
    for (const auto& g : profiles) {
        const char* o = g.opening == GapDirectionProfile::Opening::none         ? "none"
                        : g.opening == GapDirectionProfile::Opening::horizontal ? "horizontal"
                                                                                : "vertical";
        ojson intervals = ojson::array();
        for (auto [a0, a1] : g.zero_root_intervals) intervals.push_back({a0, a1});
        a.push_back({{"T_F", g.T_F},
                     {"opening", o},
                     {"degenerate_times", g.degenerate_times},
                     {"counts_at_degenerate", g.counts_at_degenerate},
                     {"zero_root_intervals", intervals},
                     {"zero_root_everywhere", g.zero_root_everywhere}});
        tf.push_back(g.T_F);
        opening.push_back(g.opening == GapDirectionProfile::Opening::none ? 0 : g.opening == GapDirectionProfile::Opening::horizontal ? 1 : 2);
        ndeg.push_back(static_cast<double>(g.degenerate_times.size()));
        zero_everywhere.push_back(g.zero_root_everywhere ? 1 : 0);
    }
    run.s["gap_scan"] = a;
    Table t;
    t.add("T_F", tf);
    t.add("opening", opening);
    t.add("degenerate_points", ndeg);
    t.add("zero_root_everywhere", zero_everywhere);
    run.table("gap_scan.csv", t);
}

ControlSchedule control_for_plan(const Problem& p, const PhasePath& path) {
    return p.sweep ? synthesize_sta_control(path, *p.sweep) : synthesize_control(path, *p.sref);
}

ControlSchedule baseline(const Problem& p, const std::string& name) {
    if (name == "unmodified") return ControlSchedule::from_drive(p.sweep->drive(), "unmodified");
    if (name == "naive") return naive_scaled_control(*p.sref);
    if (name == "alpha_scaled") return alpha_scaled_control(*p.sref);
    PhasePath zero{p.sref->grid, std::vector<double>(p.sref->grid.size(), 0.0)};
    auto c = synthesize_control(zero, *p.sref);
    c.label = "zero_phase";
    return c;
}

void device_stage(Run& run, const ControlSchedule& control, bool strict) {
    DeviceConfig dc = run.cfg.device.value_or(DeviceConfig{});
    auto spec = dc.transmon;
    if (!dc.ecc_given) spec.ecc = device::coupling_capacitance_for(dc.g_ghz, spec);
    spec.validate();
    double omega2 = dc.omega2_ghz.value_or(device::transmon_frequency(spec.ej_fixed, spec.ec));
    auto band = device::achievable_band(spec);
    double unit = device::time_unit_ns(dc.g_ghz);
    double anh = dc.anharmonicity_ghz.value_or(-spec.ec);
    auto rwa = device::rwa_emulation_map(control, 1.0, anh / dc.g_ghz);
    ojson d = {{"control", control.label},
               {"ej_max_ghz", spec.ej_max},
               {"ej_fixed_ghz", spec.ej_fixed},
               {"ec_ghz", spec.ec},
               {"ecc_ghz", spec.ecc},
               {"d", spec.d},
               {"g_ghz", dc.g_ghz},
               {"coupling_check_ghz", device::coupling_strength(spec)},
               {"outside_transmon_regime", spec.outside_transmon_regime()},
               {"omega2_ghz", omega2},
               {"band_ghz", {band.lo, band.hi}},
               {"time_unit_ns", unit},
               {"duration_ns", (control.grid.t_end() - control.grid.t0()) * unit},
               {"rwa", {{"max_abs_detuning", rwa.max_abs_detuning},
                        {"anharmonicity", rwa.anharmonicity},
                        {"validity_ratio", rwa.validity_ratio},
                        {"valid", rwa.valid}}}};
    try {
        auto w = device::flux_schedule_for(control, spec, omega2, dc.g_ghz);
        d["feasible"] = true;
        d["max_roundtrip_error_ghz"] = w.max_roundtrip_error;
        Table t;
        t.add("t_ns", times(w.grid));
        t.add("flux", w.flux);
        t.add("omega1_ghz", w.omega1_ghz);
        run.table("flux.csv", t);
    } catch (const InfeasibleError& e) {
        d["feasible"] = false;
        d["reason"] = e.what();
        run.s["device"] = d;
        if (strict) throw;
        return;
    }
    run.s["device"] = d;
}

int check_fidelity(Run& run, const std::vector<std::pair<std::string, double>>& checked) {
    if (!run.opt.require_fidelity) return exit_code::ok;
    double need = *run.opt.require_fidelity;
    ojson failed = ojson::array();
    for (const auto& [label, f] : checked)
        if (!(f >= need)) failed.push_back(label);
    run.s["required_fidelity"] = need;
    run.s["below_threshold"] = failed;
    return failed.empty() ? exit_code::ok : exit_code::below_threshold;
}

int run_single(Run& run) {
    const auto& cfg = run.cfg;
    const Stage stage = run.opt.stage;
    if (stage == Stage::sta && cfg.scenario != Scenario::sta)
        throw ConfigError({"scenario: the sta command needs scenario sta"});
    if ((stage == Stage::reference) && cfg.scenario == Scenario::sta)
        throw ConfigError({"scenario: the reference command has no reference for scenario sta"});

    run.s["rng_used"] = false;
    Problem p = setup(run);
    if (stage == Stage::reference) return exit_code::ok;

    std::vector<std::pair<std::string, double>> checked;
    const bool from_file = !run.opt.control_file.empty() && (stage == Stage::verify || stage == Stage::device);
    if (cfg.scenario == Scenario::device_map || (from_file && stage == Stage::device)) {
        auto path = from_file ? run.opt.control_file : cfg.device->control_file;
        auto c = load_control(path);
        device_stage(run, c, true);
        return exit_code::ok;
    }
    if (cfg.scenario == Scenario::reference_only) {
        if (!cfg.sweep_T_F.empty()) gap_scan(run, p);
        else if (stage != Stage::full) throw ConfigError({"scenario: reference-only has nothing to " "compute past the reference"});
        return exit_code::ok;
    }
    if (from_file) {
        auto c = load_control(run.opt.control_file);
        auto fr = verify_control(c, p.initial, p.target);
        run.s["controls"]["file"] = {{"fidelity", fr.fidelity},
                                     {"final_populations", populations_json(fr.final_state)},
                                     {"max_norm_drift", fr.run.max_norm_drift}};
        checked.emplace_back("file", fr.fidelity);
        return check_fidelity(run, checked);
    }

    auto scan = build_root_scan(p.field);
    auto scts = extract_scts(scan, cfg.link_threshold);
    auto gaps = detect_gaps(scan, scts, cfg.link_threshold);
    run.s["scts"] = scts_json(scts);
    run.s["gaps"] = gaps_json(gaps);
    run.table("scts.csv", sct_table(scts, p.field.grid));
    if (cfg.write_beta_map)
        run.table("beta_map.csv", beta_table(p.field, cfg.map_time_samples, cfg.n_phase, std::max(1u, run.opt.threads)));
    run.s["ln_beta_floor"] = ln_beta_floor;
    if (stage == Stage::map) return exit_code::ok;

    std::vector<Arm> arms;
    for (const auto& b : cfg.baselines) arms.push_back({baseline(p, b), false, {}});

    ojson plans = ojson::object();
    std::vector<IttResult> results;
    auto plan_list = plans_for(cfg, scts, gaps);
    for (const auto& plan : plan_list) {
        auto r = optimize_virtual_trajectory(scts, gaps, plan, p.field, cfg.bounds, std::nullopt, cfg.optimizer);
        auto c = control_for_plan(p, r.vt.path());
        c.label = plan_label(plan);
        ojson params = ojson::array();
        for (const auto& b : r.vt.bridge_params)
            params.push_back({{"center", b.center}, {"width", b.width}, {"amplitude", b.amplitude}});
        ojson crossings = ojson::array();
        for (const auto& x : plan.crossings)
            crossings.push_back({{"gap", x.gap}, {"to", x.to}, {"support", x.support == Support::span ? "span" : "local"}});
        plans[plan.name] = {{"control", c.label},
                            {"start", plan.start},
                            {"crossings", crossings},
                            {"bridges", params},
                            {"initial_cost", r.initial_cost},
                            {"cost", r.report.integrated_residual},
                            {"per_gap_cost", r.report.per_gap_residual},
                            {"evaluations", r.report.evaluations},
                            {"converged", r.converged}};
        arms.push_back({std::move(c), true, r.vt.f2});
        results.push_back(std::move(r));
    }
    run.s["plans"] = plans;
    const MagnificationProfile* prof = p.prof ? &*p.prof : nullptr;
    for (const auto& a : arms) run.table("control_" + a.control.label + ".csv", control_table(a, prof));
    if (stage == Stage::synthesize) return exit_code::ok;

    ojson controls = ojson::object();
    std::vector<FidelityReport> reports;
    for (const auto& a : arms) {
        auto fr = verify_control(a.control, p.initial, p.target);
        controls[a.control.label] = {{"kind", a.synthesized ? "synthesized" : "baseline"},
                                     {"fidelity", fr.fidelity},
                                     {"final_populations", populations_json(fr.final_state)},
                                     {"max_norm_drift", fr.run.max_norm_drift}};
        if (a.synthesized) checked.emplace_back(a.control.label, fr.fidelity);
        Table t;
        t.add("t", times(a.control.grid));
        t.add("population1", fr.population1);
        t.add("population2", fr.population2);
        run.table("populations_" + a.control.label + ".csv", t);
        reports.push_back(std::move(fr));
    }
    run.s["controls"] = controls;

    // shift counting needs both branches over the whole run
    const SpeedControlledTrajectory *x = nullptr, *y = nullptr;
    for (const auto& c : scts) {
        if (c.first != 0 || c.last != p.field.grid.n_steps()) continue;
        if (c.branch_id == "X" && !x) x = &c;
        if (c.branch_id == "Y" && !y) y = &c;
    }
    if (x && y && p.sref) {
        std::size_t base = cfg.baselines.size();
        for (std::size_t i = 0; i < plan_list.size(); ++i) {
            auto sh = trajectory_shift_analysis(reports[base + i].run, *x, *y, *p.sref);
            run.s["plans"][plan_list[i].name]["shift_count"] = sh.shift_count();
            run.s["plans"][plan_list[i].name]["shift_times"] = sh.shift_times;
            std::vector<double> dom(sh.dominant.size());
            for (std::size_t k = 0; k < dom.size(); ++k) dom[k] = sh.dominant[k] == 'X' ? 1 : sh.dominant[k] == 'Y' ? 2 : 0;
            Table t;
            t.add("t", times(sh.grid));
            t.add("overlap_x", sh.overlap_x);
            t.add("overlap_y", sh.overlap_y);
            t.add("dominant", dom);
            run.table("shifts_" + plan_list[i].name + ".csv", t);
        }
    }

    if (stage == Stage::device || (stage == Stage::full && cfg.device)) {
        std::string want = cfg.device ? cfg.device->control : "itt";
        const Arm* chosen = nullptr;
        for (const auto& a : arms)
            if (a.control.label == want || (!chosen && want == "itt" && a.synthesized)) chosen = &a;
        if (!chosen) throw ConstructionError("no control labelled " + want + " to map onto the device");
        device_stage(run, chosen->control, stage == Stage::device);
    }
    return check_fidelity(run, checked);
}

int run_guarded(const RunConfig& cfg, const PipelineOptions& opt, const fs::path& dir, ojson& s) {
    int code = exit_code::ok;
    try {
        fs::create_directories(dir);
        Run run{cfg, opt, dir, s};
        code = run_single(run);
    } catch (const ConfigError& e) {
        code = exit_code::config;
        s["errors"] = e.errors;
    } catch (const SynthesisError& e) {
        code = exit_code::synthesis;
        s["errors"] = {e.what()};
    } catch (const ConstructionError& e) {
        code = exit_code::synthesis;
        s["errors"] = {e.what()};
    } catch (const OptimizerError& e) {
        code = exit_code::synthesis;
        s["errors"] = {e.what()};
    } catch (const InfeasibleError& e) {
        code = exit_code::synthesis;
        s["errors"] = {e.what()};
    } catch (const IntegrationError& e) {
        code = exit_code::synthesis;
        s["errors"] = {e.what()};
    } catch (const std::exception& e) {
        code = exit_code::failure;
        s["errors"] = {e.what()};
    }
    s["exit_code"] = code;
    return code;
}

ojson header(const RunConfig& cfg) {
    return {{"schema_version", summary_schema_version},
            {"scenario", to_string(cfg.scenario)},
            {"T", cfg.T},
            {"T_F", cfg.T_F},
            {"delta_omega0", cfg.delta_omega0}};
}

void write_summary(const RunConfig& cfg, const fs::path& dir, const ojson& s) {
    if (std::ranges::find(cfg.formats, "json") == cfg.formats.end()) return;
    std::error_code ec;
    fs::create_directories(dir, ec);
    std::ofstream f(dir / "summary.json", std::ios::binary);
    if (f) f << s.dump(2) << '\n';
}

std::string sweep_dir_name(double tf) { return "T_F_" + format_number(tf); }

}  // namespace

PipelineResult run_pipeline(const RunConfig& cfg, const PipelineOptions& opt) {
    PipelineResult res;
    fs::path dir = opt.out_dir.value_or(cfg.output_dir);
    res.summary = header(cfg);
    const bool sweep = !cfg.sweep_T_F.empty() && cfg.scenario != Scenario::reference_only &&
                       cfg.scenario != Scenario::device_map && opt.control_file.empty();
    if (!sweep) {
        res.exit_code = run_guarded(cfg, opt, dir, res.summary);
        write_summary(cfg, dir, res.summary);
        return res;
    }

    // independent runs, one directory each
    std::vector<ojson> parts(cfg.sweep_T_F.size());
    std::vector<int> codes(parts.size(), 0);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < parts.size(); i = next++) {
            RunConfig c = cfg;
            c.T_F = cfg.sweep_T_F[i];
            c.sweep_T_F.clear();
            PipelineOptions o = opt;
            o.threads = 1;
            fs::path sub = dir / sweep_dir_name(c.T_F);
            parts[i] = header(c);
            codes[i] = run_guarded(c, o, sub, parts[i]);
            write_summary(c, sub, parts[i]);
        }
    };
    unsigned n = std::clamp<unsigned>(opt.threads, 1, static_cast<unsigned>(parts.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
        worker();
    }
    ojson runs = ojson::array();
    for (std::size_t i = 0; i < parts.size(); ++i) {
        runs.push_back({{"T_F", cfg.sweep_T_F[i]}, {"directory", sweep_dir_name(cfg.sweep_T_F[i])}, {"exit_code", codes[i]}});
        res.exit_code = std::max(res.exit_code, codes[i]);
    }
    res.summary["sweep"] = runs;
    res.summary["exit_code"] = res.exit_code;
    write_summary(cfg, dir, res.summary);
    return res;
}

}  // namespace ffst
