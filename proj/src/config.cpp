#include "ffst/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <json.hpp>

namespace ffst {

using json = nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (const auto& e : v) s += (s.empty() ? "" : "; ") + e;
    return s;
}

class Reader {
public:
    explicit Reader(std::vector<std::string>& errors) : errors_(errors) {}

    void fail(const std::string& path, const std::string& msg) { errors_.push_back(path + ": " + msg); }

    void known(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
        std::set<std::string> k(keys.begin(), keys.end());
        for (auto it = obj.begin(); it != obj.end(); ++it)
            if (!k.count(it.key())) fail(join_path(path, it.key()), "unknown key");
    }

    static std::string join_path(const std::string& path, const std::string& key) {
        return path.empty() ? key : path + "." + key;
    }

    const json* object(const json& obj, const std::string& key, const std::string& path) {
        if (!obj.contains(key)) return nullptr;
        const json& v = obj.at(key);
        if (!v.is_object()) {
            fail(join_path(path, key), "expected an object");
            return nullptr;
        }
        return &v;
    }

    bool number(const json& obj, const std::string& key, const std::string& path, double& out) {
        if (!obj.contains(key)) return false;
        const json& v = obj.at(key);
        if (!v.is_number()) {
            fail(join_path(path, key), "expected a number");
            return false;
        }
        double x = v.get<double>();
        if (!std::isfinite(x)) {
            fail(join_path(path, key), "must be finite");
            return false;
        }
        out = x;
        return true;
    }

    bool positive(const json& obj, const std::string& key, const std::string& path, double& out) {
        double x = out;
        if (!number(obj, key, path, x)) return false;
        if (!(x > 0)) {
            fail(join_path(path, key), "must be positive");
            return false;
        }
        out = x;
        return true;
    }

    bool count(const json& obj, const std::string& key, const std::string& path, std::size_t& out,
               std::size_t min_value) {
        if (!obj.contains(key)) return false;
        const json& v = obj.at(key);
        if (!v.is_number_integer()) {
            fail(join_path(path, key), "expected an integer");
            return false;
        }
        auto x = v.get<long long>();
        if (x < static_cast<long long>(min_value)) {
            fail(join_path(path, key), "must be at least " + std::to_string(min_value));
            return false;
        }
        out = static_cast<std::size_t>(x);
        return true;
    }

    bool text(const json& obj, const std::string& key, const std::string& path, std::string& out) {
        if (!obj.contains(key)) return false;
        const json& v = obj.at(key);
        if (!v.is_string()) {
            fail(join_path(path, key), "expected a string");
            return false;
        }
        out = v.get<std::string>();
        return true;
    }

    bool choice(const json& obj, const std::string& key, const std::string& path, std::string& out,
                std::initializer_list<const char*> allowed) {
        std::string s;
        if (!text(obj, key, path, s)) return false;
        for (const char* a : allowed)
            if (s == a) {
                out = s;
                return true;
            }
        std::string msg = "must be one of";
        for (const char* a : allowed) msg += std::string(" ") + a;
        fail(join_path(path, key), msg);
        return false;
    }

    bool boolean(const json& obj, const std::string& key, const std::string& path, bool& out) {
        if (!obj.contains(key)) return false;
        const json& v = obj.at(key);
        if (!v.is_boolean()) {
            fail(join_path(path, key), "expected true or false");
            return false;
        }
        out = v.get<bool>();
        return true;
    }

private:
    std::vector<std::string>& errors_;
};

Support parse_support(const std::string& s) { return s == "span" ? Support::span : Support::local; }

void read_plans(Reader& r, const json& v, RunConfig& cfg) {
    const std::string path = "crossing_plans";
    if (v.is_string()) {
        if (v.get<std::string>() != "auto") r.fail(path, "expected \"auto\" or a list of plans");
        cfg.plans = std::vector<CrossingPlan>{};
        return;
    }
    if (!v.is_array()) {
        r.fail(path, "expected \"auto\" or a list of plans");
        return;
    }
    std::vector<CrossingPlan> plans;
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::string p = path + "[" + std::to_string(i) + "]";
        const json& o = v[i];
        if (!o.is_object()) {
            r.fail(p, "expected an object");
            continue;
        }
        r.known(o, p, {"name", "start", "crossings"});
        CrossingPlan plan;
        plan.name = "plan-" + std::to_string(i);
        r.text(o, "name", p, plan.name);
        r.choice(o, "start", p, plan.start, {"X", "Y"});
        if (!o.contains("crossings")) {
            r.fail(Reader::join_path(p, "crossings"), "required");
        } else if (!o.at("crossings").is_array()) {
            r.fail(Reader::join_path(p, "crossings"), "expected a list");
        } else {
            const json& cs = o.at("crossings");
            for (std::size_t j = 0; j < cs.size(); ++j) {
                std::string q = p + ".crossings[" + std::to_string(j) + "]";
                if (!cs[j].is_object()) {
                    r.fail(q, "expected an object");
                    continue;
                }
                r.known(cs[j], q, {"gap", "to", "support"});
                Crossing c;
                c.support = cfg.default_support;
                if (!r.count(cs[j], "gap", q, c.gap, 0) && !cs[j].contains("gap"))
                    r.fail(Reader::join_path(q, "gap"), "required");
                if (!r.choice(cs[j], "to", q, c.to, {"X", "Y"}) && !cs[j].contains("to"))
                    r.fail(Reader::join_path(q, "to"), "required");
                std::string s;
                if (r.choice(cs[j], "support", q, s, {"local", "span"})) c.support = parse_support(s);
                plan.crossings.push_back(c);
            }
        }
        plans.push_back(std::move(plan));
    }
    for (std::size_t i = 0; i < plans.size(); ++i)
        for (std::size_t j = 0; j < i; ++j)
            if (plans[i].name == plans[j].name) r.fail(path, "duplicate plan name " + plans[i].name);
    cfg.plans = std::move(plans);
}

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::accelerate: return "accelerate";
        case Scenario::decelerate: return "decelerate";
        case Scenario::sta: return "sta";
        case Scenario::reference_only: return "reference-only";
        case Scenario::device_map: return "device-map";
    }
    return "?";
}

ConfigError::ConfigError(std::vector<std::string> errs)
    : std::runtime_error("invalid configuration: " + join(errs)), errors(std::move(errs)) {}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError({std::string("document: ") + e.what()});
    }
    std::vector<std::string> errors;
    Reader r(errors);
    RunConfig cfg;
    if (!doc.is_object()) throw ConfigError({"document: expected an object"});

    r.known(doc, "", {"schema_version", "scenario", "T", "T_F", "delta_omega0", "grid", "link_threshold", "branch",
                      "crossing_plans", "support", "bridge_bounds", "optimizer", "baselines", "sweep_T_F", "device",
                      "output"});

    std::size_t version = 1;
    if (r.count(doc, "schema_version", "", version, 1) && version != 1)
        r.fail("schema_version", "unsupported version " + std::to_string(version));

    std::string scen;
    bool have_scenario = r.choice(doc, "scenario", "", scen, {"accelerate", "decelerate", "sta", "reference-only", "device-map"});
    if (!doc.contains("scenario")) r.fail("scenario", "required");
    if (scen == "accelerate") cfg.scenario = Scenario::accelerate;
    if (scen == "decelerate") cfg.scenario = Scenario::decelerate;
    if (scen == "sta") cfg.scenario = Scenario::sta;
    if (scen == "reference-only") cfg.scenario = Scenario::reference_only;
    if (scen == "device-map") cfg.scenario = Scenario::device_map;

    r.positive(doc, "T", "", cfg.T);
    bool have_tf = r.positive(doc, "T_F", "", cfg.T_F);
    r.number(doc, "delta_omega0", "", cfg.delta_omega0);
    bool needs_tf = cfg.scenario == Scenario::accelerate || cfg.scenario == Scenario::decelerate ||
                    cfg.scenario == Scenario::sta;
    if (have_scenario && needs_tf && !doc.contains("T_F")) r.fail("T_F", "required for scenario " + scen);
    if (!have_tf && !doc.contains("T_F")) cfg.T_F = cfg.T;
    if (have_tf && cfg.scenario == Scenario::accelerate && cfg.T_F > cfg.T)
        r.fail("T_F", "accelerate needs T_F <= T");
    if (have_tf && cfg.scenario == Scenario::decelerate && cfg.T_F < cfg.T)
        r.fail("T_F", "decelerate needs T_F >= T");

    if (const json* g = r.object(doc, "grid", "")) {
        r.known(*g, "grid", {"n_steps", "ref_n_steps", "n_phase", "map_time_samples"});
        r.count(*g, "n_steps", "grid", cfg.n_steps, 4);
        r.count(*g, "ref_n_steps", "grid", cfg.ref_n_steps, 4);
        r.count(*g, "n_phase", "grid", cfg.n_phase, 256);
        r.count(*g, "map_time_samples", "grid", cfg.map_time_samples, 2);
    }
    if (r.positive(doc, "link_threshold", "", cfg.link_threshold) && cfg.link_threshold >= pi)
        r.fail("link_threshold", "must be below pi");

    std::string branch;
    if (r.choice(doc, "branch", "", branch, {"upper", "lower"}))
        cfg.branch = branch == "upper" ? Branch::upper : Branch::lower;
    if (cfg.scenario == Scenario::sta) cfg.default_support = Support::span;
    std::string support;
    if (r.choice(doc, "support", "", support, {"local", "span"})) cfg.default_support = parse_support(support);
    if (doc.contains("crossing_plans")) read_plans(r, doc.at("crossing_plans"), cfg);

    if (const json* b = r.object(doc, "bridge_bounds", "")) {
        const std::string p = "bridge_bounds";
        r.known(*b, p, {"min_width", "max_width", "center_slack", "max_amplitude", "support_widths"});
        r.positive(*b, "min_width", p, cfg.bounds.min_width);
        r.positive(*b, "max_width", p, cfg.bounds.max_width);
        if (r.number(*b, "center_slack", p, cfg.bounds.center_slack) && cfg.bounds.center_slack < 0)
            r.fail(p + ".center_slack", "must be non-negative");
        r.positive(*b, "max_amplitude", p, cfg.bounds.max_amplitude);
        r.positive(*b, "support_widths", p, cfg.bounds.support_widths);
        if (cfg.bounds.max_width < cfg.bounds.min_width) r.fail(p + ".max_width", "must not be below min_width");
    }
    if (const json* o = r.object(doc, "optimizer", "")) {
        r.known(*o, "optimizer", {"max_evaluations", "tolerance"});
        r.count(*o, "max_evaluations", "optimizer", cfg.optimizer.max_evaluations, 1);
        r.positive(*o, "tolerance", "optimizer", cfg.optimizer.tolerance);
    }

    if (cfg.scenario == Scenario::sta) cfg.baselines = {"unmodified"};
    if (cfg.scenario == Scenario::accelerate || cfg.scenario == Scenario::decelerate)
        cfg.baselines = {"naive", "alpha_scaled"};
    if (doc.contains("baselines")) {
        const json& v = doc.at("baselines");
        if (!v.is_array()) {
            r.fail("baselines", "expected a list");
        } else {
            cfg.baselines.clear();
            for (std::size_t i = 0; i < v.size(); ++i) {
                std::string p = "baselines[" + std::to_string(i) + "]";
                if (!v[i].is_string()) {
                    r.fail(p, "expected a string");
                    continue;
                }
                auto s = v[i].get<std::string>();
                bool ok = cfg.scenario == Scenario::sta ? s == "unmodified"
                                                        : (s == "naive" || s == "alpha_scaled" || s == "zero_phase");
                if (!ok) {
                    r.fail(p, "baseline " + s + " does not apply to scenario " + scen);
                    continue;
                }
                cfg.baselines.push_back(s);
            }
        }
    }

    if (doc.contains("sweep_T_F")) {
        const json& v = doc.at("sweep_T_F");
        if (!v.is_array()) {
            r.fail("sweep_T_F", "expected a list");
        } else {
            for (std::size_t i = 0; i < v.size(); ++i) {
                if (!v[i].is_number() || !(v[i].get<double>() > 0)) {
                    r.fail("sweep_T_F[" + std::to_string(i) + "]", "expected a positive number");
                    continue;
                }
                cfg.sweep_T_F.push_back(v[i].get<double>());
            }
        }
    }

    if (const json* d = r.object(doc, "device", "")) {
        const std::string p = "device";
        r.known(*d, p, {"ej_max", "ej_fixed", "ec", "ecc", "d", "g_ghz", "omega2_ghz", "control", "control_file",
                        "anharmonicity_ghz"});
        DeviceConfig dc;
        r.positive(*d, "ej_max", p, dc.transmon.ej_max);
        r.positive(*d, "ej_fixed", p, dc.transmon.ej_fixed);
        r.positive(*d, "ec", p, dc.transmon.ec);
        dc.ecc_given = r.positive(*d, "ecc", p, dc.transmon.ecc);
        if (r.positive(*d, "d", p, dc.transmon.d) && dc.transmon.d > 1) r.fail(p + ".d", "must not exceed 1");
        r.positive(*d, "g_ghz", p, dc.g_ghz);
        double w2 = 0;
        if (r.positive(*d, "omega2_ghz", p, w2)) dc.omega2_ghz = w2;
        double an = 0;
        if (r.number(*d, "anharmonicity_ghz", p, an)) {
            if (an == 0) r.fail(p + ".anharmonicity_ghz", "must be nonzero");
            dc.anharmonicity_ghz = an;
        }
        r.text(*d, "control", p, dc.control);
        r.text(*d, "control_file", p, dc.control_file);
        cfg.device = dc;
    }
    if (cfg.scenario == Scenario::device_map && (!cfg.device || cfg.device->control_file.empty()))
        r.fail("device.control_file", "required for scenario device-map");

    if (const json* o = r.object(doc, "output", "")) {
        r.known(*o, "output", {"directory", "formats", "beta_map"});
        r.text(*o, "directory", "output", cfg.output_dir);
        r.boolean(*o, "beta_map", "output", cfg.write_beta_map);
        if (o->contains("formats")) {
            const json& f = o->at("formats");
            if (!f.is_array()) {
                r.fail("output.formats", "expected a list");
            } else {
                cfg.formats.clear();
                for (std::size_t i = 0; i < f.size(); ++i) {
                    if (!f[i].is_string() || (f[i] != "csv" && f[i] != "json")) {
                        r.fail("output.formats[" + std::to_string(i) + "]", "must be csv or json");
                        continue;
                    }
                    cfg.formats.push_back(f[i].get<std::string>());
                }
            }
        }
    }

    if (!errors.empty()) throw ConfigError(std::move(errors));
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError({path + ": cannot open"});
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace ffst
