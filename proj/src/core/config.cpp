#include "core/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

#include "core/errors.hpp"

namespace uthresh {

namespace {

using nlohmann::json;

void reject_unknown(const json& j, const std::string& path, const std::set<std::string>& allowed) {
    if (!j.is_object()) throw config_error(path, "expected an object");
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!allowed.count(it.key())) throw config_error(path + "." + it.key(), "unknown key");
}

double get_double(const json& j, const std::string& path, const std::string& key, double def,
                  bool required = false) {
    if (!j.contains(key)) {
        if (required) throw config_error(path + "." + key, "missing required field");
        return def;
    }
    if (!j.at(key).is_number()) throw config_error(path + "." + key, "expected a number");
    return j.at(key).get<double>();
}

std::string get_string(const json& j, const std::string& path, const std::string& key,
                       const std::string& def, bool required = false) {
    if (!j.contains(key)) {
        if (required) throw config_error(path + "." + key, "missing required field");
        return def;
    }
    if (!j.at(key).is_string()) throw config_error(path + "." + key, "expected a string");
    return j.at(key).get<std::string>();
}

std::size_t get_size(const json& j, const std::string& path, const std::string& key,
                     std::size_t def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer())
        throw config_error(path + "." + key, "expected a nonnegative integer");
    auto v = j.at(key).get<long long>();
    if (v < 0) throw config_error(path + "." + key, "expected a nonnegative integer");
    return static_cast<std::size_t>(v);
}

Kernel parse_kernel(const json& j, const std::string& path) {
    reject_unknown(j, path, {"name", "bandwidth", "width", "scale"});
    std::string name = get_string(j, path, "name", "", true);
    if (j.contains("bandwidth") && j.contains("width"))
        throw config_error(path + ".width", "give bandwidth or width, not both");
    // the partition kernel calls its parameter "width"; both spellings work
    double bandwidth = get_double(j, path, j.contains("width") ? "width" : "bandwidth", 1.0);
    double scale = get_double(j, path, "scale", 1.0);
    if (!(bandwidth > 0.0))
        throw config_error(path + (j.contains("width") ? ".width" : ".bandwidth"), "must be > 0");
    if (!(scale > 0.0)) throw config_error(path + ".scale", "must be > 0");
    try {
        return make_kernel(name, bandwidth, scale);
    } catch (const std::invalid_argument& e) {
        throw config_error(path + ".name", e.what());
    }
}

AnchorPolicy parse_anchor_policy(const json& j, const std::string& path) {
    reject_unknown(j, path, {"policy", "low", "high", "count"});
    AnchorPolicy a;
    std::string policy = get_string(j, path, "policy", "quantile");
    if (policy == "quantile")
        a.kind = AnchorPolicy::Kind::quantile;
    else if (policy == "grid")
        a.kind = AnchorPolicy::Kind::grid;
    else
        throw config_error(path + ".policy", "must be 'quantile' or 'grid'");
    a.low = get_double(j, path, "low", 0.0);
    a.high = get_double(j, path, "high", 1.0);
    if (!(a.high > a.low)) throw config_error(path + ".high", "must be > low");
    a.count = get_size(j, path, "count", 0);
    return a;
}

void parse_estimator(const json& j, RunConfig& cfg) {
    const std::string path = "estimator";
    reject_unknown(j, path,
                   {"kind", "T", "norm", "quadrature_points", "kernel", "anchors", "basis",
                    "j_policy"});
    EstimatorConfig& est = cfg.estimator;
    std::string kind = get_string(j, path, "kind", "");
    if (kind == "rkhs")
        est.kind = EstimatorConfig::Kind::rkhs;
    else if (kind == "wavelet")
        est.kind = EstimatorConfig::Kind::wavelet;
    else if (!kind.empty())
        throw config_error(path + ".kind", "must be 'rkhs' or 'wavelet'");

    est.T = get_double(j, path, "T", est.T);
    if (!(est.T > 0.0)) throw config_error(path + ".T", "must be > 0");

    std::string norm = get_string(j, path, "norm", "");
    if (norm == "empirical")
        est.norm = NormKind::empirical;
    else if (norm == "population")
        est.norm = NormKind::population;
    else if (!norm.empty())
        throw config_error(path + ".norm", "must be 'empirical' or 'population'");

    auto qp = get_size(j, path, "quadrature_points", static_cast<std::size_t>(est.quadrature_points));
    if (qp < 16) throw config_error(path + ".quadrature_points", "must be >= 16");
    est.quadrature_points = static_cast<int>(qp);

    if (j.contains("kernel")) est.kernel = parse_kernel(j.at("kernel"), path + ".kernel");
    if (j.contains("anchors")) est.anchors = parse_anchor_policy(j.at("anchors"), path + ".anchors");

    est.basis_family = get_string(j, path, "basis", est.basis_family);
    if (est.basis_family != "haar" && est.basis_family != "daubechies-4" &&
        est.basis_family != "daubechies-6")
        throw config_error(path + ".basis", "must be haar, daubechies-4 or daubechies-6");

    if (j.contains("j_policy")) {
        const json& jp = j.at("j_policy");
        if (jp.is_string()) {
            if (jp.get<std::string>() != "universal")
                throw config_error(path + ".j_policy", "string form must be 'universal'");
            est.j_policy.kind = JPolicy::Kind::universal;
        } else {
            reject_unknown(jp, path + ".j_policy", {"oracle_s", "fixed"});
            if (jp.contains("oracle_s") == jp.contains("fixed"))
                throw config_error(path + ".j_policy", "give exactly one of oracle_s / fixed");
            if (jp.contains("oracle_s")) {
                est.j_policy.kind = JPolicy::Kind::oracle;
                est.j_policy.oracle_s = get_double(jp, path + ".j_policy", "oracle_s", 0.0, true);
                if (!(est.j_policy.oracle_s > 0.0))
                    throw config_error(path + ".j_policy.oracle_s", "must be > 0");
            } else {
                est.j_policy.kind = JPolicy::Kind::fixed;
                auto J = get_size(jp, path + ".j_policy", "fixed", 0);
                est.j_policy.fixed_J = static_cast<int>(J);
            }
        }
    }
}

void parse_scenario(const json& j, RunConfig& cfg) {
    const std::string path = "scenario";
    reject_unknown(j, path, {"id", "design", "truth", "noise", "M"});
    ScenarioSpec spec;
    spec.id = get_string(j, path, "id", "");
    if (j.contains("design")) {
        const json& d = j.at("design");
        reject_unknown(d, path + ".design", {"name", "low", "high", "peak"});
        spec.design_name = get_string(d, path + ".design", "name", "uniform");
        spec.design_low = get_double(d, path + ".design", "low", 0.0);
        spec.design_high = get_double(d, path + ".design", "high", 1.0);
        spec.design_peak = get_double(d, path + ".design", "peak", 0.5);
        if (!(spec.design_high > spec.design_low))
            throw config_error(path + ".design.high", "must be > low");
        if (spec.design_name != "uniform" && spec.design_name != "triangular" &&
            spec.design_name != "smooth-beta")
            throw config_error(path + ".design.name", "unknown design");
    }
    if (!j.contains("truth")) throw config_error(path + ".truth", "missing required field");
    {
        const json& t = j.at("truth");
        reject_unknown(t, path + ".truth",
                       {"family", "s", "c", "j_max", "fill", "basis", "kernel", "anchors"});
        spec.truth = get_string(t, path + ".truth", "family", "", true);
        if (spec.truth != "zero" && spec.truth != "holder" && spec.truth != "rkhs-sparse")
            throw config_error(path + ".truth.family", "must be zero, holder or rkhs-sparse");
        spec.s = get_double(t, path + ".truth", "s", 1.0);
        spec.c = get_double(t, path + ".truth", "c", 0.0);
        if (spec.truth != "zero" && !(spec.s > 0.0))
            throw config_error(path + ".truth.s", "must be > 0");
        auto jm = get_size(t, path + ".truth", "j_max", 11);
        spec.j_max = static_cast<int>(jm);
        std::string fill = get_string(t, path + ".truth", "fill", "full");
        if (fill == "full")
            spec.full_levels = true;
        else if (fill == "single")
            spec.full_levels = false;
        else
            throw config_error(path + ".truth.fill", "must be 'full' or 'single'");
        spec.basis_family = get_string(t, path + ".truth", "basis", "haar");
        if (t.contains("kernel")) {
            Kernel k = parse_kernel(t.at("kernel"), path + ".truth.kernel");
            spec.kernel_name = k.name;
            spec.kernel_bandwidth = k.bandwidth;
            spec.kernel_scale = k.scale;
        }
        if (t.contains("anchors")) {
            const json& a = t.at("anchors");
            reject_unknown(a, path + ".truth.anchors", {"low", "high", "count"});
            spec.anchors_low = get_double(a, path + ".truth.anchors", "low", 0.0);
            spec.anchors_high = get_double(a, path + ".truth.anchors", "high", 1.0);
            spec.anchors_count = get_size(a, path + ".truth.anchors", "count", 16);
            if (!(spec.anchors_high > spec.anchors_low))
                throw config_error(path + ".truth.anchors.high", "must be > low");
            if (spec.anchors_count == 0)
                throw config_error(path + ".truth.anchors.count", "must be >= 1");
        }
    }
    if (j.contains("noise")) {
        const json& nz = j.at("noise");
        reject_unknown(nz, path + ".noise", {"kind", "amplitude"});
        std::string kind = get_string(nz, path + ".noise", "kind", "uniform");
        if (kind != "uniform")
            throw config_error(path + ".noise.kind", "only the bounded 'uniform' noise is supported");
        spec.noise_amplitude = get_double(nz, path + ".noise", "amplitude", 0.0);
        if (spec.noise_amplitude < 0.0)
            throw config_error(path + ".noise.amplitude", "must be >= 0");
    }
    spec.M = get_double(j, path, "M", 2.0);
    if (!(spec.M > 0.0)) throw config_error(path + ".M", "must be > 0");
    cfg.scenario = spec;
}

void apply_overrides(const json& o, RunConfig& cfg) {
    reject_unknown(o, "overrides",
                   {"seed", "out", "threads", "n", "T", "eta", "R", "kernel", "basis", "s",
                    "input", "command"});
    if (o.contains("seed")) cfg.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("out")) cfg.out = o.at("out").get<std::string>();
    if (o.contains("threads")) cfg.threads = o.at("threads").get<int>();
    if (o.contains("command")) cfg.command = o.at("command").get<std::string>();
    if (o.contains("input")) cfg.input = o.at("input").get<std::string>();
    if (o.contains("T")) {
        cfg.estimator.T = o.at("T").get<double>();
        if (!(cfg.estimator.T > 0.0)) throw config_error("T", "must be > 0");
    }
    if (o.contains("R")) cfg.R = o.at("R").get<std::size_t>();
    if (o.contains("n")) {
        cfg.n_values.clear();
        if (o.at("n").is_array())
            for (const auto& v : o.at("n")) cfg.n_values.push_back(v.get<std::size_t>());
        else
            cfg.n_values.push_back(o.at("n").get<std::size_t>());
    }
    if (o.contains("eta")) {
        cfg.eta.clear();
        for (const auto& v : o.at("eta")) cfg.eta.push_back(v.get<double>());
    }
    if (o.contains("kernel")) cfg.estimator.kernel = parse_kernel(o.at("kernel"), "kernel");
    if (o.contains("basis")) {
        cfg.estimator.basis_family = o.at("basis").get<std::string>();
        if (cfg.estimator.basis_family != "haar" &&
            cfg.estimator.basis_family != "daubechies-4" &&
            cfg.estimator.basis_family != "daubechies-6")
            throw config_error("basis", "must be haar, daubechies-4 or daubechies-6");
    }
    if (o.contains("s")) {
        double s = o.at("s").get<double>();
        if (!(s > 0.0)) throw config_error("s", "must be > 0");
        if (cfg.scenario) cfg.scenario->s = s;
        if (cfg.estimator.kind == EstimatorConfig::Kind::wavelet) {
            cfg.estimator.j_policy.kind = JPolicy::Kind::oracle;
            cfg.estimator.j_policy.oracle_s = s;
        }
    }
}

void validate_command(RunConfig& cfg) {
    static const std::set<std::string> commands = {"fit-rkhs", "fit-wavelet", "check-assumption",
                                                   "simulate-ac", "rate-study"};
    if (!commands.count(cfg.command))
        throw config_error("command",
                           "must be one of fit-rkhs, fit-wavelet, check-assumption, simulate-ac, "
                           "rate-study");
    // command fixes the estimator kind for the fit/check commands
    if (cfg.command == "fit-rkhs" || cfg.command == "check-assumption")
        cfg.estimator.kind = EstimatorConfig::Kind::rkhs;
    if (cfg.command == "fit-wavelet") cfg.estimator.kind = EstimatorConfig::Kind::wavelet;

    if (cfg.estimator.kind == EstimatorConfig::Kind::rkhs && !cfg.estimator.kernel.eval)
        cfg.estimator.kernel = make_kernel("gaussian", 0.1, 1.0);

    if (cfg.command == "fit-rkhs" || cfg.command == "fit-wavelet") {
        if (cfg.input.empty() && !cfg.scenario)
            throw config_error("input", "fit commands need an input file or a scenario");
        if (!cfg.input.empty() && cfg.scenario)
            throw config_error("input", "give either an input file or a scenario, not both");
        if (cfg.scenario && cfg.n_values.size() != 1)
            throw config_error("n", "scenario-based fits need exactly one n");
    } else if (cfg.command == "check-assumption") {
        if (cfg.input.empty() && !cfg.scenario)
            throw config_error("input", "check-assumption needs an input file or a scenario");
        if (cfg.scenario && cfg.n_values.size() != 1)
            throw config_error("n", "scenario-based checks need exactly one n");
    } else {
        if (!cfg.scenario) throw config_error("scenario", "missing required field");
        if (cfg.command == "simulate-ac") {
            if (cfg.n_values.size() != 1) throw config_error("n", "simulate-ac needs exactly one n");
            if (cfg.eta.empty()) throw config_error("eta", "simulate-ac needs an eta grid");
            for (std::size_t i = 0; i < cfg.eta.size(); ++i) {
                if (cfg.eta[i] < 0.0) throw config_error("eta", "entries must be >= 0");
                if (i > 0 && cfg.eta[i] <= cfg.eta[i - 1])
                    throw config_error("eta", "grid must be strictly ascending");
            }
        } else {  // rate-study
            if (cfg.n_values.size() < 4)
                throw config_error("n", "rate-study needs at least 4 sample sizes");
        }
        if (cfg.R < 30) throw config_error("R", "must be >= 30");
    }
    for (std::size_t n : cfg.n_values)
        if (n < 4) throw config_error("n", "sample sizes must be >= 4");
    if (cfg.threads < 0) throw config_error("threads", "must be >= 0");
}

}  // namespace

RunConfig parse_config(const std::string& config_json, const std::string& overrides_json) {
    json j;
    try {
        j = json::parse(config_json);
    } catch (const json::parse_error& e) {
        throw config_error("document", std::string("not valid JSON: ") + e.what());
    }
    reject_unknown(j, "config",
                   {"command", "input", "estimator", "scenario", "n", "eta", "R", "seed", "out",
                    "threads"});
    RunConfig cfg;
    cfg.command = get_string(j, "config", "command", "", true);
    cfg.input = get_string(j, "config", "input", "");
    if (j.contains("estimator")) parse_estimator(j.at("estimator"), cfg);
    if (j.contains("scenario")) parse_scenario(j.at("scenario"), cfg);
    if (j.contains("n")) {
        if (j.at("n").is_array()) {
            for (const auto& v : j.at("n")) {
                if (!v.is_number_integer() && !v.is_number_unsigned())
                    throw config_error("n", "entries must be integers");
                cfg.n_values.push_back(v.get<std::size_t>());
            }
        } else if (j.at("n").is_number_integer() || j.at("n").is_number_unsigned()) {
            cfg.n_values.push_back(j.at("n").get<std::size_t>());
        } else {
            throw config_error("n", "expected an integer or an array of integers");
        }
    }
    if (j.contains("eta")) {
        if (!j.at("eta").is_array()) throw config_error("eta", "expected an array");
        for (const auto& v : j.at("eta")) {
            if (!v.is_number()) throw config_error("eta", "entries must be numbers");
            cfg.eta.push_back(v.get<double>());
        }
    }
    cfg.R = get_size(j, "config", "R", cfg.R);
    if (j.contains("seed")) {
        if (!j.at("seed").is_number_unsigned() && !j.at("seed").is_number_integer())
            throw config_error("seed", "expected an unsigned integer");
        cfg.seed = j.at("seed").get<std::uint64_t>();
    }
    cfg.out = get_string(j, "config", "out", cfg.out);
    if (j.contains("threads")) {
        if (!j.at("threads").is_number_integer() && !j.at("threads").is_number_unsigned())
            throw config_error("threads", "expected an integer");
        cfg.threads = j.at("threads").get<int>();
    }

    if (!overrides_json.empty()) {
        json o;
        try {
            o = json::parse(overrides_json);
        } catch (const json::parse_error& e) {
            throw config_error("overrides", std::string("not valid JSON: ") + e.what());
        }
        try {
            apply_overrides(o, cfg);
        } catch (const json::exception& e) {
            throw config_error("overrides", e.what());
        }
    }
    validate_command(cfg);
    return cfg;
}

std::string canonical_config_json(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    if (!cfg.input.empty()) j["input"] = cfg.input;
    json est;
    est["kind"] = cfg.estimator.kind == EstimatorConfig::Kind::rkhs ? "rkhs" : "wavelet";
    est["T"] = cfg.estimator.T;
    est["norm"] = cfg.estimator.norm == NormKind::empirical ? "empirical" : "population";
    est["quadrature_points"] = cfg.estimator.quadrature_points;
    if (cfg.estimator.kind == EstimatorConfig::Kind::rkhs) {
        if (cfg.estimator.kernel.eval)
            est["kernel"] = {{"name", cfg.estimator.kernel.name},
                             {"bandwidth", cfg.estimator.kernel.bandwidth},
                             {"scale", cfg.estimator.kernel.scale}};
        est["anchors"] = {
            {"policy", cfg.estimator.anchors.kind == AnchorPolicy::Kind::grid ? "grid" : "quantile"},
            {"low", cfg.estimator.anchors.low},
            {"high", cfg.estimator.anchors.high},
            {"count", cfg.estimator.anchors.count}};
    } else {
        est["basis"] = cfg.estimator.basis_family;
        switch (cfg.estimator.j_policy.kind) {
            case JPolicy::Kind::universal: est["j_policy"] = "universal"; break;
            case JPolicy::Kind::oracle:
                est["j_policy"] = {{"oracle_s", cfg.estimator.j_policy.oracle_s}};
                break;
            case JPolicy::Kind::fixed:
                est["j_policy"] = {{"fixed", cfg.estimator.j_policy.fixed_J}};
                break;
        }
    }
    j["estimator"] = est;
    if (cfg.scenario) {
        const ScenarioSpec& s = *cfg.scenario;
        json sc;
        if (!s.id.empty()) sc["id"] = s.id;
        sc["design"] = {{"name", s.design_name},
                        {"low", s.design_low},
                        {"high", s.design_high},
                        {"peak", s.design_peak}};
        json truth;
        truth["family"] = s.truth;
        if (s.truth != "zero") {
            truth["s"] = s.s;
            truth["c"] = s.c;
        }
        if (s.truth == "holder") {
            truth["j_max"] = s.j_max;
            truth["fill"] = s.full_levels ? "full" : "single";
            truth["basis"] = s.basis_family;
        }
        if (s.truth == "rkhs-sparse") {
            truth["kernel"] = {{"name", s.kernel_name},
                               {"bandwidth", s.kernel_bandwidth},
                               {"scale", s.kernel_scale}};
            truth["anchors"] = {{"low", s.anchors_low},
                                {"high", s.anchors_high},
                                {"count", s.anchors_count}};
        }
        sc["truth"] = truth;
        sc["noise"] = {{"kind", "uniform"}, {"amplitude", s.noise_amplitude}};
        sc["M"] = s.M;
        j["scenario"] = sc;
    }
    if (!cfg.n_values.empty()) j["n"] = cfg.n_values;
    if (!cfg.eta.empty()) j["eta"] = cfg.eta;
    j["R"] = cfg.R;
    j["seed"] = cfg.seed;
    j["out"] = cfg.out;
    j["threads"] = cfg.threads;
    return j.dump(2);
}

bool operator==(const RunConfig& a, const RunConfig& b) {
    return canonical_config_json(a) == canonical_config_json(b);
}

Scenario build_scenario(const RunConfig& cfg) {
    if (!cfg.scenario) throw config_error("scenario", "missing required field");
    const ScenarioSpec& s = *cfg.scenario;
    DistributionWarp design =
        analytic_warp(s.design_name, s.design_low, s.design_high, s.design_peak);
    Scenario sc;
    try {
        if (s.truth == "zero") {
            sc = make_zero_scenario(design, s.M, s.noise_amplitude);
        } else if (s.truth == "holder") {
            sc = make_holder_scenario(s.s, s.basis_family, design, s.M, s.noise_amplitude, s.c,
                                      s.j_max, s.full_levels);
        } else {
            Kernel kernel = make_kernel(s.kernel_name, s.kernel_bandwidth, s.kernel_scale);
            AnchorSet anchors = grid_anchors(s.anchors_low, s.anchors_high, s.anchors_count);
            sc = make_rkhs_sparse_scenario(kernel, anchors, s.s, s.M, s.noise_amplitude, s.c);
        }
    } catch (const std::invalid_argument& e) {
        throw config_error("scenario", e.what());
    }
    if (!s.id.empty()) sc.id = s.id;
    sc.master_seed = cfg.seed;
    return sc;
}

}  // namespace uthresh
