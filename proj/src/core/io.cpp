#include "core/io.hpp"

#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/rkhs.hpp"
#include "core/wavelets.hpp"

namespace uthresh {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

double parse_cell(const std::string& cell, const std::string& where) {
    std::size_t used = 0;
    double v;
    try {
        v = std::stod(cell, &used);
    } catch (const std::exception&) {
        throw data_error(where, "not a number: '" + cell + "'");
    }
    if (used != cell.size()) throw data_error(where, "trailing characters in '" + cell + "'");
    if (!std::isfinite(v)) throw data_error(where, "value must be finite, got '" + cell + "'");
    return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw io_error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out) throw io_error("short write to '" + path.string() + "'");
}

std::string iso_timestamp() {
    auto now = std::chrono::system_clock::now();
    std::time_t t = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&t, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

Sample load_or_draw(const RunConfig& cfg, std::function<void(const std::string&)>& warn,
                    Scenario* scenario_out) {
    if (!cfg.input.empty()) return ingest_xy(cfg.input, warn);
    Scenario sc = build_scenario(cfg);
    Sample sample = draw_sample(sc, cfg.n_values.at(0), 0);
    if (scenario_out) *scenario_out = sc;
    return sample;
}

AnchorSet resolve_anchors(const AnchorPolicy& policy, const Sample& sample) {
    std::size_t p = policy.count ? policy.count : select_anchor_count(sample.n);
    if (policy.kind == AnchorPolicy::Kind::grid) return grid_anchors(policy.low, policy.high, p);
    return quantile_anchors(sample, p);
}

std::string plot_fit_csv(const std::function<double(double)>& f, double lo, double hi) {
    std::ostringstream out;
    out << "x,f_hat\n";
    const int points = 1024;
    for (int i = 0; i < points; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / (points - 1);
        out << format_g17(x) << ',' << format_g17(f(x)) << '\n';
    }
    return out.str();
}

nlohmann::json certificate_json(const DeltaCertificate& cert) {
    return {{"delta", cert.delta},
            {"lambda_min", cert.lambda_min},
            {"lambda_max", cert.lambda_max},
            {"inf_norm_inverse", cert.inf_norm_inverse}};
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

Sample ingest_xy(const std::string& path, std::function<void(const std::string&)> warn) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error(path, "cannot open file");
    std::string line;
    if (!std::getline(in, line)) throw data_error(path, "empty file");
    if (trim(line) != "x,y") throw data_error(path + ":1", "expected header 'x,y'");
    std::vector<double> xs, ys;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        std::string where = path + ":" + std::to_string(row);
        std::string t = trim(line);
        if (t.empty()) {
            if (warn) warn(where + ": blank line skipped");
            continue;
        }
        std::size_t comma = t.find(',');
        if (comma == std::string::npos) throw data_error(where, "expected 'x,y' pair");
        xs.push_back(parse_cell(trim(t.substr(0, comma)), where));
        ys.push_back(parse_cell(trim(t.substr(comma + 1)), where));
    }
    if (xs.empty()) throw data_error(path, "no data rows");
    return Sample(std::move(xs), std::move(ys), 1);
}

RunReport run_command(const RunConfig& cfg, std::function<void(const std::string&)> warn) {
    namespace fs = std::filesystem;
    fs::path out_dir(cfg.out);
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw io_error("cannot create output directory '" + cfg.out + "'");

    RunReport report;
    nlohmann::json summary;
    const EstimatorConfig& est = cfg.estimator;

    if (cfg.command == "fit-rkhs") {
        Scenario sc;
        Sample sample = load_or_draw(cfg, warn, &sc);
        AnchorSet anchors = resolve_anchors(est.anchors, sample);
        RkhsFit fit = fit_rkhs(sample, est.kernel, anchors, est.T, warn);
        write_text(out_dir / "fit_rkhs.json", rkhs_fit_to_json(fit));
        report.files.push_back("fit_rkhs.json");

        double lo = sample.x[0], hi = sample.x[0];
        for (double x : sample.x) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (cfg.scenario) {
            lo = cfg.scenario->design_low;
            hi = cfg.scenario->design_high;
        }
        write_text(out_dir / "plot_fit.csv",
                   plot_fit_csv([&](double x) { return fit.evaluate(x); }, lo, hi));
        report.files.push_back("plot_fit.csv");

        std::size_t kept = 0;
        for (double z : fit.z_thresholded)
            if (z != 0.0) ++kept;
        summary["command"] = cfg.command;
        summary["n"] = sample.n;
        summary["p"] = anchors.p;
        summary["delta"] = fit.certificate.delta;
        summary["lambda_n"] = fit.schedule.lambda_n;
        summary["kept_coefficients"] = kept;
    } else if (cfg.command == "fit-wavelet") {
        Scenario sc;
        Sample sample = load_or_draw(cfg, warn, &sc);
        WaveletBasis basis = WaveletBasis::make(est.basis_family);
        int J;
        switch (est.j_policy.kind) {
            case JPolicy::Kind::universal: J = select_max_level(sample.n); break;
            case JPolicy::Kind::oracle: J = select_max_level(sample.n, est.j_policy.oracle_s); break;
            default: J = est.j_policy.fixed_J; break;
        }
        WaveletFit fit = fit_wavelet(sample, basis, est.T, J, warn);
        write_text(out_dir / "fit_wavelet.json", wavelet_fit_to_json(fit));
        report.files.push_back("fit_wavelet.json");

        double lo = sample.x[0], hi = sample.x[0];
        for (double x : sample.x) {
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
        if (cfg.scenario) {
            lo = cfg.scenario->design_low;
            hi = cfg.scenario->design_high;
        }
        write_text(out_dir / "plot_fit.csv",
                   plot_fit_csv([&](double x) { return fit.evaluate(x); }, lo, hi));
        report.files.push_back("plot_fit.csv");

        std::size_t kept = 0;
        for (const auto& level : fit.grid.detail)
            for (double v : level)
                if (v != 0.0) ++kept;
        for (double v : fit.grid.scaling)
            if (v != 0.0) ++kept;
        summary["command"] = cfg.command;
        summary["n"] = sample.n;
        summary["J"] = fit.J;
        summary["lambda_n"] = fit.schedule.lambda_n;
        summary["kept_coefficients"] = kept;
    } else if (cfg.command == "check-assumption") {
        Scenario sc;
        Sample sample = load_or_draw(cfg, warn, &sc);
        AnchorSet anchors = resolve_anchors(est.anchors, sample);
        DesignMatrices design = build_design(est.kernel, anchors, sample);
        DeltaCertificate cert = certify_delta(design.m_np);  // throws when (A) fails
        nlohmann::json j = certificate_json(cert);
        j["n"] = sample.n;
        j["p"] = anchors.p;
        j["kernel"] = {{"name", est.kernel.name},
                       {"bandwidth", est.kernel.bandwidth},
                       {"scale", est.kernel.scale}};
        write_text(out_dir / "certificate.json", j.dump(2) + "\n");
        report.files.push_back("certificate.json");
        summary = j;
    } else if (cfg.command == "simulate-ac") {
        Scenario sc = build_scenario(cfg);
        ACEstimate ac = estimate_ac(est, sc, cfg.n_values.at(0), cfg.eta, cfg.R, cfg.threads);

        std::ostringstream csv;
        csv << "scenario_id,estimator,n,eta,exceed_prob,ci_low,ci_high,R,failures\n";
        for (std::size_t i = 0; i < ac.eta_grid.size(); ++i)
            csv << sc.id << ',' << est.label() << ',' << cfg.n_values.at(0) << ','
                << format_g17(ac.eta_grid[i]) << ',' << format_g17(ac.exceed_prob[i]) << ','
                << format_g17(ac.ci_low[i]) << ',' << format_g17(ac.ci_high[i]) << ',' << ac.R
                << ',' << ac.failures << '\n';
        write_text(out_dir / "ac_curve.csv", csv.str());
        report.files.push_back("ac_curve.csv");

        std::ostringstream plot;
        plot << "eta,exceed_prob\n";
        for (std::size_t i = 0; i < ac.eta_grid.size(); ++i)
            plot << format_g17(ac.eta_grid[i]) << ',' << format_g17(ac.exceed_prob[i]) << '\n';
        write_text(out_dir / "plot_ac.csv", plot.str());
        report.files.push_back("plot_ac.csv");

        summary["command"] = cfg.command;
        summary["scenario"] = sc.id;
        summary["failures"] = ac.failures;
        summary["R"] = ac.R;
    } else if (cfg.command == "rate-study") {
        Scenario sc = build_scenario(cfg);
        RateFit rf = rate_study(est, sc, cfg.n_values, cfg.R, cfg.threads);

        std::ostringstream csv;
        csv << "scenario_id,estimator,s,n,median_loss,slope,target_slope,residual\n";
        for (std::size_t i = 0; i < rf.n_values.size(); ++i)
            csv << sc.id << ',' << est.label() << ',' << format_g17(sc.s) << ','
                << rf.n_values[i] << ',' << format_g17(rf.median_losses[i]) << ','
                << format_g17(rf.slope) << ',' << format_g17(rf.target) << ','
                << format_g17(rf.residual) << '\n';
        write_text(out_dir / "rate_fit.csv", csv.str());
        report.files.push_back("rate_fit.csv");

        summary["command"] = cfg.command;
        summary["scenario"] = sc.id;
        summary["slope"] = rf.slope;
        summary["target_slope"] = rf.target;
        summary["residual"] = rf.residual;
    } else {
        throw config_error("command", "unknown command '" + cfg.command + "'");
    }

    nlohmann::json manifest;
    manifest["config"] = nlohmann::json::parse(canonical_config_json(cfg));
    manifest["seeds"] = {{"master", cfg.seed}};
    manifest["outputs"] = report.files;
    manifest["timestamp"] = iso_timestamp();
    write_text(out_dir / "manifest.json", manifest.dump(2) + "\n");
    report.files.push_back("manifest.json");

    report.summary = summary.dump(2);
    return report;
}

}  // namespace uthresh
