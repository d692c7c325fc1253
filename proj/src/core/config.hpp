#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/harness.hpp"
#include "core/scenario.hpp"

namespace uthresh {

/// Scenario description as configured (kept verbatim for provenance).
struct ScenarioSpec {
    std::string id;  // empty: derived from the family
    std::string design_name = "uniform";
    double design_low = 0.0;
    double design_high = 1.0;
    double design_peak = 0.5;

    std::string truth = "zero";  // "zero" | "holder" | "rkhs-sparse"
    double s = 1.0;
    double c = 0.0;  // 0 = auto-scale to the amplitude budget
    int j_max = 11;
    bool full_levels = true;
    std::string basis_family = "haar";

    std::string kernel_name = "indicator-partition";
    double kernel_bandwidth = 0.0625;
    double kernel_scale = 4.0;
    double anchors_low = 0.0;
    double anchors_high = 1.0;
    std::size_t anchors_count = 16;

    double noise_amplitude = 0.0;
    double M = 2.0;
};

/// A fully validated run description; every field checked, unknown keys
/// rejected.
struct RunConfig {
    std::string command;  // fit-rkhs | fit-wavelet | check-assumption | simulate-ac | rate-study
    std::string input;    // CSV path for fit/check commands (optional when a scenario is given)
    EstimatorConfig estimator;
    std::optional<ScenarioSpec> scenario;
    std::vector<std::size_t> n_values;
    std::vector<double> eta;
    std::size_t R = 100;
    std::uint64_t seed = 1;
    std::string out = ".";
    int threads = 0;
};

/// Parses and validates a config document, filling defaults (T = 4, universal
/// J policy, R = 100, quadrature_points = 4096). `overrides_json`, when
/// nonempty, is a flat object applied on top: seed, out, threads, n, T, eta,
/// R, kernel, basis, s, input, command. Throws config_error naming the field.
RunConfig parse_config(const std::string& config_json, const std::string& overrides_json = "");

/// Canonical serialization; parse_config(canonical_config_json(c)) == c.
std::string canonical_config_json(const RunConfig& config);

bool operator==(const RunConfig& a, const RunConfig& b);

/// Instantiates the configured scenario with the run's master seed.
Scenario build_scenario(const RunConfig& config);

}  // namespace uthresh
