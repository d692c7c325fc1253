#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/config.hpp"
#include "core/harness.hpp"
#include "core/sample.hpp"

namespace uthresh {

/// Reads a CSV with header "x,y" and one finite decimal pair per row.
/// Row order is preserved. Parse problems name the offending row.
Sample ingest_xy(const std::string& path,
                 std::function<void(const std::string&)> warn = {});

/// Outcome of run_command: a short human-readable report for stdout plus the
/// list of files written (relative to the output directory).
struct RunReport {
    std::string summary;
    std::vector<std::string> files;
};

/// Executes a validated RunConfig end to end: load or draw data, run the
/// command, persist results (CSV schemas below) and a manifest. All numeric
/// output uses 17 significant digits; reruns with identical config and seed
/// are byte-identical except for the manifest timestamp.
///
/// Files per command:
///   fit-rkhs          fit_rkhs.json, plot_fit.csv
///   fit-wavelet       fit_wavelet.json, plot_fit.csv
///   check-assumption  certificate.json
///   simulate-ac       ac_curve.csv, plot_ac.csv
///   rate-study        rate_fit.csv
/// plus manifest.json always.
RunReport run_command(const RunConfig& config,
                      std::function<void(const std::string&)> warn = {});

std::string format_g17(double v);

}  // namespace uthresh
