#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/scenario.hpp"

namespace uthresh {

enum class NormKind { empirical, population };

struct JPolicy {
    enum class Kind { universal, oracle, fixed };
    Kind kind = Kind::universal;
    double oracle_s = 0.0;
    int fixed_J = 0;
};

struct AnchorPolicy {
    enum class Kind { quantile, grid };
    Kind kind = Kind::quantile;
    double low = 0.0;
    double high = 1.0;
    std::size_t count = 0;  // 0 means p = floor(sqrt(n / log n))
};

/// Which estimator to run inside the harness and how to tune it.
struct EstimatorConfig {
    enum class Kind { rkhs, wavelet };
    Kind kind = Kind::wavelet;
    double T = 4.0;
    NormKind norm = NormKind::population;
    int quadrature_points = 4096;

    // rkhs
    Kernel kernel;
    AnchorPolicy anchors;

    // wavelet
    std::string basis_family = "haar";
    JPolicy j_policy;

    std::string label() const { return kind == Kind::rkhs ? "rkhs" : "wavelet"; }
};

/// Empirical exceedance curve over an eta grid, from R seeded replications.
/// exceed_prob is exactly nonincreasing in eta because every entry counts the
/// same replication losses. Failed replications carry infinite loss and hit
/// every eta.
struct ACEstimate {
    std::vector<double> eta_grid;
    std::vector<double> exceed_prob;
    std::vector<double> ci_low;
    std::vector<double> ci_high;
    std::size_t R = 0;
    std::size_t failures = 0;
    NormKind norm_kind = NormKind::population;
    std::vector<double> losses;  // per replication, ascending by index
};

/// Log-log least-squares fit of median loss against n / log n.
struct RateFit {
    std::vector<std::size_t> n_values;
    std::vector<double> median_losses;
    double slope = 0.0;
    double intercept = 0.0;
    double residual = 0.0;  // max |log residual|
    double target = 0.0;    // -s / (1 + 2s)
    std::vector<std::size_t> failures;  // per n
};

/// sqrt of the integral of (f_hat - f_rho)^2 composed with G^-1 over [0,1],
/// composite midpoint rule. quadrature_points must be >= 16. Dyadic point
/// counts keep haar breakpoints on cell boundaries.
double population_loss(const std::function<double(double)>& f_hat, const Scenario& scenario,
                       int quadrature_points);

/// Loss of a single seeded replication; infinity when the estimator refuses
/// (assumption violated / singular system).
double replication_loss(const EstimatorConfig& est, const Scenario& scenario, std::size_t n,
                        std::uint64_t replication);

/// All replication losses, index-ordered regardless of thread count.
std::vector<double> run_losses(const EstimatorConfig& est, const Scenario& scenario,
                               std::size_t n, std::size_t R, int threads = 0);

/// Fraction of losses strictly above eta.
double exceedance_from_losses(const std::vector<double>& losses, double eta);

/// (1/R) sum loss^q.
double moment_from_losses(const std::vector<double>& losses, double q);

/// 95% Wilson score interval for k successes out of n.
std::pair<double, double> wilson_interval(std::size_t k, std::size_t n);

ACEstimate estimate_ac(const EstimatorConfig& est, const Scenario& scenario, std::size_t n,
                       const std::vector<double>& eta_grid, std::size_t R, int threads = 0);

/// Least squares on precomputed (x, y) pairs; returns {slope, intercept,
/// max abs residual}.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_residual = 0.0;
};
LineFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y);

/// Median loss per sample size, slope of log median loss vs log(n / log n).
/// Needs >= 4 distinct n spanning at least two octaves and R >= 30; refuses
/// when more than 10% of replications fail at any n.
RateFit rate_study(const EstimatorConfig& est, const Scenario& scenario,
                   const std::vector<std::size_t>& n_values, std::size_t R, int threads = 0);

struct MomentEstimate {
    double value = 0.0;
    std::size_t failures = 0;
};

/// Empirical q-th moment (1/R) sum loss^q; infinite when a replication fails.
MomentEstimate moment_loss(const EstimatorConfig& est, const Scenario& scenario, std::size_t n,
                           double q, std::size_t R, int threads = 0);

/// Deterministic parallel loop: fn(i) for i in [0, count), results must be
/// written into index-addressed storage by the caller.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn);

}  // namespace uthresh
