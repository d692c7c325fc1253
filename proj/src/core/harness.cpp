#include "core/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "core/errors.hpp"
#include "core/rkhs.hpp"
#include "core/wavelets.hpp"

namespace uthresh {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::function<double(double)> fit_estimator(const EstimatorConfig& est, const Sample& sample) {
    if (est.kind == EstimatorConfig::Kind::wavelet) {
        WaveletBasis basis = WaveletBasis::make(est.basis_family);
        int J;
        switch (est.j_policy.kind) {
            case JPolicy::Kind::universal: J = select_max_level(sample.n); break;
            case JPolicy::Kind::oracle: J = select_max_level(sample.n, est.j_policy.oracle_s); break;
            default: J = est.j_policy.fixed_J; break;
        }
        auto fit = std::make_shared<WaveletFit>(fit_wavelet(sample, basis, est.T, J));
        return [fit](double x) { return fit->evaluate(x); };
    }
    AnchorSet anchors;
    if (est.anchors.kind == AnchorPolicy::Kind::grid) {
        std::size_t p = est.anchors.count ? est.anchors.count : select_anchor_count(sample.n);
        anchors = grid_anchors(est.anchors.low, est.anchors.high, p);
    } else {
        std::size_t p = est.anchors.count ? est.anchors.count : select_anchor_count(sample.n);
        anchors = quantile_anchors(sample, p);
    }
    auto fit = std::make_shared<RkhsFit>(fit_rkhs(sample, est.kernel, anchors, est.T));
    return [fit](double x) { return fit->evaluate(x); };
}

double loss_of_fit(const EstimatorConfig& est, const Scenario& scenario, const Sample& sample,
                   const std::function<double(double)>& f_hat) {
    if (est.norm == NormKind::population)
        return population_loss(f_hat, scenario, est.quadrature_points);
    double acc = 0.0;
    for (std::size_t i = 0; i < sample.n; ++i) {
        double d = f_hat(sample.x[i]) - scenario.f_rho(sample.x[i]);
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(sample.n));
}

}  // namespace

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    unsigned hw = std::thread::hardware_concurrency();
    std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                      : std::max<std::size_t>(hw ? hw : 1, 1);
    workers = std::min(workers, count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        pool.emplace_back([&]() {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) break;
                fn(i);
            }
        });
    for (auto& t : pool) t.join();
}

double population_loss(const std::function<double(double)>& f_hat, const Scenario& scenario,
                       int quadrature_points) {
    if (quadrature_points < 16)
        throw std::invalid_argument("population_loss: need at least 16 quadrature points");
    const double q = quadrature_points;
    double acc = 0.0;
    for (int i = 0; i < quadrature_points; ++i) {
        double u = (static_cast<double>(i) + 0.5) / q;
        double d = f_hat(scenario.design.G_inverse(u)) - scenario.f_warped(u);
        acc += d * d;
    }
    return std::sqrt(acc / q);
}

double replication_loss(const EstimatorConfig& est, const Scenario& scenario, std::size_t n,
                        std::uint64_t replication) {
    Sample sample = draw_sample(scenario, n, replication);
    try {
        auto f_hat = fit_estimator(est, sample);
        return loss_of_fit(est, scenario, sample, f_hat);
    } catch (const assumption_violated&) {
        return kInf;
    } catch (const singular_system&) {
        return kInf;
    }
}

namespace {

// reject malformed estimator configs before any worker thread runs
void validate_estimator(const EstimatorConfig& est) {
    if (!(est.T > 0.0)) throw std::invalid_argument("estimator: T must be > 0");
    if (est.norm == NormKind::population && est.quadrature_points < 16)
        throw std::invalid_argument("estimator: need at least 16 quadrature points");
    if (est.kind == EstimatorConfig::Kind::rkhs && !est.kernel.eval)
        throw std::invalid_argument("estimator: rkhs runs need a kernel");
    if (est.kind == EstimatorConfig::Kind::wavelet) WaveletBasis::make(est.basis_family);
}

}  // namespace

std::vector<double> run_losses(const EstimatorConfig& est, const Scenario& scenario,
                               std::size_t n, std::size_t R, int threads) {
    validate_estimator(est);
    std::vector<double> losses(R, 0.0);
    parallel_for(R, threads,
                 [&](std::size_t r) { losses[r] = replication_loss(est, scenario, n, r); });
    return losses;
}

double exceedance_from_losses(const std::vector<double>& losses, double eta) {
    if (losses.empty()) throw std::invalid_argument("exceedance_from_losses: no losses");
    std::size_t k = 0;
    for (double l : losses)
        if (l > eta) ++k;
    return static_cast<double>(k) / static_cast<double>(losses.size());
}

std::pair<double, double> wilson_interval(std::size_t k, std::size_t n) {
    if (n == 0) throw std::invalid_argument("wilson_interval: n must be positive");
    const double z = 1.959963984540054;  // 97.5% normal quantile
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(k) / nn;
    const double denom = 1.0 + z * z / nn;
    const double center = (p + z * z / (2.0 * nn)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / nn + z * z / (4.0 * nn * nn)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

ACEstimate estimate_ac(const EstimatorConfig& est, const Scenario& scenario, std::size_t n,
                       const std::vector<double>& eta_grid, std::size_t R, int threads) {
    if (R < 30) throw std::invalid_argument("estimate_ac: need R >= 30");
    if (eta_grid.empty()) throw std::invalid_argument("estimate_ac: empty eta grid");
    for (std::size_t i = 0; i < eta_grid.size(); ++i) {
        if (eta_grid[i] < 0.0) throw std::invalid_argument("estimate_ac: eta must be >= 0");
        if (i > 0 && eta_grid[i] <= eta_grid[i - 1])
            throw std::invalid_argument("estimate_ac: eta grid must be strictly ascending");
    }
    ACEstimate ac;
    ac.eta_grid = eta_grid;
    ac.R = R;
    ac.norm_kind = est.norm;
    ac.losses = run_losses(est, scenario, n, R, threads);
    for (double l : ac.losses)
        if (std::isinf(l)) ++ac.failures;
    for (double eta : eta_grid) {
        std::size_t k = 0;
        for (double l : ac.losses)
            if (l > eta) ++k;
        auto [lo, hi] = wilson_interval(k, R);
        ac.exceed_prob.push_back(static_cast<double>(k) / static_cast<double>(R));
        ac.ci_low.push_back(lo);
        ac.ci_high.push_back(hi);
    }
    return ac;
}

LineFit fit_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw std::invalid_argument("fit_log_slope: need at least two points");
    const double n = static_cast<double>(x.size());
    double sx = 0.0, sy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx == 0.0) throw std::invalid_argument("fit_log_slope: degenerate abscissae");
    LineFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < x.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::fabs(y[i] - fit.intercept - fit.slope * x[i]));
    return fit;
}

RateFit rate_study(const EstimatorConfig& est, const Scenario& scenario,
                   const std::vector<std::size_t>& n_values, std::size_t R, int threads) {
    if (R < 30) throw std::invalid_argument("rate_study: need R >= 30");
    std::vector<std::size_t> ns = n_values;
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    if (ns.size() < 4) throw std::invalid_argument("rate_study: need >= 4 distinct n values");
    if (ns.back() < 4 * ns.front())
        throw std::invalid_argument("rate_study: n values must span at least two octaves");

    RateFit rf;
    rf.n_values = ns;
    rf.target = -scenario.s / (1.0 + 2.0 * scenario.s);
    std::vector<double> xs, ys;
    for (std::size_t n : ns) {
        std::vector<double> losses = run_losses(est, scenario, n, R, threads);
        std::size_t failures = 0;
        for (double l : losses)
            if (std::isinf(l)) ++failures;
        rf.failures.push_back(failures);
        if (10 * failures > R)
            throw std::runtime_error("rate_study: more than 10% of replications failed at n = " +
                                     std::to_string(n));
        std::sort(losses.begin(), losses.end());
        double median = (R % 2 == 1) ? losses[R / 2]
                                     : 0.5 * (losses[R / 2 - 1] + losses[R / 2]);
        if (!(median > 0.0) || std::isinf(median))
            throw std::runtime_error("rate_study: degenerate median loss at n = " +
                                     std::to_string(n));
        rf.median_losses.push_back(median);
        double nn = static_cast<double>(n);
        xs.push_back(std::log(nn / std::log(nn)));
        ys.push_back(std::log(median));
    }
    LineFit fit = fit_log_slope(xs, ys);
    rf.slope = fit.slope;
    rf.intercept = fit.intercept;
    rf.residual = fit.max_residual;
    return rf;
}

double moment_from_losses(const std::vector<double>& losses, double q) {
    if (losses.empty()) throw std::invalid_argument("moment_from_losses: no losses");
    double acc = 0.0;
    for (double l : losses) acc += std::pow(l, q);
    return acc / static_cast<double>(losses.size());
}

MomentEstimate moment_loss(const EstimatorConfig& est, const Scenario& scenario, std::size_t n,
                           double q, std::size_t R, int threads) {
    if (!(q >= 1.0)) throw std::invalid_argument("moment_loss: need q >= 1");
    if (R < 30) throw std::invalid_argument("moment_loss: need R >= 30");
    std::vector<double> losses = run_losses(est, scenario, n, R, threads);
    MomentEstimate me;
    for (double l : losses)
        if (std::isinf(l)) ++me.failures;
    me.value = moment_from_losses(losses, q);
    return me;
}

}  // namespace uthresh
