#include "core/scenario.hpp"

#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace uthresh {

namespace {

double triangular_cdf(double u, double peak) {
    if (u <= peak) return u * u / peak;
    double r = 1.0 - u;
    return 1.0 - r * r / (1.0 - peak);
}

double triangular_quantile(double v, double peak) {
    if (v <= peak) return std::sqrt(v * peak);
    return 1.0 - std::sqrt((1.0 - v) * (1.0 - peak));
}

double smooth_beta_cdf(double u) { return u * u * (3.0 - 2.0 * u); }

double smooth_beta_quantile(double v) { return 0.5 - std::sin(std::asin(1.0 - 2.0 * v) / 3.0); }

int active_sign(int k) { return (k % 2 == 0) ? 1 : -1; }

}  // namespace

double DistributionWarp::G(double t) const {
    if (t <= low) return 0.0;
    if (t >= high) return 1.0;
    double u = (t - low) / (high - low);
    if (name == "uniform") return u;
    if (name == "triangular") return triangular_cdf(u, peak);
    if (name == "smooth-beta") return smooth_beta_cdf(u);
    throw std::invalid_argument("DistributionWarp: unknown design '" + name + "'");
}

double DistributionWarp::G_inverse(double u) const {
    if (u <= 0.0) return low;
    if (u >= 1.0) return high;
    double v;
    if (name == "uniform")
        v = u;
    else if (name == "triangular")
        v = triangular_quantile(u, peak);
    else if (name == "smooth-beta")
        v = smooth_beta_quantile(u);
    else
        throw std::invalid_argument("DistributionWarp: unknown design '" + name + "'");
    return low + v * (high - low);
}

DistributionWarp analytic_warp(const std::string& name, double low, double high, double peak) {
    if (name != "uniform" && name != "triangular" && name != "smooth-beta")
        throw std::invalid_argument("analytic_warp: unknown design '" + name + "'");
    if (!(high > low)) throw std::invalid_argument("analytic_warp: need high > low");
    if (!(peak > 0.0 && peak < 1.0))
        throw std::invalid_argument("analytic_warp: peak must lie strictly inside (0,1)");
    DistributionWarp w;
    w.name = name;
    w.low = low;
    w.high = high;
    w.peak = peak;
    return w;
}

double Scenario::f_warped(double u) const {
    if (truth_family == "zero") return 0.0;
    if (truth_family == "holder") {
        const int N = basis->support_factor();
        double total = 0.0;
        for (int j = 0; j <= j_max; ++j) {
            const double coeff = holder_c * std::pow(2.0, -j * (s + 0.5));
            const int positions = 1 << j;
            if (full_levels) {
                // only wavelets whose support covers u can contribute
                int base = static_cast<int>(std::floor(std::min(u, std::nextafter(1.0, 0.0)) *
                                                       static_cast<double>(positions)));
                for (int back = 0; back < N && back < positions; ++back) {
                    int k = base - back;
                    int kw = ((k % positions) + positions) % positions;
                    total += coeff * active_sign(kw) * basis->psi_eval(j, kw, u);
                }
            } else {
                int k = j % positions;
                total += coeff * basis->psi_eval(j, k, u);
            }
        }
        return total;
    }
    if (truth_family == "rkhs-sparse") return f_rho(design.G_inverse(u));
    throw std::logic_error("Scenario: unknown truth family");
}

double Scenario::f_rho(double x) const {
    if (truth_family == "zero") return 0.0;
    if (truth_family == "holder") return f_warped(design.G(x));
    if (truth_family == "rkhs-sparse") {
        double s_val = 0.0;
        for (std::size_t l = 0; l < anchors.p; ++l)
            s_val += alpha[l] * kernel.eval(anchors.point(l), &x, 1);
        return s_val;
    }
    throw std::logic_error("Scenario: unknown truth family");
}

double Scenario::truth_sup_bound() const {
    if (truth_family == "zero") return 0.0;
    if (truth_family == "holder") {
        // per level at most N overlapping wavelets, each bounded by
        // 2^{j/2} psi_sup, with coefficient c 2^{-j(s+1/2)}
        const double N = static_cast<double>(basis->support_factor());
        double total = 0.0;
        for (int j = 0; j <= j_max; ++j) {
            double per_level = holder_c * std::pow(2.0, -j * s) * basis->psi_sup();
            total += full_levels ? N * per_level : per_level;
        }
        return total;
    }
    if (kernel.name == "indicator-partition") {
        // disjoint sections: one anchor per cell
        double worst = 0.0;
        for (double a : alpha) worst = std::max(worst, std::fabs(a));
        return worst * kernel.kappa;
    }
    // overlapping sections: scan the anchor range with margin
    double lo = anchors.points[0], hi = anchors.points[0];
    for (std::size_t l = 0; l < anchors.p; ++l) {
        lo = std::min(lo, anchors.points[l]);
        hi = std::max(hi, anchors.points[l]);
    }
    double margin = std::max(1.0, hi - lo);
    lo -= margin;
    hi += margin;
    double worst = 0.0;
    const int grid = 8192;
    for (int i = 0; i <= grid; ++i) {
        double x = lo + (hi - lo) * static_cast<double>(i) / grid;
        worst = std::max(worst, std::fabs(f_rho(x)));
    }
    return worst * 1.02;
}

CoefficientGrid Scenario::holder_grid(int J) const {
    if (truth_family != "holder")
        throw std::invalid_argument("holder_grid: scenario has no wavelet coefficient table");
    CoefficientGrid grid;
    grid.J = J;
    grid.scaling.assign(1, 0.0);
    grid.detail.resize(static_cast<std::size_t>(J) + 1);
    for (int j = 0; j <= J; ++j) {
        auto& level = grid.detail[static_cast<std::size_t>(j)];
        level.assign(std::size_t{1} << j, 0.0);
        if (j > j_max) continue;
        const double coeff = holder_c * std::pow(2.0, -j * (s + 0.5));
        if (full_levels) {
            for (std::size_t k = 0; k < level.size(); ++k)
                level[k] = active_sign(static_cast<int>(k)) * coeff;
        } else {
            level[static_cast<std::size_t>(j) % level.size()] = coeff;
        }
    }
    return grid;
}

namespace {

void check_budget(const Scenario& sc) {
    double sup = sc.truth_sup_bound();
    if (sup + sc.noise_amplitude > sc.M / 2.0 + 1e-12)
        throw std::invalid_argument(
            "scenario: |f_rho| + noise amplitude exceeds M/2; shrink c or the noise");
}

}  // namespace

Scenario make_holder_scenario(double s, const std::string& basis_family,
                              const DistributionWarp& design, double M, double noise_amplitude,
                              double c, int j_max, bool full_levels) {
    if (!(s > 0.0)) throw std::invalid_argument("holder scenario: s must be > 0");
    if (!(M > 0.0)) throw std::invalid_argument("holder scenario: M must be > 0");
    if (!(noise_amplitude >= 0.0)) throw std::invalid_argument("holder scenario: bad noise");
    if (j_max < 0) throw std::invalid_argument("holder scenario: j_max must be >= 0");
    Scenario sc;
    sc.truth_family = "holder";
    sc.design = design;
    sc.M = M;
    sc.s = s;
    sc.noise_amplitude = noise_amplitude;
    sc.basis = std::make_shared<const WaveletBasis>(WaveletBasis::make(basis_family));
    sc.j_max = j_max;
    sc.full_levels = full_levels;
    sc.id = "holder-" + basis_family + "-s" + std::to_string(s);
    if (c <= 0.0) {
        // geometric level bound: sum_j N 2^{-js} psi_sup < N psi_sup / (1 - 2^-s)
        double per_unit =
            (full_levels ? static_cast<double>(sc.basis->support_factor()) : 1.0) *
            sc.basis->psi_sup() / (1.0 - std::pow(2.0, -s));
        c = (M / 2.0 - noise_amplitude) / per_unit;
        if (!(c > 0.0))
            throw std::invalid_argument("holder scenario: no amplitude budget left for the signal");
    }
    sc.holder_c = c;
    check_budget(sc);
    return sc;
}

Scenario make_rkhs_sparse_scenario(const Kernel& kernel, const AnchorSet& anchors, double s,
                                   double M, double noise_amplitude, double c) {
    if (!(s > 0.0)) throw std::invalid_argument("rkhs scenario: s must be > 0");
    if (!(M > 0.0)) throw std::invalid_argument("rkhs scenario: M must be > 0");
    if (anchors.dim != 1)
        throw std::invalid_argument("rkhs scenario: one-dimensional designs only");
    Scenario sc;
    sc.truth_family = "rkhs-sparse";
    sc.design = analytic_warp("uniform", 0.0, 1.0);
    sc.M = M;
    sc.s = s;
    sc.noise_amplitude = noise_amplitude;
    sc.kernel = kernel;
    sc.anchors = anchors;
    sc.id = "rkhs-sparse-" + kernel.name + "-s" + std::to_string(s);

    sc.alpha.resize(anchors.p);
    for (std::size_t l = 0; l < anchors.p; ++l)
        sc.alpha[l] = std::pow(static_cast<double>(l + 1), -(s + 0.5));
    if (c <= 0.0) {
        double unit_sup = sc.truth_sup_bound();
        c = (M / 2.0 - noise_amplitude) / unit_sup;
        if (!(c > 0.0))
            throw std::invalid_argument("rkhs scenario: no amplitude budget left for the signal");
    }
    for (double& a : sc.alpha) a *= c;
    check_budget(sc);
    return sc;
}

Scenario make_zero_scenario(const DistributionWarp& design, double M, double noise_amplitude) {
    if (!(M > 0.0)) throw std::invalid_argument("zero scenario: M must be > 0");
    if (!(noise_amplitude >= 0.0 && noise_amplitude <= M / 2.0))
        throw std::invalid_argument("zero scenario: noise amplitude must lie in [0, M/2]");
    Scenario sc;
    sc.truth_family = "zero";
    sc.design = design;
    sc.M = M;
    sc.noise_amplitude = noise_amplitude;
    sc.id = "zero-" + design.name;
    return sc;
}

Sample draw_sample(const Scenario& scenario, std::size_t n, std::uint64_t replication) {
    if (n < 1) throw std::invalid_argument("draw_sample: n must be >= 1");
    RngStream xs = RngStream::derive(scenario.master_seed, replication, 1);
    RngStream eps = RngStream::derive(scenario.master_seed, replication, 2);
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = scenario.design.G_inverse(xs.uniform01());
        double noise = scenario.noise_amplitude > 0.0 ? eps.symmetric(scenario.noise_amplitude) : 0.0;
        y[i] = scenario.f_rho(x[i]) + noise;
        if (std::fabs(y[i]) > scenario.M / 2.0 + 1e-9)
            throw std::logic_error("draw_sample: generated pair violates the range bound");
    }
    return Sample(std::move(x), std::move(y), 1);
}

}  // namespace uthresh
