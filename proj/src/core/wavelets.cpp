#include "core/wavelets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/thresholding.hpp"

namespace uthresh {

namespace {

std::vector<double> lowpass_filter(const std::string& family) {
    const double s2 = std::sqrt(2.0);
    if (family == "haar") {
        return {1.0 / s2, 1.0 / s2};
    }
    if (family == "daubechies-4") {
        const double s3 = std::sqrt(3.0);
        return {(1.0 + s3) / (4.0 * s2), (3.0 + s3) / (4.0 * s2), (3.0 - s3) / (4.0 * s2),
                (1.0 - s3) / (4.0 * s2)};
    }
    if (family == "daubechies-6") {
        const double s10 = std::sqrt(10.0);
        const double q = std::sqrt(5.0 + 2.0 * s10);
        const double d = 16.0 * s2;
        return {(1.0 + s10 + q) / d,        (5.0 + s10 + 3.0 * q) / d,
                (10.0 - 2.0 * s10 + 2.0 * q) / d, (10.0 - 2.0 * s10 - 2.0 * q) / d,
                (5.0 + s10 - 3.0 * q) / d,  (1.0 + s10 - q) / d};
    }
    throw std::invalid_argument("wavelet basis: unknown family '" + family + "'");
}

int ilog2(std::size_t v) {
    int j = 0;
    while ((std::size_t{1} << (j + 1)) <= v) ++j;
    return j;
}

bool is_pow2(std::size_t v) { return v >= 1 && (v & (v - 1)) == 0; }

// one analysis step with periodic wrap
void analysis_step(const std::vector<double>& a, const std::vector<double>& lo,
                   const std::vector<double>& hi, std::vector<double>& approx,
                   std::vector<double>& detail) {
    const std::size_t len = a.size();
    const std::size_t half = len / 2;
    approx.assign(half, 0.0);
    detail.assign(half, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        double ae = 0.0, de = 0.0;
        for (std::size_t m = 0; m < lo.size(); ++m) {
            double v = a[(2 * k + m) % len];
            ae += lo[m] * v;
            de += hi[m] * v;
        }
        approx[k] = ae;
        detail[k] = de;
    }
}

// transpose of analysis_step
void synthesis_step(const std::vector<double>& approx, const std::vector<double>& detail,
                    const std::vector<double>& lo, const std::vector<double>& hi,
                    std::vector<double>& out) {
    const std::size_t half = approx.size();
    const std::size_t len = 2 * half;
    out.assign(len, 0.0);
    for (std::size_t k = 0; k < half; ++k) {
        for (std::size_t m = 0; m < lo.size(); ++m) {
            std::size_t idx = (2 * k + m) % len;
            out[idx] += lo[m] * approx[k] + hi[m] * detail[k];
        }
    }
}

}  // namespace

WaveletBasis WaveletBasis::make(const std::string& family) {
    WaveletBasis b;
    b.family_ = family;
    b.lo_ = lowpass_filter(family);
    const std::size_t taps = b.lo_.size();
    b.hi_.resize(taps);
    for (std::size_t m = 0; m < taps; ++m)
        b.hi_[m] = ((m % 2 == 0) ? 1.0 : -1.0) * b.lo_[taps - 1 - m];
    if (family == "haar") {
        b.psi_sup_ = 1.0;
        b.psi_slope_sup_ = 2.0;  // jump magnitude stands in for the missing derivative
    } else {
        b.build_tables(12);
    }
    return b;
}

void WaveletBasis::build_tables(int depth) {
    const int taps = static_cast<int>(lo_.size());
    const int L = taps - 1;  // support of phi is [0, L]

    // phi at the integers: fixed point of the refinement matrix, normalized
    // to sum 1 (partition of unity)
    std::vector<double> phi_int(L + 1, 0.0);
    phi_int[1] = 1.0;
    for (int it = 0; it < 2000; ++it) {
        std::vector<double> next(L + 1, 0.0);
        for (int k = 0; k <= L; ++k) {
            double s = 0.0;
            for (int m = 0; m <= L; ++m) {
                int t = 2 * k - m;
                if (t >= 0 && t < taps) s += std::sqrt(2.0) * lo_[t] * phi_int[m];
            }
            next[k] = s;
        }
        double total = std::accumulate(next.begin(), next.end(), 0.0);
        if (total != 0.0)
            for (double& v : next) v /= total;
        phi_int.swap(next);
    }

    // dyadic refinement of phi, one level deeper than the psi table
    std::vector<double> phi = phi_int;
    for (int d = 1; d <= depth + 1; ++d) {
        std::vector<double> fine(static_cast<std::size_t>(L) * (std::size_t{1} << d) + 1, 0.0);
        const long pitch = static_cast<long>(std::size_t{1} << (d - 1));  // coarse entries per unit
        for (std::size_t i = 0; i < fine.size(); ++i) {
            if (i % 2 == 0) {
                fine[i] = phi[i / 2];
                continue;
            }
            // phi(x) = sqrt(2) sum_t lo[t] phi(2x - t); 2x lands on the coarser grid
            double s = 0.0;
            for (int t = 0; t < taps; ++t) {
                long pos = static_cast<long>(i) - static_cast<long>(t) * pitch;
                if (pos >= 0 && pos < static_cast<long>(phi.size()))
                    s += std::sqrt(2.0) * lo_[t] * phi[static_cast<std::size_t>(pos)];
            }
            fine[i] = s;
        }
        phi.swap(fine);
    }

    // psi(x) = sqrt(2) sum_t hi[t] phi(2x - t) on [0, L]
    table_depth_ = depth;
    const std::size_t res = std::size_t{1} << depth;
    psi_table_.assign(static_cast<std::size_t>(L) * res + 1, 0.0);
    const long phi_res = static_cast<long>(res * 2);  // phi table spacing is half as wide
    for (std::size_t i = 0; i < psi_table_.size(); ++i) {
        // psi(i/res) needs phi(2 * i/res - t); in phi-table units that is
        // 4i - t * phi_res
        double s = 0.0;
        for (int t = 0; t < taps; ++t) {
            long idx = 4 * static_cast<long>(i) - static_cast<long>(t) * phi_res;
            if (idx >= 0 && idx < static_cast<long>(phi.size()))
                s += std::sqrt(2.0) * hi_[t] * phi[static_cast<std::size_t>(idx)];
        }
        psi_table_[i] = s;
    }

    psi_sup_ = 0.0;
    psi_slope_sup_ = 0.0;
    for (std::size_t i = 0; i < psi_table_.size(); ++i) {
        psi_sup_ = std::max(psi_sup_, std::fabs(psi_table_[i]));
        if (i + 1 < psi_table_.size())
            psi_slope_sup_ = std::max(
                psi_slope_sup_,
                std::fabs(psi_table_[i + 1] - psi_table_[i]) * static_cast<double>(res));
    }
}

double WaveletBasis::psi_base(double t) const {
    if (family_ == "haar") {
        if (t >= 0.0 && t < 0.5) return 1.0;
        if (t >= 0.5 && t < 1.0) return -1.0;
        return 0.0;
    }
    const double L = static_cast<double>(support_factor());
    if (t < 0.0 || t >= L) return 0.0;
    const double res = static_cast<double>(std::size_t{1} << table_depth_);
    auto idx = static_cast<std::size_t>(std::floor(t * res));
    if (idx >= psi_table_.size()) idx = psi_table_.size() - 1;
    return psi_table_[idx];
}

double WaveletBasis::psi_eval(int j, int k, double x) const {
    if (j < 0 || k < 0 || k >= (1 << j)) throw std::invalid_argument("psi_eval: bad (j, k)");
    if (x >= 1.0) x = std::nextafter(1.0, 0.0);  // left limit at the right edge
    if (x < 0.0) x = 0.0;
    const double pow2j = std::ldexp(1.0, j);
    const double t = pow2j * x - static_cast<double>(k);
    const double L = static_cast<double>(support_factor());
    // periodization: sum translates t + q * 2^j that land inside [0, L]
    double sum = 0.0;
    auto qmin = static_cast<long>(std::ceil((0.0 - t) / pow2j - 1e-12));
    auto qmax = static_cast<long>(std::floor((L - t) / pow2j + 1e-12));
    for (long q = qmin; q <= qmax; ++q)
        sum += psi_base(t + static_cast<double>(q) * pow2j);
    return std::sqrt(pow2j) * sum;
}

double WaveletBasis::filter_defect() const {
    const std::size_t taps = lo_.size();
    double worst = 0.0;
    // unit energy and sqrt(2) mean of the lowpass
    double e = 0.0, s = 0.0;
    for (double v : lo_) {
        e += v * v;
        s += v;
    }
    worst = std::max(worst, std::fabs(e - 1.0));
    worst = std::max(worst, std::fabs(s - std::sqrt(2.0)));
    // orthogonality to even shifts, lowpass/highpass orthogonality
    for (std::size_t shift = 2; shift < taps; shift += 2) {
        double dot_ll = 0.0, dot_lh = 0.0;
        for (std::size_t m = 0; m + shift < taps; ++m) {
            dot_ll += lo_[m] * lo_[m + shift];
            dot_lh += lo_[m] * hi_[m + shift];
        }
        worst = std::max(worst, std::fabs(dot_ll));
        worst = std::max(worst, std::fabs(dot_lh));
    }
    double dot = 0.0;
    for (std::size_t m = 0; m < taps; ++m) dot += lo_[m] * hi_[m];
    worst = std::max(worst, std::fabs(dot));
    return worst;
}

std::size_t CoefficientGrid::coefficient_count() const {
    std::size_t c = scaling.size();
    for (const auto& level : detail) c += level.size();
    return c;
}

CoefficientGrid forward_pyramid(const std::vector<double>& values, const WaveletBasis& basis) {
    if (!is_pow2(values.size()) || values.size() < 2)
        throw std::invalid_argument("forward_pyramid: length must be a power of two >= 2");
    const int jprime = ilog2(values.size());
    CoefficientGrid grid;
    grid.J = jprime - 1;
    grid.detail.resize(static_cast<std::size_t>(jprime));
    std::vector<double> a = values, approx, det;
    for (int j = jprime - 1; j >= 0; --j) {
        analysis_step(a, basis.lowpass(), basis.highpass(), approx, det);
        grid.detail[static_cast<std::size_t>(j)] = det;
        a.swap(approx);
    }
    grid.scaling = a;  // single entry
    return grid;
}

std::vector<double> inverse_pyramid(const CoefficientGrid& grid, const WaveletBasis& basis,
                                    std::size_t length) {
    if (!is_pow2(length) || length < 2)
        throw std::invalid_argument("inverse_pyramid: length must be a power of two >= 2");
    const int jprime = ilog2(length);
    if (grid.J + 1 > jprime)
        throw std::invalid_argument("inverse_pyramid: grid deeper than requested length");
    if (grid.scaling.size() != 1)
        throw std::invalid_argument("inverse_pyramid: grid must carry one scaling entry");
    std::vector<double> a = grid.scaling, out;
    const std::vector<double> empty;
    for (int j = 0; j < jprime; ++j) {
        const std::vector<double>* det = nullptr;
        if (j <= grid.J)
            det = &grid.detail[static_cast<std::size_t>(j)];
        std::vector<double> zeros;
        if (det == nullptr || det->empty()) {
            zeros.assign(a.size(), 0.0);
            det = &zeros;
        }
        if (det->size() != a.size())
            throw std::invalid_argument("inverse_pyramid: level size mismatch");
        synthesis_step(a, *det, basis.lowpass(), basis.highpass(), out);
        a.swap(out);
    }
    return a;
}

EmpiricalCDF::EmpiricalCDF(std::vector<double> xs) : sorted_x_(std::move(xs)) {
    if (sorted_x_.empty()) throw std::invalid_argument("EmpiricalCDF: empty design");
    std::sort(sorted_x_.begin(), sorted_x_.end());
}

std::size_t EmpiricalCDF::count_leq(double x) const {
    auto it = std::upper_bound(sorted_x_.begin(), sorted_x_.end(), x);
    return static_cast<std::size_t>(std::distance(sorted_x_.begin(), it));
}

double EmpiricalCDF::operator()(double x) const {
    return static_cast<double>(count_leq(x)) / static_cast<double>(sorted_x_.size());
}

Sample rank_pairs(const Sample& sample) {
    if (sample.n == 0) throw std::invalid_argument("rank_pairs: empty sample");
    if (sample.dim != 1) throw std::invalid_argument("rank_pairs: one-dimensional designs only");
    std::vector<std::size_t> order(sample.n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return sample.x[a] < sample.x[b]; });
    std::vector<double> xs(sample.n), ys(sample.n);
    for (std::size_t i = 0; i < sample.n; ++i) {
        xs[i] = sample.x[order[i]];
        ys[i] = sample.y[order[i]];
    }
    return Sample(std::move(xs), std::move(ys), 1);
}

std::size_t next_pow2(std::size_t n) {
    std::size_t m = 1;
    while (m < n) m <<= 1;
    return m;
}

CoefficientGrid estimate_coefficients(const Sample& sample, const WaveletBasis& basis, int J,
                                      std::function<void(const std::string&)> warn) {
    if (sample.n < 4) throw std::invalid_argument("estimate_coefficients: need n >= 4");
    if (J < 0) throw std::invalid_argument("estimate_coefficients: J must be >= 0");
    const std::size_t n = sample.n;
    const std::size_t m = next_pow2(n);
    const int jprime = ilog2(m);
    if (J > jprime - 1) {
        if (warn) warn("estimate_coefficients: J exceeds the data depth, clamping");
        J = jprime - 1;
    }
    if (n < (std::size_t{1} << (J + 1)) && warn)
        warn("estimate_coefficients: n below 2^{J+1}, coefficients will be noisy");

    Sample ranked = rank_pairs(sample);

    // Rank i maps to dyadic cell i (right continuity at the shared endpoint);
    // the last grid node i = n evaluates at the left limit and lands in the
    // last cell, which folds it onto cell m-1 when n = m.
    std::vector<double> u(m, 0.0);
    for (std::size_t i = 1; i <= n; ++i) {
        std::size_t cell = std::min(i, m - 1);
        u[cell] += ranked.y[i - 1];
    }

    CoefficientGrid grid = forward_pyramid(u, basis);
    const double rescale = std::sqrt(static_cast<double>(m)) / static_cast<double>(n);
    for (double& v : grid.scaling) v *= rescale;
    for (auto& level : grid.detail)
        for (double& v : level) v *= rescale;

    grid.detail.resize(static_cast<std::size_t>(J) + 1);
    grid.J = J;
    return grid;
}

int select_max_level(std::size_t n, std::optional<double> s) {
    if (n < 4) throw std::invalid_argument("select_max_level: need n >= 4");
    const double ratio = static_cast<double>(n) / std::log(static_cast<double>(n));
    if (!s.has_value()) {
        int j = 0;
        while (std::ldexp(1.0, j + 1) <= std::sqrt(ratio)) ++j;
        return j;
    }
    if (!(*s > 0.0)) throw std::invalid_argument("select_max_level: s must be > 0");
    const double target = std::pow(ratio, 1.0 / (1.0 + 2.0 * *s));
    int j = 0;
    while (std::ldexp(1.0, j) < target) ++j;
    return j;
}

double besov_sup_norm(const CoefficientGrid& grid, double gamma) {
    if (!(gamma >= 0.0)) throw std::invalid_argument("besov_sup_norm: gamma must be >= 0");
    double sup = 0.0;
    for (int j = 0; j <= grid.J; ++j) {
        double level_max = 0.0;
        for (double v : grid.detail[static_cast<std::size_t>(j)])
            level_max = std::max(level_max, std::fabs(v));
        sup = std::max(sup, level_max * std::pow(2.0, j * (gamma + 0.5)));
    }
    return sup;
}

double WaveletFit::evaluate(double x) const {
    const std::size_t rank = cdf.count_leq(x);
    const std::size_t cell = std::min(rank, m - 1);
    return node_values[cell];
}

WaveletFit fit_wavelet(const Sample& sample, const WaveletBasis& basis, double T, int J,
                       std::function<void(const std::string&)> warn) {
    if (sample.dim != 1) throw std::invalid_argument("fit_wavelet: one-dimensional designs only");
    WaveletFit fit;
    fit.family = basis.family();
    fit.schedule = critical_threshold(sample.n, T);

    CoefficientGrid raw = estimate_coefficients(sample, basis, J, warn);
    fit.J = raw.J;
    fit.grid.J = raw.J;
    fit.grid.scaling = hard_threshold(raw.scaling, fit.schedule.lambda_n);
    fit.grid.detail.resize(raw.detail.size());
    for (std::size_t j = 0; j < raw.detail.size(); ++j)
        fit.grid.detail[j] = hard_threshold(raw.detail[j], fit.schedule.lambda_n);

    fit.cdf = EmpiricalCDF(sample.x);
    fit.m = next_pow2(sample.n);

    // back to transform units, then synthesize per-cell values
    CoefficientGrid dwt_units = fit.grid;
    const double descale = static_cast<double>(sample.n) / std::sqrt(static_cast<double>(fit.m));
    for (double& v : dwt_units.scaling) v *= descale;
    for (auto& level : dwt_units.detail)
        for (double& v : level) v *= descale;
    fit.node_values = inverse_pyramid(dwt_units, basis, fit.m);
    return fit;
}

std::string wavelet_fit_to_json(const WaveletFit& fit) {
    nlohmann::json j;
    j["family"] = fit.family;
    j["J"] = fit.J;
    j["lambda_n"] = fit.schedule.lambda_n;
    j["n"] = fit.schedule.n;
    j["T"] = fit.schedule.T;
    j["scaling"] = fit.grid.scaling;
    nlohmann::json levels = nlohmann::json::array();
    for (int lev = 0; lev <= fit.grid.J; ++lev)
        levels.push_back({{"j", lev}, {"coefficients", fit.grid.detail[static_cast<std::size_t>(lev)]}});
    j["levels"] = levels;
    j["sorted_x"] = fit.cdf.sorted();
    return j.dump(2);
}

WaveletFit wavelet_fit_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    WaveletFit fit;
    fit.family = j.at("family").get<std::string>();
    fit.J = j.at("J").get<int>();
    fit.schedule = critical_threshold(j.at("n").get<std::size_t>(), j.at("T").get<double>());
    fit.grid.J = fit.J;
    fit.grid.scaling = j.at("scaling").get<std::vector<double>>();
    fit.grid.detail.resize(static_cast<std::size_t>(fit.J) + 1);
    for (const auto& level : j.at("levels")) {
        int lev = level.at("j").get<int>();
        fit.grid.detail.at(static_cast<std::size_t>(lev)) =
            level.at("coefficients").get<std::vector<double>>();
    }
    fit.cdf = EmpiricalCDF(j.at("sorted_x").get<std::vector<double>>());
    fit.m = next_pow2(fit.cdf.size());

    WaveletBasis basis = WaveletBasis::make(fit.family);
    CoefficientGrid dwt_units = fit.grid;
    const double descale =
        static_cast<double>(fit.cdf.size()) / std::sqrt(static_cast<double>(fit.m));
    for (double& v : dwt_units.scaling) v *= descale;
    for (auto& level : dwt_units.detail)
        for (double& v : level) v *= descale;
    fit.node_values = inverse_pyramid(dwt_units, basis, fit.m);
    return fit;
}

}  // namespace uthresh
