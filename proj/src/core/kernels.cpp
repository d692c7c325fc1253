#include "core/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace uthresh {

Kernel make_kernel(const std::string& name, double bandwidth, double scale) {
    if (!(bandwidth > 0.0)) throw std::invalid_argument("kernel: bandwidth must be > 0");
    if (!(scale > 0.0)) throw std::invalid_argument("kernel: scale must be > 0");
    Kernel k;
    k.name = name;
    k.bandwidth = bandwidth;
    k.scale = scale;
    if (name == "gaussian") {
        k.kappa = scale;
        k.eval = [bandwidth, scale](const double* a, const double* b, std::size_t dim) {
            double d2 = 0.0;
            for (std::size_t i = 0; i < dim; ++i) {
                double d = (a[i] - b[i]) / bandwidth;
                d2 += d * d;
            }
            return scale * std::exp(-d2);
        };
    } else if (name == "laplacian") {
        k.kappa = scale;
        k.eval = [bandwidth, scale](const double* a, const double* b, std::size_t dim) {
            double d1 = 0.0;
            for (std::size_t i = 0; i < dim; ++i) d1 += std::fabs(a[i] - b[i]);
            return scale * std::exp(-d1 / bandwidth);
        };
    } else if (name == "indicator-partition") {
        k.kappa = scale;
        k.eval = [bandwidth, scale](const double* a, const double* b, std::size_t dim) {
            for (std::size_t i = 0; i < dim; ++i)
                if (std::floor(a[i] / bandwidth) != std::floor(b[i] / bandwidth)) return 0.0;
            return scale;
        };
    } else {
        throw std::invalid_argument("kernel: unknown kernel name '" + name + "'");
    }
    return k;
}

Kernel make_custom_kernel(std::function<double(const double*, const double*, std::size_t)> eval,
                          double kappa) {
    Kernel k;
    k.name = "custom";
    k.kappa = kappa;
    k.eval = std::move(eval);
    return k;
}

AnchorSet::AnchorSet(std::vector<double> pts, std::size_t d) : points(std::move(pts)), dim(d) {
    if (dim == 0) throw std::invalid_argument("AnchorSet: dim must be >= 1");
    if (points.empty() || points.size() % dim != 0)
        throw std::invalid_argument("AnchorSet: point list empty or not a multiple of dim");
    p = points.size() / dim;
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a + 1; b < p; ++b) {
            bool same = true;
            for (std::size_t i = 0; i < dim; ++i)
                if (points[a * dim + i] != points[b * dim + i]) {
                    same = false;
                    break;
                }
            if (same) throw std::invalid_argument("AnchorSet: anchor points must be distinct");
        }
    }
}

std::size_t select_anchor_count(std::size_t n) {
    if (n < 2) throw std::invalid_argument("select_anchor_count: n must be >= 2");
    double p = std::floor(std::sqrt(static_cast<double>(n) / std::log(static_cast<double>(n))));
    return static_cast<std::size_t>(std::max(1.0, p));
}

AnchorSet quantile_anchors(const Sample& sample, std::size_t p) {
    if (sample.dim != 1)
        throw std::invalid_argument("quantile_anchors: only one-dimensional designs supported");
    if (p == 0 || sample.n == 0) throw std::invalid_argument("quantile_anchors: empty input");
    std::vector<double> xs = sample.x;
    std::sort(xs.begin(), xs.end());
    std::vector<double> pts(p);
    for (std::size_t l = 0; l < p; ++l) {
        double q = (2.0 * static_cast<double>(l) + 1.0) / (2.0 * static_cast<double>(p));
        auto idx = static_cast<std::size_t>(q * static_cast<double>(sample.n));
        if (idx >= sample.n) idx = sample.n - 1;
        pts[l] = xs[idx];
    }
    return AnchorSet(std::move(pts), 1);
}

AnchorSet grid_anchors(double low, double high, std::size_t p) {
    if (!(high > low)) throw std::invalid_argument("grid_anchors: need high > low");
    if (p == 0) throw std::invalid_argument("grid_anchors: need p >= 1");
    std::vector<double> pts(p);
    for (std::size_t l = 0; l < p; ++l)
        pts[l] = low + (high - low) * (2.0 * static_cast<double>(l) + 1.0) /
                           (2.0 * static_cast<double>(p));
    return AnchorSet(std::move(pts), 1);
}

}  // namespace uthresh
