#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "core/sample.hpp"

namespace uthresh {

/// A symmetric, uniformly bounded kernel on R^dim x R^dim. The bound kappa is
/// part of the value: it feeds the conditioning diagnostics.
struct Kernel {
    std::string name;        // "gaussian" | "laplacian" | "indicator-partition" | "custom"
    double bandwidth = 1.0;  // width parameter for indicator-partition
    double scale = 1.0;      // multiplies the base kernel; lets callers normalize sections
    double kappa = 1.0;
    std::function<double(const double*, const double*, std::size_t)> eval;

    double operator()(const double* a, const double* b, std::size_t dim) const {
        return eval(a, b, dim);
    }
    double operator()(double a, double b) const { return eval(&a, &b, 1); }
};

/// Named kernels:
///   gaussian:            scale * exp(-(|x-y|/bandwidth)^2)
///   laplacian:           scale * exp(-|x-y|_1/bandwidth)
///   indicator-partition: scale * 1{x and y share the width-`bandwidth` cell}
/// Unknown names raise invalid_argument.
Kernel make_kernel(const std::string& name, double bandwidth, double scale = 1.0);

Kernel make_custom_kernel(std::function<double(const double*, const double*, std::size_t)> eval,
                          double kappa);

/// Deterministic anchor points in R^dim, stored like Sample::x.
struct AnchorSet {
    std::vector<double> points;
    std::size_t p = 0;
    std::size_t dim = 1;

    AnchorSet() = default;
    AnchorSet(std::vector<double> pts, std::size_t d);

    const double* point(std::size_t l) const { return points.data() + l * dim; }
};

/// p = floor(sqrt(n / log n)); needs n >= 2.
std::size_t select_anchor_count(std::size_t n);

/// Empirical (2l-1)/(2p) quantiles of a one-dimensional design.
AnchorSet quantile_anchors(const Sample& sample, std::size_t p);

/// Cell midpoints of the p-part equipartition of [low, high]; with
/// width = (high-low)/p these are exactly the indicator-partition cell centers.
AnchorSet grid_anchors(double low, double high, std::size_t p);

}  // namespace uthresh
