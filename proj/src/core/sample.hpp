#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace uthresh {

/// Observed regression pairs. Design points live in R^dim and are stored
/// row-major (point i occupies x[i*dim .. i*dim+dim)). The wavelet side of the
/// library requires dim == 1.
struct Sample {
    std::vector<double> x;
    std::vector<double> y;
    std::size_t n = 0;
    std::size_t dim = 1;

    Sample() = default;
    Sample(std::vector<double> xs, std::vector<double> ys, std::size_t d = 1)
        : x(std::move(xs)), y(std::move(ys)), dim(d) {
        if (dim == 0) throw std::invalid_argument("Sample: dim must be >= 1");
        if (x.size() != y.size() * dim) throw std::invalid_argument("Sample: x/y length mismatch");
        n = y.size();
    }

    const double* point(std::size_t i) const { return x.data() + i * dim; }
};

}  // namespace uthresh
