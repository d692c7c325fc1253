#include "core/thresholding.hpp"

#include <cmath>
#include <stdexcept>

#include "core/errors.hpp"

namespace uthresh {

ThresholdSchedule critical_threshold(std::size_t n, double T) {
    if (n < 1) throw std::invalid_argument("critical_threshold: n must be >= 1");
    if (!(T > 0.0)) throw std::invalid_argument("critical_threshold: T must be > 0");
    ThresholdSchedule s;
    s.n = n;
    s.T = T;
    s.t_n = std::log(static_cast<double>(n)) / static_cast<double>(n);
    s.lambda_n = T * std::sqrt(s.t_n);
    return s;
}

std::vector<double> hard_threshold(const std::vector<double>& z, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("hard_threshold: lambda must be >= 0");
    std::vector<double> out(z.size(), 0.0);
    for (std::size_t l = 0; l < z.size(); ++l)
        if (std::fabs(z[l]) >= lambda) out[l] = z[l];
    return out;
}

std::vector<double> soft_threshold(const std::vector<double>& z, double lambda) {
    if (!(lambda >= 0.0)) throw std::invalid_argument("soft_threshold: lambda must be >= 0");
    std::vector<double> out(z.size(), 0.0);
    for (std::size_t l = 0; l < z.size(); ++l) {
        double mag = std::fabs(z[l]) - lambda;
        if (mag > 0.0) out[l] = (z[l] < 0.0 ? -mag : mag);
    }
    return out;
}

std::vector<double> empirical_coefficients(const Matrix& basis_values,
                                           const std::vector<double>& y) {
    if (basis_values.cols != y.size())
        throw std::invalid_argument("empirical_coefficients: column count must match length of Y");
    const std::size_t n = y.size();
    std::vector<double> alpha(basis_values.rows, 0.0);
    for (std::size_t k = 0; k < basis_values.rows; ++k) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += basis_values.at(k, i) * y[i];
        alpha[k] = acc / static_cast<double>(n);
    }
    return alpha;
}

double check_property_p(const Matrix& basis_values) {
    if (basis_values.rows == 0 || basis_values.cols == 0)
        throw std::invalid_argument("check_property_p: empty basis table");
    const std::size_t N = basis_values.rows;
    const std::size_t n = basis_values.cols;
    double worst = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
        for (std::size_t l = k; l < N; ++l) {
            double g = 0.0;
            for (std::size_t i = 0; i < n; ++i) g += basis_values.at(k, i) * basis_values.at(l, i);
            g /= static_cast<double>(n);
            double dev = std::fabs(g - (k == l ? 1.0 : 0.0));
            if (dev > worst) worst = dev;
        }
    }
    return worst;
}

}  // namespace uthresh
