#pragma once

#include <cstddef>
#include <vector>

namespace uthresh {

/// Row-major dense matrix, just big enough for the needs of this library
/// (basis-value tables, kernel design matrices, small Gram matrices).
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

/// The universal threshold schedule: t_n = log(n)/n, lambda_n = T * sqrt(t_n).
/// Natural logarithm throughout.
struct ThresholdSchedule {
    std::size_t n = 0;
    double T = 0.0;
    double t_n = 0.0;
    double lambda_n = 0.0;
};

/// Requires n >= 1 and T > 0.
ThresholdSchedule critical_threshold(std::size_t n, double T);

/// Keep-or-kill rule: entries with |z_l| >= lambda survive unchanged, the rest
/// become exact zeros. Ties survive. lambda must be >= 0.
std::vector<double> hard_threshold(const std::vector<double>& z, double lambda);

/// Shrinkage rule: sign(z_l) * max(|z_l| - lambda, 0). lambda must be >= 0.
std::vector<double> soft_threshold(const std::vector<double>& z, double lambda);

/// Empirical coefficients alpha_k = (1/n) sum_i e_k(X_i) Y_i, where
/// basis_values is the N x n table of e_k(X_i).
std::vector<double> empirical_coefficients(const Matrix& basis_values,
                                           const std::vector<double>& y);

/// Maximum absolute deviation of the empirical Gram matrix
/// (1/n) sum_i e_k(X_i) e_l(X_i) from the identity. Zero means the rows form
/// an orthonormal system for the empirical measure.
double check_property_p(const Matrix& basis_values);

}  // namespace uthresh
