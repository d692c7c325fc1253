#pragma once

#include <functional>
#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/linalg.hpp"
#include "core/sample.hpp"
#include "core/thresholding.hpp"

namespace uthresh {

/// K_design is the p x n table K(x_l, X_i); M_np = (1/n) K_design K_design^t.
struct DesignMatrices {
    Matrix k_design;  // p x n
    Matrix m_np;      // p x p, symmetric
};

/// Empirical certificate that M_np is almost diagonal: eigenvalues inside
/// [(1-delta)^2, (1+delta)^2] and ||M^-1||_inf <= 1/(1-delta). delta is the
/// smallest value in [0,1) compatible with both, i.e.
/// max(1 - sqrt(lambda_min), sqrt(lambda_max) - 1, 1 - 1/||M^-1||_inf).
struct DeltaCertificate {
    double delta = 0.0;
    double lambda_min = 0.0;
    double lambda_max = 0.0;
    double inf_norm_inverse = 0.0;
};

struct RkhsFit {
    Kernel kernel;
    AnchorSet anchors;
    std::vector<double> z_raw;
    std::vector<double> z_thresholded;
    ThresholdSchedule schedule;
    DeltaCertificate certificate;

    double evaluate(const double* x, std::size_t dim) const;
    double evaluate(double x) const { return evaluate(&x, 1); }
};

DesignMatrices build_design(const Kernel& kernel, const AnchorSet& anchors, const Sample& sample);

/// Throws assumption_violated (carrying the offending quantities) when the
/// matrix is not positive definite or no delta < 1 exists.
DeltaCertificate certify_delta(const Matrix& m);

/// Solves (K K^t) z = K Y as a positive-definite system with one step of
/// iterative refinement. Throws singular_system when the eigenvalue-based
/// condition estimate exceeds 1e12 or the residual check fails.
std::vector<double> solve_coefficients(const DesignMatrices& design, const std::vector<double>& y);

/// The full pipeline: design, certificate, normal-equation solve, hard
/// threshold at lambda_n = critical_threshold(n, T). T below 4 only logs a
/// warning (the guarantee-grade floor sqrt(M^2+1/2) v 4 needs the usually
/// unknown range bound M).
RkhsFit fit_rkhs(const Sample& sample, const Kernel& kernel, const AnchorSet& anchors, double T,
                 std::function<void(const std::string&)> warn = {});

/// Root mean square of f over the design points.
double empirical_norm(const std::function<double(const double*, std::size_t)>& f,
                      const Sample& sample);

std::string rkhs_fit_to_json(const RkhsFit& fit);
RkhsFit rkhs_fit_from_json(const std::string& text);

}  // namespace uthresh
