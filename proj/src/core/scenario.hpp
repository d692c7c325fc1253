#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "core/kernels.hpp"
#include "core/sample.hpp"
#include "core/wavelets.hpp"

namespace uthresh {

/// Design distribution with analytic CDF G and quantile function G^-1.
/// Supported: uniform[low,high], triangular (peak given as a fraction of the
/// support), smooth-beta (Beta(2,2)-shaped, CDF 3t^2 - 2t^3).
struct DistributionWarp {
    std::string name = "uniform";
    double low = 0.0;
    double high = 1.0;
    double peak = 0.5;

    double G(double t) const;
    double G_inverse(double u) const;
};

DistributionWarp analytic_warp(const std::string& name, double low = 0.0, double high = 1.0,
                               double peak = 0.5);

/// Ground-truth generator with certified regularity. Y = f_rho(X) + eps with
/// eps uniform on [-noise_amplitude, noise_amplitude]; amplitudes are chosen
/// at construction so |Y| <= M/2 holds identically, never by clipping.
class Scenario {
public:
    std::string id;
    DistributionWarp design;
    double M = 1.0;
    double s = 0.0;  // declared smoothness / sparsity exponent (0 when n/a)
    double noise_amplitude = 0.0;
    std::uint64_t master_seed = 1;

    std::string truth_family;  // "zero" | "holder" | "rkhs-sparse"

    // holder truth
    std::shared_ptr<const WaveletBasis> basis;
    double holder_c = 0.0;
    int j_max = 0;
    bool full_levels = true;

    // rkhs truth
    Kernel kernel;
    AnchorSet anchors;
    std::vector<double> alpha;

    double f_rho(double x) const;
    /// f_rho composed with G^-1 (what the harness integrates against).
    double f_warped(double u) const;
    /// Valid bound on sup |f_rho| used for the construction-time budget check.
    double truth_sup_bound() const;
    /// The holder truth's exact coefficient table up to level J (holder only).
    CoefficientGrid holder_grid(int J) const;
};

/// Warped-Besov truth: f_rho(G^-1(u)) = c sum_{j<=j_max} 2^{-j(s+1/2)} times
/// one signed wavelet per position. With full_levels every position at each
/// level is active (alternating signs); otherwise a single position
/// k_j = j mod 2^j per level. c = 0 picks the largest budget-respecting value.
Scenario make_holder_scenario(double s, const std::string& basis_family,
                              const DistributionWarp& design, double M, double noise_amplitude,
                              double c = 0.0, int j_max = 11, bool full_levels = true);

/// In-span RKHS truth: f_rho = sum_l alpha_l K(x_l, .) with
/// alpha_l = c l^{-(s+1/2)}, a weak-l_{2/(1+2s)} sequence. c = 0 auto-scales.
Scenario make_rkhs_sparse_scenario(const Kernel& kernel, const AnchorSet& anchors, double s,
                                   double M, double noise_amplitude, double c = 0.0);

/// f_rho identically zero; only noise remains.
Scenario make_zero_scenario(const DistributionWarp& design, double M, double noise_amplitude);

/// Deterministic given (scenario.master_seed, replication). X i.i.d. from the
/// design, Y = f_rho(X) + eps. Throws when a generated pair violates the
/// range bound (construction should make that impossible).
Sample draw_sample(const Scenario& scenario, std::size_t n, std::uint64_t replication);

}  // namespace uthresh
