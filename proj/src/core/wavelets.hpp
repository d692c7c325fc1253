#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "core/sample.hpp"
#include "core/thresholding.hpp"

namespace uthresh {

/// Orthonormal wavelet family on [0,1] with periodized boundary handling.
/// Families: "haar", "daubechies-4", "daubechies-6" (filter tap counts 2/4/6).
///
/// psi_eval follows one convention everywhere: right-continuous on [0,1),
/// left limit at x = 1 (coefficient sums run over the grid i/n up to i = n).
class WaveletBasis {
public:
    static WaveletBasis make(const std::string& family);

    const std::string& family() const { return family_; }
    const std::vector<double>& lowpass() const { return lo_; }
    const std::vector<double>& highpass() const { return hi_; }

    /// N: support of psi_jk has length <= N * 2^-j (N = taps - 1).
    int support_factor() const { return static_cast<int>(lo_.size()) - 1; }
    int coarsest_level() const { return 0; }

    /// Periodized psi_{j,k} at x in [0,1].
    double psi_eval(int j, int k, double x) const;

    /// The level-0 periodized scaling function is identically 1 on [0,1].
    double scaling_eval(double /*x*/) const { return 1.0; }

    double psi_sup() const { return psi_sup_; }
    /// Max slope of the mother wavelet: measured on the evaluation table for
    /// the differentiable families, jump magnitude (2 * psi_sup) for haar.
    double psi_slope_sup() const { return psi_slope_sup_; }

    /// Worst deviation from the orthonormal quadrature-mirror filter
    /// conditions; exercised by the basis invariants.
    double filter_defect() const;

private:
    WaveletBasis() = default;
    void build_tables(int depth);
    double psi_base(double t) const;  // mother on its natural support [0, taps-1]

    std::string family_;
    std::vector<double> lo_, hi_;
    std::vector<double> psi_table_;  // empty for haar (closed form)
    int table_depth_ = 0;
    double psi_sup_ = 1.0;
    double psi_slope_sup_ = 2.0;
};

/// Coefficients of the periodized expansion truncated at detail level J:
/// one coarsest scaling coefficient plus 2^j detail entries per level
/// j = 0..J.
struct CoefficientGrid {
    int J = -1;
    std::vector<double> scaling;                // length 1
    std::vector<std::vector<double>> detail;    // detail[j] has 2^j entries

    std::size_t coefficient_count() const;
};

/// Orthonormal periodic discrete wavelet transform of a length-2^{J'} signal
/// (J' >= 1); energy is preserved exactly up to rounding. Output carries all
/// detail levels 0..J'-1.
CoefficientGrid forward_pyramid(const std::vector<double>& values, const WaveletBasis& basis);

/// Adjoint/inverse of forward_pyramid onto a length-`length` signal; levels
/// absent from the grid act as zeros. length must be a power of two
/// >= 2^{J+1}.
std::vector<double> inverse_pyramid(const CoefficientGrid& grid, const WaveletBasis& basis,
                                    std::size_t length);

/// Right-continuous empirical distribution function of the design points.
class EmpiricalCDF {
public:
    EmpiricalCDF() = default;
    explicit EmpiricalCDF(std::vector<double> xs);

    /// Number of design points <= x.
    std::size_t count_leq(double x) const;
    /// Exact rational value count/n.
    double operator()(double x) const;

    const std::vector<double>& sorted() const { return sorted_x_; }
    std::size_t size() const { return sorted_x_.size(); }

private:
    std::vector<double> sorted_x_;
};

/// Pairs (X_(i), Y_(i)) ordered by X ascending; ties keep their original
/// order and each Y stays attached to its X.
Sample rank_pairs(const Sample& sample);

/// Rank-grid wavelet coefficients: the ranked responses are embedded on the
/// dyadic grid of size m = next power of two >= n, pushed through the forward
/// pyramid, and rescaled by sqrt(m)/n, so that for haar
/// beta_jk = (1/n) sum_i Y_(i) psi_jk(i/m) exactly (i/m = i/n when n = m).
/// Levels above J are dropped. Requires n >= 4.
CoefficientGrid estimate_coefficients(const Sample& sample, const WaveletBasis& basis, int J,
                                      std::function<void(const std::string&)> warn = {});

/// Finest detail level to keep. Without s: the adaptive choice, largest J
/// with 2^J <= sqrt(n/log n). With s: smallest J with
/// 2^J >= (n/log n)^{1/(1+2s)}. Requires n >= 4.
int select_max_level(std::size_t n, std::optional<double> s = std::nullopt);

/// sup over detail levels of 2^{j(gamma+1/2)} max_k |beta_jk|.
double besov_sup_norm(const CoefficientGrid& grid, double gamma);

struct WaveletFit {
    std::string family;
    CoefficientGrid grid;  // thresholded (scaling entry included)
    ThresholdSchedule schedule;
    EmpiricalCDF cdf;
    int J = 0;

    /// f_hat(x) = backward pyramid read off at the rank of x; for haar this
    /// equals sum_{j<=J} sum_k beta~_jk psi_jk(G_n(x)) exactly.
    double evaluate(double x) const;

    std::vector<double> node_values;  // synthesized values per dyadic cell
    std::size_t m = 0;                // padded grid size
};

/// Steps: rank, estimate, hard-threshold every coefficient (scaling row
/// included) at lambda_n = T sqrt(log n / n), synthesize. One-dimensional
/// designs only.
WaveletFit fit_wavelet(const Sample& sample, const WaveletBasis& basis, double T, int J,
                       std::function<void(const std::string&)> warn = {});

std::string wavelet_fit_to_json(const WaveletFit& fit);
WaveletFit wavelet_fit_from_json(const std::string& text);

std::size_t next_pow2(std::size_t n);

}  // namespace uthresh
