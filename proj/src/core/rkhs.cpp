#include "core/rkhs.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#include "core/errors.hpp"

namespace uthresh {

double RkhsFit::evaluate(const double* x, std::size_t dim) const {
    if (dim != anchors.dim) throw std::invalid_argument("RkhsFit::evaluate: dimension mismatch");
    double s = 0.0;
    for (std::size_t l = 0; l < anchors.p; ++l)
        if (z_thresholded[l] != 0.0) s += z_thresholded[l] * kernel.eval(anchors.point(l), x, dim);
    return s;
}

DesignMatrices build_design(const Kernel& kernel, const AnchorSet& anchors, const Sample& sample) {
    if (sample.n == 0) throw std::invalid_argument("build_design: empty sample");
    if (sample.dim != anchors.dim)
        throw std::invalid_argument("build_design: sample/anchor dimension mismatch");
    const std::size_t p = anchors.p;
    const std::size_t n = sample.n;
    DesignMatrices d;
    d.k_design = Matrix(p, n);
    for (std::size_t l = 0; l < p; ++l)
        for (std::size_t i = 0; i < n; ++i)
            d.k_design.at(l, i) = kernel.eval(anchors.point(l), sample.point(i), sample.dim);
    d.m_np = Matrix(p, p);
    for (std::size_t l = 0; l < p; ++l) {
        for (std::size_t k = l; k < p; ++k) {
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i) s += d.k_design.at(l, i) * d.k_design.at(k, i);
            s /= static_cast<double>(n);
            d.m_np.at(l, k) = s;
            d.m_np.at(k, l) = s;
        }
    }
    return d;
}

DeltaCertificate certify_delta(const Matrix& m) {
    if (m.rows != m.cols || m.rows == 0)
        throw std::invalid_argument("certify_delta: matrix must be square and nonempty");
    double scale = infinity_norm(m);
    if (max_symmetry_defect(m) > 1e-12 * std::max(scale, 1.0))
        throw std::invalid_argument("certify_delta: matrix is not symmetric");

    std::vector<double> ev = symmetric_eigenvalues(m);
    DeltaCertificate cert;
    cert.lambda_min = ev.front();
    cert.lambda_max = ev.back();
    if (!(cert.lambda_min > 0.0))
        throw assumption_violated("almost-diagonal assumption fails: Gram matrix not positive definite",
                                  cert.lambda_min, cert.lambda_max, 0.0);

    Matrix inv = cholesky_inverse(cholesky_factor(m));
    cert.inf_norm_inverse = infinity_norm(inv);

    double d_eig_low = 1.0 - std::sqrt(cert.lambda_min);
    double d_eig_high = std::sqrt(cert.lambda_max) - 1.0;
    double d_inf = 1.0 - 1.0 / cert.inf_norm_inverse;
    cert.delta = std::max(std::max(d_eig_low, d_eig_high), std::max(d_inf, 0.0));
    if (!(cert.delta < 1.0))
        throw assumption_violated("almost-diagonal assumption fails: certified delta reaches 1",
                                  cert.lambda_min, cert.lambda_max, cert.inf_norm_inverse);
    return cert;
}

std::vector<double> solve_coefficients(const DesignMatrices& design,
                                       const std::vector<double>& y) {
    const std::size_t p = design.k_design.rows;
    const std::size_t n = design.k_design.cols;
    if (y.size() != n) throw std::invalid_argument("solve_coefficients: Y length mismatch");

    // A = K K^t = n * M_np, b = K Y
    Matrix a(p, p);
    for (std::size_t r = 0; r < p; ++r)
        for (std::size_t c = 0; c < p; ++c)
            a.at(r, c) = design.m_np.at(r, c) * static_cast<double>(n);
    std::vector<double> b(p, 0.0);
    for (std::size_t r = 0; r < p; ++r) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += design.k_design.at(r, i) * y[i];
        b[r] = s;
    }

    std::vector<double> ev = symmetric_eigenvalues(a);
    double cond = (ev.front() > 0.0) ? ev.back() / ev.front()
                                     : std::numeric_limits<double>::infinity();
    if (!(cond < 1e12))
        throw singular_system("solve_coefficients: K K^t numerically singular", cond);

    Matrix factor = cholesky_factor(a);
    std::vector<double> z = cholesky_solve(factor, b);

    // one refinement step, then the residual contract check
    auto residual = [&](const std::vector<double>& v) {
        std::vector<double> r = matvec(a, v);
        for (std::size_t i = 0; i < p; ++i) r[i] = b[i] - r[i];
        return r;
    };
    std::vector<double> r = residual(z);
    std::vector<double> dz = cholesky_solve(factor, r);
    for (std::size_t i = 0; i < p; ++i) z[i] += dz[i];

    r = residual(z);
    double rn = 0.0, bn = 0.0;
    for (std::size_t i = 0; i < p; ++i) {
        rn += r[i] * r[i];
        bn += b[i] * b[i];
    }
    if (std::sqrt(rn) > 1e-8 * std::sqrt(bn) + 1e-300)
        throw singular_system("solve_coefficients: residual check failed", cond);
    return z;
}

RkhsFit fit_rkhs(const Sample& sample, const Kernel& kernel, const AnchorSet& anchors, double T,
                 std::function<void(const std::string&)> warn) {
    if (sample.n == 0) throw std::invalid_argument("fit_rkhs: empty sample");
    if (T < 4.0 && warn)
        warn("fit_rkhs: T below 4, outside the guaranteed range sqrt(M^2+1/2) v 4");

    RkhsFit fit;
    fit.kernel = kernel;
    fit.anchors = anchors;
    fit.schedule = critical_threshold(sample.n, T);

    DesignMatrices design = build_design(kernel, anchors, sample);
    fit.certificate = certify_delta(design.m_np);
    fit.z_raw = solve_coefficients(design, sample.y);
    fit.z_thresholded = hard_threshold(fit.z_raw, fit.schedule.lambda_n);
    return fit;
}

double empirical_norm(const std::function<double(const double*, std::size_t)>& f,
                      const Sample& sample) {
    if (sample.n == 0) throw std::invalid_argument("empirical_norm: empty design");
    double s = 0.0;
    for (std::size_t i = 0; i < sample.n; ++i) {
        double v = f(sample.point(i), sample.dim);
        s += v * v;
    }
    return std::sqrt(s / static_cast<double>(sample.n));
}

std::string rkhs_fit_to_json(const RkhsFit& fit) {
    if (fit.kernel.name == "custom")
        throw std::invalid_argument("rkhs_fit_to_json: custom kernels are not serializable");
    nlohmann::json j;
    j["kernel"] = {{"name", fit.kernel.name},
                   {"bandwidth", fit.kernel.bandwidth},
                   {"scale", fit.kernel.scale},
                   {"kappa", fit.kernel.kappa}};
    j["dim"] = fit.anchors.dim;
    j["anchors"] = fit.anchors.points;
    j["z_raw"] = fit.z_raw;
    j["z_thresholded"] = fit.z_thresholded;
    j["lambda_n"] = fit.schedule.lambda_n;
    j["n"] = fit.schedule.n;
    j["T"] = fit.schedule.T;
    j["delta"] = fit.certificate.delta;
    j["certificate"] = {{"lambda_min", fit.certificate.lambda_min},
                        {"lambda_max", fit.certificate.lambda_max},
                        {"inf_norm_inverse", fit.certificate.inf_norm_inverse}};
    return j.dump(2);
}

RkhsFit rkhs_fit_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    RkhsFit fit;
    fit.kernel = make_kernel(j.at("kernel").at("name").get<std::string>(),
                             j.at("kernel").at("bandwidth").get<double>(),
                             j.at("kernel").at("scale").get<double>());
    fit.anchors = AnchorSet(j.at("anchors").get<std::vector<double>>(),
                            j.at("dim").get<std::size_t>());
    fit.z_raw = j.at("z_raw").get<std::vector<double>>();
    fit.z_thresholded = j.at("z_thresholded").get<std::vector<double>>();
    fit.schedule = critical_threshold(j.at("n").get<std::size_t>(), j.at("T").get<double>());
    fit.certificate.delta = j.at("delta").get<double>();
    fit.certificate.lambda_min = j.at("certificate").at("lambda_min").get<double>();
    fit.certificate.lambda_max = j.at("certificate").at("lambda_max").get<double>();
    fit.certificate.inf_norm_inverse = j.at("certificate").at("inf_norm_inverse").get<double>();
    return fit;
}

}  // namespace uthresh
