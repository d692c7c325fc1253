#include "core/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "core/errors.hpp"

namespace uthresh {

std::vector<double> symmetric_eigenvalues(const Matrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("symmetric_eigenvalues: matrix not square");
    const std::size_t p = m.rows;
    Matrix a = m;
    // cyclic Jacobi; plenty for p in the tens
    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double off = 0.0;
        for (std::size_t r = 0; r < p; ++r)
            for (std::size_t c = r + 1; c < p; ++c) off += a.at(r, c) * a.at(r, c);
        if (off <= 1e-300) break;
        double scale = 0.0;
        for (std::size_t r = 0; r < p; ++r) scale = std::max(scale, std::fabs(a.at(r, r)));
        if (std::sqrt(off) <= 1e-15 * std::max(scale, 1e-300)) break;
        for (std::size_t r = 0; r < p; ++r) {
            for (std::size_t c = r + 1; c < p; ++c) {
                double arc = a.at(r, c);
                if (arc == 0.0) continue;
                double theta = (a.at(c, c) - a.at(r, r)) / (2.0 * arc);
                double t = (theta >= 0.0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double cs = 1.0 / std::sqrt(t * t + 1.0);
                double sn = t * cs;
                for (std::size_t k = 0; k < p; ++k) {
                    double akr = a.at(k, r), akc = a.at(k, c);
                    a.at(k, r) = cs * akr - sn * akc;
                    a.at(k, c) = sn * akr + cs * akc;
                }
                for (std::size_t k = 0; k < p; ++k) {
                    double ark = a.at(r, k), ack = a.at(c, k);
                    a.at(r, k) = cs * ark - sn * ack;
                    a.at(c, k) = sn * ark + cs * ack;
                }
            }
        }
    }
    std::vector<double> ev(p);
    for (std::size_t r = 0; r < p; ++r) ev[r] = a.at(r, r);
    std::sort(ev.begin(), ev.end());
    return ev;
}

Matrix cholesky_factor(const Matrix& m) {
    if (m.rows != m.cols) throw std::invalid_argument("cholesky_factor: matrix not square");
    const std::size_t p = m.rows;
    Matrix l(p, p, 0.0);
    for (std::size_t r = 0; r < p; ++r) {
        for (std::size_t c = 0; c <= r; ++c) {
            double s = m.at(r, c);
            for (std::size_t k = 0; k < c; ++k) s -= l.at(r, k) * l.at(c, k);
            if (r == c) {
                if (!(s > 0.0))
                    throw singular_system("cholesky_factor: matrix not positive definite",
                                          std::numeric_limits<double>::infinity());
                l.at(r, r) = std::sqrt(s);
            } else {
                l.at(r, c) = s / l.at(c, c);
            }
        }
    }
    return l;
}

std::vector<double> cholesky_solve(const Matrix& factor, const std::vector<double>& b) {
    const std::size_t p = factor.rows;
    if (b.size() != p) throw std::invalid_argument("cholesky_solve: size mismatch");
    std::vector<double> y(p), x(p);
    for (std::size_t r = 0; r < p; ++r) {
        double s = b[r];
        for (std::size_t k = 0; k < r; ++k) s -= factor.at(r, k) * y[k];
        y[r] = s / factor.at(r, r);
    }
    for (std::size_t ri = p; ri-- > 0;) {
        double s = y[ri];
        for (std::size_t k = ri + 1; k < p; ++k) s -= factor.at(k, ri) * x[k];
        x[ri] = s / factor.at(ri, ri);
    }
    return x;
}

Matrix cholesky_inverse(const Matrix& factor) {
    const std::size_t p = factor.rows;
    Matrix inv(p, p, 0.0);
    std::vector<double> e(p, 0.0);
    for (std::size_t c = 0; c < p; ++c) {
        e[c] = 1.0;
        std::vector<double> col = cholesky_solve(factor, e);
        for (std::size_t r = 0; r < p; ++r) inv.at(r, c) = col[r];
        e[c] = 0.0;
    }
    return inv;
}

double infinity_norm(const Matrix& m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) s += std::fabs(m.at(r, c));
        worst = std::max(worst, s);
    }
    return worst;
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
    if (x.size() != m.cols) throw std::invalid_argument("matvec: size mismatch");
    std::vector<double> out(m.rows, 0.0);
    for (std::size_t r = 0; r < m.rows; ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < m.cols; ++c) s += m.at(r, c) * x[c];
        out[r] = s;
    }
    return out;
}

double max_symmetry_defect(const Matrix& m) {
    double worst = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r)
        for (std::size_t c = r + 1; c < m.cols; ++c)
            worst = std::max(worst, std::fabs(m.at(r, c) - m.at(c, r)));
    return worst;
}

}  // namespace uthresh
