#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "ocnreg/matrix.hpp"

namespace ocnreg {

namespace detail {

// Householder reduction of a symmetric matrix to tridiagonal form.
// Eigenvalue-only variant: the orthogonal factor is not accumulated.
// On return d holds the diagonal, e the subdiagonal (e[0] unused).
inline void tridiagonalize(Matrix& a, Vec& d, Vec& e) {
    const std::size_t n = a.rows();
    d.assign(n, 0.0);
    e.assign(n, 0.0);
    for (std::size_t i = n - 1; i > 0; --i) {
        const std::size_t l = i - 1;
        double h = 0.0;
        double scale = 0.0;
        if (l > 0) {
            for (std::size_t k = 0; k < i; ++k) scale += std::fabs(a(i, k));
            if (scale == 0.0) {
                e[i] = a(i, l);
            } else {
                for (std::size_t k = 0; k < i; ++k) {
                    a(i, k) /= scale;
                    h += a(i, k) * a(i, k);
                }
                double f = a(i, l);
                double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
                e[i] = scale * g;
                h -= f * g;
                a(i, l) = f - g;
                f = 0.0;
                for (std::size_t j = 0; j < i; ++j) {
                    g = 0.0;
                    for (std::size_t k = 0; k <= j; ++k) g += a(j, k) * a(i, k);
                    for (std::size_t k = j + 1; k < i; ++k) g += a(k, j) * a(i, k);
                    e[j] = g / h;
                    f += e[j] * a(i, j);
                }
                const double hh = f / (h + h);
                for (std::size_t j = 0; j < i; ++j) {
                    f = a(i, j);
                    g = e[j] - hh * f;
                    e[j] = g;
                    for (std::size_t k = 0; k <= j; ++k) a(j, k) -= f * e[k] + g * a(i, k);
                }
            }
        } else {
            e[i] = a(i, l);
        }
        d[i] = h;
    }
    e[0] = 0.0;
    for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
}

// Implicit-shift QL sweep on a tridiagonal matrix. Eigenvalues land in d.
inline void ql_eigenvalues(Vec& d, Vec& e) {
    const std::size_t n = d.size();
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
    e[n - 1] = 0.0;
    for (std::size_t l = 0; l < n; ++l) {
        int iter = 0;
        std::size_t m;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::fabs(d[m]) + std::fabs(d[m + 1]);
                if (std::fabs(e[m]) <= eps * dd) break;
            }
            if (m != l) {
                // 50 sweeps is far beyond normal; bail out rather than spin
                if (iter++ == 50)
                    throw std::runtime_error("eigenvalue iteration stalled, subdiagonal residual " +
                                             std::to_string(std::fabs(e[l])));
                double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
                double r = std::hypot(g, 1.0);
                g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
                double s = 1.0, c = 1.0, p = 0.0;
                bool underflow = false;
                for (std::size_t i = m; i-- > l;) {
                    double f = s * e[i];
                    const double b = c * e[i];
                    r = std::hypot(f, g);
                    e[i + 1] = r;
                    if (r == 0.0) {
                        d[i + 1] -= p;
                        e[m] = 0.0;
                        underflow = true;
                        break;
                    }
                    s = f / r;
                    c = g / r;
                    g = d[i + 1] - p;
                    r = (d[i] - g) * s + 2.0 * c * b;
                    p = s * r;
                    d[i + 1] = g + p;
                    g = c * r - b;
                }
                if (underflow) continue;
                d[l] -= p;
                e[l] = g;
                e[m] = 0.0;
            }
        } while (m != l);
    }
}

}  // namespace detail

/**
 * Eigenvalues of a symmetric matrix, ascending. The input is taken by
 * value and consumed. Symmetry is checked up front since silent use of
 * an asymmetric matrix would corrupt every downstream quantity.
 */
inline Vec symmetric_eigenvalues(Matrix a, double symmetry_tol = 1e-12) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues need a square matrix");
    if (a.rows() == 0) return {};
    if (a.max_abs_asymmetry() > symmetry_tol)
        throw std::invalid_argument("matrix is not symmetric");
    if (a.rows() == 1) return {a(0, 0)};
    Vec d, e;
    detail::tridiagonalize(a, d, e);
    detail::ql_eigenvalues(d, e);
    std::sort(d.begin(), d.end());
    return d;
}

}  // namespace ocnreg
