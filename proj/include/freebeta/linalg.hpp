#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include "error.hpp"

namespace freebeta::linalg {

/// Dense row-major square matrix of doubles.
class matrix
{
public:
    matrix() = default;
    explicit matrix(std::size_t n) : n_(n), a_(n * n, 0.0) {}

    [[nodiscard]] std::size_t size() const noexcept { return n_; }
    double &operator()(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return a_[r * n_ + c]; }

private:
    std::size_t n_ = 0;
    std::vector<double> a_;
};

/// Lower-triangular L with S = L L^T; throws SingularCovariance if S is not
/// numerically positive definite.
inline matrix cholesky(const matrix &s)
{
    const std::size_t n = s.size();
    matrix l(n);
    double scale = 0;
    for (std::size_t i = 0; i < n; ++i) {
        scale = std::max(scale, std::abs(s(i, i)));
    }
    const double floor = scale * 1e-13;
    for (std::size_t j = 0; j < n; ++j) {
        double diag = s(j, j);
        for (std::size_t k = 0; k < j; ++k) {
            diag -= l(j, k) * l(j, k);
        }
        if (!(diag > floor)) {
            throw error(errc::singular_covariance, "matrix is not positive definite at pivot " + std::to_string(j));
        }
        const double root = std::sqrt(diag);
        l(j, j) = root;
        for (std::size_t i = j + 1; i < n; ++i) {
            double v = s(i, j);
            for (std::size_t k = 0; k < j; ++k) {
                v -= l(i, k) * l(j, k);
            }
            l(i, j) = v / root;
        }
    }
    return l;
}

/// L^{-1} B for lower-triangular L.
inline matrix forward_solve(const matrix &l, const matrix &b)
{
    const std::size_t n = l.size();
    matrix x(n);
    for (std::size_t c = 0; c < n; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
            double v = b(i, c);
            for (std::size_t k = 0; k < i; ++k) {
                v -= l(i, k) * x(k, c);
            }
            x(i, c) = v / l(i, i);
        }
    }
    return x;
}

inline matrix transpose(const matrix &m)
{
    matrix t(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            t(j, i) = m(i, j);
        }
    }
    return t;
}

/// L^{-1} A L^{-T} for symmetric A, symmetrized against rounding.
inline matrix congruence(const matrix &l, const matrix &a)
{
    matrix c = forward_solve(l, transpose(forward_solve(l, a)));
    for (std::size_t i = 0; i < c.size(); ++i) {
        for (std::size_t j = i + 1; j < c.size(); ++j) {
            const double avg = 0.5 * (c(i, j) + c(j, i));
            c(i, j) = avg;
            c(j, i) = avg;
        }
    }
    return c;
}

struct tridiagonal {
    std::vector<double> diagonal;
    std::vector<double> off; ///< off[i] couples i and i+1
};

/// Householder reduction of a symmetric matrix to tridiagonal form.
inline tridiagonal householder_tridiagonalize(matrix a)
{
    const std::size_t n = a.size();
    std::vector<double> v(n);
    std::vector<double> p(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm2 = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            norm2 += a(i, k) * a(i, k);
        }
        const double norm = std::sqrt(norm2);
        if (norm == 0) {
            continue;
        }
        const double alpha = a(k + 1, k) > 0 ? -norm : norm;
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = a(i, k);
        }
        v[k + 1] -= alpha;
        double vnorm2 = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            vnorm2 += v[i] * v[i];
        }
        if (vnorm2 == 0) {
            continue;
        }
        const double inv = 1 / std::sqrt(vnorm2);
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] *= inv;
        }
        // A <- H A H on the trailing block, H = I - 2 v v^T.
        double vp = 0;
        for (std::size_t i = k + 1; i < n; ++i) {
            double s = 0;
            for (std::size_t j = k + 1; j < n; ++j) {
                s += a(i, j) * v[j];
            }
            p[i] = s;
            vp += v[i] * s;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            p[i] -= vp * v[i];
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                a(i, j) -= 2 * (v[i] * p[j] + p[i] * v[j]);
            }
        }
        a(k + 1, k) = alpha;
        a(k, k + 1) = alpha;
        for (std::size_t i = k + 2; i < n; ++i) {
            a(i, k) = 0;
            a(k, i) = 0;
        }
    }
    tridiagonal t;
    for (std::size_t i = 0; i < n; ++i) {
        t.diagonal.push_back(a(i, i));
        if (i + 1 < n) {
            t.off.push_back(a(i + 1, i));
        }
    }
    return t;
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson-type shifts, ascending.
inline std::vector<double> tridiagonal_eigenvalues(tridiagonal t)
{
    std::vector<double> &d = t.diagonal;
    const std::size_t n = d.size();
    std::vector<double> e(n, 0.0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        e[i] = t.off[i];
    }
    const double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t l = 0; l < n; ++l) {
        int iterations = 0;
        std::size_t m = l;
        do {
            for (m = l; m + 1 < n; ++m) {
                const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
                if (std::abs(e[m]) <= eps * dd) {
                    break;
                }
            }
            if (m == l) {
                break;
            }
            if (++iterations > 60) {
                throw error(errc::invalid_parameters, "tridiagonal eigenvalue iteration did not converge");
            }
            double g = (d[l + 1] - d[l]) / (2 * e[l]);
            double r = std::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
            double s = 1;
            double c = 1;
            double p = 0;
            bool underflow = false;
            for (std::size_t i = m; i-- > l;) {
                const double f = s * e[i];
                const double b = c * e[i];
                r = std::hypot(f, g);
                e[i + 1] = r;
                if (r == 0) {
                    d[i + 1] -= p;
                    e[m] = 0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if (underflow) {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0;
        } while (m != l);
    }
    std::sort(d.begin(), d.end());
    return d;
}

inline std::vector<double> symmetric_eigenvalues(const matrix &a)
{
    if (a.size() == 0) {
        return {};
    }
    return tridiagonal_eigenvalues(householder_tridiagonalize(a));
}

} // namespace freebeta::linalg
