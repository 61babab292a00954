#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <type_traits>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "distributions.hpp"
#include "error.hpp"

namespace freebeta {

enum class extrapolation { none, richardson };

/// Decreasing offsets eps used to approach the real axis.
struct epsilon_ladder {
    std::vector<double> values{1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
    extrapolation mode = extrapolation::richardson;

    void validate() const
    {
        if (values.empty()) {
            throw error(errc::invalid_parameters, "epsilon ladder is empty");
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!(values[i] > 0) || (i > 0 && !(values[i] < values[i - 1]))) {
                throw error(errc::invalid_parameters, "epsilon ladder must be positive and strictly decreasing");
            }
        }
    }
};

/// Polynomial through (h_i, y_i) evaluated at h = 0 (Neville's scheme).
inline double extrapolate_to_zero(const std::vector<double> &h, std::vector<double> y)
{
    const std::size_t n = h.size();
    for (std::size_t level = 1; level < n; ++level) {
        for (std::size_t i = 0; i + level < n; ++i) {
            y[i] = (h[i] * y[i + 1] - h[i + level] * y[i]) / (h[i] - h[i + level]);
        }
    }
    return y[0];
}

namespace detail {

template <class F> double ladder_limit(const epsilon_ladder &ladder, F &&sample)
{
    ladder.validate();
    std::vector<double> ys;
    ys.reserve(ladder.values.size());
    for (double e : ladder.values) {
        ys.push_back(sample(e));
    }
    if (ladder.mode == extrapolation::none) {
        return ys.back();
    }
    return extrapolate_to_zero(ladder.values, std::move(ys));
}

inline void require_interior(const family &f, double x)
{
    const interval s = support_of(f);
    if (!(s.lo < x && x < s.hi)) {
        throw error(errc::outside_support, "x = " + std::to_string(x) + " is not inside the support");
    }
}

} // namespace detail

/// -(1/pi) lim Im G(x + i eps).
inline double stieltjes_density(const family &f, double x, const epsilon_ladder &ladder = {})
{
    detail::require_interior(f, x);
    return detail::ladder_limit(ladder, [&](double e) {
        return -detail::cauchy_unchecked(f, complex(x, e)).imag() / std::numbers::pi;
    });
}

/// Free score 2 Hf(x) = 2 lim Re G(x + i eps).
inline double hilbert_score(const family &f, double x, const epsilon_ladder &ladder = {})
{
    detail::require_interior(f, x);
    return detail::ladder_limit(ladder, [&](double e) { return 2 * detail::cauchy_unchecked(f, complex(x, e)).real(); });
}

/// V'(x) of the classical potential matching the family: beta prime for
/// free beta prime, Student-type for free T, beta for free beta.
inline double potential_derivative(const family &f, double x)
{
    return std::visit(
        [x](const auto &g) -> double {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, free_beta_prime>) {
                if (!(x > 0)) {
                    throw error(errc::outside_domain, "beta prime potential needs x > 0");
                }
                return ((to_double(g.b) + 1) * x + (1 - to_double(g.a))) / (x * (1 + x));
            } else if constexpr (std::is_same_v<T, free_t>) {
                const double m = to_double(g.m);
                return (m + 1) * x / (m + x * x);
            } else if constexpr (std::is_same_v<T, free_beta>) {
                if (!(x > 0 && x < 1)) {
                    throw error(errc::outside_domain, "beta potential needs 0 < x < 1");
                }
                const double a = to_double(g.a);
                const double b = to_double(g.b);
                return ((a + b - 2) * x + (1 - a)) / (x * (1 - x));
            } else {
                throw error(errc::unsupported_family, family_name(g) + " has no classical potential here");
            }
        },
        f);
}

/// Masses at the candidate poles 0, 1, -1 estimated as lim y |G(x0 + iy)|,
/// extrapolated in sqrt(y). Masses below `floor` are dropped.
inline std::vector<atom> atom_masses(const family &f, double floor = 1e-6)
{
    const std::vector<double> ys{1e-4, 1e-5, 1e-6, 1e-7, 1e-8};
    std::vector<double> hs;
    for (double y : ys) {
        hs.push_back(std::sqrt(y));
    }
    std::vector<atom> out;
    for (double x0 : {0.0, 1.0, -1.0}) {
        std::vector<double> vals;
        for (double y : ys) {
            vals.push_back(y * std::abs(detail::cauchy_unchecked(f, complex(x0, y))));
        }
        const double mass = extrapolate_to_zero(hs, vals);
        if (mass > floor) {
            out.push_back({x0, mass});
        }
    }
    return out;
}

/// Quadrature settings for the edge-substituted integrals.
struct quadrature_options {
    unsigned max_depth = 40;
    double tolerance = 1e-10;
};

namespace detail {

// Integral of g(x) density(x) over [lo, x_hi] using x = lo + w sin^2(t).
template <class G>
double edge_integral(const measure_spec &spec, double x_hi, G &&g, const quadrature_options &opt)
{
    const double lo = spec.support.lo;
    const double w = spec.support.width();
    if (!(x_hi > lo) || !(w > 0)) {
        return 0.0;
    }
    const double ratio = std::clamp((x_hi - lo) / w, 0.0, 1.0);
    const double t_hi = std::asin(std::sqrt(ratio));
    auto integrand = [&](double t) {
        const double s = std::sin(t);
        const double c = std::cos(t);
        const double x = lo + w * s * s;
        return g(x) * spec.density(x) * 2 * w * s * c;
    };
    double err = 0;
    const double value =
        boost::math::quadrature::gauss_kronrod<double, 61>::integrate(integrand, 0.0, t_hi, opt.max_depth,
                                                                     opt.tolerance, &err);
    if (!std::isfinite(value) || err > 1e-8 * std::max(1.0, std::abs(value))) {
        throw error(errc::quadrature_failure, "quadrature error estimate " + std::to_string(err));
    }
    return value;
}

} // namespace detail

/// Integral of x^n against the continuous part plus the atom contributions.
inline double quadrature_moment(const measure_spec &spec, std::size_t n, const quadrature_options &opt = {})
{
    if (n > 10) {
        throw error(errc::invalid_parameters, "quadrature moments are limited to n <= 10");
    }
    const int k = static_cast<int>(n);
    double total = detail::edge_integral(spec, spec.support.hi, [k](double x) { return std::pow(x, k); }, opt);
    for (const atom &a : spec.atoms) {
        total += std::pow(a.location, k) * a.mass;
    }
    return total;
}

/// Distribution function: continuous mass below x plus atoms at or below x.
inline double cdf(const measure_spec &spec, double x, const quadrature_options &opt = {})
{
    double total = 0;
    if (x > spec.support.lo) {
        total = x >= spec.support.hi ? detail::edge_integral(spec, spec.support.hi, [](double) { return 1.0; }, opt)
                                     : detail::edge_integral(spec, x, [](double) { return 1.0; }, opt);
    }
    for (const atom &a : spec.atoms) {
        total += a.location <= x ? a.mass : 0.0;
    }
    return std::min(total, 1.0);
}

/// Smallest x with cdf(x) >= p, by bisection over the support hull.
inline double quantile(const measure_spec &spec, double p, double tolerance = 1e-10)
{
    if (!(p >= 0 && p <= 1)) {
        throw error(errc::invalid_parameters, "probability must lie in [0, 1]");
    }
    double lo = spec.support.lo;
    double hi = spec.support.hi;
    for (const atom &a : spec.atoms) {
        lo = std::min(lo, a.location);
        hi = std::max(hi, a.location);
    }
    if (cdf(spec, lo) >= p) {
        return lo;
    }
    while (hi - lo > tolerance) {
        const double mid = 0.5 * (lo + hi);
        (cdf(spec, mid) >= p ? hi : lo) = mid;
    }
    return hi;
}

struct t_limit_report {
    double semicircle_m;
    double semicircle_distance; ///< sup |f_T(x; m) - sqrt(4 - x^2)/(2 pi)|
    double cauchy_m;
    double cauchy_distance; ///< sup |f_T(x; m) - 1/(pi (1 + x^2))|
};

/// Distances of the free T density to its semicircle (m large) and Cauchy
/// (m near 1) limits on the grid.
inline t_limit_report t_density_limits(const std::vector<double> &x_grid, const rational &m_large = rational{10000},
                                       const rational &m_near_one = rational{1} + rational{1, 1000000})
{
    for (double x : x_grid) {
        if (!(x > -2 && x < 2)) {
            throw error(errc::outside_domain, "grid points must lie in (-2, 2)");
        }
    }
    const auto big = measure_of(free_t(m_large));
    const auto near = measure_of(free_t(m_near_one));
    t_limit_report r{to_double(m_large), 0.0, to_double(m_near_one), 0.0};
    for (double x : x_grid) {
        const double semicircle = std::sqrt(4 - x * x) / (2 * std::numbers::pi);
        const double cauchy = 1 / (std::numbers::pi * (1 + x * x));
        r.semicircle_distance = std::max(r.semicircle_distance, std::abs(big.density(x) - semicircle));
        r.cauchy_distance = std::max(r.cauchy_distance, std::abs(near.density(x) - cauchy));
    }
    return r;
}

} // namespace freebeta
