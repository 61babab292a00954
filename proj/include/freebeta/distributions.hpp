#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "error.hpp"
#include "rational.hpp"
#include "sequences.hpp"
#include "series.hpp"

namespace freebeta {

using complex = std::complex<double>;

// ---------------------------------------------------------------------------
// Families
// ---------------------------------------------------------------------------

/// Marchenko-Pastur law of rate lambda.
struct free_poisson {
    rational lambda;
    explicit free_poisson(rational l) : lambda(std::move(l))
    {
        if (lambda <= 0) {
            throw error(errc::invalid_parameters, "free Poisson needs lambda > 0");
        }
    }
};

/// Law of P^{-1} for P free Poisson of rate b.
struct inverse_free_poisson {
    rational b;
    explicit inverse_free_poisson(rational b_) : b(std::move(b_))
    {
        if (b <= 1) {
            throw error(errc::invalid_parameters, "inverse free Poisson needs b > 1");
        }
    }
};

struct free_beta_prime {
    rational a;
    rational b;
    free_beta_prime(rational a_, rational b_) : a(std::move(a_)), b(std::move(b_))
    {
        if (a <= 0 || b <= 1) {
            throw error(errc::invalid_parameters, "free beta prime needs a > 0 and b > 1");
        }
    }
};

/// Free beta prime dilated by b/a.
struct free_f {
    rational a;
    rational b;
    free_f(rational a_, rational b_) : a(std::move(a_)), b(std::move(b_))
    {
        if (a <= 0 || b <= 1) {
            throw error(errc::invalid_parameters, "free F needs a > 0 and b > 1");
        }
    }
    [[nodiscard]] free_beta_prime base() const { return {a, b}; }
    [[nodiscard]] rational dilation() const { return b / a; }
};

struct free_t {
    rational m;
    explicit free_t(rational m_) : m(std::move(m_))
    {
        if (m <= 1) {
            throw error(errc::invalid_parameters, "free T needs m > 1");
        }
    }
};

struct free_beta {
    rational a;
    rational b;
    free_beta(rational a_, rational b_) : a(std::move(a_)), b(std::move(b_))
    {
        if (a <= 0 || b <= 0 || a + b <= 1) {
            throw error(errc::invalid_parameters, "free beta needs a > 0, b > 0 and a + b > 1");
        }
    }
};

/// Standardized free Meixner law mu(theta, tau): mean 0, variance 1.
struct free_meixner_std {
    double theta;
    double tau;
    free_meixner_std(double theta_, double tau_) : theta(theta_), tau(tau_)
    {
        if (!std::isfinite(theta) || !std::isfinite(tau)) {
            throw error(errc::invalid_parameters, "free Meixner parameters must be finite");
        }
        if (tau < -1) {
            throw error(errc::invalid_tau, "free Meixner needs tau >= -1");
        }
    }
};

using family =
    std::variant<free_poisson, inverse_free_poisson, free_beta_prime, free_f, free_t, free_beta, free_meixner_std>;

inline std::string family_name(const family &f)
{
    static constexpr const char *names[] = {"free Poisson", "inverse free Poisson", "free beta prime", "free F",
                                            "free T",       "free beta",            "free Meixner"};
    return names[f.index()];
}

// ---------------------------------------------------------------------------
// Support and atoms
// ---------------------------------------------------------------------------

struct interval {
    double lo;
    double hi;
    [[nodiscard]] bool contains(double x) const noexcept { return lo <= x && x <= hi; }
    [[nodiscard]] double width() const noexcept { return hi - lo; }
};

struct atom {
    double location;
    double mass;
};

/// Continuous part on a closed interval plus finitely many atoms.
struct measure_spec {
    std::function<double(double)> density;
    interval support;
    std::vector<atom> atoms;
};

namespace detail {

inline double d(const rational &q) { return to_double(q); }

// Root pair of c2 x^2 - 2 c1 x + c0 = 0 with c0 >= 0, the larger one computed
// directly and the smaller one from the product to avoid cancellation.
inline interval quadratic_roots(double c2, double c1, double c0)
{
    const double disc = std::max(c1 * c1 - c2 * c0, 0.0);
    const double hi = (c1 + std::sqrt(disc)) / c2;
    const double lo = hi == 0 ? 0.0 : c0 / (c2 * hi);
    return {lo, hi};
}

inline interval fbp_support(const rational &a, const rational &b)
{
    const double bm1 = d(b - 1);
    return quadratic_roots(bm1 * bm1, d(a + b + a * b - 1), d((1 - a) * (1 - a)));
}

inline interval beta_support(const rational &a, const rational &b)
{
    const double s = d(a + b);
    return quadratic_roots(s * s, d(a * b + a * a - a + b), d((a - 1) * (a - 1)));
}

inline interval mp_support(const rational &lambda)
{
    const double r = std::sqrt(d(lambda));
    return {(1 - r) * (1 - r), (1 + r) * (1 + r)};
}

inline double mp_density(interval s, double x)
{
    if (x <= s.lo || x >= s.hi || x <= 0) {
        return 0.0;
    }
    return std::sqrt((s.hi - x) * (x - s.lo)) / (2 * std::numbers::pi * x);
}

inline double fbp_density(double b, interval s, double x)
{
    if (x <= s.lo || x >= s.hi || x <= 0) {
        return 0.0;
    }
    return (b - 1) * std::sqrt((s.hi - x) * (x - s.lo)) / (2 * std::numbers::pi * x * (1 + x));
}

inline double positive_part(const rational &q) { return q > 0 ? d(q) : 0.0; }

// Product of principal square roots: analytic off [lo, hi] and ~ z at infinity.
inline complex root_pair(complex z, double lo, double hi) { return std::sqrt(z - hi) * std::sqrt(z - lo); }

} // namespace detail

/// Interval carrying the continuous part (for free Meixner the bulk of the law).
inline interval support_of(const family &f)
{
    return std::visit(
        [](const auto &g) -> interval {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, free_poisson>) {
                return detail::mp_support(g.lambda);
            } else if constexpr (std::is_same_v<T, inverse_free_poisson>) {
                const auto s = detail::mp_support(g.b);
                return {1 / s.hi, 1 / s.lo};
            } else if constexpr (std::is_same_v<T, free_beta_prime>) {
                return detail::fbp_support(g.a, g.b);
            } else if constexpr (std::is_same_v<T, free_f>) {
                const auto s = detail::fbp_support(g.a, g.b);
                const double c = detail::d(g.dilation());
                return {c * s.lo, c * s.hi};
            } else if constexpr (std::is_same_v<T, free_t>) {
                const double c = detail::d(2 * g.m / (g.m - 1));
                return {-c, c};
            } else if constexpr (std::is_same_v<T, free_beta>) {
                return detail::beta_support(g.a, g.b);
            } else {
                const double r = 2 * std::sqrt(1 + g.tau);
                return {g.theta - r, g.theta + r};
            }
        },
        f);
}

/// Closed-form atoms (possibly empty).
inline std::vector<atom> atoms_of(const family &f)
{
    std::vector<atom> out;
    auto add = [&](double loc, double mass) {
        if (mass > 0) {
            out.push_back({loc, mass});
        }
    };
    std::visit(
        [&](const auto &g) {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, free_poisson>) {
                add(0.0, detail::positive_part(1 - g.lambda));
            } else if constexpr (std::is_same_v<T, free_beta_prime> || std::is_same_v<T, free_f>) {
                add(0.0, detail::positive_part(1 - g.a));
            } else if constexpr (std::is_same_v<T, free_beta>) {
                add(0.0, detail::positive_part(1 - g.a));
                add(1.0, detail::positive_part(1 - g.b));
            } else if constexpr (std::is_same_v<T, free_meixner_std>) {
                throw error(errc::unsupported_family, "atoms of the free Meixner family are not tabulated");
            }
        },
        f);
    return out;
}

/// Closed-form density, support and atoms. Free Meixner is not covered.
inline measure_spec measure_of(const family &f)
{
    const interval s = support_of(f);
    std::function<double(double)> density = std::visit(
        [s](const auto &g) -> std::function<double(double)> {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, free_poisson>) {
                return [s](double x) { return detail::mp_density(s, x); };
            } else if constexpr (std::is_same_v<T, inverse_free_poisson>) {
                const interval base = detail::mp_support(g.b);
                return [base](double x) { return x > 0 ? detail::mp_density(base, 1 / x) / (x * x) : 0.0; };
            } else if constexpr (std::is_same_v<T, free_beta_prime>) {
                const double b = detail::d(g.b);
                return [b, s](double x) { return detail::fbp_density(b, s, x); };
            } else if constexpr (std::is_same_v<T, free_f>) {
                const double b = detail::d(g.b);
                const double k = detail::d(g.a / g.b);
                const interval base = detail::fbp_support(g.a, g.b);
                return [b, k, base](double x) { return k * detail::fbp_density(b, base, k * x); };
            } else if constexpr (std::is_same_v<T, free_t>) {
                const double m = detail::d(g.m);
                return [m, s](double x) {
                    if (x <= s.lo || x >= s.hi) {
                        return 0.0;
                    }
                    return (m - 1) * std::sqrt((s.hi - x) * (x - s.lo)) / (2 * std::numbers::pi * (x * x + m));
                };
            } else if constexpr (std::is_same_v<T, free_beta>) {
                const double ab = detail::d(g.a + g.b);
                return [ab, s](double x) {
                    if (x <= s.lo || x >= s.hi || x <= 0 || x >= 1) {
                        return 0.0;
                    }
                    return ab * std::sqrt((s.hi - x) * (x - s.lo)) / (2 * std::numbers::pi * x * (1 - x));
                };
            } else {
                throw error(errc::unsupported_family, "no closed-form density for the free Meixner family");
            }
        },
        f);
    return {std::move(density), s, atoms_of(f)};
}

// ---------------------------------------------------------------------------
// Cauchy transforms
// ---------------------------------------------------------------------------

namespace detail {

inline complex g_free_poisson(double lambda, interval s, complex z)
{
    return 2.0 / (z + 1.0 - lambda + root_pair(z, s.lo, s.hi));
}

inline complex g_fbp(double a, double b, interval s, complex z)
{
    return 2 * b / ((b + 1) * z + 1.0 - a + (b - 1) * root_pair(z, s.lo, s.hi));
}

inline complex g_meixner(double theta, double tau, complex z)
{
    if (tau == -1) {
        return (z - theta) / (z * z - theta * z - 1.0);
    }
    const double r = 2 * std::sqrt(1 + tau);
    return 2 * (1 + tau) / ((1 + 2 * tau) * z + theta + root_pair(z, theta - r, theta + r));
}

inline complex cauchy_unchecked(const family &f, complex z)
{
    return std::visit(
        [z](const auto &g) -> complex {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, free_poisson>) {
                return g_free_poisson(d(g.lambda), mp_support(g.lambda), z);
            } else if constexpr (std::is_same_v<T, inverse_free_poisson>) {
                const complex w = 1.0 / z;
                return w - w * w * g_free_poisson(d(g.b), mp_support(g.b), w);
            } else if constexpr (std::is_same_v<T, free_beta_prime>) {
                return g_fbp(d(g.a), d(g.b), fbp_support(g.a, g.b), z);
            } else if constexpr (std::is_same_v<T, free_f>) {
                const double k = d(g.a / g.b);
                return k * g_fbp(d(g.a), d(g.b), fbp_support(g.a, g.b), k * z);
            } else if constexpr (std::is_same_v<T, free_t>) {
                const double m = d(g.m);
                const double c = d(2 * g.m / (g.m - 1));
                return 2 * m / ((m + 1) * z + (m - 1) * root_pair(z, -c, c));
            } else if constexpr (std::is_same_v<T, free_beta>) {
                const double a = d(g.a);
                const double b = d(g.b);
                return 2 * (a + b - 1) /
                       ((a + b - 2) * z + 1.0 - a + (a + b) * root_pair(z, beta_support(g.a, g.b).lo,
                                                                      beta_support(g.a, g.b).hi));
            } else {
                return g_meixner(g.theta, g.tau, z);
            }
        },
        f);
}

} // namespace detail

/// G(z) = integral of 1/(z - x). Real z on the support or at an atom is rejected.
inline complex cauchy_eval(const family &f, complex z)
{
    if (z.imag() == 0) {
        const double x = z.real();
        if (support_of(f).contains(x)) {
            throw error(errc::on_support, "z = " + std::to_string(x) + " lies on the support");
        }
        if (!std::holds_alternative<free_meixner_std>(f)) {
            for (const atom &at : atoms_of(f)) {
                if (at.location == x) {
                    throw error(errc::on_support, "z = " + std::to_string(x) + " is an atom");
                }
            }
        }
    }
    return detail::cauchy_unchecked(f, z);
}

// ---------------------------------------------------------------------------
// Exact moment series
// ---------------------------------------------------------------------------

namespace detail {

inline power_series z_series(std::size_t order) { return power_series::identity(order); }
inline power_series one_series(std::size_t order) { return power_series::constant(rational{1}, order); }

// M(z) for free beta prime: the root series has constant term (b-1)^2.
inline power_series fbp_mgf(const rational &a, const rational &b, std::size_t order)
{
    const std::size_t n = order + 1;
    const power_series z = z_series(n);
    const power_series one = one_series(n);
    const power_series lin = one * (b - 1) - (1 + a) * z;
    const power_series root = sqrt(lin * lin - (4 * a) * (z * (z + rational{1})));
    const power_series num = one * (b + 1) + (1 - a) * z - root;
    return (num / (rational{2} * (one + z))).truncate(order);
}

inline power_series mp_mgf(const rational &lambda, std::size_t order)
{
    // [1 + (1-l) z - sqrt((1 + (1-l) z)^2 - 4 z)] / (2 z)
    const std::size_t n = order + 1;
    const power_series z = z_series(n);
    const power_series lin = one_series(n) + (1 - lambda) * z;
    const power_series num = lin - sqrt(lin * lin - rational{4} * z);
    return (rational{1, 2} * num.shift_down(1)).truncate(order);
}

} // namespace detail

/// M(z) = sum m_n z^n expanded exactly from the closed-form transform.
inline power_series moment_series(const family &f, std::size_t order)
{
    return std::visit(
        [order](const auto &g) -> power_series {
            using T = std::decay_t<decltype(g)>;
            const std::size_t n = order + 2;
            const power_series z = detail::z_series(n);
            const power_series one = detail::one_series(n);
            if constexpr (std::is_same_v<T, free_poisson>) {
                return detail::mp_mgf(g.lambda, order);
            } else if constexpr (std::is_same_v<T, inverse_free_poisson>) {
                // M(z) = 1 - z G_P(z), with G_P(z) = 2 / (z + 1 - b + sqrt((z - 1 - b)^2 - 4 b)).
                const power_series lin = z - (1 + g.b);
                const power_series root = -sqrt(lin * lin - 4 * g.b);
                const power_series gp = rational{2} * reciprocal(z + (1 - g.b) + root);
                return (one - z * gp).truncate(order);
            } else if constexpr (std::is_same_v<T, free_beta_prime>) {
                return detail::fbp_mgf(g.a, g.b, order);
            } else if constexpr (std::is_same_v<T, free_f>) {
                return detail::fbp_mgf(g.a, g.b, order).dilate(g.dilation());
            } else if constexpr (std::is_same_v<T, free_t>) {
                // [(m+1) - sqrt((m-1)^2 - 4 m^2 z^2)] / (2 (1 + m z^2))
                const power_series root = sqrt(one * ((g.m - 1) * (g.m - 1)) - (4 * g.m * g.m) * (z * z));
                const power_series num = one * (g.m + 1) - root;
                return (num / (rational{2} * (one + g.m * (z * z)))).truncate(order);
            } else if constexpr (std::is_same_v<T, free_beta>) {
                // [(a+b-2) + (1-a) z - sqrt(Q)] / (2 (z - 1))
                const rational &a = g.a;
                const rational &b = g.b;
                const power_series q = one * ((a + b) * (a + b)) - (2 * (a * b + a * a - a + b)) * z +
                                       ((a - 1) * (a - 1)) * (z * z);
                const power_series num = one * (a + b - 2) + (1 - a) * z - sqrt(q);
                return (num / (rational{2} * (z - rational{1}))).truncate(order);
            } else {
                throw error(errc::unsupported_family, "free Meixner parameters are not exact rationals");
            }
        },
        f);
}

inline moment_sequence moments_of(const family &f, std::size_t order)
{
    return moment_sequence::from_series(moment_series(f, order));
}

// ---------------------------------------------------------------------------
// S- and T-transforms
// ---------------------------------------------------------------------------

/// S(z) through z^order for the positive families with nonzero mean.
inline power_series s_transform_of(const family &f, std::size_t order)
{
    const power_series z = power_series::identity(order);
    const power_series one = power_series::constant(rational{1}, order);
    return std::visit(
        [&](const auto &g) -> power_series {
            using T = std::decay_t<decltype(g)>;
            if constexpr (std::is_same_v<T, free_poisson>) {
                return reciprocal(z + g.lambda);
            } else if constexpr (std::is_same_v<T, inverse_free_poisson>) {
                return (g.b - 1) * one - z;
            } else if constexpr (std::is_same_v<T, free_beta_prime>) {
                return ((g.b - 1) * one - z) / (z + g.a);
            } else if constexpr (std::is_same_v<T, free_f>) {
                return (1 / g.dilation()) * (((g.b - 1) * one - z) / (z + g.a));
            } else {
                throw error(errc::unsupported_family, family_name(g) + " has no S-transform here");
            }
        },
        family{f});
}

/// alpha_0 = a/(b-1), alpha_k = (a+b-1)/(b-1)^(k+1).
inline t_coefficients t_coeffs_of(const free_beta_prime &f, std::size_t order)
{
    std::vector<rational> alphas(order + 1);
    alphas[0] = f.a / (f.b - 1);
    rational p = 1 / (f.b - 1);
    for (std::size_t k = 1; k <= order; ++k) {
        p /= (f.b - 1);
        alphas[k] = (f.a + f.b - 1) * p;
    }
    return t_coefficients(std::move(alphas));
}

// ---------------------------------------------------------------------------
// Free Meixner
// ---------------------------------------------------------------------------

struct meixner_parameters {
    double theta;
    double tau;
    rational theta_squared;
    rational tau_exact;
    rational discriminant; ///< theta^2 - 4 tau
    double mean;
    double variance;
};

/// Parameters of the standardized free beta prime: mean a/(b-1), variance a(a+b-1)/(b-1)^3.
inline meixner_parameters standardize_to_meixner(const rational &a, const rational &b)
{
    if (a <= 0 || b <= 1) {
        throw error(errc::invalid_parameters, "standardization needs a > 0 and b > 1");
    }
    const rational bm1 = b - 1;
    const rational theta2 = (2 * a + b - 1) * (2 * a + b - 1) / (a * (a + b - 1) * bm1);
    const rational tau = 1 / bm1;
    meixner_parameters p;
    p.theta_squared = theta2;
    p.tau_exact = tau;
    p.discriminant = theta2 - 4 * tau;
    p.theta = std::sqrt(to_double(theta2));
    p.tau = to_double(tau);
    p.mean = to_double(a / bm1);
    p.variance = to_double(a * (a + b - 1) / (bm1 * bm1 * bm1));
    return p;
}

enum class meixner_class {
    semicircle,
    free_poisson,
    free_negative_binomial,
    free_gamma,
    pure_free_meixner,
    free_binomial,
};

inline std::string to_string(meixner_class c)
{
    switch (c) {
        case meixner_class::semicircle: return "semicircle";
        case meixner_class::free_poisson: return "free Poisson";
        case meixner_class::free_negative_binomial: return "free negative binomial";
        case meixner_class::free_gamma: return "free gamma";
        case meixner_class::pure_free_meixner: return "pure free Meixner";
        case meixner_class::free_binomial: return "free binomial";
    }
    return "unknown";
}

namespace detail {

inline meixner_class classify_by_signs(int theta_sign, int tau_sign, int disc_sign)
{
    if (tau_sign < 0) {
        return meixner_class::free_binomial;
    }
    if (tau_sign == 0) {
        return theta_sign == 0 ? meixner_class::semicircle : meixner_class::free_poisson;
    }
    if (disc_sign > 0) {
        return meixner_class::free_negative_binomial;
    }
    return disc_sign == 0 ? meixner_class::free_gamma : meixner_class::pure_free_meixner;
}

template <class T> int sign_of(const T &x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

} // namespace detail

inline meixner_class classify_meixner(double theta, double tau)
{
    if (tau < -1) {
        throw error(errc::invalid_tau, "tau must be >= -1");
    }
    return detail::classify_by_signs(detail::sign_of(theta), detail::sign_of(tau),
                                     detail::sign_of(theta * theta - 4 * tau));
}

/// Exact classification from theta^2 and tau; theta = 0 iff theta^2 = 0.
inline meixner_class classify_meixner_exact(const rational &theta_squared, const rational &tau)
{
    if (tau < -1) {
        throw error(errc::invalid_tau, "tau must be >= -1");
    }
    if (theta_squared < 0) {
        throw error(errc::invalid_parameters, "theta^2 must be non-negative");
    }
    return detail::classify_by_signs(detail::sign_of(theta_squared), detail::sign_of(tau),
                                     detail::sign_of(theta_squared - 4 * tau));
}

} // namespace freebeta
