#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace freebeta {

/// Truncated formal power series with exact rational coefficients.
///
/// Slot k holds the coefficient of z^k and the series is known through
/// z^order inclusive. Binary operations truncate to the smaller order of
/// their operands; nothing ever extends the order silently.
class power_series
{
public:
    /// The zero series known through z^order.
    explicit power_series(std::size_t order) : coeffs_(order + 1) {}

    explicit power_series(std::vector<rational> coeffs) : coeffs_(std::move(coeffs))
    {
        if (coeffs_.empty()) {
            throw error(errc::malformed_input, "a power series needs at least one coefficient");
        }
    }

    power_series(std::initializer_list<rational> coeffs) : power_series(std::vector<rational>(coeffs)) {}

    static power_series constant(const rational &c, std::size_t order)
    {
        power_series s(order);
        s.coeffs_[0] = c;
        return s;
    }

    /// c * z^k, known through z^order (k <= order).
    static power_series monomial(const rational &c, std::size_t k, std::size_t order)
    {
        power_series s(order);
        if (k <= order) {
            s.coeffs_[k] = c;
        }
        return s;
    }

    static power_series identity(std::size_t order) { return monomial(rational{1}, 1, order); }

    /// 1 / (1 - c z) through z^order.
    static power_series geometric(const rational &c, std::size_t order)
    {
        power_series s(order);
        rational term{1};
        for (std::size_t k = 0; k <= order; ++k) {
            s.coeffs_[k] = term;
            term *= c;
        }
        return s;
    }

    [[nodiscard]] std::size_t order() const noexcept { return coeffs_.size() - 1; }
    [[nodiscard]] const rational &operator[](std::size_t k) const { return coeffs_.at(k); }
    [[nodiscard]] std::span<const rational> coefficients() const noexcept { return coeffs_; }

    [[nodiscard]] power_series truncate(std::size_t order) const
    {
        std::vector<rational> c(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(std::min(order, this->order()) + 1));
        return power_series(std::move(c));
    }

    /// Index of the first nonzero coefficient, or order()+1 for the zero series.
    [[nodiscard]] std::size_t valuation() const noexcept
    {
        std::size_t k = 0;
        while (k < coeffs_.size() && coeffs_[k] == 0) {
            ++k;
        }
        return k;
    }

    [[nodiscard]] bool is_zero() const noexcept { return valuation() == coeffs_.size(); }

    /// Exact division by z^k; the low k coefficients must vanish. Order drops by k.
    [[nodiscard]] power_series shift_down(std::size_t k = 1) const
    {
        if (k > order() || valuation() < k) {
            throw error(errc::malformed_input, "series is not divisible by z^" + std::to_string(k) + " within its order");
        }
        return power_series(std::vector<rational>(coeffs_.begin() + static_cast<std::ptrdiff_t>(k), coeffs_.end()));
    }

    /// Multiplication by z^k. The product is known k orders further.
    [[nodiscard]] power_series shift_up(std::size_t k = 1) const
    {
        std::vector<rational> c(k);
        c.insert(c.end(), coeffs_.begin(), coeffs_.end());
        return power_series(std::move(c));
    }

    /// Formal derivative; known one order less.
    [[nodiscard]] power_series derivative() const
    {
        if (order() == 0) {
            return power_series(std::size_t{0});
        }
        std::vector<rational> c(order());
        for (std::size_t k = 1; k <= order(); ++k) {
            c[k - 1] = coeffs_[k] * rational(k);
        }
        return power_series(std::move(c));
    }

    /// f(c z): coefficient k scaled by c^k.
    [[nodiscard]] power_series dilate(const rational &c) const
    {
        power_series s(*this);
        rational factor{1};
        for (auto &coeff : s.coeffs_) {
            coeff *= factor;
            factor *= c;
        }
        return s;
    }

    friend bool operator==(const power_series &, const power_series &) = default;

    friend power_series operator-(const power_series &a)
    {
        power_series s(a);
        for (auto &c : s.coeffs_) {
            c = -c;
        }
        return s;
    }

    friend power_series operator+(const power_series &a, const power_series &b)
    {
        std::size_t n = std::min(a.order(), b.order());
        power_series s(n);
        for (std::size_t k = 0; k <= n; ++k) {
            s.coeffs_[k] = a.coeffs_[k] + b.coeffs_[k];
        }
        return s;
    }

    friend power_series operator-(const power_series &a, const power_series &b) { return a + (-b); }

    friend power_series operator*(const power_series &a, const power_series &b)
    {
        std::size_t n = std::min(a.order(), b.order());
        power_series s(n);
        for (std::size_t i = 0; i <= n; ++i) {
            if (a.coeffs_[i] == 0) {
                continue;
            }
            for (std::size_t j = 0; i + j <= n; ++j) {
                s.coeffs_[i + j] += a.coeffs_[i] * b.coeffs_[j];
            }
        }
        return s;
    }

    friend power_series operator*(const rational &c, const power_series &a)
    {
        power_series s(a);
        for (auto &coeff : s.coeffs_) {
            coeff *= c;
        }
        return s;
    }

    friend power_series operator*(const power_series &a, const rational &c) { return c * a; }

    friend power_series operator+(const power_series &a, const rational &c)
    {
        power_series s(a);
        s.coeffs_[0] += c;
        return s;
    }

    friend power_series operator-(const power_series &a, const rational &c) { return a + (-c); }

    friend power_series operator/(const power_series &a, const power_series &b);

    friend std::ostream &operator<<(std::ostream &os, const power_series &s)
    {
        bool first = true;
        for (std::size_t k = 0; k <= s.order(); ++k) {
            if (s.coeffs_[k] == 0) {
                continue;
            }
            os << (first ? "" : " + ") << s.coeffs_[k];
            if (k > 0) {
                os << "*z^" << k;
            }
            first = false;
        }
        if (first) {
            os << "0";
        }
        return os << " + O(z^" << s.order() + 1 << ")";
    }

private:
    std::vector<rational> coeffs_;
};

/// Multiplicative inverse; requires a nonzero constant term.
inline power_series reciprocal(const power_series &b)
{
    if (b[0] == 0) {
        throw error(errc::division_by_zero_series, "reciprocal of a series with zero constant term");
    }
    const std::size_t n = b.order();
    std::vector<rational> r(n + 1);
    const rational inv0 = 1 / b[0];
    r[0] = inv0;
    for (std::size_t k = 1; k <= n; ++k) {
        rational acc{0};
        for (std::size_t j = 1; j <= k; ++j) {
            acc += b[j] * r[k - j];
        }
        r[k] = -acc * inv0;
    }
    return power_series(std::move(r));
}

inline power_series operator/(const power_series &a, const power_series &b)
{
    if (b[0] == 0) {
        throw error(errc::division_by_zero_series, "divisor has zero constant term");
    }
    std::size_t n = std::min(a.order(), b.order());
    return a.truncate(n) * reciprocal(b.truncate(n));
}

/// Quotient of series whose denominators may vanish at 0: common powers of z
/// are cancelled first, so the result is known through order - valuation(b).
inline power_series divide_cancelling(const power_series &a, const power_series &b)
{
    std::size_t v = b.valuation();
    if (v > std::min(a.order(), b.order())) {
        throw error(errc::division_by_zero_series, "divisor vanishes to its full order");
    }
    if (a.valuation() < v) {
        throw error(errc::division_by_zero_series, "quotient has a pole at z = 0");
    }
    return a.shift_down(v) / b.shift_down(v);
}

/// outer(inner(z)); inner must have zero constant term.
inline power_series compose(const power_series &outer, const power_series &inner)
{
    if (inner[0] != 0) {
        throw error(errc::nonzero_constant_inner, "inner series must vanish at 0");
    }
    const std::size_t n = std::min(outer.order(), inner.order());
    const power_series in = inner.truncate(n);
    power_series result = power_series::constant(outer[n], n);
    for (std::size_t k = n; k-- > 0;) {
        result = result * in + outer[k];
    }
    return result;
}

/// Principal square root: requires a constant term that is the square of a
/// rational and picks the root with positive constant term.
inline power_series sqrt(const power_series &f)
{
    auto root0 = exact_sqrt(f[0]);
    if (!root0 || *root0 == 0) {
        throw error(errc::not_invertible_series, "square root needs a nonzero rational square as constant term");
    }
    const std::size_t n = f.order();
    std::vector<rational> s(n + 1);
    s[0] = *root0;
    const rational inv = 1 / (2 * s[0]);
    for (std::size_t k = 1; k <= n; ++k) {
        rational acc = f[k];
        for (std::size_t j = 1; j < k; ++j) {
            acc -= s[j] * s[k - j];
        }
        s[k] = acc * inv;
    }
    return power_series(std::move(s));
}

enum class reversion_method { lagrange, newton };

namespace detail {

inline void check_revertible(const power_series &f)
{
    if (f.order() < 1 || f[0] != 0 || f[1] == 0) {
        throw error(errc::not_invertible_series, "reversion needs f(0) = 0 and f'(0) != 0");
    }
}

// g_n = (1/n) [w^(n-1)] (w / f(w))^n
inline power_series reversion_lagrange(const power_series &f)
{
    const std::size_t n = f.order();
    const power_series h = reciprocal(f.shift_down(1)); // order n-1
    std::vector<rational> g(n + 1);
    power_series h_pow = power_series::constant(rational{1}, n - 1);
    for (std::size_t k = 1; k <= n; ++k) {
        h_pow = h_pow * h;
        g[k] = h_pow[k - 1] / rational(k);
    }
    return power_series(std::move(g));
}

// Newton iteration g <- g - (f(g) - z) / f'(g), exact at every step.
inline power_series reversion_newton(const power_series &f)
{
    const std::size_t n = f.order();
    const power_series z = power_series::identity(n);
    const power_series df = f.derivative();
    power_series g = power_series::monomial(1 / f[1], 1, n);
    for (std::size_t iter = 0; iter <= 2 * n + 2; ++iter) {
        const power_series residual = compose(f, g) - z;
        if (residual.is_zero()) {
            return g;
        }
        const std::size_t v = residual.valuation();
        const power_series slope = compose(df, g.truncate(n - 1)).truncate(n - v);
        g = g - (residual.shift_down(v) / slope).shift_up(v);
    }
    throw error(errc::not_invertible_series, "Newton reversion failed to converge");
}

} // namespace detail

/// Compositional inverse g with f(g(z)) = z through f's order.
inline power_series reversion(const power_series &f, reversion_method method = reversion_method::lagrange)
{
    detail::check_revertible(f);
    return method == reversion_method::lagrange ? detail::reversion_lagrange(f) : detail::reversion_newton(f);
}

/// Jacobi-type continued fraction
///   1 / (1 - d_0 z - p_0 z^2 / (1 - d_1 z - p_1 z^2 / (...)))
/// cut after `depth` levels; p_i is the product of the up weight at height i
/// and the down weight at height i+1.
struct continued_fraction_spec {
    std::vector<rational> diagonal;
    std::vector<rational> subdiagonal_products;
    std::size_t depth = 1;

    /// A length-n path never climbs above floor(n/2); this many levels is enough.
    static constexpr std::size_t minimum_depth(std::size_t order) noexcept { return (order + 1) / 2 + 1; }
};

inline power_series cf_expand(const continued_fraction_spec &spec, std::size_t order)
{
    if (spec.depth == 0 || spec.depth < continued_fraction_spec::minimum_depth(order)) {
        throw error(errc::insufficient_depth,
                    "depth " + std::to_string(spec.depth) + " is too shallow for order " + std::to_string(order));
    }
    if (spec.diagonal.size() < spec.depth || spec.subdiagonal_products.size() + 1 < spec.depth) {
        throw error(errc::insufficient_depth, "weight sequences are shorter than the requested depth");
    }
    const power_series z = power_series::identity(order);
    const power_series one = power_series::constant(rational{1}, order);
    const power_series z2 = z * z;
    power_series h = one - spec.diagonal[spec.depth - 1] * z;
    for (std::size_t k = spec.depth - 1; k-- > 0;) {
        h = one - spec.diagonal[k] * z - (spec.subdiagonal_products[k] * z2) / h;
    }
    return reciprocal(h);
}

} // namespace freebeta
