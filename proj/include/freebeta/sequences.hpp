#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rational.hpp"
#include "series.hpp"

namespace freebeta {

/// Moments m_0 = 1, m_1, ..., m_order of a probability measure.
class moment_sequence
{
public:
    explicit moment_sequence(std::vector<rational> moments) : moments_(std::move(moments))
    {
        if (moments_.empty() || moments_[0] != 1) {
            throw error(errc::invalid_parameters, "a moment sequence starts with m_0 = 1");
        }
    }

    /// Reads m_n off the moment generating series M(z) = sum m_n z^n.
    static moment_sequence from_series(const power_series &mgf)
    {
        return moment_sequence(std::vector<rational>(mgf.coefficients().begin(), mgf.coefficients().end()));
    }

    /// Moments c^n of the point mass at c.
    static moment_sequence point_mass(const rational &c, std::size_t order)
    {
        return from_series(power_series::geometric(c, order));
    }

    [[nodiscard]] std::size_t order() const noexcept { return moments_.size() - 1; }
    [[nodiscard]] const rational &operator[](std::size_t n) const { return moments_.at(n); }
    [[nodiscard]] const std::vector<rational> &values() const noexcept { return moments_; }
    [[nodiscard]] power_series mgf() const { return power_series(moments_); }

    friend bool operator==(const moment_sequence &, const moment_sequence &) = default;

private:
    std::vector<rational> moments_;
};

/// Free cumulants: slot k holds r_{k+1}, i.e. the coefficients of R(z) = sum r_n z^(n-1).
class free_cumulants
{
public:
    explicit free_cumulants(std::vector<rational> r) : r_(std::move(r))
    {
        if (r_.empty()) {
            throw error(errc::insufficient_order, "at least r_1 is required");
        }
    }

    [[nodiscard]] std::size_t order() const noexcept { return r_.size() - 1; }
    [[nodiscard]] std::size_t count() const noexcept { return r_.size(); }
    /// r_n for n >= 1.
    [[nodiscard]] const rational &cumulant(std::size_t n) const { return r_.at(n - 1); }
    [[nodiscard]] const std::vector<rational> &values() const noexcept { return r_; }
    [[nodiscard]] power_series r_transform() const { return power_series(r_); }

    friend bool operator==(const free_cumulants &, const free_cumulants &) = default;

private:
    std::vector<rational> r_;
};

/// Coefficients alpha_k of T(z) = 1 / S(z) = sum alpha_k z^k.
class t_coefficients
{
public:
    explicit t_coefficients(std::vector<rational> alphas) : alphas_(std::move(alphas))
    {
        if (alphas_.empty() || alphas_[0] == 0) {
            throw error(errc::zero_constant_s, "alpha_0 must be nonzero");
        }
    }

    [[nodiscard]] std::size_t order() const noexcept { return alphas_.size() - 1; }
    [[nodiscard]] const rational &operator[](std::size_t k) const { return alphas_.at(k); }
    [[nodiscard]] const std::vector<rational> &values() const noexcept { return alphas_; }
    [[nodiscard]] power_series series() const { return power_series(alphas_); }

    friend bool operator==(const t_coefficients &, const t_coefficients &) = default;

private:
    std::vector<rational> alphas_;
};

} // namespace freebeta
