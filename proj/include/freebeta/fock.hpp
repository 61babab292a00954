#pragma once

#include <cstddef>
#include <vector>

#include "error.hpp"
#include "rational.hpp"

namespace freebeta {

/// Tridiagonal operator on span{e_0, ..., e_N} of the full Fock space:
/// X e_k = mu_k e_(k+1) + kappa_k e_k + lambda_k e_(k-1), with flows above
/// level N discarded. Vacuum moments are scaled by scale^n.
class fock_operator
{
public:
    fock_operator(std::vector<rational> raise, std::vector<rational> diagonal, std::vector<rational> lower,
                  rational scale = rational{1})
        : raise_(std::move(raise)), diag_(std::move(diagonal)), lower_(std::move(lower)), scale_(std::move(scale))
    {
        if (diag_.size() < 2 || raise_.size() + 1 != diag_.size() || lower_.size() + 1 != diag_.size()) {
            throw error(errc::invalid_parameters, "operator bands have inconsistent lengths");
        }
    }

    /// Truncation level N; the dimension is N + 1.
    [[nodiscard]] std::size_t level() const noexcept { return diag_.size() - 1; }
    [[nodiscard]] std::size_t dimension() const noexcept { return diag_.size(); }
    [[nodiscard]] const rational &scale() const noexcept { return scale_; }

    /// Matrix entry (row, col) including the scale factor.
    [[nodiscard]] rational entry(std::size_t row, std::size_t col) const
    {
        rational v{0};
        if (row == col) {
            v = diag_.at(row);
        } else if (row == col + 1) {
            v = raise_.at(col);
        } else if (col == row + 1) {
            v = lower_.at(row);
        }
        return scale_ * v;
    }

    [[nodiscard]] std::vector<std::vector<rational>> matrix() const
    {
        std::vector<std::vector<rational>> m(dimension(), std::vector<rational>(dimension()));
        for (std::size_t r = 0; r < dimension(); ++r) {
            for (std::size_t c = 0; c < dimension(); ++c) {
                m[r][c] = entry(r, c);
            }
        }
        return m;
    }

    /// Same operator multiplied by c.
    [[nodiscard]] fock_operator scaled(const rational &c) const
    {
        return fock_operator(raise_, diag_, lower_, scale_ * c);
    }

    /// <X^n e_0, e_0> for n = 0..n_max.
    [[nodiscard]] std::vector<rational> vacuum_moments(std::size_t n_max) const
    {
        if (n_max > level()) {
            throw error(errc::truncation_too_small, "need truncation level >= " + std::to_string(n_max));
        }
        std::vector<rational> v(dimension());
        v[0] = 1;
        std::vector<rational> out{rational{1}};
        rational scale_power{1};
        for (std::size_t n = 1; n <= n_max; ++n) {
            std::vector<rational> w(dimension());
            for (std::size_t k = 0; k < dimension(); ++k) {
                if (v[k] == 0) {
                    continue;
                }
                w[k] += diag_[k] * v[k];
                if (k + 1 < dimension()) {
                    w[k + 1] += raise_[k] * v[k];
                }
                if (k > 0) {
                    w[k - 1] += lower_[k - 1] * v[k];
                }
            }
            v = std::move(w);
            scale_power *= scale_;
            out.push_back(scale_power * v[0]);
        }
        return out;
    }

private:
    std::vector<rational> raise_; // mu_0 .. mu_(N-1)
    std::vector<rational> diag_;  // kappa_0 .. kappa_N
    std::vector<rational> lower_; // lambda_1 .. lambda_N, stored at index k-1
    rational scale_;
};

/// Operator realizing gamma 1 + beta l + l* + (1 + alpha) l l* + alpha l^2 l*:
/// mu_0 = beta, mu_k = alpha + beta, kappa_0 = gamma, kappa_k = 1 + alpha + gamma, lambda_k = 1.
inline fock_operator build_operator(const rational &alpha, const rational &beta, const rational &gamma,
                                    std::size_t level)
{
    if (level < 1) {
        throw error(errc::invalid_parameters, "truncation level must be >= 1");
    }
    std::vector<rational> raise(level, alpha + beta);
    raise[0] = beta;
    std::vector<rational> diag(level + 1, 1 + alpha + gamma);
    diag[0] = gamma;
    std::vector<rational> lower(level, rational{1});
    return fock_operator(std::move(raise), std::move(diag), std::move(lower));
}

/// Operator for the free beta prime law: the statistics operator at
/// (t/s, t/(su), 1/u) dilated by su, where s = a/(b-1), t = (a+b-1)/(b-1), u = 1/(b-1).
inline fock_operator fbp_operator(const rational &a, const rational &b, std::size_t level)
{
    if (a <= 0 || b <= 1) {
        throw error(errc::invalid_parameters, "free beta prime needs a > 0 and b > 1");
    }
    const rational s = a / (b - 1);
    const rational t = (a + b - 1) / (b - 1);
    const rational u = 1 / (b - 1);
    return build_operator(t / s, t / (s * u), 1 / u, level).scaled(s * u);
}

/// gamma 1 + r (l + l*) + l l* + alpha (1 + l) l l* for a rational r with r^2 = beta.
inline fock_operator square_root_operator(const rational &alpha, const rational &root_beta, const rational &gamma,
                                          std::size_t level)
{
    if (level < 1) {
        throw error(errc::invalid_parameters, "truncation level must be >= 1");
    }
    // l l* fixes e_k for k >= 1; l l l* raises e_k (k >= 1) by one.
    std::vector<rational> raise(level, root_beta + alpha);
    raise[0] = root_beta;
    std::vector<rational> diag(level + 1, gamma + 1 + alpha);
    diag[0] = gamma;
    std::vector<rational> lower(level, root_beta);
    return fock_operator(std::move(raise), std::move(diag), std::move(lower));
}

} // namespace freebeta
