#pragma once

#include <cstddef>
#include <map>
#include <vector>

#include "error.hpp"
#include "ncl.hpp"
#include "rational.hpp"
#include "sequences.hpp"
#include "series.hpp"

namespace freebeta {

/// Phi(z) = sum_{n>=1} m_n z^n, i.e. M(z) - 1.
inline power_series moments_to_phi(const moment_sequence &m) { return m.mgf() - rational{1}; }

/// Free cumulants r_1..r_order. With psi(z) = z M(z) the moment-cumulant
/// relation M(z) = 1 + sum r_n (z M(z))^n reads Phi = Rc(psi), so
/// Rc = Phi o psi^<-1>. psi'(0) = 1, hence this works for centred measures too.
inline free_cumulants moments_to_r(const moment_sequence &m)
{
    const std::size_t n = m.order();
    if (n < 1) {
        throw error(errc::insufficient_order, "free cumulants need moments through order >= 1");
    }
    const power_series psi = m.mgf().shift_up(1).truncate(n);
    const power_series rc = compose(moments_to_phi(m), reversion(psi));
    std::vector<rational> r(rc.coefficients().begin() + 1, rc.coefficients().end());
    return free_cumulants(std::move(r));
}

enum class cumulant_route { series, nc_sum };

namespace detail {

inline moment_sequence r_to_moments_series(const free_cumulants &r)
{
    const std::size_t n = r.count();
    // Rc(w) = sum r_k w^k; psi = z M solves psi = z (1 + Rc(psi)). The
    // coefficient of z^(n+1) in psi does not involve r_(n+1), so it is set to 0.
    std::vector<rational> rc(n + 2);
    for (std::size_t k = 1; k <= n; ++k) {
        rc[k] = r.cumulant(k);
    }
    const power_series w = power_series::identity(n + 1);
    const power_series psi = reversion(w / (power_series(std::move(rc)) + rational{1}));
    return moment_sequence::from_series(psi.shift_down(1));
}

inline moment_sequence r_to_moments_nc(const free_cumulants &r)
{
    const std::size_t n = r.count();
    check_enumeration_size(n);
    std::vector<rational> m(n + 1);
    m[0] = 1;
    for (std::size_t k = 1; k <= n; ++k) {
        std::map<std::vector<std::size_t>, std::uint64_t> profiles;
        for_each_ncl(
            k,
            [&](const linked_partition &p) {
                std::vector<std::size_t> sizes;
                for (const auto &b : p.blocks) {
                    sizes.push_back(b.size());
                }
                std::sort(sizes.begin(), sizes.end());
                ++profiles[sizes];
            },
            false);
        rational total{0};
        for (const auto &[sizes, count] : profiles) {
            rational term{1};
            for (std::size_t s : sizes) {
                term *= r.cumulant(s);
            }
            total += rational(count) * term;
        }
        m[k] = total;
    }
    return moment_sequence(std::move(m));
}

} // namespace detail

/// Moments m_0..m_count from free cumulants r_1..r_count.
inline moment_sequence r_to_moments(const free_cumulants &r, cumulant_route route = cumulant_route::series)
{
    return route == cumulant_route::series ? detail::r_to_moments_series(r) : detail::r_to_moments_nc(r);
}

/// S(z) = (1 + z) Phi^<-1>(z) / z, known through z^(order-1).
inline power_series moments_to_s(const moment_sequence &m)
{
    if (m.order() < 1) {
        throw error(errc::insufficient_order, "S-transform needs moments through order >= 1");
    }
    if (m[1] == 0) {
        throw error(errc::zero_mean, "S-transform requires m_1 != 0");
    }
    const std::size_t n = m.order();
    const power_series inv = reversion(moments_to_phi(m));
    const power_series one_plus_z = power_series::constant(rational{1}, n - 1) + power_series::identity(n - 1);
    return inv.shift_down(1) * one_plus_z;
}

/// Moments m_0..m_order from S through z^(order-1): Phi = (z S / (1 + z))^<-1>.
inline moment_sequence s_to_moments(const power_series &s, std::size_t order)
{
    if (order < 1) {
        throw error(errc::insufficient_order, "order must be at least 1");
    }
    if (s.order() + 1 < order) {
        throw error(errc::insufficient_order, "S-transform is known only through z^" + std::to_string(s.order()));
    }
    if (s[0] == 0) {
        throw error(errc::zero_constant_s, "S(0) must be nonzero");
    }
    const power_series zs = s.truncate(order - 1).shift_up(1);
    const power_series one_plus_z = power_series::constant(rational{1}, order) + power_series::identity(order);
    const power_series phi = reversion(zs / one_plus_z);
    return moment_sequence::from_series(phi + rational{1});
}

/// T(z) = 1 / S(z).
inline t_coefficients s_to_t(const power_series &s)
{
    if (s[0] == 0) {
        throw error(errc::zero_constant_s, "S(0) must be nonzero");
    }
    const power_series t = reciprocal(s);
    return t_coefficients(std::vector<rational>(t.coefficients().begin(), t.coefficients().end()));
}

/// Moments of mu_a boxplus mu_b: cumulants add.
inline moment_sequence free_add_convolve(const moment_sequence &ma, const moment_sequence &mb)
{
    if (ma.order() != mb.order()) {
        throw error(errc::order_mismatch, "moment sequences have different orders");
    }
    const auto ra = moments_to_r(ma).values();
    const auto rb = moments_to_r(mb).values();
    std::vector<rational> sum(ra.size());
    for (std::size_t k = 0; k < ra.size(); ++k) {
        sum[k] = ra[k] + rb[k];
    }
    return r_to_moments(free_cumulants(std::move(sum)));
}

/// Moments of mu_a boxtimes mu_b: S-transforms multiply.
inline moment_sequence free_mult_convolve(const moment_sequence &ma, const moment_sequence &mb)
{
    if (ma.order() != mb.order()) {
        throw error(errc::order_mismatch, "moment sequences have different orders");
    }
    return s_to_moments(moments_to_s(ma) * moments_to_s(mb), ma.order());
}

} // namespace freebeta
