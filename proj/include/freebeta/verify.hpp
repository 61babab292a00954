#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "distributions.hpp"
#include "fock.hpp"
#include "ncl.hpp"
#include "randmat.hpp"
#include "transforms.hpp"

namespace freebeta::verify {

struct check_result {
    std::string id;
    std::string title;
    bool passed = true;
    std::string detail; ///< first offending quantity, or a summary when passed
    double seconds = 0;
};

namespace detail {

class recorder
{
public:
    recorder(std::string id, std::string title) : result_{std::move(id), std::move(title), true, {}, 0} {}

    /// Records the first failure only.
    void expect(bool ok, const std::string &what)
    {
        if (!ok && result_.passed) {
            result_.passed = false;
            result_.detail = what;
        }
    }

    void note(const std::string &summary)
    {
        if (result_.passed) {
            result_.detail = summary;
        }
    }

    check_result finish(std::chrono::steady_clock::time_point start)
    {
        result_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return result_;
    }

private:
    check_result result_;
};

inline std::string q(const rational &r) { return to_fraction_string(r); }

inline std::string num(double x)
{
    std::ostringstream os;
    os.precision(6);
    os << x;
    return os.str();
}

struct ab_pair {
    rational a;
    rational b;
};

inline std::vector<ab_pair> moment_parameters()
{
    return {{rational{2}, rational{3}}, {rational{1, 2}, rational{2}}, {rational{3}, rational{3, 2}}};
}

/// Rational p/q with |p| <= 20 and 1 <= q <= 4, drawn from the generator.
inline rational random_rational(splitmix64 &rng)
{
    const auto num_part = static_cast<std::int64_t>(rng.next() % 41) - 20;
    const auto den_part = static_cast<std::int64_t>(rng.next() % 4) + 1;
    return make_rational(num_part, den_part);
}

} // namespace detail

/// Free beta prime moments by the linked-partition sum, the closed-form series and the Fock operator.
inline check_result triple_route_moments(std::size_t n_max = 8)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC1", "triple-route exact moments");
    for (const auto &[a, b] : detail::moment_parameters()) {
        const power_series closed = moment_series(free_beta_prime(a, b), n_max);
        const auto fock = fbp_operator(a, b, n_max).vacuum_moments(n_max);
        for (std::size_t n = 1; n <= n_max; ++n) {
            const rational combinatorial = fbp_moment(a, b, n);
            rec.expect(combinatorial == closed[n] && combinatorial == fock[n],
                       "(a,b)=(" + detail::q(a) + "," + detail::q(b) + ") n=" + std::to_string(n) + ": ncl " +
                           detail::q(combinatorial) + ", series " + detail::q(closed[n]) + ", fock " +
                           detail::q(fock[n]));
        }
        const rational m1 = a / (b - 1);
        const rational m2 = m1 * m1 + a * (a + b - 1) / ((b - 1) * (b - 1) * (b - 1));
        rec.expect(fbp_moment(a, b, 1) == m1, "mean differs from a/(b-1)");
        rec.expect(fbp_moment(a, b, 2) == m2, "second moment differs from mean^2 + variance");
    }
    auto r = rec.finish(start);
    if (r.passed && r.seconds >= 30) {
        r.passed = false;
        r.detail = "runtime " + detail::num(r.seconds) + " s exceeds 30 s";
    } else if (r.passed) {
        r.detail = "3 parameter pairs, n <= " + std::to_string(n_max) + ", three routes identical";
    }
    return r;
}

/// mu_{P_a} boxtimes mu_{P_b^{-1}} reproduces the free beta prime moments.
inline check_result boxtimes_reconstruction(std::size_t n_max = 8)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC2", "multiplicative convolution reconstruction");
    for (const auto &[a, b] : detail::moment_parameters()) {
        // Free Poisson from constant cumulants; its inverse from S(z) = b - 1 - z.
        const moment_sequence poisson =
            r_to_moments(free_cumulants(std::vector<rational>(n_max, a)), cumulant_route::nc_sum);
        const power_series s_inverse = power_series::constant(b - 1, n_max) - power_series::identity(n_max);
        const moment_sequence inverse = s_to_moments(s_inverse, n_max);
        const moment_sequence product = free_mult_convolve(poisson, inverse);
        for (std::size_t n = 1; n <= n_max; ++n) {
            rec.expect(product[n] == fbp_moment(a, b, n), "(a,b)=(" + detail::q(a) + "," + detail::q(b) +
                                                              ") n=" + std::to_string(n) + ": product " +
                                                              detail::q(product[n]) + " vs " +
                                                              detail::q(fbp_moment(a, b, n)));
        }
    }
    rec.note("3 parameter pairs, n <= " + std::to_string(n_max));
    return rec.finish(start);
}

/// Gamma(z; alpha, beta, gamma) by enumeration, continued fraction and closed form.
inline check_result gamma_routes(std::uint64_t seed = 2024, std::size_t triples = 10, std::size_t n_max = 8)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC3", "generating function routes");
    splitmix64 rng(seed, 7);
    for (std::size_t t = 0; t < triples; ++t) {
        const rational alpha = detail::random_rational(rng);
        const rational beta = detail::random_rational(rng);
        const rational gamma = detail::random_rational(rng);
        const std::string where = "(" + detail::q(alpha) + "," + detail::q(beta) + "," + detail::q(gamma) + ")";
        const power_series closed = gamma_closed_form_series(alpha, beta, gamma, n_max);
        rec.expect(gamma_quadratic_residual(closed, alpha, beta, gamma).is_zero(),
                   "quadratic residual nonzero at " + where);
        const power_series cf = weighted_motzkin_scheme::ncl_statistics(alpha, beta, gamma).generating_function(n_max);
        for (std::size_t n = 1; n <= n_max; ++n) {
            const rational brute = gamma_poly(n, alpha, beta, gamma, gamma_route::brute);
            rec.expect(brute == cf[n] && brute == closed[n], where + " n=" + std::to_string(n) + ": brute " +
                                                                 detail::q(brute) + ", cf " + detail::q(cf[n]) +
                                                                 ", closed " + detail::q(closed[n]));
        }
    }
    rec.note(std::to_string(triples) + " random triples, n <= " + std::to_string(n_max) + ", residual 0");
    return rec.finish(start);
}

/// |NCL(n)| against the large Schroeder recurrence, and the six arrangements of u u t d d.
inline check_result ncl_counts(std::size_t n_max = 8)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC4", "linked partition counts");
    // (k+1) S_k = 3 (2k-1) S_(k-1) - (k-2) S_(k-2), S_0 = 1, S_1 = 2; |NCL(n)| = S_(n-1).
    std::vector<std::uint64_t> schroeder{1, 2};
    while (schroeder.size() < n_max) {
        const std::uint64_t k = schroeder.size();
        schroeder.push_back((3 * (2 * k - 1) * schroeder[k - 1] - (k - 2) * schroeder[k - 2]) / (k + 1));
    }
    for (std::size_t n = 1; n <= n_max; ++n) {
        const auto parts = enumerate_ncl(n);
        rec.expect(parts.size() == schroeder[n - 1],
                   "n=" + std::to_string(n) + ": " + std::to_string(parts.size()) + " partitions, expected " +
                       std::to_string(schroeder[n - 1]));
        rec.expect(std::adjacent_find(parts.begin(), parts.end()) == parts.end(),
                   "duplicate partitions at n=" + std::to_string(n));
    }
    const auto arrangements = expand_path(motzkin_path::parse("uutdd"));
    std::vector<linked_partition> from_path;
    for (const auto &cards : arrangements) {
        from_path.push_back(to_partition(cards));
        rec.expect(validate_ncl(from_path.back()), "invalid partition " + from_path.back().to_string());
    }
    std::sort(from_path.begin(), from_path.end());
    rec.expect(arrangements.size() == 6, "path uutdd gives " + std::to_string(arrangements.size()) + " arrangements");
    rec.expect(std::adjacent_find(from_path.begin(), from_path.end()) == from_path.end(),
               "path uutdd gives repeated partitions");
    rec.note("counts match for n <= " + std::to_string(n_max) + "; uutdd has 6 arrangements");
    return rec.finish(start);
}

/// dc + sc + sg = #blocks and sum |B| = n + dc on every partition; the worked example has (3, 2, 1).
inline check_result statistics_invariants(std::size_t n_max = 8)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC5", "statistics invariants");
    for (std::size_t n = 1; n <= n_max; ++n) {
        for_each_ncl(n, [&](const linked_partition &p) {
            const auto s = statistics(p);
            std::size_t total = 0;
            for (const auto &b : p.blocks) {
                total += b.size();
            }
            rec.expect(s.dc + s.sc + s.sg == p.blocks.size(), "block count identity fails on " + p.to_string());
            rec.expect(total == n + s.dc, "size identity fails on " + p.to_string());
        });
    }
    const auto example = parse_partition(10, "{{1,2,7},{2,4},{3},{5,6},{7,8,9},{9,10}}");
    const auto s = statistics(example);
    rec.expect(s == ncl_statistics{3, 2, 1}, "example statistics (" + std::to_string(s.dc) + "," +
                                                 std::to_string(s.sc) + "," + std::to_string(s.sg) + ")");
    rec.note("all partitions with n <= " + std::to_string(n_max) + "; example gives (3,2,1)");
    return rec.finish(start);
}

/// Interior grid of `count` points spanning the middle 90% of the support.
inline std::vector<double> interior_grid(const family &f, std::size_t count, double margin = 0.05)
{
    const interval s = support_of(f);
    std::vector<double> xs;
    for (std::size_t i = 0; i < count; ++i) {
        const double t = margin + (1 - 2 * margin) * static_cast<double>(i) / static_cast<double>(count - 1);
        xs.push_back(s.lo + t * s.width());
    }
    return xs;
}

inline std::vector<family> score_families()
{
    return {free_beta_prime(2, 3),
            free_beta_prime(rational{1, 2}, 2),
            free_t(2),
            free_t(10),
            free_beta(2, 2),
            free_beta(rational{1, 2}, rational{3, 4})};
}

/// sup |2 Hf - V'| over 20 interior points per family.
inline check_result score_identities(double tolerance = 1e-6)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC6", "free score equals potential derivative");
    double worst = 0;
    for (const family &f : score_families()) {
        for (double x : interior_grid(f, 20)) {
            const double gap = std::abs(hilbert_score(f, x) - potential_derivative(f, x));
            worst = std::max(worst, gap);
            rec.expect(gap <= tolerance, family_name(f) + " at x=" + detail::num(x) + ": |2Hf - V'| = " +
                                             detail::num(gap));
        }
    }
    rec.note("6 families x 20 points, sup gap " + detail::num(worst));
    return rec.finish(start);
}

inline std::vector<family> sanity_families()
{
    return {free_beta_prime(2, 3),
            free_beta_prime(rational{1, 2}, 2),
            free_beta_prime(3, rational{3, 2}),
            free_beta_prime(1, 2),
            free_f(2, 3),
            free_t(2),
            free_t(10),
            free_beta(2, 2),
            free_beta(rational{1, 2}, rational{3, 4}),
            free_poisson(rational{1, 2}),
            free_poisson(2),
            inverse_free_poisson(3)};
}

/// Mass, moments and atoms of the closed-form measures.
inline check_result measure_sanity()
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC7", "measure normalization, moments and atoms");
    for (const family &f : sanity_families()) {
        const measure_spec spec = measure_of(f);
        const power_series exact = moment_series(f, 6);
        const double mass = quadrature_moment(spec, 0);
        rec.expect(std::abs(mass - 1) <= 1e-8, family_name(f) + ": total mass " + detail::num(mass));
        for (std::size_t n = 1; n <= 6; ++n) {
            const double want = to_double(exact[n]);
            const double got = quadrature_moment(spec, n);
            const double err = want == 0 ? std::abs(got) : std::abs(got - want) / std::abs(want);
            rec.expect(err <= 1e-6, family_name(f) + " moment " + std::to_string(n) + ": quadrature " +
                                        detail::num(got) + " vs exact " + detail::q(exact[n]));
        }
        const auto numeric = atom_masses(f);
        const auto closed = spec.atoms;
        rec.expect(numeric.size() == closed.size(), family_name(f) + ": found " + std::to_string(numeric.size()) +
                                                        " atoms, expected " + std::to_string(closed.size()));
        for (std::size_t i = 0; i < std::min(numeric.size(), closed.size()); ++i) {
            rec.expect(numeric[i].location == closed[i].location &&
                           std::abs(numeric[i].mass - closed[i].mass) <= 1e-6,
                       family_name(f) + ": atom at " + detail::num(numeric[i].location) + " has mass " +
                           detail::num(numeric[i].mass));
        }
    }
    rec.note(std::to_string(sanity_families().size()) + " laws: mass, moments n <= 6, atoms");
    return rec.finish(start);
}

/// Free T density near its semicircle and Cauchy limits on [-1.9, 1.9].
inline check_result t_limits()
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC8", "free T limits");
    std::vector<double> grid;
    for (int i = -190; i <= 190; ++i) {
        grid.push_back(i / 100.0);
    }
    const auto report = t_density_limits(grid);
    rec.expect(report.semicircle_distance <= 2e-4,
               "semicircle distance " + detail::num(report.semicircle_distance) + " at m = 1e4");
    rec.expect(report.cauchy_distance <= 1e-4,
               "Cauchy distance " + detail::num(report.cauchy_distance) + " at m = 1 + 1e-6");
    rec.note("semicircle " + detail::num(report.semicircle_distance) + ", Cauchy " +
             detail::num(report.cauchy_distance));
    return rec.finish(start);
}

/// G_T(z) = z G_F(z^2) for the free F law with a = 1, b = m.
inline check_result symmetric_square(std::uint64_t seed = 99)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC9", "symmetric-square identity");
    splitmix64 rng(seed, 3);
    double worst = 0;
    for (int m : {2, 10}) {
        const family t = free_t(m);
        const family f = free_f(1, m);
        for (int i = 0; i < 20; ++i) {
            const complex z(-3 + 6 * rng.uniform(), 0.05 + 3 * rng.uniform());
            const double gap = std::abs(cauchy_eval(t, z) - z * cauchy_eval(f, z * z));
            worst = std::max(worst, gap);
            rec.expect(gap <= 1e-12, "m=" + std::to_string(m) + " gap " + detail::num(gap));
        }
    }
    rec.note("40 points, sup gap " + detail::num(worst));
    return rec.finish(start);
}

/// theta^2 - 4 tau = (b-1)/(a(a+b-1)) and the free negative binomial label on a 5x5 grid.
inline check_result meixner_grid()
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC10", "free Meixner classification");
    const std::vector<rational> as{rational{1, 3}, rational{1, 2}, rational{1}, rational{2}, rational{7, 2}};
    const std::vector<rational> bs{rational{5, 4}, rational{3, 2}, rational{2}, rational{3}, rational{11, 2}};
    for (const auto &a : as) {
        for (const auto &b : bs) {
            const auto p = standardize_to_meixner(a, b);
            const rational expected = (b - 1) / (a * (a + b - 1));
            const std::string where = "(" + detail::q(a) + "," + detail::q(b) + ")";
            rec.expect(p.discriminant == expected, where + ": theta^2 - 4 tau = " + detail::q(p.discriminant));
            rec.expect(classify_meixner_exact(p.theta_squared, p.tau_exact) == meixner_class::free_negative_binomial &&
                           classify_meixner(p.theta, p.tau) == meixner_class::free_negative_binomial,
                       where + " is not classified as free negative binomial");
        }
    }
    rec.note("25 parameter pairs");
    return rec.finish(start);
}

/// KS distance between a Fisher spectrum and the free F law.
inline check_result fisher_ks(std::size_t p = 500, std::uint64_t seed = 42)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC11", "Fisher spectrum against free F");
    const auto eigs = sample_fisher_spectrum({p, 2, 3, seed});
    const double ks = ks_distance(eigs, free_f(2, 3));
    rec.expect(ks < 0.08, "KS distance " + detail::num(ks));
    auto r = rec.finish(start);
    if (r.passed && r.seconds >= 60) {
        r.passed = false;
        r.detail = "runtime " + detail::num(r.seconds) + " s exceeds 60 s";
    } else if (r.passed) {
        r.detail = "p=" + std::to_string(p) + " seed=" + std::to_string(seed) + " KS " + detail::num(ks);
    }
    return r;
}

/// Free Poisson semigroup under boxplus and the identity elements of both convolutions.
inline check_result free_poisson_semigroup(std::size_t order = 8)
{
    const auto start = std::chrono::steady_clock::now();
    detail::recorder rec("AC12", "semigroup and identities");
    const std::vector<std::pair<rational, rational>> pairs{
        {rational{1}, rational{1}}, {rational{1, 2}, rational{3}}, {rational{2, 3}, rational{5, 4}}};
    for (const auto &[a, b] : pairs) {
        const auto ma = moments_of(free_poisson(a), order);
        const auto mb = moments_of(free_poisson(b), order);
        rec.expect(free_add_convolve(ma, mb) == moments_of(free_poisson(a + b), order),
                   "mu_" + detail::q(a) + " boxplus mu_" + detail::q(b) + " differs from mu_" + detail::q(a + b));
        rec.expect(free_add_convolve(ma, moment_sequence::point_mass(0, order)) == ma, "delta_0 is not neutral");
        rec.expect(free_mult_convolve(ma, moment_sequence::point_mass(1, order)) == ma, "delta_1 is not neutral");
    }
    const auto fbp = moments_of(free_beta_prime(2, 3), order);
    rec.expect(free_mult_convolve(fbp, moment_sequence::point_mass(1, order)) == fbp,
               "delta_1 is not neutral for free beta prime");
    rec.expect(free_add_convolve(fbp, moment_sequence::point_mass(0, order)) == fbp,
               "delta_0 is not neutral for free beta prime");
    rec.note("3 pairs, order " + std::to_string(order));
    return rec.finish(start);
}

using check = std::function<check_result()>;

inline std::vector<check> all_checks()
{
    return {[] { return triple_route_moments(); }, [] { return boxtimes_reconstruction(); },
            [] { return gamma_routes(); },         [] { return ncl_counts(); },
            [] { return statistics_invariants(); }, [] { return score_identities(); },
            [] { return measure_sanity(); },       [] { return t_limits(); },
            [] { return symmetric_square(); },     [] { return meixner_grid(); },
            [] { return fisher_ks(); },            [] { return free_poisson_semigroup(); }};
}

/// Runs the checks in order; with fail_fast the first failure ends the run.
inline std::vector<check_result> run_all(bool fail_fast, const std::function<void(const check_result &)> &on_result = {})
{
    std::vector<check_result> out;
    const auto checks = all_checks();
    for (std::size_t i = 0; i < checks.size(); ++i) {
        check_result r;
        try {
            r = checks[i]();
        } catch (const std::exception &e) {
            r.id = "AC" + std::to_string(i + 1);
            r.title = "check aborted";
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        if (on_result) {
            on_result(r);
        }
        out.push_back(r);
        if (fail_fast && !r.passed) {
            break;
        }
    }
    return out;
}

inline std::string format_line(const check_result &r)
{
    std::ostringstream os;
    os << r.id << ' ' << (r.passed ? "PASS" : "FAIL") << "  " << r.title << ": " << r.detail << " ("
       << detail::num(r.seconds) << " s)";
    return os.str();
}

} // namespace freebeta::verify
