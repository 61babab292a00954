#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "analysis.hpp"
#include "distributions.hpp"
#include "error.hpp"
#include "linalg.hpp"

namespace freebeta {

/// SplitMix64. Substream k of seed s starts from the state
/// splitmix_finalize(s) ^ splitmix_finalize(k + 0x9E3779B97F4A7C15), so every
/// (seed, stream) pair gives a reproducible, well-separated sequence.
class splitmix64
{
public:
    explicit splitmix64(std::uint64_t seed, std::uint64_t stream = 0)
        : state_(finalize(seed) ^ finalize(stream + 0x9E3779B97F4A7C15ULL))
    {
    }

    static constexpr std::uint64_t finalize(std::uint64_t z) noexcept
    {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t next() noexcept
    {
        state_ += 0x9E3779B97F4A7C15ULL;
        return finalize(state_);
    }

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Standard normal by Box-Muller; the second variate is cached.
    double normal() noexcept
    {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        const double r = std::sqrt(-2 * std::log(u1));
        const double angle = 2 * std::numbers::pi * u2;
        spare_ = r * std::sin(angle);
        has_spare_ = true;
        return r * std::cos(angle);
    }

private:
    std::uint64_t state_;
    double spare_ = 0;
    bool has_spare_ = false;
};

/// n1 = round(a p) and n2 = round(b p) samples of dimension p with standard Gaussian entries.
struct fisher_sample_config {
    std::size_t p = 0;
    double a = 0;
    double b = 0;
    std::uint64_t seed = 0;

    [[nodiscard]] std::size_t n1() const { return static_cast<std::size_t>(std::llround(a * static_cast<double>(p))); }
    [[nodiscard]] std::size_t n2() const { return static_cast<std::size_t>(std::llround(b * static_cast<double>(p))); }

    void validate() const
    {
        if (p < 1) {
            throw error(errc::invalid_parameters, "dimension p must be >= 1");
        }
        if (!(a > 0) || !(b > 1)) {
            throw error(errc::invalid_parameters, "Fisher sampling needs a > 0 and b > 1");
        }
        if (n1() < 1 || n2() <= p) {
            throw error(errc::invalid_parameters, "need n1 >= 1 and n2 > p");
        }
    }
};

/// (1/n) X X^T for a p x n matrix of fresh standard normals.
inline linalg::matrix sample_covariance(std::size_t p, std::size_t n, splitmix64 &rng)
{
    std::vector<double> x(p * n);
    for (double &v : x) {
        v = rng.normal();
    }
    linalg::matrix s(p);
    const double inv = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < p; ++i) {
        const double *ri = &x[i * n];
        for (std::size_t j = 0; j <= i; ++j) {
            const double *rj = &x[j * n];
            double acc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += ri[k] * rj[k];
            }
            s(i, j) = acc * inv;
            s(j, i) = acc * inv;
        }
    }
    return s;
}

/// Eigenvalues of S1 S2^{-1} via the congruent symmetric matrix L^{-1} S1 L^{-T}, S2 = L L^T.
inline std::vector<double> sample_fisher_spectrum(const fisher_sample_config &cfg)
{
    cfg.validate();
    constexpr int attempts = 3;
    for (int attempt = 0; attempt < attempts; ++attempt) {
        splitmix64 rng1(cfg.seed, 2 * static_cast<std::uint64_t>(attempt));
        splitmix64 rng2(cfg.seed, 2 * static_cast<std::uint64_t>(attempt) + 1);
        const linalg::matrix s1 = sample_covariance(cfg.p, cfg.n1(), rng1);
        const linalg::matrix s2 = sample_covariance(cfg.p, cfg.n2(), rng2);
        try {
            const linalg::matrix l = linalg::cholesky(s2);
            return linalg::symmetric_eigenvalues(linalg::congruence(l, s1));
        } catch (const error &e) {
            if (e.code() != errc::singular_covariance || attempt + 1 == attempts) {
                throw;
            }
        }
    }
    throw error(errc::singular_covariance, "covariance stayed singular");
}

/// sup |F_empirical - F| over the sample points.
inline double ks_distance(std::vector<double> eigs, const family &f)
{
    if (eigs.empty()) {
        throw error(errc::empty_input, "no sample points");
    }
    std::sort(eigs.begin(), eigs.end());
    const measure_spec spec = measure_of(f);
    const double n = static_cast<double>(eigs.size());
    double worst = 0;
    for (std::size_t i = 0; i < eigs.size(); ++i) {
        const double fx = cdf(spec, eigs[i]);
        worst = std::max({worst, std::abs(fx - static_cast<double>(i) / n), std::abs(static_cast<double>(i + 1) / n - fx)});
    }
    return worst;
}

struct histogram_bin {
    double left;
    double right;
    double empirical_density;
    double theoretical_density; ///< bin mass of the law divided by the width
};

inline std::vector<histogram_bin> spectrum_histogram(const std::vector<double> &eigs, const family &f,
                                                     std::size_t bins)
{
    if (eigs.empty()) {
        throw error(errc::empty_input, "no sample points");
    }
    if (bins == 0) {
        throw error(errc::invalid_parameters, "need at least one bin");
    }
    const measure_spec spec = measure_of(f);
    const auto [mn, mx] = std::minmax_element(eigs.begin(), eigs.end());
    const double lo = std::min(*mn, spec.support.lo);
    const double hi = std::max(*mx, spec.support.hi);
    const double width = (hi - lo) / static_cast<double>(bins);
    std::vector<std::size_t> counts(bins, 0);
    for (double x : eigs) {
        const auto k = std::min(bins - 1, static_cast<std::size_t>((x - lo) / width));
        ++counts[k];
    }
    std::vector<histogram_bin> out;
    double prev = cdf(spec, lo);
    for (std::size_t k = 0; k < bins; ++k) {
        const double left = lo + width * static_cast<double>(k);
        const double right = k + 1 == bins ? hi : left + width;
        const double next = cdf(spec, right);
        out.push_back({left, right, static_cast<double>(counts[k]) / (static_cast<double>(eigs.size()) * width),
                       (next - prev) / width});
        prev = next;
    }
    return out;
}

inline std::string histogram_csv(const std::vector<histogram_bin> &bins)
{
    std::ostringstream os;
    os << std::setprecision(17) << "bin_left,bin_right,empirical_density,theoretical_density\n";
    for (const auto &b : bins) {
        os << b.left << ',' << b.right << ',' << b.empirical_density << ',' << b.theoretical_density << '\n';
    }
    return os.str();
}

} // namespace freebeta
