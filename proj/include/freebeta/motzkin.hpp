#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rational.hpp"
#include "series.hpp"

namespace freebeta {

enum class step : char { up = 'u', down = 'd', transit = 't' };

/// A non-negative lattice path from (0,0) to (n,0) with steps u, d, t.
class motzkin_path
{
public:
    motzkin_path() = default;

    explicit motzkin_path(std::vector<step> steps) : steps_(std::move(steps))
    {
        long h = 0;
        for (step s : steps_) {
            h += (s == step::up) ? 1 : (s == step::down ? -1 : 0);
            if (h < 0) {
                throw error(errc::malformed_input, "Motzkin path dips below ground");
            }
        }
        if (h != 0) {
            throw error(errc::malformed_input, "Motzkin path does not return to ground");
        }
    }

    /// Parses a word such as "uutdd".
    static motzkin_path parse(const std::string &word)
    {
        std::vector<step> steps;
        for (char c : word) {
            if (c != 'u' && c != 'd' && c != 't') {
                throw error(errc::malformed_input, "Motzkin step must be one of u, d, t");
            }
            steps.push_back(static_cast<step>(c));
        }
        return motzkin_path(std::move(steps));
    }

    [[nodiscard]] std::size_t length() const noexcept { return steps_.size(); }
    [[nodiscard]] const std::vector<step> &steps() const noexcept { return steps_; }

    /// Height at the start of each step.
    [[nodiscard]] std::vector<std::size_t> heights() const
    {
        std::vector<std::size_t> y;
        y.reserve(steps_.size());
        std::size_t h = 0;
        for (step s : steps_) {
            y.push_back(h);
            if (s == step::up) {
                ++h;
            } else if (s == step::down) {
                --h;
            }
        }
        return y;
    }

    [[nodiscard]] std::string word() const
    {
        std::string w;
        for (step s : steps_) {
            w.push_back(static_cast<char>(s));
        }
        return w;
    }

    friend bool operator==(const motzkin_path &, const motzkin_path &) = default;

private:
    std::vector<step> steps_;
};

namespace detail {

inline void motzkin_recurse(std::size_t remaining, std::size_t height, std::vector<step> &prefix,
                            const std::function<void(const std::vector<step> &)> &visit)
{
    if (remaining == 0) {
        if (height == 0) {
            visit(prefix);
        }
        return;
    }
    if (height > remaining) {
        return;
    }
    prefix.push_back(step::up);
    motzkin_recurse(remaining - 1, height + 1, prefix, visit);
    prefix.back() = step::transit;
    motzkin_recurse(remaining - 1, height, prefix, visit);
    if (height > 0) {
        prefix.back() = step::down;
        motzkin_recurse(remaining - 1, height - 1, prefix, visit);
    }
    prefix.pop_back();
}

} // namespace detail

/// All Motzkin paths of length n, in lexicographic order u < t < d.
inline std::vector<motzkin_path> motzkin_paths(std::size_t n)
{
    std::vector<motzkin_path> out;
    std::vector<step> prefix;
    detail::motzkin_recurse(n, 0, prefix, [&](const std::vector<step> &s) { out.emplace_back(s); });
    return out;
}

/// Step weights depending on the starting height: up(i) = mu_i,
/// down(i) = lambda_i (i >= 1) and transit(i) = kappa_i.
struct weighted_motzkin_scheme {
    std::function<rational(std::size_t)> up;
    std::function<rational(std::size_t)> down;
    std::function<rational(std::size_t)> transit;

    /// Weights that count non-crossing linked partitions by (dc, sc, sg):
    /// mu_0 = beta, mu_i = alpha + beta; kappa_0 = gamma, kappa_i = 1 + alpha + gamma; lambda_i = 1.
    static weighted_motzkin_scheme ncl_statistics(const rational &alpha, const rational &beta, const rational &gamma)
    {
        return {
            [=](std::size_t i) { return i == 0 ? beta : alpha + beta; },
            [](std::size_t) { return rational{1}; },
            [=](std::size_t i) { return i == 0 ? gamma : 1 + alpha + gamma; },
        };
    }

    [[nodiscard]] rational weight(const motzkin_path &p) const
    {
        rational w{1};
        std::size_t h = 0;
        for (step s : p.steps()) {
            switch (s) {
                case step::up: w *= up(h); ++h; break;
                case step::down: w *= down(h); --h; break;
                case step::transit: w *= transit(h); break;
            }
            if (w == 0) {
                break;
            }
        }
        return w;
    }

    /// Brute-force sum of weights over all paths of length n.
    [[nodiscard]] rational path_sum(std::size_t n) const
    {
        rational total{0};
        for (const auto &p : motzkin_paths(n)) {
            total += weight(p);
        }
        return total;
    }

    [[nodiscard]] continued_fraction_spec to_cf_spec(std::size_t depth) const
    {
        continued_fraction_spec spec;
        spec.depth = depth;
        for (std::size_t i = 0; i < depth; ++i) {
            spec.diagonal.push_back(transit(i));
            if (i + 1 < depth) {
                spec.subdiagonal_products.push_back(up(i) * down(i + 1));
            }
        }
        return spec;
    }

    /// Generating function of path_sum through z^order via the continued fraction.
    [[nodiscard]] power_series generating_function(std::size_t order) const
    {
        return cf_expand(to_cf_spec(continued_fraction_spec::minimum_depth(order)), order);
    }
};

} // namespace freebeta
