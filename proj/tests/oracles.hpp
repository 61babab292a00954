#pragma once

// Independent reference computations used only by the tests. None of these
// call into the card model, the continued fraction or the transform code.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <vector>

#include "freebeta/ncl.hpp"
#include "freebeta/rational.hpp"

namespace oracle {

using freebeta::linked_partition;
using freebeta::rational;

using block = std::vector<int>;

inline bool contains(const block &b, int x) { return std::binary_search(b.begin(), b.end(), x); }

/// Textbook crossing: a < b < c < d with a, c in E and b, d in F (or the reverse).
inline bool crosses(const block &e, const block &f)
{
    auto one_way = [](const block &p, const block &q) {
        for (int a : p) {
            for (int c : p) {
                if (c <= a) continue;
                for (int b : q) {
                    if (!(a < b && b < c)) continue;
                    for (int d : q) {
                        if (d > c) return true;
                    }
                }
            }
        }
        return false;
    };
    return one_way(e, f) || one_way(f, e);
}

/// Two blocks may share at most one element x, both must have size >= 2,
/// and x must be the minimum of exactly one of them.
inline bool pair_compatible(const block &e, const block &f)
{
    if (crosses(e, f)) {
        return false;
    }
    std::vector<int> shared;
    for (int x : e) {
        if (contains(f, x)) shared.push_back(x);
    }
    if (shared.empty()) return true;
    if (shared.size() > 1 || e.size() < 2 || f.size() < 2) return false;
    const int x = shared.front();
    return (x == e.front()) != (x == f.front());
}

/// Membership test for sorted, nonempty blocks over [n].
inline bool is_ncl(const linked_partition &p)
{
    std::vector<int> cover(p.n + 1, 0);
    for (const auto &b : p.blocks) {
        for (std::size_t i = 0; i + 1 < b.size(); ++i) {
            if (b[i] >= b[i + 1]) return false;
        }
        for (int x : b) ++cover[static_cast<std::size_t>(x)];
    }
    for (std::size_t x = 1; x <= p.n; ++x) {
        if (cover[x] < 1 || cover[x] > 2) return false;
    }
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < p.blocks.size(); ++j) {
            if (!pair_compatible(p.blocks[i], p.blocks[j])) return false;
        }
    }
    return true;
}

/// NCL(n) built block by block with strictly increasing minima, pruned by
/// pairwise compatibility and coverage; each candidate is finally filtered
/// through `accept`.
inline std::vector<linked_partition> filter_ncl(int n, const std::function<bool(const linked_partition &)> &accept)
{
    std::vector<linked_partition> out;
    std::vector<block> chosen;
    std::vector<int> cover(static_cast<std::size_t>(n) + 1, 0);

    std::function<void(int)> extend = [&](int last_min) {
        // Elements below the next minimum can no longer be covered later.
        bool complete = true;
        for (int x = 1; x <= n; ++x) complete = complete && cover[static_cast<std::size_t>(x)] > 0;
        if (complete) {
            linked_partition p{static_cast<std::size_t>(n), chosen};
            if (accept(p)) out.push_back(p.canonical());
        }
        for (int m = last_min + 1; m <= n; ++m) {
            bool gap = false;
            for (int x = 1; x < m; ++x) gap = gap || cover[static_cast<std::size_t>(x)] == 0;
            if (gap) break;
            const int rest = n - m; // elements m+1..n available
            for (std::uint32_t mask = 0; mask < (1u << rest); ++mask) {
                block b{m};
                for (int i = 0; i < rest; ++i) {
                    if (mask & (1u << i)) b.push_back(m + 1 + i);
                }
                bool ok = true;
                for (int x : b) ok = ok && cover[static_cast<std::size_t>(x)] < 2;
                for (const auto &c : chosen) ok = ok && pair_compatible(c, b);
                if (!ok) continue;
                for (int x : b) ++cover[static_cast<std::size_t>(x)];
                chosen.push_back(b);
                extend(m);
                chosen.pop_back();
                for (int x : b) --cover[static_cast<std::size_t>(x)];
            }
        }
    };
    extend(0);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

/// Non-crossing set partitions of [n] from restricted growth strings.
inline std::vector<linked_partition> nc_partitions(int n)
{
    std::vector<linked_partition> out;
    std::vector<int> label(static_cast<std::size_t>(n), 0);
    std::function<void(int, int)> rec = [&](int i, int max_label) {
        if (i == n) {
            std::vector<block> blocks(static_cast<std::size_t>(max_label) + 1);
            for (int j = 0; j < n; ++j) blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(j)])].push_back(j + 1);
            for (std::size_t a = 0; a < blocks.size(); ++a)
                for (std::size_t b = a + 1; b < blocks.size(); ++b)
                    if (crosses(blocks[a], blocks[b])) return;
            out.push_back(linked_partition{static_cast<std::size_t>(n), blocks}.canonical());
            return;
        }
        for (int l = 0; l <= max_label + 1; ++l) {
            label[static_cast<std::size_t>(i)] = l;
            rec(i + 1, std::max(max_label, l));
        }
    };
    if (n == 0) return out;
    label[0] = 0;
    rec(1, 0);
    return out;
}

/// Weighted Motzkin path sum by dynamic programming over heights.
inline rational motzkin_dp(std::size_t n, const std::function<rational(std::size_t)> &up,
                           const std::function<rational(std::size_t)> &down,
                           const std::function<rational(std::size_t)> &level)
{
    std::vector<rational> w(n + 2, rational{0});
    w[0] = 1;
    for (std::size_t step = 0; step < n; ++step) {
        std::vector<rational> next(n + 2, rational{0});
        for (std::size_t h = 0; h <= n; ++h) {
            if (w[h] == 0) continue;
            next[h] += w[h] * level(h);
            next[h + 1] += w[h] * up(h);
            if (h > 0) next[h - 1] += w[h] * down(h);
        }
        w = std::move(next);
    }
    return w[0];
}

inline rational binomial(unsigned n, unsigned k)
{
    rational r{1};
    for (unsigned i = 1; i <= k; ++i) {
        r = r * rational(n - k + i) / rational(i);
    }
    return r;
}

/// Free Poisson moments through Narayana numbers.
inline rational narayana_moment(unsigned n, const rational &lambda)
{
    if (n == 0) return rational{1};
    rational total{0};
    for (unsigned k = 1; k <= n; ++k) {
        total += binomial(n, k) * binomial(n, k - 1) / rational(n) * freebeta::pow(lambda, k);
    }
    return total;
}

inline rational catalan(unsigned n) { return binomial(2 * n, n) / rational(n + 1); }

/// sum_{k} m_k / z^(k+1), the tail of the Cauchy transform at large |z|.
inline std::complex<double> cauchy_from_moments(const std::vector<double> &m, std::complex<double> z)
{
    std::complex<double> total = 0;
    std::complex<double> p = 1.0 / z;
    for (double mk : m) {
        total += mk * p;
        p /= z;
    }
    return total;
}

} // namespace oracle
