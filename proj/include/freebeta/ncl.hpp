#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <mutex>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "motzkin.hpp"
#include "parallel.hpp"
#include "rational.hpp"
#include "sequences.hpp"
#include "series.hpp"

namespace freebeta {

/// Exhaustive enumeration is refused above this ground-set size.
inline constexpr std::size_t max_enumeration_size = 12;

/// A collection of blocks over {1, ..., n}. Blocks may share elements
/// (linked partitions); canonical form sorts elements within each block and
/// blocks by their minimum.
struct linked_partition {
    std::size_t n = 0;
    std::vector<std::vector<int>> blocks;

    [[nodiscard]] linked_partition canonical() const
    {
        linked_partition p = *this;
        for (auto &b : p.blocks) {
            std::sort(b.begin(), b.end());
        }
        std::sort(p.blocks.begin(), p.blocks.end());
        return p;
    }

    [[nodiscard]] std::string to_string() const
    {
        std::ostringstream os;
        os << '{';
        for (std::size_t i = 0; i < blocks.size(); ++i) {
            os << (i ? "," : "") << '{';
            for (std::size_t j = 0; j < blocks[i].size(); ++j) {
                os << (j ? "," : "") << blocks[i][j];
            }
            os << '}';
        }
        os << '}';
        return os.str();
    }

    friend bool operator==(const linked_partition &, const linked_partition &) = default;
    friend auto operator<=>(const linked_partition &, const linked_partition &) = default;
};

/// Parses the block notation produced by to_string, e.g. "{{1,2},{2,3}}".
inline linked_partition parse_partition(std::size_t n, const std::string &text)
{
    linked_partition p{n, {}};
    int depth = 0;
    std::string number;
    auto flush = [&] {
        if (!number.empty()) {
            p.blocks.back().push_back(std::stoi(number));
            number.clear();
        }
    };
    for (char c : text) {
        if (c == '{') {
            ++depth;
            if (depth == 2) {
                p.blocks.emplace_back();
            } else if (depth > 2) {
                throw error(errc::malformed_input, "nested braces in partition");
            }
        } else if (c == '}') {
            if (depth == 2) {
                flush();
            }
            --depth;
        } else if (c == ',') {
            if (depth == 2) {
                flush();
            }
        } else if (c >= '0' && c <= '9' && depth == 2) {
            number.push_back(c);
        } else if (c != ' ') {
            throw error(errc::malformed_input, std::string("unexpected character '") + c + "' in partition");
        }
    }
    if (depth != 0) {
        throw error(errc::malformed_input, "unbalanced braces in partition");
    }
    return p;
}

namespace detail {

// E and F cross iff some element of F lies strictly between two consecutive
// elements of E while another lies strictly outside that gap.
inline bool blocks_cross(const std::vector<int> &e, const std::vector<int> &f)
{
    for (std::size_t i = 0; i + 1 < e.size(); ++i) {
        const int lo = e[i];
        const int hi = e[i + 1];
        bool inside = false;
        bool outside = false;
        for (int x : f) {
            inside = inside || (lo < x && x < hi);
            outside = outside || x < lo || x > hi;
        }
        if (inside && outside) {
            return true;
        }
    }
    return false;
}

// Dykema's rule: every shared i satisfies (a) i = min E, |E| > 1, i != min F
// or (b) i != min E, i = min F, |F| > 1.
inline bool nearly_disjoint(const std::vector<int> &e, const std::vector<int> &f)
{
    for (int i : e) {
        if (!std::binary_search(f.begin(), f.end(), i)) {
            continue;
        }
        const bool a = i == e.front() && e.size() > 1 && i != f.front();
        const bool b = i != e.front() && i == f.front() && f.size() > 1;
        if (!a && !b) {
            return false;
        }
    }
    return true;
}

} // namespace detail

/// True iff p is a non-crossing linked partition of [n].
inline bool validate_ncl(const linked_partition &p)
{
    for (const auto &b : p.blocks) {
        if (b.empty()) {
            throw error(errc::malformed_input, "empty block");
        }
        for (int x : b) {
            if (x < 1 || static_cast<std::size_t>(x) > p.n) {
                throw error(errc::malformed_input, "element " + std::to_string(x) + " outside [1, n]");
            }
        }
    }
    for (const auto &b : p.blocks) {
        if (!std::is_sorted(b.begin(), b.end()) || std::adjacent_find(b.begin(), b.end()) != b.end()) {
            return false;
        }
    }
    std::vector<int> cover(p.n + 1, 0);
    for (const auto &b : p.blocks) {
        for (int x : b) {
            ++cover[static_cast<std::size_t>(x)];
        }
    }
    for (std::size_t x = 1; x <= p.n; ++x) {
        if (cover[x] < 1 || cover[x] > 2) {
            return false;
        }
    }
    if (p.n >= 1 && (cover[1] != 1 || cover[p.n] != 1)) {
        return false;
    }
    for (std::size_t i = 0; i < p.blocks.size(); ++i) {
        for (std::size_t j = i + 1; j < p.blocks.size(); ++j) {
            const auto &e = p.blocks[i];
            const auto &f = p.blocks[j];
            if (detail::blocks_cross(e, f) || detail::blocks_cross(f, e) || !detail::nearly_disjoint(e, f)) {
                return false;
            }
            std::size_t shared = 0;
            for (int x : e) {
                shared += std::binary_search(f.begin(), f.end(), x) ? 1 : 0;
            }
            if (shared > 1 || (shared == 1 && (e.size() < 2 || f.size() < 2))) {
                return false;
            }
        }
    }
    return true;
}

// ---------------------------------------------------------------------------
// Card arrangements over Motzkin paths
// ---------------------------------------------------------------------------

/// O opening, C closing, I intermediate, S singleton, T doubly covered of
/// type I (ends one block and starts the next), U doubly covered of type II
/// (intermediate in one block and starts the next).
enum class card_kind : char {
    opening = 'O',
    closing = 'C',
    intermediate = 'I',
    singleton = 'S',
    type_one = 'T',
    type_two = 'U',
};

struct card {
    card_kind kind;
    std::size_t level;

    friend bool operator==(const card &, const card &) = default;
};

using card_arrangement = std::vector<card>;

inline std::string to_string(const card_arrangement &cards)
{
    std::string s;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        s += (i ? "," : "");
        s += static_cast<char>(cards[i].kind);
        s += std::to_string(cards[i].level);
    }
    return s;
}

/// Cards admissible for a step starting at height h. With linked = false only
/// the non-crossing cards (O, C, I, S) are offered.
inline std::vector<card_kind> admissible_cards(step s, std::size_t height, bool linked = true)
{
    switch (s) {
        case step::up:
            if (height == 0 || !linked) {
                return {card_kind::opening};
            }
            return {card_kind::opening, card_kind::type_two};
        case step::transit:
            if (height == 0) {
                return {card_kind::singleton};
            }
            if (!linked) {
                return {card_kind::intermediate, card_kind::singleton};
            }
            return {card_kind::intermediate, card_kind::singleton, card_kind::type_one};
        case step::down:
            return {card_kind::closing};
    }
    return {};
}

/// Every admissible arrangement along the path.
inline std::vector<card_arrangement> expand_path(const motzkin_path &path, bool linked = true)
{
    const auto heights = path.heights();
    std::vector<card_arrangement> out{card_arrangement{}};
    for (std::size_t j = 0; j < path.length(); ++j) {
        const auto options = admissible_cards(path.steps()[j], heights[j], linked);
        std::vector<card_arrangement> next;
        next.reserve(out.size() * options.size());
        for (const auto &prefix : out) {
            for (card_kind k : options) {
                next.push_back(prefix);
                next.back().push_back(card{k, heights[j]});
            }
        }
        out = std::move(next);
    }
    return out;
}

/// Reads the blocks off an arrangement. Open blocks form a stack whose top is
/// the lowest line on the card.
inline linked_partition to_partition(const card_arrangement &cards)
{
    linked_partition p{cards.size(), {}};
    std::vector<std::size_t> open;
    auto top = [&]() -> std::vector<int> & {
        if (open.empty()) {
            throw error(errc::malformed_input, "card needs an open line but none is present");
        }
        return p.blocks[open.back()];
    };
    for (std::size_t j = 0; j < cards.size(); ++j) {
        const int element = static_cast<int>(j + 1);
        if (cards[j].level != open.size()) {
            throw error(errc::malformed_input, "card level disagrees with the number of open lines");
        }
        switch (cards[j].kind) {
            case card_kind::opening:
                p.blocks.push_back({element});
                open.push_back(p.blocks.size() - 1);
                break;
            case card_kind::closing:
                top().push_back(element);
                open.pop_back();
                break;
            case card_kind::intermediate:
                top().push_back(element);
                break;
            case card_kind::singleton:
                p.blocks.push_back({element});
                break;
            case card_kind::type_one:
                top().push_back(element);
                open.pop_back();
                p.blocks.push_back({element});
                open.push_back(p.blocks.size() - 1);
                break;
            case card_kind::type_two:
                top().push_back(element);
                p.blocks.push_back({element});
                open.push_back(p.blocks.size() - 1);
                break;
        }
    }
    if (!open.empty()) {
        throw error(errc::malformed_input, "arrangement leaves lines open");
    }
    return p.canonical();
}

/// Inverse of to_partition for a valid non-crossing linked partition.
inline card_arrangement arrangement_of(const linked_partition &p)
{
    if (!validate_ncl(p)) {
        throw error(errc::invalid_partition, p.to_string() + " is not a non-crossing linked partition");
    }
    card_arrangement cards;
    for (int j = 1; j <= static_cast<int>(p.n); ++j) {
        std::vector<const std::vector<int> *> owners;
        std::size_t height = 0;
        for (const auto &b : p.blocks) {
            if (std::binary_search(b.begin(), b.end(), j)) {
                owners.push_back(&b);
            }
            if (b.front() < j && j <= b.back()) {
                ++height;
            }
        }
        card_kind kind;
        if (owners.size() == 1) {
            const auto &b = *owners.front();
            if (b.size() == 1) {
                kind = card_kind::singleton;
            } else if (b.front() == j) {
                kind = card_kind::opening;
            } else if (b.back() == j) {
                kind = card_kind::closing;
            } else {
                kind = card_kind::intermediate;
            }
        } else {
            const auto &older = owners[0]->front() == j ? *owners[1] : *owners[0];
            kind = older.back() == j ? card_kind::type_one : card_kind::type_two;
        }
        cards.push_back(card{kind, height});
    }
    return cards;
}

// ---------------------------------------------------------------------------
// Enumeration
// ---------------------------------------------------------------------------

inline void check_enumeration_size(std::size_t n)
{
    if (n > max_enumeration_size) {
        throw error(errc::size_limit_exceeded,
                    "exhaustive enumeration is limited to n <= " + std::to_string(max_enumeration_size));
    }
}

/// Calls visit on every partition of NCL(n) (or NC(n) with linked = false),
/// path by path, without storing them.
inline void for_each_ncl(std::size_t n, const std::function<void(const linked_partition &)> &visit, bool linked = true)
{
    check_enumeration_size(n);
    for (const auto &path : motzkin_paths(n)) {
        for (const auto &cards : expand_path(path, linked)) {
            visit(to_partition(cards));
        }
    }
}

/// NCL(n) in canonical order. Path expansions run in parallel.
inline std::vector<linked_partition> enumerate_ncl(std::size_t n, bool linked = true)
{
    if (n < 1) {
        throw error(errc::invalid_parameters, "enumeration needs n >= 1");
    }
    check_enumeration_size(n);
    const auto paths = motzkin_paths(n);
    auto chunks = parallel_map(paths.size(), [&](std::size_t i) {
        std::vector<linked_partition> local;
        for (const auto &cards : expand_path(paths[i], linked)) {
            local.push_back(to_partition(cards));
        }
        return local;
    });
    std::vector<linked_partition> out;
    for (auto &c : chunks) {
        out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
    }
    std::sort(out.begin(), out.end());
    return out;
}

/// Non-crossing (unlinked) partitions of [n].
inline std::vector<linked_partition> enumerate_nc(std::size_t n) { return enumerate_ncl(n, false); }

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct ncl_statistics {
    std::size_t dc = 0; ///< doubly covered elements
    std::size_t sc = 0; ///< singly covered minima of non-singleton blocks
    std::size_t sg = 0; ///< singleton blocks

    friend bool operator==(const ncl_statistics &, const ncl_statistics &) = default;
    friend auto operator<=>(const ncl_statistics &, const ncl_statistics &) = default;
};

namespace detail {

inline std::vector<int> coverage(const linked_partition &p)
{
    std::vector<int> cover(p.n + 1, 0);
    for (const auto &b : p.blocks) {
        for (int x : b) {
            ++cover[static_cast<std::size_t>(x)];
        }
    }
    return cover;
}

inline ncl_statistics statistics_unchecked(const linked_partition &p)
{
    const auto cover = coverage(p);
    ncl_statistics s;
    for (std::size_t x = 1; x <= p.n; ++x) {
        s.dc += cover[x] == 2 ? 1 : 0;
    }
    for (const auto &b : p.blocks) {
        if (b.size() == 1) {
            ++s.sg;
        } else if (cover[static_cast<std::size_t>(b.front())] == 1) {
            ++s.sc;
        }
    }
    return s;
}

} // namespace detail

inline ncl_statistics statistics(const linked_partition &p)
{
    if (!validate_ncl(p)) {
        throw error(errc::invalid_partition, p.to_string() + " is not a non-crossing linked partition");
    }
    return detail::statistics_unchecked(p);
}

/// Doubly covered elements split by whether they close the older block.
struct doubly_covered_split {
    std::size_t type_one = 0;
    std::size_t type_two = 0;
};

inline doubly_covered_split classify_doubly_covered(const linked_partition &p)
{
    doubly_covered_split split;
    for (const card &c : arrangement_of(p)) {
        split.type_one += c.kind == card_kind::type_one ? 1 : 0;
        split.type_two += c.kind == card_kind::type_two ? 1 : 0;
    }
    return split;
}

/// Per-n tallies gathered in one pass over NCL(n).
struct ncl_census {
    std::uint64_t count = 0;
    std::map<ncl_statistics, std::uint64_t> by_statistics;
    /// Keyed by the sorted block sizes.
    std::map<std::vector<std::size_t>, std::uint64_t> by_block_sizes;
};

/// Memoized census of NCL(n); thread-safe.
inline const ncl_census &census(std::size_t n)
{
    check_enumeration_size(n);
    static std::mutex mutex;
    static std::map<std::size_t, ncl_census> cache;
    std::lock_guard lock(mutex);
    if (auto it = cache.find(n); it != cache.end()) {
        return it->second;
    }
    ncl_census c;
    if (n == 0) {
        c.count = 1;
        c.by_statistics[{}] = 1;
        c.by_block_sizes[{}] = 1;
    } else {
        for_each_ncl(n, [&](const linked_partition &p) {
            ++c.count;
            ++c.by_statistics[detail::statistics_unchecked(p)];
            std::vector<std::size_t> sizes;
            for (const auto &b : p.blocks) {
                sizes.push_back(b.size());
            }
            std::sort(sizes.begin(), sizes.end());
            ++c.by_block_sizes[sizes];
        });
    }
    return cache.emplace(n, std::move(c)).first->second;
}

// ---------------------------------------------------------------------------
// The (dc, sc, sg) generating function
// ---------------------------------------------------------------------------

enum class gamma_route { brute, cf, closed };

/// Closed form of Gamma(z; alpha, beta, gamma) expanded through z^order.
/// At alpha = beta = 0 the formula is 0/0; there only singletons survive and
/// Gamma = 1 / (1 - gamma z).
inline power_series gamma_closed_form_series(const rational &alpha, const rational &beta, const rational &gamma,
                                             std::size_t order)
{
    if (alpha == 0 && beta == 0) {
        return power_series::geometric(gamma, order);
    }
    const std::size_t work = order + 2;
    const power_series z = power_series::identity(work);
    const power_series one = power_series::constant(rational{1}, work);
    const rational kappa = 1 + alpha + gamma;
    const power_series inner = one - kappa * z;
    const power_series root = sqrt(inner * inner - (4 * (alpha + beta)) * (z * z));
    const power_series numerator =
        (one * (2 * alpha + beta)) + (kappa * beta - 2 * (alpha + beta) * gamma) * z - beta * root;
    const power_series denominator =
        rational{2} * ((one + (beta - gamma) * z) * (one * alpha + (beta - alpha * gamma) * z));
    return divide_cancelling(numerator, denominator).truncate(order);
}

/// A G^2 - B G + C for the quadratic satisfied by the generating function.
inline power_series gamma_quadratic_residual(const power_series &g, const rational &alpha, const rational &beta,
                                             const rational &gamma)
{
    const std::size_t n = g.order();
    const power_series z = power_series::identity(n);
    const power_series one = power_series::constant(rational{1}, n);
    const power_series a = (one + (beta - gamma) * z) * (one * alpha + (beta - alpha * gamma) * z);
    const power_series b = one * (2 * alpha + beta) + (beta * (1 + alpha + gamma) - 2 * (alpha + beta) * gamma) * z;
    return a * g * g - b * g + (alpha + beta);
}

/// Coefficient of z^n in Gamma(z; alpha, beta, gamma) by the chosen route.
inline rational gamma_poly(std::size_t n, const rational &alpha, const rational &beta, const rational &gamma,
                           gamma_route route)
{
    switch (route) {
        case gamma_route::brute: {
            rational total{0};
            for (const auto &[s, count] : census(n).by_statistics) {
                total += rational(count) * pow(alpha, static_cast<unsigned>(s.dc)) *
                         pow(beta, static_cast<unsigned>(s.sc)) * pow(gamma, static_cast<unsigned>(s.sg));
            }
            return total;
        }
        case gamma_route::cf:
            return weighted_motzkin_scheme::ncl_statistics(alpha, beta, gamma).generating_function(n)[n];
        case gamma_route::closed:
            return gamma_closed_form_series(alpha, beta, gamma, n)[n];
    }
    return rational{0};
}

// ---------------------------------------------------------------------------
// Moments from T-transform coefficients
// ---------------------------------------------------------------------------

/// m_n = sum over NCL(n) of alpha_0^(n - |pi|) prod_B alpha_(|B| - 1).
inline rational moment_via_ncl(const t_coefficients &alphas, std::size_t n)
{
    check_enumeration_size(n);
    if (n > 0 && alphas.values().size() < n) {
        throw error(errc::insufficient_order, "need alpha_0 .. alpha_(n-1)");
    }
    rational total{0};
    for (const auto &[sizes, count] : census(n).by_block_sizes) {
        rational term = pow(alphas[0], static_cast<unsigned>(n - sizes.size()));
        for (std::size_t s : sizes) {
            term *= alphas[s - 1];
        }
        total += rational(count) * term;
    }
    return total;
}

/// Free beta prime moments from the (dc, sc, sg) statistics:
/// (su)^n sum (t/s)^dc (t/(su))^sc (1/u)^sg with s = a/(b-1), t = (a+b-1)/(b-1), u = 1/(b-1).
inline rational fbp_moment(const rational &a, const rational &b, std::size_t n)
{
    if (a <= 0 || b <= 1) {
        throw error(errc::invalid_parameters, "free beta prime needs a > 0 and b > 1");
    }
    check_enumeration_size(n);
    const rational s = a / (b - 1);
    const rational t = (a + b - 1) / (b - 1);
    const rational u = 1 / (b - 1);
    rational total{0};
    for (const auto &[st, count] : census(n).by_statistics) {
        total += rational(count) * pow(t / s, static_cast<unsigned>(st.dc)) *
                 pow(t / (s * u), static_cast<unsigned>(st.sc)) * pow(1 / u, static_cast<unsigned>(st.sg));
    }
    return pow(s * u, static_cast<unsigned>(n)) * total;
}

} // namespace freebeta
