#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <boost/multiprecision/cpp_int.hpp>

#include "error.hpp"

namespace freebeta {

using big_int = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>, boost::multiprecision::et_off>;

/// Exact rational, always kept in lowest terms with a positive denominator.
using rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend, boost::multiprecision::et_off>;

inline rational make_rational(std::int64_t num, std::int64_t den = 1)
{
    if (den == 0) {
        throw error(errc::invalid_parameters, "zero denominator");
    }
    return rational(big_int(num), big_int(den));
}

inline rational pow(const rational &base, unsigned exponent)
{
    rational result{1};
    rational factor = base;
    while (exponent != 0) {
        if ((exponent & 1u) != 0) {
            result *= factor;
        }
        exponent >>= 1u;
        if (exponent != 0) {
            factor *= factor;
        }
    }
    return result;
}

inline double to_double(const rational &q) { return q.convert_to<double>(); }

/// Square root when q is the square of a rational, nothing otherwise.
inline std::optional<rational> exact_sqrt(const rational &q)
{
    if (q < 0) {
        return std::nullopt;
    }
    big_int num = numerator(q);
    big_int den = denominator(q);
    big_int rn = boost::multiprecision::sqrt(num);
    big_int rd = boost::multiprecision::sqrt(den);
    if (rn * rn != num || rd * rd != den) {
        return std::nullopt;
    }
    return rational(rn, rd);
}

/// "num/den" form; integers are written with an explicit "/1".
inline std::string to_fraction_string(const rational &q)
{
    return numerator(q).str() + "/" + denominator(q).str();
}

/// Accepts "7", "-3/4" and finite decimals such as "1.25" (converted exactly).
inline rational parse_rational(std::string_view text)
{
    auto fail = [&]() -> rational {
        throw error(errc::malformed_input, "cannot parse rational '" + std::string(text) + "'");
    };
    auto parse_int = [&](std::string_view s) -> big_int {
        if (s.empty()) {
            fail();
        }
        std::size_t start = (s.front() == '-' || s.front() == '+') ? 1 : 0;
        if (start == s.size()) {
            fail();
        }
        for (std::size_t i = start; i < s.size(); ++i) {
            if (s[i] < '0' || s[i] > '9') {
                fail();
            }
        }
        big_int v(std::string(s.substr(s.front() == '+' ? 1 : 0)));
        return v;
    };

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        big_int num = parse_int(text.substr(0, slash));
        big_int den = parse_int(text.substr(slash + 1));
        if (den == 0) {
            throw error(errc::malformed_input, "zero denominator in '" + std::string(text) + "'");
        }
        return rational(num, den);
    }
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        bool negative = !int_part.empty() && int_part.front() == '-';
        std::string digits(int_part);
        if (digits.empty() || digits == "-" || digits == "+") {
            digits += "0";
        }
        if (frac_part.empty()) {
            fail();
        }
        big_int whole = parse_int(digits);
        big_int frac = parse_int(frac_part);
        if (frac_part.front() == '-' || frac_part.front() == '+') {
            fail();
        }
        big_int scale = boost::multiprecision::pow(big_int(10), static_cast<unsigned>(frac_part.size()));
        big_int magnitude = (whole < 0 ? big_int(-whole) : whole) * scale + frac;
        return rational(negative ? big_int(-magnitude) : magnitude, scale);
    }
    return rational(parse_int(text));
}

} // namespace freebeta
