#include <gtest/gtest.h>

#include <random>

#include "freebeta/motzkin.hpp"
#include "freebeta/series.hpp"
#include "oracles.hpp"

using namespace freebeta;

namespace {

power_series random_series(std::mt19937 &rng, std::size_t order, bool zero_constant)
{
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 5);
    std::vector<rational> c(order + 1);
    for (auto &x : c) {
        x = make_rational(num(rng), den(rng));
    }
    if (zero_constant) {
        c[0] = 0;
    }
    while (c[zero_constant ? 1 : 0] == 0) {
        c[zero_constant ? 1 : 0] = make_rational(num(rng), den(rng));
    }
    return power_series(std::move(c));
}

} // namespace

TEST(Rational, ParsesFractionsDecimalsAndIntegers)
{
    EXPECT_EQ(parse_rational("3/4"), make_rational(3, 4));
    EXPECT_EQ(parse_rational("-6/8"), make_rational(-3, 4));
    EXPECT_EQ(parse_rational("2.25"), make_rational(9, 4));
    EXPECT_EQ(parse_rational("-0.5"), make_rational(-1, 2));
    EXPECT_EQ(parse_rational("7"), rational{7});
    EXPECT_THROW(parse_rational("1/0"), error);
    EXPECT_THROW(parse_rational("abc"), error);
    EXPECT_THROW(parse_rational(""), error);
}

TEST(Rational, FormatsAsNumeratorOverDenominator)
{
    EXPECT_EQ(to_fraction_string(make_rational(71, 4)), "71/4");
    EXPECT_EQ(to_fraction_string(rational{3}), "3/1");
    EXPECT_EQ(to_fraction_string(make_rational(-1, 2)), "-1/2");
}

TEST(Rational, ExactSquareRootOnlyForPerfectSquares)
{
    EXPECT_EQ(exact_sqrt(make_rational(9, 16)), make_rational(3, 4));
    EXPECT_FALSE(exact_sqrt(rational{2}).has_value());
    EXPECT_FALSE(exact_sqrt(rational{-4}).has_value());
}

TEST(PowerSeries, BinaryOperationsTruncateToTheShorterOperand)
{
    const power_series a{1, 2, 3, 4};
    const power_series b{1, 1};
    EXPECT_EQ((a + b).order(), 1u);
    EXPECT_EQ((a * b).order(), 1u);
    EXPECT_EQ((a * b), (power_series{1, 3}));
}

TEST(PowerSeries, GeometricTimesOneMinusCzIsOne)
{
    const auto g = power_series::geometric(make_rational(2, 3), 6);
    const auto lin = power_series::constant(1, 6) - make_rational(2, 3) * power_series::identity(6);
    EXPECT_EQ(g * lin, power_series::constant(1, 6));
}

TEST(PowerSeries, ReciprocalIsMultiplicativeInverse)
{
    std::mt19937 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        const auto f = random_series(rng, 7, false);
        EXPECT_EQ(f * reciprocal(f), power_series::constant(1, 7));
    }
    EXPECT_THROW(reciprocal(power_series{0, 1}), error);
}

TEST(PowerSeries, DivisionCancelsCommonPowersOfZ)
{
    const power_series num{0, 0, 2, 4};
    const power_series den{0, 0, 1, 0};
    const auto q = divide_cancelling(num, den);
    EXPECT_EQ(q[0], 2);
    EXPECT_EQ(q[1], 4);
}

TEST(PowerSeries, CompositionRequiresZeroConstantInner)
{
    EXPECT_THROW(compose(power_series{1, 1, 1}, power_series{1, 1, 0}), error);
    // 1/(1-w) at w = z/(1+z) equals 1 + z.
    const auto inner = power_series::identity(5) / (power_series::constant(1, 5) + power_series::identity(5));
    const auto outer = power_series::geometric(1, 5);
    EXPECT_EQ(compose(outer, inner), power_series::constant(1, 5) + power_series::identity(5));
}

TEST(PowerSeries, SquareRootSquaresBack)
{
    std::mt19937 rng(3);
    for (int trial = 0; trial < 10; ++trial) {
        auto f = random_series(rng, 6, false);
        const auto sq = f * f;
        const auto root = sqrt(sq);
        EXPECT_EQ(root * root, sq);
    }
    EXPECT_THROW(sqrt(power_series{2, 1}), error);
}

TEST(PowerSeries, ReversionRoundTripsBothWays)
{
    std::mt19937 rng(11);
    for (int trial = 0; trial < 15; ++trial) {
        const auto f = random_series(rng, 8, true);
        const auto g = reversion(f);
        EXPECT_EQ(compose(f, g), power_series::identity(8));
        EXPECT_EQ(compose(g, f), power_series::identity(8));
    }
}

TEST(PowerSeries, LagrangeAndNewtonReversionAgree)
{
    std::mt19937 rng(12);
    for (int trial = 0; trial < 15; ++trial) {
        const auto f = random_series(rng, 9, true);
        EXPECT_EQ(reversion(f, reversion_method::lagrange), reversion(f, reversion_method::newton));
    }
}

TEST(PowerSeries, ReversionRejectsDegenerateSeries)
{
    EXPECT_THROW(reversion(power_series{1, 1, 0}), error);
    EXPECT_THROW(reversion(power_series{0, 0, 1}), error);
}

TEST(PowerSeries, DerivativeAndShifts)
{
    const power_series f{1, 2, 3, 4};
    EXPECT_EQ(f.derivative(), (power_series{2, 6, 12}));
    EXPECT_EQ(f.shift_up(1), (power_series{0, 1, 2, 3, 4}));
    EXPECT_EQ(power_series({0, 5, 6}).shift_down(1), (power_series{5, 6}));
    EXPECT_EQ(f.dilate(2), (power_series{1, 4, 12, 32}));
}

TEST(MotzkinPaths, CountsAreMotzkinNumbers)
{
    const std::vector<std::size_t> expected{1, 1, 2, 4, 9, 21, 51, 127, 323};
    for (std::size_t n = 0; n < expected.size(); ++n) {
        EXPECT_EQ(motzkin_paths(n).size(), expected[n]) << "n = " << n;
    }
}

TEST(MotzkinPaths, RejectsWordsThatDipOrDoNotReturn)
{
    EXPECT_THROW(motzkin_path::parse("du"), error);
    EXPECT_THROW(motzkin_path::parse("uu"), error);
    EXPECT_THROW(motzkin_path::parse("uxd"), error);
    EXPECT_EQ(motzkin_path::parse("utd").word(), "utd");
}

TEST(ContinuedFraction, MatchesHeightDynamicProgramming)
{
    std::mt19937 rng(5);
    std::uniform_int_distribution<int> num(-4, 4);
    for (int trial = 0; trial < 10; ++trial) {
        const rational a = make_rational(num(rng), 2);
        const rational b = make_rational(num(rng), 3);
        const rational c = make_rational(num(rng), 1);
        const auto scheme = weighted_motzkin_scheme::ncl_statistics(a, b, c);
        const auto gf = scheme.generating_function(8);
        for (std::size_t n = 0; n <= 8; ++n) {
            const auto dp = oracle::motzkin_dp(n, scheme.up, scheme.down, scheme.transit);
            EXPECT_EQ(gf[n], dp) << "n = " << n;
            EXPECT_EQ(scheme.path_sum(n), dp) << "n = " << n;
        }
    }
}

TEST(ContinuedFraction, UnitDyckWeightsGiveCatalanNumbers)
{
    continued_fraction_spec spec;
    spec.depth = continued_fraction_spec::minimum_depth(12);
    spec.diagonal.assign(spec.depth, rational{0});
    spec.subdiagonal_products.assign(spec.depth - 1, rational{1});
    const auto gf = cf_expand(spec, 12);
    for (unsigned k = 0; k <= 6; ++k) {
        EXPECT_EQ(gf[2 * k], oracle::catalan(k));
    }
    for (unsigned k = 0; k < 6; ++k) {
        EXPECT_EQ(gf[2 * k + 1], 0);
    }
}

TEST(ContinuedFraction, RejectsTooShallowDepth)
{
    continued_fraction_spec spec;
    spec.depth = 2;
    spec.diagonal.assign(2, rational{1});
    spec.subdiagonal_products.assign(1, rational{1});
    EXPECT_THROW(cf_expand(spec, 8), error);
}
