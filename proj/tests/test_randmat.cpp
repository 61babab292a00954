#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <algorithm>
#include <random>
#include <sstream>

#include "freebeta/analysis.hpp"
#include "freebeta/randmat.hpp"

using namespace freebeta;

namespace {

Eigen::MatrixXd to_eigen(const linalg::matrix &m)
{
    Eigen::MatrixXd e(m.size(), m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = 0; j < m.size(); ++j) {
            e(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = m(i, j);
        }
    }
    return e;
}

linalg::matrix random_symmetric(std::size_t n, std::mt19937 &rng)
{
    std::normal_distribution<double> g;
    linalg::matrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            m(i, j) = m(j, i) = g(rng);
        }
    }
    return m;
}

double median(std::vector<double> v)
{
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

errc code_of(const std::function<void()> &f)
{
    try {
        f();
    } catch (const error &e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return errc::empty_input;
}

} // namespace

TEST(SplitMix, FinalizerMatchesReferenceOutput)
{
    // The first output of the reference generator seeded with 0.
    EXPECT_EQ(splitmix64::finalize(0x9E3779B97F4A7C15ULL), 0xE220A8397B1DCDAFULL);
}

TEST(SplitMix, StreamsAreReproducibleAndDistinct)
{
    splitmix64 a(42, 0);
    splitmix64 b(42, 0);
    splitmix64 c(42, 1);
    splitmix64 d(43, 0);
    int same_c = 0;
    int same_d = 0;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a.next();
        EXPECT_EQ(x, b.next());
        same_c += x == c.next() ? 1 : 0;
        same_d += x == d.next() ? 1 : 0;
    }
    EXPECT_EQ(same_c, 0);
    EXPECT_EQ(same_d, 0);
}

TEST(SplitMix, UniformAndNormalMoments)
{
    splitmix64 rng(7);
    double su = 0;
    double sn = 0;
    double sn2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double u = rng.uniform();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        su += u;
        const double z = rng.normal();
        sn += z;
        sn2 += z * z;
    }
    EXPECT_NEAR(su / n, 0.5, 0.005);
    EXPECT_NEAR(sn / n, 0.0, 0.01);
    EXPECT_NEAR(sn2 / n, 1.0, 0.01);
}

TEST(LinearAlgebra, CholeskyReconstructsMatrix)
{
    splitmix64 rng(3);
    const auto s = sample_covariance(12, 40, rng);
    const auto l = linalg::cholesky(s);
    const Eigen::MatrixXd le = to_eigen(l);
    EXPECT_LT((le * le.transpose() - to_eigen(s)).norm(), 1e-12);
    EXPECT_EQ(le.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().norm(), 0.0);
}

TEST(LinearAlgebra, CholeskyRejectsSingularMatrix)
{
    splitmix64 rng(3);
    // Rank at most 3 < 5.
    const auto s = sample_covariance(5, 3, rng);
    EXPECT_EQ(code_of([&] { linalg::cholesky(s); }), errc::singular_covariance);
}

TEST(LinearAlgebra, SymmetricEigenvaluesMatchEigen)
{
    std::mt19937 rng(9);
    for (std::size_t n : {1u, 2u, 3u, 7u, 25u, 80u}) {
        const auto m = random_symmetric(n, rng);
        const auto ours = linalg::symmetric_eigenvalues(m);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m), Eigen::EigenvaluesOnly);
        ASSERT_EQ(ours.size(), n);
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_NEAR(ours[i], solver.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-10) << "n = " << n;
        }
    }
}

TEST(LinearAlgebra, RepeatedAndZeroEigenvalues)
{
    linalg::matrix m(4);
    for (std::size_t i = 0; i < 4; ++i) {
        for (std::size_t j = 0; j < 4; ++j) {
            m(i, j) = 1.0;
        }
    }
    const auto e = linalg::symmetric_eigenvalues(m);
    EXPECT_NEAR(e[0], 0, 1e-12);
    EXPECT_NEAR(e[1], 0, 1e-12);
    EXPECT_NEAR(e[2], 0, 1e-12);
    EXPECT_NEAR(e[3], 4, 1e-12);
    EXPECT_TRUE(linalg::symmetric_eigenvalues(linalg::matrix(0)).empty());
}

TEST(FisherSpectrum, MatchesGeneralizedEigenproblem)
{
    const fisher_sample_config cfg{30, 2.0, 3.0, 11};
    const auto ours = sample_fisher_spectrum(cfg);
    splitmix64 rng1(cfg.seed, 0);
    splitmix64 rng2(cfg.seed, 1);
    const auto s1 = to_eigen(sample_covariance(cfg.p, cfg.n1(), rng1));
    const auto s2 = to_eigen(sample_covariance(cfg.p, cfg.n2(), rng2));
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(s1, s2, Eigen::EigenvaluesOnly);
    ASSERT_EQ(ours.size(), cfg.p);
    for (std::size_t i = 0; i < cfg.p; ++i) {
        EXPECT_NEAR(ours[i], solver.eigenvalues()(static_cast<Eigen::Index>(i)), 1e-9);
    }
}

TEST(FisherSpectrum, DeterministicForFixedSeed)
{
    const fisher_sample_config cfg{40, 1.5, 2.5, 99};
    EXPECT_EQ(sample_fisher_spectrum(cfg), sample_fisher_spectrum(cfg));
    fisher_sample_config other = cfg;
    other.seed = 100;
    EXPECT_NE(sample_fisher_spectrum(cfg), sample_fisher_spectrum(other));
}

TEST(FisherSpectrum, ScalarCaseIsRatioOfSampleVariances)
{
    const fisher_sample_config cfg{1, 10.0, 20.0, 5};
    const auto eig = sample_fisher_spectrum(cfg);
    ASSERT_EQ(eig.size(), 1u);
    splitmix64 rng1(5, 0);
    splitmix64 rng2(5, 1);
    const double v1 = sample_covariance(1, 10, rng1)(0, 0);
    const double v2 = sample_covariance(1, 20, rng2)(0, 0);
    EXPECT_NEAR(eig[0], v1 / v2, 1e-14);
}

TEST(FisherSpectrum, ManySamplesConcentrateAtOne)
{
    const fisher_sample_config cfg{2, 10000.0, 10000.0, 1};
    for (double e : sample_fisher_spectrum(cfg)) {
        EXPECT_NEAR(e, 1.0, 0.06);
    }
}

TEST(FisherSpectrum, ConfigurationValidation)
{
    EXPECT_EQ(code_of([] { sample_fisher_spectrum({0, 1, 2, 0}); }), errc::invalid_parameters);
    EXPECT_EQ(code_of([] { sample_fisher_spectrum({10, 1, 1, 0}); }), errc::invalid_parameters);
    EXPECT_EQ(code_of([] { sample_fisher_spectrum({10, 0, 2, 0}); }), errc::invalid_parameters);
    const fisher_sample_config cfg{10, 0.5, 1.5, 0};
    EXPECT_EQ(cfg.n1(), 5u);
    EXPECT_EQ(cfg.n2(), 15u);
}

TEST(FisherSpectrum, KolmogorovDistanceShrinksWithDimension)
{
    const family law = free_f(2, 3);
    std::vector<double> small;
    std::vector<double> large;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        small.push_back(ks_distance(sample_fisher_spectrum({25, 2, 3, seed}), law));
        large.push_back(ks_distance(sample_fisher_spectrum({200, 2, 3, seed}), law));
    }
    EXPECT_LT(median(large), median(small));
    EXPECT_LT(median(large), 0.03);
}

TEST(KolmogorovDistance, ExactQuantilesGiveHalfStep)
{
    const family law = free_beta_prime(2, 3);
    const auto spec = measure_of(law);
    const std::size_t n = 50;
    std::vector<double> pts;
    for (std::size_t i = 0; i < n; ++i) {
        pts.push_back(quantile(spec, (static_cast<double>(i) + 0.5) / static_cast<double>(n)));
    }
    EXPECT_NEAR(ks_distance(pts, law), 0.5 / static_cast<double>(n), 1e-7);
    EXPECT_EQ(code_of([&] { ks_distance({}, law); }), errc::empty_input);
}

TEST(Histogram, DensitiesIntegrateToOneAndCsvHasColumns)
{
    const family law = free_f(2, 3);
    const auto eig = sample_fisher_spectrum({100, 2, 3, 42});
    const auto bins = spectrum_histogram(eig, law, 20);
    ASSERT_EQ(bins.size(), 20u);
    double emp = 0;
    double theo = 0;
    for (const auto &b : bins) {
        EXPECT_LT(b.left, b.right);
        emp += b.empirical_density * (b.right - b.left);
        theo += b.theoretical_density * (b.right - b.left);
    }
    EXPECT_NEAR(emp, 1.0, 1e-12);
    EXPECT_NEAR(theo, 1.0, 1e-8);

    const std::string csv = histogram_csv(bins);
    std::istringstream in(csv);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header, "bin_left,bin_right,empirical_density,theoretical_density");
    std::size_t rows = 0;
    for (std::string line; std::getline(in, line);) {
        EXPECT_EQ(std::count(line.begin(), line.end(), ','), 3);
        ++rows;
    }
    EXPECT_EQ(rows, 20u);
    EXPECT_EQ(code_of([&] { spectrum_histogram(eig, law, 0); }), errc::invalid_parameters);
    EXPECT_EQ(code_of([&] { spectrum_histogram({}, law, 5); }), errc::empty_input);
}
