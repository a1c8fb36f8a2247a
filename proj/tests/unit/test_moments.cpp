#include "pwgauss/error.hpp"
#include "pwgauss/moments.hpp"
#include "pwgauss/sampling.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

using namespace pwgauss;
namespace oracle = pwgauss::testing;

namespace {

// g(x) f(x) with the convention 0 * inf = 0 far in the tail.
double weighted(double g, double f) { return f == 0.0 ? 0.0 : g * f; }

double quad_moment(unsigned n, const PowerParams& p) {
    return oracle::integrate_half_line(
        [&](double x) { return x > 0.0 ? weighted(std::pow(x, n), oracle::power_pdf_mixture(x, p.alpha, p.beta, p.lambda)) : 0.0; },
        1e-12);
}

double rel(double got, double want) { return std::fabs(got - want) / std::fabs(want); }

}  // namespace

TEST(RawMoment, Examples) {
    EXPECT_NEAR(raw_moment(1, {2.5, 4.0, 0.0}), 2.5 / 4.0, 1e-15);
    const double ratio_oracle =
        std::exp(oracle::log_hyp1f1_b1_series(2.0, 2.0) - oracle::log_hyp1f1_b1_series(1.0, 2.0));
    EXPECT_NEAR(ratio_oracle, 3.0, 1e-14);
    EXPECT_NEAR(raw_moment(1, {1.0, 1.0, 2.0}), 3.0, 1e-13);
    const PowerParams g{0.8, 1.7, 2.6};
    EXPECT_LE(rel(raw_moment(2, g), quad_moment(2, g)), 1e-7);
    EXPECT_THROW(raw_moment(0, g), DomainError);
}

TEST(RawMoment, MatchesQuadratureOnGrid) {
    for (double alpha : {0.4, 1.0, 3.0}) {
        for (double lambda : {0.0, 1.5, 8.0}) {
            const PowerParams p{alpha, 0.7, lambda};
            for (unsigned n = 1; n <= 4; ++n) {
                EXPECT_LE(rel(raw_moment(n, p), quad_moment(n, p)), 1e-6) << alpha << " " << lambda << " " << n;
            }
        }
    }
}

TEST(RawMoment, LogConvexInOrder) {
    for (double alpha : {0.3, 1.0, 5.0}) {
        for (double lambda : {0.0, 2.0, 20.0}) {
            const PowerParams p{alpha, 1.3, lambda};
            for (unsigned n = 2; n <= 6; ++n) {
                const double prev = raw_moment(n - 1, p), cur = raw_moment(n, p), next = raw_moment(n + 1, p);
                EXPECT_GT(cur, 0.0);
                EXPECT_LE(cur * cur, prev * next * (1.0 + 1e-12));
                EXPECT_NEAR(log_raw_moment(n, p), std::log(cur), 1e-12 * std::max(1.0, std::fabs(std::log(cur))));
            }
        }
    }
}

TEST(LaguerreRatio, Examples) {
    EXPECT_DOUBLE_EQ(laguerre_ratio(2.2, 0.0), 1.0);
    for (double l : {0.5, 3.0, 12.0}) EXPECT_NEAR(laguerre_ratio(1.0, l), 1.0 + l, 1e-12 * (1.0 + l));
    const double oracle_ratio =
        std::exp(oracle::log_hyp1f1_b1_series(1.5, 3.0, 200) - oracle::log_hyp1f1_b1_series(0.5, 3.0, 200));
    EXPECT_NEAR(oracle_ratio, 5.7883997164938721156, 1e-13);
    EXPECT_NEAR(laguerre_ratio(0.5, 3.0), oracle_ratio, 1e-12);
    for (double a : {0.1, 1.0, 7.0}) {
        for (double l : {0.2, 4.0, 40.0}) EXPECT_GE(laguerre_ratio(a, l), 1.0);
    }
}

TEST(MeanVariance, Examples) {
    const auto g = mean_variance({2.0, 4.0, 0.0});
    EXPECT_NEAR(g.mean, 0.5, 1e-15);
    EXPECT_NEAR(g.variance, 0.125, 1e-15);
    EXPECT_NEAR(mean_variance({1.0, 1.0, 2.0}).mean, 3.0, 1e-13);
}

TEST(MeanVariance, DerivativeFormConsistency) {
    for (double alpha : {0.3, 0.9, 2.0, 6.0}) {
        for (double lambda : {0.0, 0.7, 4.0, 25.0}) {
            const double beta = 1.9;
            const double h = 1e-5 * std::max(1.0, lambda);
            const double lo = std::max(0.0, lambda - h);
            const double dr = (laguerre_ratio(alpha, lambda + h) - laguerre_ratio(alpha, lo)) / (lambda + h - lo);
            const double via_derivative = alpha / (beta * beta) * (lambda * dr + laguerre_ratio(alpha, lambda));
            const double via_moments = mean_variance({alpha, beta, lambda}).variance;
            EXPECT_LE(rel(via_derivative, via_moments), 1e-6) << alpha << " " << lambda;
        }
    }
}

TEST(MeanVariance, MonteCarlo) {
    const PowerParams p{0.6, 2.0, 3.0};
    RngStream rng(11);
    PowerSampler draw(p);
    const std::size_t n = 1'000'000;
    double s = 0.0, s2 = 0.0;
    std::vector<double> xs(n);
    for (auto& x : xs) {
        x = draw(rng);
        s += x;
    }
    const double mean = s / n;
    for (double x : xs) s2 += (x - mean) * (x - mean);
    const double var = s2 / (n - 1);
    const auto mv = mean_variance(p);
    EXPECT_LE(std::fabs(mean - mv.mean), 4.0 * std::sqrt(mv.variance / n));
    double m4 = 0.0;
    for (double x : xs) m4 += std::pow(x - mean, 4);
    m4 /= n;
    const double se_var = std::sqrt((m4 - var * var) / n);
    EXPECT_LE(std::fabs(var - mv.variance), 4.0 * se_var);
}

TEST(Mgf, Examples) {
    const PowerParams p{0.7, 2.0, 1.5};
    EXPECT_NEAR(mgf(0.0, p), 1.0, 1e-15);
    for (double t : {-3.0, 0.5, 1.9}) EXPECT_NEAR(mgf(t, {2.5, 2.0, 0.0}), std::pow(2.0 / (2.0 - t), 2.5), 1e-12);
    EXPECT_THROW(mgf(2.0, p), DomainError);
    EXPECT_THROW(mgf(2.5, p), DomainError);
}

TEST(Mgf, DerivativesGiveMoments) {
    for (const PowerParams& p : {PowerParams{0.7, 2.0, 1.5}, PowerParams{3.0, 0.5, 6.0}, PowerParams{1.0, 1.0, 0.0}}) {
        const double h = 1e-4 * p.beta;
        const double d1 = (mgf(h, p) - mgf(-h, p)) / (2.0 * h);
        const double d2 = (mgf(h, p) - 2.0 * mgf(0.0, p) + mgf(-h, p)) / (h * h);
        EXPECT_LE(rel(d1, raw_moment(1, p)), 1e-6);
        EXPECT_LE(rel(d2, raw_moment(2, p)), 1e-5);
    }
}

TEST(Mgf, MatchesQuadrature) {
    const PowerParams p{0.9, 1.2, 2.0};
    for (double t : {-1.0, 0.3, 0.8}) {
        const double want = oracle::integrate_half_line(
            [&](double x) { return x > 0.0 ? weighted(std::exp(t * x), oracle::power_pdf_mixture(x, 0.9, 1.2, 2.0)) : 0.0; });
        EXPECT_LE(rel(mgf(t, p), want), 1e-8) << t;
    }
}

TEST(ExcessKurtosis, Examples) {
    EXPECT_NEAR(excess_kurtosis({1.0, 1.0, 0.0}), 6.0, 1e-9);
    for (double m : {0.5, 2.0, 7.0}) EXPECT_NEAR(excess_kurtosis({m, 3.0, 0.0}), 6.0 / m, 1e-8);
    EXPECT_NEAR(excess_kurtosis({1.0, 1.0, 2.0}), ncgamma_excess_kurtosis({1.0, 1.0, 2.0}), 1e-8);
    const MomentReport r = moment_report({0.8, 2.0, 1.0});
    EXPECT_GT(r.kappa2, 0.0);
    EXPECT_NEAR(r.excess_kurtosis, r.kappa4 / (r.kappa2 * r.kappa2), 1e-12);
}

TEST(ExcessKurtosis, ScaleFree) {
    EXPECT_NEAR(excess_kurtosis({0.7, 0.01, 3.0}), excess_kurtosis({0.7, 50.0, 3.0}), 1e-9);
}

TEST(ExcessKurtosis, OrderingAgainstNoncentralGamma) {
    for (double l : {0.0, 1.0, 2.0, 5.0}) {
        EXPECT_NEAR(excess_kurtosis({1.0, 1.0, l}), ncgamma_excess_kurtosis({1.0, 1.0, l}), 1e-8) << l;
        EXPECT_GE(excess_kurtosis({0.5, 1.0, l}), ncgamma_excess_kurtosis({0.5, 1.0, l}) - 1e-9) << l;
        EXPECT_LE(excess_kurtosis({2.0, 1.0, l}), ncgamma_excess_kurtosis({2.0, 1.0, l}) + 1e-9) << l;
    }
}

TEST(NcgammaCumulant, Examples) {
    EXPECT_DOUBLE_EQ(ncgamma_cumulant(1, {2.0, 1.0, 3.0}), 5.0);
    EXPECT_DOUBLE_EQ(ncgamma_cumulant(2, {1.0, 2.0, 0.0}), 0.25);
}

TEST(NcgammaCumulant, FourthMatchesQuadrature) {
    const double a = 1.6, b = 0.8, l = 2.5;
    double m[5] = {1.0, 0, 0, 0, 0};
    for (int n = 1; n <= 4; ++n) {
        m[n] = oracle::integrate_half_line(
            [&](double x) { return x > 0.0 ? weighted(std::pow(x, n), oracle::ncgamma_pdf_mixture(x, a, b, l)) : 0.0; }, 1e-13);
    }
    const double k4 = m[4] - 4 * m[1] * m[3] - 3 * m[2] * m[2] + 12 * m[1] * m[1] * m[2] - 6 * std::pow(m[1], 4);
    EXPECT_LE(rel(ncgamma_cumulant(4, {a, b, l}), k4), 1e-6);
}

TEST(KurtosisSweep, RowsAndCsv) {
    const double alphas[] = {0.5, 1.0, 2.0};
    const auto rows = kurtosis_sweep(alphas, 0.0, 10.0, 11);
    ASSERT_EQ(rows.size(), 33U);
    EXPECT_DOUBLE_EQ(rows[0].lambda, 0.0);
    EXPECT_DOUBLE_EQ(rows[10].lambda, 10.0);
    EXPECT_NEAR(rows[11].gamma2_proposed, 6.0, 1e-9);
    std::ostringstream os;
    write_csv(os, std::span<const KurtosisSweepRow>(rows));
    EXPECT_EQ(os.str().substr(0, 42), "lambda,alpha,gamma2_proposed,gamma2_ncgamm");
    EXPECT_THROW(kurtosis_sweep(alphas, 2.0, 1.0, 5), DomainError);
}
