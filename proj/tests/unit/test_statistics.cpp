#include "pwgauss/error.hpp"
#include "pwgauss/statistics.hpp"

#include <gtest/gtest.h>

#include <boost/math/distributions/students_t.hpp>
#include <boost/math/special_functions/beta.hpp>

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

using namespace pwgauss;

TEST(IncompleteBeta, MatchesBoost) {
    for (double a : {0.3, 1.0, 2.5, 40.0}) {
        for (double b : {0.5, 1.0, 7.0}) {
            for (double x : {0.0, 1e-4, 0.2, 0.5, 0.93, 1.0}) {
                EXPECT_NEAR(regularized_incomplete_beta(a, b, x), boost::math::ibeta(a, b, x), 1e-12)
                    << a << " " << b << " " << x;
            }
        }
    }
    EXPECT_THROW(regularized_incomplete_beta(0.0, 1.0, 0.5), DomainError);
    EXPECT_THROW(regularized_incomplete_beta(1.0, 1.0, 1.5), DomainError);
}

TEST(StudentT, UpperTailMatchesBoost) {
    for (double dof : {1.0, 4.0, 29.0, 500.0}) {
        const boost::math::students_t dist(dof);
        for (double t : {-3.0, -0.4, 0.0, 1.2, 6.0}) {
            const double want = boost::math::cdf(boost::math::complement(dist, t));
            EXPECT_LE(std::fabs(student_t_upper_tail(t, dof) - want), 1e-12 * std::max(1.0, 1.0 / want) * want + 1e-15)
                << dof << " " << t;
        }
    }
    EXPECT_EQ(student_t_upper_tail(0.0, 3.0), 0.5);
}

TEST(PairedTTest, IdenticalSamplesGiveHalf) {
    const std::vector<double> a{1.0, -2.0, 3.5, 0.25};
    EXPECT_EQ(paired_t_test_one_sided(a, a), 0.5);
}

TEST(PairedTTest, ConstantPositiveShiftGivesZero) {
    const std::vector<double> a{1.0, 2.0, 3.0}, b{0.5, 1.5, 2.5};
    EXPECT_EQ(paired_t_test_one_sided(a, b), 0.0);
    EXPECT_EQ(paired_t_test_one_sided(b, a), 1.0);
}

TEST(PairedTTest, KnownStatistic) {
    // Differences standardized to mean 0.5 and sd 1 with n = 100 give t = 5.
    std::vector<double> d(100);
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = std::sin(1.7 * i) + 0.01 * i;
    const double m = std::accumulate(d.begin(), d.end(), 0.0) / d.size();
    double ss = 0.0;
    for (double v : d) ss += (v - m) * (v - m);
    const double sd = std::sqrt(ss / (d.size() - 1));
    std::vector<double> a(d.size()), b(d.size(), 0.0);
    for (std::size_t i = 0; i < d.size(); ++i) a[i] = (d[i] - m) / sd + 0.5;
    const double p = paired_t_test_one_sided(a, b);
    EXPECT_LE(std::fabs(p - 1.2406980065204704848e-6) / 1.2406980065204704848e-6, 1e-4);
}

TEST(PairedTTest, RejectsBadInput) {
    const std::vector<double> a{1.0, 2.0}, b{1.0};
    EXPECT_THROW(paired_t_test_one_sided(a, b), std::invalid_argument);
    EXPECT_THROW(paired_t_test_one_sided(b, b), std::invalid_argument);
}
