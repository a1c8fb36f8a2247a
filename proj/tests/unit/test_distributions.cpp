#include "pwgauss/distributions.hpp"
#include "pwgauss/error.hpp"
#include "pwgauss/special_functions.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <sstream>

using namespace pwgauss;
namespace oracle = pwgauss::testing;

namespace {

constexpr double kPi = std::numbers::pi;

double polar_total(const ComplexParams& p, double radius) {
    return oracle::integrate(
        [&](double r) {
            if (r == 0.0) return 0.0;
            return oracle::integrate(
                [&](double th) { return std::exp(log_pdf_joint_polar(r, th, p)); }, -kPi, kPi, 1e-12);
        },
        0.0, radius, 1e-11);
}

}  // namespace

TEST(ComplexPdf, Examples) {
    EXPECT_NEAR(log_pdf_complex({0.0, 0.0}, {{0.0, 0.0}, 1.0, 1.0}), -std::log(kPi), 1e-15);
    EXPECT_NEAR(log_pdf_complex({1.0, 0.0}, {{1.0, 0.0}, 1.0, 1.0}), -std::log(kPi), 1e-15);

    const std::complex<double> m = std::polar(0.5, kPi / 4.0);
    const ComplexParams p{m, 1.0, 2.0};
    // Normalizer from quadrature of the unnormalized density over the plane.
    const double unnorm_total = oracle::integrate(
        [&](double r) {
            return oracle::integrate(
                [&](double th) {
                    const std::complex<double> z = std::polar(r, th);
                    return std::pow(r, 2.0) * std::exp(-std::norm(z - m)) * r;
                },
                -kPi, kPi, 1e-13);
        },
        0.0, 12.0, 1e-13);
    const double by_quadrature = 2.0 * std::log(0.5) - std::log(unnorm_total);
    EXPECT_NEAR(by_quadrature, -2.7541677982835005487, 1e-10);
    EXPECT_NEAR(log_pdf_complex(m, p), -2.7541677982835005487, 1e-13);
}

TEST(ComplexPdf, OriginPolicy) {
    EXPECT_THROW(log_pdf_complex({0.0, 0.0}, {{0.3, 0.0}, 1.0, 0.5}), DomainError);
    EXPECT_EQ(log_pdf_complex({0.0, 0.0}, {{0.3, 0.0}, 1.0, 2.0}), -std::numeric_limits<double>::infinity());
    EXPECT_TRUE(std::isfinite(log_pdf_complex({0.0, 0.0}, {{0.3, 0.0}, 1.0, 1.0})));
}

TEST(ComplexPdf, RejectsBadParams) {
    EXPECT_THROW(log_pdf_complex({1.0, 0.0}, {{0.0, 0.0}, 0.0, 1.0}), DomainError);
    EXPECT_THROW(log_pdf_complex({1.0, 0.0}, {{0.0, 0.0}, 1.0, -1.0}), DomainError);
    EXPECT_THROW(log_pdf_complex({1.0, 0.0}, {{std::nan(""), 0.0}, 1.0, 1.0}), DomainError);
}

TEST(ComplexPdf, ReducesToComplexNormalAtShapeOne) {
    const ComplexParams p{{0.7, -1.2}, 0.8, 1.0};
    for (int i = 0; i < 100; ++i) {
        const std::complex<double> z(-3.0 + 0.06 * i, 2.0 - 0.045 * i);
        const double want = -std::norm(z - p.mu) / p.sigma2 - std::log(kPi * p.sigma2);
        EXPECT_NEAR(log_pdf_complex(z, p), want, 1e-10);
    }
}

TEST(ComplexPdf, NormalizesOverTheDisc) {
    for (double alpha : {0.5, 2.0}) {
        for (double nu : {0.0, 2.0}) {
            const ComplexParams p{{nu, 0.0}, 1.0, alpha};
            EXPECT_NEAR(polar_total(p, nu + 9.0), 1.0, 1e-6) << alpha << " " << nu;
        }
    }
}

TEST(ComplexPdf, RotationEquivariance) {
    const ComplexParams p{{0.4, 0.9}, 0.6, 2.7};
    for (double phi : {0.3, 1.7, -2.9}) {
        const std::complex<double> rot = std::polar(1.0, phi);
        const ComplexParams q{p.mu * rot, p.sigma2, p.alpha};
        for (std::complex<double> z : {std::complex<double>(0.1, 0.2), {-1.0, 0.4}, {2.0, -2.0}}) {
            EXPECT_NEAR(log_pdf_complex(z * rot, q), log_pdf_complex(z, p), 1e-12);
        }
    }
}

TEST(ComplexPdf, ScaleEquivariance) {
    const ComplexParams p{{0.4, 0.9}, 0.6, 0.7};
    for (double c : {0.01, 0.5, 3.0, 250.0}) {
        const ComplexParams q{c * p.mu, c * c * p.sigma2, p.alpha};
        for (std::complex<double> z : {std::complex<double>(0.1, 0.2), {-1.0, 0.4}, {2.0, -2.0}}) {
            EXPECT_NEAR(log_pdf_complex(c * z, q), log_pdf_complex(z, p) - 2.0 * std::log(c), 1e-11);
        }
    }
}

TEST(JointPolar, JacobianBookkeeping) {
    EXPECT_NEAR(log_pdf_joint_polar(1.0, 0.0, {{0.0, 0.0}, 1.0, 1.0}), -std::log(kPi) - 1.0, 1e-15);
    const double phi = 0.8, nu = 1.0, s2 = 1.0, r = 1.0;
    const ComplexParams p{std::polar(nu, phi), s2, 1.7};
    const double aligned = log_pdf_joint_polar(r, phi, p);
    const double opposite = log_pdf_joint_polar(r, phi + kPi, p);
    EXPECT_NEAR(aligned - opposite, 4.0 * nu * r / s2, 1e-12);

    const ComplexParams g{{0.3, -0.8}, 1.4, 0.6};
    for (double th : {-3.0, -0.5, 0.0, 1.1, 3.1}) {
        EXPECT_NEAR(log_pdf_joint_polar(0.9, th, g), log_pdf_complex(std::polar(0.9, th), g) + std::log(0.9), 1e-12);
    }
    EXPECT_THROW(log_pdf_joint_polar(0.0, 0.0, g), DomainError);
}

TEST(PhaseGivenR, VonMisesProperties) {
    const ComplexParams centered{{0.0, 0.0}, 1.0, 2.0};
    for (double th : {-3.0, 0.0, 2.0}) {
        EXPECT_NEAR(log_pdf_phase_given_r(th, 1.3, centered), -std::log(2.0 * kPi), 1e-15);
    }
    const ComplexParams far{std::polar(50.0, 0.6), 1.0, 1.0};
    const double r = 40.0;
    const double kappa = 2.0 * 50.0 * r;
    EXPECT_NEAR(log_pdf_phase_given_r(0.6, r, far), 0.5 * std::log(kappa / (2.0 * kPi)), 1e-4);

    const ComplexParams g{std::polar(1.2, -2.0), 0.7, 3.0};
    const double total = oracle::integrate([&](double th) { return std::exp(log_pdf_phase_given_r(th, 0.9, g)); },
                                           -kPi, kPi, 1e-14);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(PhaseGivenR, ConditionalOfJoint) {
    // p(theta | r) = p(r, theta) / p(r).
    const ComplexParams g{std::polar(1.2, -2.0), 0.7, 3.0};
    const AmplitudeParams a = to_amplitude(g);
    for (double th : {-2.5, 0.0, 1.0}) {
        EXPECT_NEAR(log_pdf_phase_given_r(th, 0.9, g), log_pdf_joint_polar(0.9, th, g) - log_pdf_amplitude(0.9, a),
                    1e-12);
    }
}

TEST(AmplitudePdf, Reductions) {
    EXPECT_NEAR(log_pdf_amplitude(1.0, {0.0, 1.0, 1.0}), std::log(2.0) - 1.0, 1e-15);
    for (double r = 0.05; r < 4.0; r += 0.05) {
        const double half_normal = std::log(std::sqrt(2.0 / kPi) / std::sqrt(0.5)) - r * r;
        EXPECT_NEAR(log_pdf_amplitude(r, {0.0, 1.0, 0.5}), half_normal, 1e-12) << r;
    }
}

TEST(AmplitudePdf, MarginalOfJoint) {
    const ComplexParams p{{0.8, 0.0}, 0.5, 2.4};
    const double by_quadrature = std::log(
        oracle::integrate([&](double th) { return std::exp(log_pdf_joint_polar(1.3, th, p)); }, -kPi, kPi, 1e-14));
    EXPECT_NEAR(log_pdf_amplitude(1.3, {0.8, 0.5, 2.4}), by_quadrature, 1e-12);
    for (double alpha : {0.5, 1.0, 3.0}) {
        const ComplexParams q{std::polar(1.1, 0.4), 0.9, alpha};
        for (double r : {0.1, 0.7, 1.5, 3.0}) {
            const double marg = oracle::integrate(
                [&](double th) { return std::exp(log_pdf_joint_polar(r, th, q)); }, -kPi, kPi, 1e-14);
            EXPECT_NEAR(std::exp(log_pdf_amplitude(r, to_amplitude(q))), marg, 1e-8) << alpha << " " << r;
        }
    }
}

TEST(AmplitudePdf, RiceAtShapeOne) {
    for (double nu : {0.0, 0.5, 3.0}) {
        for (int i = 1; i <= 100; ++i) {
            const double r = 0.06 * i, s2 = 1.3;
            const double rice = std::log(2.0 * r / s2) - (r * r + nu * nu) / s2 +
                                std::log(boost::math::cyl_bessel_i(0, 2.0 * nu * r / s2));
            EXPECT_NEAR(log_pdf_amplitude(r, {nu, s2, 1.0}), rice, 1e-10);
            EXPECT_NEAR(log_pdf_rice(r, {nu, s2}), rice, 1e-10);
        }
    }
}

TEST(AmplitudePdf, NakagamiConstraint) {
    for (double m : {0.6, 1.0, 2.5}) {
        const double omega = 1.7;
        for (int i = 1; i <= 100; ++i) {
            const double r = 0.04 * i;
            const double naka = std::log(2.0) + m * std::log(m) + (2.0 * m - 1.0) * std::log(r) - m * r * r / omega -
                                m * std::log(omega) - boost::math::lgamma(m);
            EXPECT_NEAR(log_pdf_amplitude(r, {0.0, omega / m, m}), naka, 1e-10);
            EXPECT_NEAR(log_pdf_nakagami(r, {m, omega}), naka, 1e-10);
        }
    }
}

TEST(PowerPdf, Examples) {
    EXPECT_NEAR(log_pdf_power(1.0, {1.0, 1.0, 0.0}), -1.0, 1e-15);
    const double mix = std::log(oracle::power_pdf_mixture(2.0, 0.7, 1.5, 3.0));
    EXPECT_NEAR(mix, -1.4217123561370722502, 1e-12);
    EXPECT_NEAR(log_pdf_power(2.0, {0.7, 1.5, 3.0}), mix, 1e-12);
    EXPECT_THROW(log_pdf_power(0.0, {0.7, 1.5, 3.0}), DomainError);
    EXPECT_THROW(log_pdf_power(-1.0, {0.7, 1.5, 3.0}), DomainError);
}

TEST(PowerPdf, MixtureIdentity) {
    for (double alpha : {0.3, 1.0, 2.2}) {
        for (double lambda : {0.0, 0.5, 4.0, 15.0}) {
            for (double x : {0.05, 0.5, 2.0, 9.0}) {
                const double want = std::log(oracle::power_pdf_mixture(x, alpha, 0.8, lambda));
                EXPECT_NEAR(log_pdf_power(x, {alpha, 0.8, lambda}), want, 1e-9) << alpha << " " << lambda << " " << x;
            }
        }
    }
}

TEST(PowerPdf, ChangeOfVariablesFromAmplitude) {
    const AmplitudeParams a{0.9, 0.6, 1.8};
    const PowerParams p = to_power(a);
    EXPECT_DOUBLE_EQ(p.beta, 1.0 / 0.6);
    EXPECT_DOUBLE_EQ(p.lambda, 0.81 / 0.6);
    for (double x : {0.01, 0.3, 1.0, 4.0}) {
        const double via_amp = std::exp(log_pdf_amplitude(std::sqrt(x), a)) / (2.0 * std::sqrt(x));
        EXPECT_NEAR(std::exp(log_pdf_power(x, p)) / via_amp, 1.0, 1e-12);
    }
}

TEST(PowerPdf, GammaAndNoncentralGammaReductions) {
    for (int i = 1; i <= 100; ++i) {
        const double x = 0.07 * i;
        const double gamma = 2.5 * std::log(1.3) - boost::math::lgamma(2.5) + 1.5 * std::log(x) - 1.3 * x;
        EXPECT_NEAR(log_pdf_power(x, {2.5, 1.3, 0.0}), gamma, 1e-10);
        EXPECT_NEAR(log_pdf_gamma(x, {2.5, 1.3}), gamma, 1e-10);
        EXPECT_NEAR(log_pdf_power(x, {1.0, 1.3, 2.2}), log_pdf_noncentral_gamma(x, {1.0, 1.3, 2.2}), 1e-10);
    }
}

TEST(PowerPdf, BatchLikelihoodMatchesSum) {
    const PowerParams p{0.6, 2.0, 5.0};
    const std::vector<double> xs{0.1, 0.5, 1.2, 3.3, 7.0};
    double sum = 0.0;
    for (double x : xs) sum += log_pdf_power(x, p);
    EXPECT_NEAR(log_likelihood_power(xs, p), sum, 1e-11);
}

TEST(PoissonTypePmf, Examples) {
    EXPECT_NEAR(log_pmf_poisson_type(2, {1.0, 1.0}), std::log(std::exp(-1.0) / 2.0), 1e-14);
    EXPECT_EQ(log_pmf_poisson_type(0, {0.0, 3.0}), 0.0);
    EXPECT_EQ(log_pmf_poisson_type(1, {0.0, 3.0}), -std::numeric_limits<double>::infinity());
    const double brute = std::log(oracle::poisson_type_pmf_bruteforce(4, 2.0, 0.5));
    EXPECT_NEAR(brute, -2.9380616690455465169, 1e-13);
    EXPECT_NEAR(log_pmf_poisson_type(4, {2.0, 0.5}), brute, 1e-13);
}

TEST(PoissonTypePmf, PoissonAtShapeOne) {
    for (double l : {0.3, 2.0, 11.0}) {
        for (std::size_t n = 0; n < 100; ++n) {
            const double pois = -l + static_cast<double>(n) * std::log(l) - boost::math::lgamma(n + 1.0);
            EXPECT_NEAR(log_pmf_poisson_type(n, {l, 1.0}), pois, 1e-10 * std::max(1.0, std::fabs(pois)));
        }
    }
}

TEST(PoissonTypePmf, SumsToOne) {
    for (double alpha : {0.2, 1.0, 6.0}) {
        for (double l : {0.1, 3.0, 40.0}) {
            double total = 0.0;
            std::size_t n = 0;
            double prev = -INFINITY;
            for (;; ++n) {
                const double lp = log_pmf_poisson_type(n, {l, alpha});
                total += std::exp(lp);
                if (lp < prev && lp < -60.0) break;
                prev = lp;
            }
            EXPECT_NEAR(total, 1.0, 1e-10) << alpha << " " << l;
        }
    }
}

TEST(Baselines, Dispatch) {
    EXPECT_NEAR(log_pdf_baseline(1.0, GammaParams{1.0, 1.0}), -1.0, 1e-15);
    EXPECT_NEAR(log_pdf_baseline(2.0, ExponentialParams{0.5}), std::log(0.5) - 1.0, 1e-15);
    for (double x = 0.1; x < 10.0; x += 0.1) {
        EXPECT_NEAR(log_pdf_baseline(x, NoncentralGammaParams{1.7, 0.9, 0.0}),
                    log_pdf_baseline(x, GammaParams{1.7, 0.9}), 1e-12);
    }
    EXPECT_THROW(log_pdf_baseline(-1.0, GammaParams{1.0, 1.0}), DomainError);
    EXPECT_THROW(log_pdf_baseline(1.0, NakagamiParams{-0.4, 1.0}), DomainError);
}

TEST(Baselines, NoncentralGammaMixture) {
    for (double alpha : {0.4, 1.0, 3.0}) {
        for (double l : {0.5, 6.0}) {
            for (double x : {0.02, 0.7, 4.0, 15.0}) {
                EXPECT_NEAR(log_pdf_noncentral_gamma(x, {alpha, 1.4, l}),
                            std::log(oracle::ncgamma_pdf_mixture(x, alpha, 1.4, l)), 1e-10);
            }
        }
    }
}

TEST(Baselines, NoncentralChiWithTwoDegreesIsRice) {
    // Unit-variance components: the Rice scale is sigma2 = 2.
    for (double nu : {0.0, 0.8, 2.5}) {
        for (int i = 1; i <= 100; ++i) {
            const double r = 0.06 * i;
            EXPECT_NEAR(log_pdf_noncentral_chi(r, {2.0, nu}), log_pdf_rice(r, {nu, 2.0}), 1e-10);
        }
    }
}

TEST(DensityGrid, ComplexCsv) {
    const ComplexParams p{{0.0, 0.0}, 1.0, 0.5};
    const auto rows = density_grid_complex(p, {-1.0, 1.0, 3}, {-1.0, 1.0, 3});
    ASSERT_EQ(rows.size(), 9U);
    EXPECT_TRUE(std::isinf(rows[4].density));
    EXPECT_NEAR(rows[0].density, pdf_complex({-1.0, -1.0}, p), 1e-15);
    std::ostringstream os;
    write_csv(os, std::span<const ComplexGridRow>(rows));
    EXPECT_EQ(os.str().substr(0, 15), "re,im,density\n-");
}

TEST(DensityGrid, ScalarSkipsNonPositive) {
    const auto rows = density_grid_scalar(ScalarDensity::power, {0.7, 1.5, 3.0}, {0.0, 2.0, 3});
    ASSERT_EQ(rows.size(), 2U);
    EXPECT_NEAR(rows[1].density, std::exp(-1.4217123561370722502), 1e-12);
    std::ostringstream os;
    write_csv(os, std::span<const ScalarGridRow>(rows));
    EXPECT_EQ(os.str().substr(0, 10), "x,density\n");
}
