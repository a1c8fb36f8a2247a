#include "pwgauss/special_functions.hpp"

#include "pwgauss/error.hpp"

#include <math.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace pwgauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Sums a unimodal sequence of positive terms outward from `start`, where
// ratio(n) = t(n+1)/t(n) and log_t_start = ln t(start). Returns the log of
// the sum. Terms are accumulated relative to t(start), so nothing
// overflows as long as the peak term lies within ~700 e-folds of it; the
// caller starts at (or next to) the peak.
template <class Ratio>
double sum_unimodal_series(std::size_t start, double log_t_start, Ratio ratio,
                           const SeriesControl& ctl, const char* fn) {
    double sum = 1.0;
    std::size_t used = 1;

    // Upward.
    double t = 1.0;
    for (std::size_t n = start;; ++n) {
        t *= ratio(n);
        sum += t;
        if (++used > ctl.max_terms) {
            throw ConvergenceError(std::string(fn) + ": series did not converge within " +
                                   std::to_string(ctl.max_terms) + " terms");
        }
        if (t < ctl.rel_tol * sum || t == 0.0) break;
    }
    // Downward.
    t = 1.0;
    for (std::size_t n = start; n > 0; --n) {
        t /= ratio(n - 1);
        sum += t;
        if (++used > ctl.max_terms) {
            throw ConvergenceError(std::string(fn) + ": series did not converge within " +
                                   std::to_string(ctl.max_terms) + " terms");
        }
        if (t < ctl.rel_tol * sum || t == 0.0) break;
    }
    return log_t_start + std::log(sum);
}

// Index of the largest term of sum y^n / (n! Gamma(n+nu+1)):
// ratio y / ((n+1)(n+nu+1)) crosses one at the positive root of
// m^2 + nu m - y = 0 with m = n + 1.
std::size_t bessel_series_peak(double nu, double y) {
    const double m = 0.5 * (-nu + std::sqrt(nu * nu + 4.0 * y));
    return m > 1.0 ? static_cast<std::size_t>(m - 1.0) : 0;
}

// Hankel expansion: ln I_nu(x) for large x.
//   I_nu(x) ~ e^x / sqrt(2 pi x) * sum_k (-1)^k a_k(nu) / x^k
//   a_k(nu) = prod_{j=1..k} (4nu^2 - (2j-1)^2) / (k! 8^k)
double log_bessel_i_asymptotic(double nu, double x) {
    const double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev_abs = kInf;
    for (int k = 1; k < 200; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= -(mu - odd * odd) / (8.0 * k * x);
        const double a = std::fabs(term);
        if (a >= prev_abs) break;  // asymptotic series has started to diverge
        sum += term;
        prev_abs = a;
        if (a < 1e-17 * std::fabs(sum)) break;
    }
    return x - 0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

double bessel_asymptotic_crossover(double nu) { return kBesselI0Crossover + nu * nu; }

}  // namespace

void SeriesControl::validate() const {
    if (!(rel_tol > 0.0 && rel_tol < 1.0)) detail::domain_fail("SeriesControl", "rel_tol must lie in (0,1)");
    if (max_terms < 1) detail::domain_fail("SeriesControl", "max_terms must be >= 1");
}

double log_gamma(double x) {
    if (!(x > 0.0) || !std::isfinite(x)) detail::domain_fail("log_gamma", "argument must be positive and finite");
    int sign = 0;
    return ::lgamma_r(x, &sign);
}

double log_pochhammer(double a, std::size_t n) {
    if (!(a > 0.0) || !std::isfinite(a)) detail::domain_fail("log_pochhammer", "a must be positive and finite");
    if (n == 0) return 0.0;
    if (n <= 32) {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) s += std::log(a + static_cast<double>(k));
        return s;
    }
    return log_gamma(a + static_cast<double>(n)) - log_gamma(a);
}

double log_bessel_i0(double x) {
    if (!(x >= 0.0)) detail::domain_fail("log_bessel_i0", "argument must be >= 0");
    if (std::isinf(x)) return kInf;
    if (x == 0.0) return 0.0;
    if (x < kBesselI0Crossover) {
        // sum ((x/2)^2)^k / (k!)^2; I0(25) ~ 5e9 so plain summation is safe.
        const double q = 0.25 * x * x;
        // Sum the k >= 1 tail separately so small x keeps full precision.
        double term = 1.0;
        double tail = 0.0;
        for (int k = 1; k < 500; ++k) {
            term *= q / (static_cast<double>(k) * k);
            tail += term;
            if (term < 1e-17 * (1.0 + tail)) break;
        }
        return std::log1p(tail);
    }
    return log_bessel_i_asymptotic(0.0, x);
}

double log_bessel_i_nu_scaled(double nu, double y) {
    if (!(nu > -1.0) || !std::isfinite(nu)) detail::domain_fail("log_bessel_i_nu_scaled", "order must be > -1");
    if (!(y >= 0.0)) detail::domain_fail("log_bessel_i_nu_scaled", "argument must be >= 0");
    if (y == 0.0) return -log_gamma(nu + 1.0);
    const double x = 2.0 * std::sqrt(y);
    if (x >= bessel_asymptotic_crossover(nu)) {
        return log_bessel_i_asymptotic(nu, x) - 0.5 * nu * std::log(y);
    }
    const std::size_t peak = bessel_series_peak(nu, y);
    const double np = static_cast<double>(peak);
    const double log_t = np * std::log(y) - log_gamma(np + 1.0) - log_gamma(np + nu + 1.0);
    SeriesControl ctl;
    ctl.rel_tol = 1e-17;
    ctl.max_terms = 1'000'000;
    return sum_unimodal_series(
        peak, log_t,
        [&](std::size_t n) {
            const double d = static_cast<double>(n);
            return y / ((d + 1.0) * (d + nu + 1.0));
        },
        ctl, "log_bessel_i_nu");
}

double log_bessel_i_nu(double nu, double x) {
    if (!(nu > -1.0) || !std::isfinite(nu)) detail::domain_fail("log_bessel_i_nu", "order must be > -1");
    if (!(x >= 0.0)) detail::domain_fail("log_bessel_i_nu", "argument must be >= 0");
    if (std::isinf(x)) return kInf;
    if (x == 0.0) {
        if (nu == 0.0) return 0.0;
        return nu > 0.0 ? -kInf : kInf;
    }
    if (nu == 0.0) return log_bessel_i0(x);
    if (x >= bessel_asymptotic_crossover(nu)) return log_bessel_i_asymptotic(nu, x);
    return nu * std::log(0.5 * x) + log_bessel_i_nu_scaled(nu, 0.25 * x * x);
}

double log_laguerre_neg(double alpha, double lambda, const SeriesControl& ctl) {
    ctl.validate();
    if (!(alpha > 0.0) || !std::isfinite(alpha)) detail::domain_fail("log_laguerre_neg", "alpha must be positive and finite");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) detail::domain_fail("log_laguerre_neg", "lambda must be >= 0 and finite");
    if (lambda == 0.0) return 0.0;

    // Terms t_n = (alpha)_n lambda^n / (n!)^2 with ratio
    // lambda (alpha + n) / (n + 1)^2; the ratio crosses one at the positive
    // root of m^2 - lambda m - lambda (alpha - 1) = 0, m = n + 1.
    const double disc = lambda * lambda + 4.0 * lambda * (alpha - 1.0);
    const double m = disc > 0.0 ? 0.5 * (lambda + std::sqrt(disc)) : 0.0;
    const std::size_t peak = m > 1.0 ? static_cast<std::size_t>(m - 1.0) : 0;
    const double np = static_cast<double>(peak);
    const double log_t = log_pochhammer(alpha, peak) + np * std::log(lambda) - 2.0 * log_gamma(np + 1.0);
    return sum_unimodal_series(
        peak, log_t,
        [&](std::size_t n) {
            const double d = static_cast<double>(n);
            return lambda * (alpha + d) / ((d + 1.0) * (d + 1.0));
        },
        ctl, "log_laguerre_neg");
}

double log_laguerre_pos_arg(double alpha, double lambda, const SeriesControl& ctl) {
    return -lambda + log_laguerre_neg(alpha, lambda, ctl);
}

double softplus(double u) {
    if (u > 35.0) return u;
    if (u < -35.0) return std::exp(u);
    return std::log1p(std::exp(u));
}

double softplus_inverse(double v) {
    if (!(v > 0.0)) detail::domain_fail("softplus_inverse", "argument must be positive");
    if (v > 35.0) return v;
    return std::log(std::expm1(v));
}

}  // namespace pwgauss
