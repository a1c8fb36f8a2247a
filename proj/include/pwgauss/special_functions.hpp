#pragma once

// Log-domain special functions behind every density and moment formula.
//
// Laguerre convention: L_nu(x) = 1F1(-nu; 1; x). The normalizers that appear
// in the densities are
//   L_{-alpha}(lambda)    = 1F1(alpha; 1; lambda)          (all terms > 0)
//   L_{alpha-1}(-lambda)  = exp(-lambda) 1F1(alpha; 1; lambda)   (Kummer)
// so only the positive-term series is ever summed.

#include <cstddef>

namespace pwgauss {

// Truncation control for the positive-term series.
struct SeriesControl {
    double rel_tol = 1e-14;
    std::size_t max_terms = 10'000;

    // Throws DomainError unless 0 < rel_tol < 1 and max_terms >= 1.
    void validate() const;
};

// ln Gamma(x), x > 0 and finite.
double log_gamma(double x);

// ln (a)_n = ln Gamma(a+n) - ln Gamma(a); exactly 0 for n == 0.
double log_pochhammer(double a, std::size_t n);

// Argument above which ln I0 switches from the power series to the
// Hankel asymptotic expansion.
inline constexpr double kBesselI0Crossover = 25.0;

// ln I0(x), x >= 0. Finite for every finite x.
double log_bessel_i0(double x);

// ln I_nu(x) for nu > -1 and x >= 0. At x == 0 returns 0 for nu == 0,
// -inf for nu > 0 and +inf for nu < 0.
double log_bessel_i_nu(double nu, double x);

// ln sum_n y^n / (n! Gamma(n + nu + 1)) for nu > -1, y >= 0.
// Equals ln I_nu(2 sqrt(y)) - (nu/2) ln y, and stays finite at y == 0
// where it is -ln Gamma(nu + 1). This is the Bessel factor of the
// noncentral gamma and noncentral chi densities with the singular
// prefactor removed.
double log_bessel_i_nu_scaled(double nu, double y);

// ln L_{-alpha}(lambda) = ln 1F1(alpha; 1; lambda). Throws ConvergenceError
// when the series needs more than ctl.max_terms terms.
double log_laguerre_neg(double alpha, double lambda, const SeriesControl& ctl = {});

// ln L_{alpha-1}(-lambda) = -lambda + ln L_{-alpha}(lambda).
double log_laguerre_pos_arg(double alpha, double lambda, const SeriesControl& ctl = {});

// Numerically stable ln(1 + e^u).
double softplus(double u);
// Inverse of softplus for v > 0.
double softplus_inverse(double v);

}  // namespace pwgauss
