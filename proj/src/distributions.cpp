#include "pwgauss/distributions.hpp"

#include "pwgauss/error.hpp"
#include "pwgauss/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <type_traits>

namespace pwgauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLogPi = 1.1447298858494002;  // ln(pi)
constexpr double kLog2Pi = 1.8378770664093453;
constexpr double kLog2 = std::numbers::ln2;

bool positive_finite(double v) { return v > 0.0 && std::isfinite(v); }
bool nonneg_finite(double v) { return v >= 0.0 && std::isfinite(v); }

// ln L_{alpha-1}(-lambda) + alpha ln sigma2 + ln Gamma(alpha): the log
// normalizer shared by the complex and amplitude densities (without pi/2).
double log_complex_normalizer(double alpha, double sigma2, double lambda) {
    return alpha * std::log(sigma2) + log_gamma(alpha) + log_laguerre_pos_arg(alpha, lambda);
}

// Everything in ln p(x) that does not depend on x.
double log_power_normalizer(const PowerParams& p) {
    return p.alpha * std::log(p.beta) - log_gamma(p.alpha) - log_laguerre_neg(p.alpha, p.lambda);
}

double log_power_kernel(double x, const PowerParams& p) {
    const double radial = p.alpha == 1.0 ? 0.0 : (p.alpha - 1.0) * std::log(x);
    const double bessel = p.lambda > 0.0 ? log_bessel_i0(2.0 * std::sqrt(p.beta * p.lambda * x)) : 0.0;
    return radial - p.beta * x + bessel;
}

double log_ncgamma_kernel(double x, const NoncentralGammaParams& p) {
    return -p.beta * x + (p.alpha - 1.0) * std::log(x) +
           log_bessel_i_nu_scaled(p.alpha - 1.0, p.beta * p.lambda * x);
}

void check_ncgamma(const NoncentralGammaParams& p, const char* fn) {
    if (!positive_finite(p.alpha) || !positive_finite(p.beta) || !nonneg_finite(p.lambda)) {
        detail::domain_fail(fn, "requires alpha > 0, beta > 0, lambda >= 0");
    }
}

}  // namespace

void ComplexParams::validate() const {
    if (!std::isfinite(mu.real()) || !std::isfinite(mu.imag())) detail::domain_fail("ComplexParams", "mu must be finite");
    if (!positive_finite(sigma2)) detail::domain_fail("ComplexParams", "sigma2 must be > 0");
    if (!positive_finite(alpha)) detail::domain_fail("ComplexParams", "alpha must be > 0");
}

void AmplitudeParams::validate() const {
    if (!nonneg_finite(nu)) detail::domain_fail("AmplitudeParams", "nu must be >= 0");
    if (!positive_finite(sigma2)) detail::domain_fail("AmplitudeParams", "sigma2 must be > 0");
    if (!positive_finite(alpha)) detail::domain_fail("AmplitudeParams", "alpha must be > 0");
}

void PowerParams::validate() const {
    if (!positive_finite(alpha)) detail::domain_fail("PowerParams", "alpha must be > 0");
    if (!positive_finite(beta)) detail::domain_fail("PowerParams", "beta must be > 0");
    if (!nonneg_finite(lambda)) detail::domain_fail("PowerParams", "lambda must be >= 0");
}

void PoissonTypeParams::validate() const {
    if (!nonneg_finite(lambda)) detail::domain_fail("PoissonTypeParams", "lambda must be >= 0");
    if (!positive_finite(alpha)) detail::domain_fail("PoissonTypeParams", "alpha must be > 0");
}

AmplitudeParams to_amplitude(const ComplexParams& p) { return {std::abs(p.mu), p.sigma2, p.alpha}; }

PowerParams to_power(const AmplitudeParams& p) {
    return {p.alpha, 1.0 / p.sigma2, p.nu * p.nu / p.sigma2};
}

PowerParams to_power(const ComplexParams& p) { return to_power(to_amplitude(p)); }

PoissonTypeParams mixing_params(const PowerParams& p) { return {p.lambda, p.alpha}; }

double log_pdf_complex(std::complex<double> z, const ComplexParams& p) {
    p.validate();
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) detail::domain_fail("log_pdf_complex", "z must be finite");
    const double r = std::abs(z);
    double radial = 0.0;
    if (p.alpha != 1.0) {
        if (r == 0.0) {
            if (p.alpha < 1.0) detail::domain_fail("log_pdf_complex", "density is singular at z = 0 for alpha < 1");
            return -kInf;
        }
        radial = (2.0 * p.alpha - 2.0) * std::log(r);
    }
    const double lambda = std::norm(p.mu) / p.sigma2;
    return radial - std::norm(z - p.mu) / p.sigma2 - kLogPi - log_complex_normalizer(p.alpha, p.sigma2, lambda);
}

double log_pdf_joint_polar(double r, double theta, const ComplexParams& p) {
    if (!(r > 0.0)) detail::domain_fail("log_pdf_joint_polar", "r must be > 0");
    return log_pdf_complex(std::polar(r, theta), p) + std::log(r);
}

double log_pdf_phase_given_r(double theta, double r, const ComplexParams& p) {
    p.validate();
    if (!(r > 0.0)) detail::domain_fail("log_pdf_phase_given_r", "r must be > 0");
    const double kappa = 2.0 * std::abs(p.mu) * r / p.sigma2;
    if (kappa == 0.0) return -kLog2Pi;
    return kappa * std::cos(theta - std::arg(p.mu)) - kLog2Pi - log_bessel_i0(kappa);
}

double log_pdf_amplitude(double r, const AmplitudeParams& p) {
    p.validate();
    if (!(r > 0.0) || !std::isfinite(r)) detail::domain_fail("log_pdf_amplitude", "r must be > 0");
    const double lambda = p.nu * p.nu / p.sigma2;
    return kLog2 + (2.0 * p.alpha - 1.0) * std::log(r) - (r * r + p.nu * p.nu) / p.sigma2 +
           log_bessel_i0(2.0 * p.nu * r / p.sigma2) - log_complex_normalizer(p.alpha, p.sigma2, lambda);
}

double log_pdf_power(double x, const PowerParams& p) {
    p.validate();
    if (!(x > 0.0) || !std::isfinite(x)) detail::domain_fail("log_pdf_power", "x must be > 0");
    return log_power_normalizer(p) + log_power_kernel(x, p);
}

double log_likelihood_power(std::span<const double> xs, const PowerParams& p) {
    p.validate();
    double total = 0.0;
    for (double x : xs) {
        if (!(x > 0.0) || !std::isfinite(x)) detail::domain_fail("log_likelihood_power", "samples must be > 0");
        total += log_power_kernel(x, p);
    }
    return total + static_cast<double>(xs.size()) * log_power_normalizer(p);
}

double log_pmf_poisson_type(std::size_t n, const PoissonTypeParams& p) {
    p.validate();
    if (p.lambda == 0.0) return n == 0 ? 0.0 : -kInf;
    const double dn = static_cast<double>(n);
    return log_pochhammer(p.alpha, n) + dn * std::log(p.lambda) - 2.0 * log_gamma(dn + 1.0) -
           log_laguerre_neg(p.alpha, p.lambda);
}

// ---------------------------------------------------------------------------

double log_pdf_exponential(double x, const ExponentialParams& p) {
    if (!positive_finite(p.rate)) detail::domain_fail("log_pdf_exponential", "rate must be > 0");
    if (!(x > 0.0)) detail::domain_fail("log_pdf_exponential", "x must be > 0");
    return std::log(p.rate) - p.rate * x;
}

double log_pdf_gamma(double x, const GammaParams& p) {
    if (!positive_finite(p.alpha) || !positive_finite(p.beta)) detail::domain_fail("log_pdf_gamma", "requires alpha > 0, beta > 0");
    if (!(x > 0.0)) detail::domain_fail("log_pdf_gamma", "x must be > 0");
    return p.alpha * std::log(p.beta) - log_gamma(p.alpha) + (p.alpha - 1.0) * std::log(x) - p.beta * x;
}

double log_pdf_noncentral_gamma(double x, const NoncentralGammaParams& p) {
    check_ncgamma(p, "log_pdf_noncentral_gamma");
    if (!(x > 0.0)) detail::domain_fail("log_pdf_noncentral_gamma", "x must be > 0");
    return -p.lambda + p.alpha * std::log(p.beta) + log_ncgamma_kernel(x, p);
}

double log_likelihood_noncentral_gamma(std::span<const double> xs, const NoncentralGammaParams& p) {
    check_ncgamma(p, "log_likelihood_noncentral_gamma");
    double total = 0.0;
    for (double x : xs) {
        if (!(x > 0.0)) detail::domain_fail("log_likelihood_noncentral_gamma", "samples must be > 0");
        total += log_ncgamma_kernel(x, p);
    }
    return total + static_cast<double>(xs.size()) * (-p.lambda + p.alpha * std::log(p.beta));
}

double log_pdf_rice(double r, const RiceParams& p) {
    if (!nonneg_finite(p.nu) || !positive_finite(p.sigma2)) detail::domain_fail("log_pdf_rice", "requires nu >= 0, sigma2 > 0");
    if (!(r > 0.0)) detail::domain_fail("log_pdf_rice", "r must be > 0");
    return std::log(2.0 * r / p.sigma2) - (r * r + p.nu * p.nu) / p.sigma2 + log_bessel_i0(2.0 * p.nu * r / p.sigma2);
}

double log_pdf_nakagami(double r, const NakagamiParams& p) {
    if (!positive_finite(p.m) || !positive_finite(p.omega)) detail::domain_fail("log_pdf_nakagami", "requires m > 0, omega > 0");
    if (!(r > 0.0)) detail::domain_fail("log_pdf_nakagami", "r must be > 0");
    return kLog2 + p.m * std::log(p.m) + (2.0 * p.m - 1.0) * std::log(r) - p.m * r * r / p.omega -
           p.m * std::log(p.omega) - log_gamma(p.m);
}

double log_pdf_noncentral_chi(double r, const NoncentralChiParams& p) {
    if (!positive_finite(p.k) || !nonneg_finite(p.nu)) detail::domain_fail("log_pdf_noncentral_chi", "requires k > 0, nu >= 0");
    if (!(r > 0.0)) detail::domain_fail("log_pdf_noncentral_chi", "r must be > 0");
    // nu^(1-k/2) r^(k/2) e^{-(r^2+nu^2)/2} I_{k/2-1}(nu r) with I written via
    // its scaled series so that nu = 0 reduces to the central chi density.
    const double order = 0.5 * p.k - 1.0;
    return (p.k - 1.0) * std::log(r) - order * kLog2 - 0.5 * (r * r + p.nu * p.nu) +
           log_bessel_i_nu_scaled(order, 0.25 * p.nu * p.nu * r * r);
}

double log_pdf_baseline(double x, const BaselineParams& params) {
    return std::visit(
        [x](const auto& p) -> double {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, ExponentialParams>) return log_pdf_exponential(x, p);
            else if constexpr (std::is_same_v<T, GammaParams>) return log_pdf_gamma(x, p);
            else if constexpr (std::is_same_v<T, NoncentralGammaParams>) return log_pdf_noncentral_gamma(x, p);
            else if constexpr (std::is_same_v<T, RiceParams>) return log_pdf_rice(x, p);
            else if constexpr (std::is_same_v<T, NakagamiParams>) return log_pdf_nakagami(x, p);
            else return log_pdf_noncentral_chi(x, p);
        },
        params);
}

// ---------------------------------------------------------------------------

double GridAxis::at(std::size_t i) const {
    if (points <= 1) return lo;
    return lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
}

std::vector<ComplexGridRow> density_grid_complex(const ComplexParams& p, const GridAxis& re, const GridAxis& im) {
    p.validate();
    if (re.points == 0 || im.points == 0) detail::domain_fail("density_grid_complex", "grid axes must have points");
    std::vector<ComplexGridRow> rows;
    rows.reserve(re.points * im.points);
    for (std::size_t j = 0; j < im.points; ++j) {
        for (std::size_t i = 0; i < re.points; ++i) {
            const std::complex<double> z{re.at(i), im.at(j)};
            double d = kInf;
            if (!(z == 0.0 && p.alpha < 1.0)) d = pdf_complex(z, p);
            rows.push_back({z.real(), z.imag(), d});
        }
    }
    return rows;
}

std::vector<ScalarGridRow> density_grid_scalar(ScalarDensity which, const PowerParams& p, const GridAxis& x) {
    p.validate();
    std::vector<ScalarGridRow> rows;
    rows.reserve(x.points);
    for (std::size_t i = 0; i < x.points; ++i) {
        const double v = x.at(i);
        if (!(v > 0.0)) continue;
        double d = 0.0;
        switch (which) {
            case ScalarDensity::amplitude: {
                const AmplitudeParams a{std::sqrt(p.lambda / p.beta), 1.0 / p.beta, p.alpha};
                d = pdf_amplitude(v, a);
                break;
            }
            case ScalarDensity::power: d = pdf_power(v, p); break;
            case ScalarDensity::noncentral_gamma:
                d = std::exp(log_pdf_noncentral_gamma(v, {p.alpha, p.beta, p.lambda}));
                break;
        }
        rows.push_back({v, d});
    }
    return rows;
}

void write_csv(std::ostream& os, std::span<const ComplexGridRow> rows) {
    const auto old = os.precision(17);
    os << "re,im,density\n";
    for (const auto& r : rows) os << r.re << ',' << r.im << ',' << r.density << '\n';
    os.precision(old);
}

void write_csv(std::ostream& os, std::span<const ScalarGridRow> rows) {
    const auto old = os.precision(17);
    os << "x,density\n";
    for (const auto& r : rows) os << r.x << ',' << r.density << '\n';
    os.precision(old);
}

}  // namespace pwgauss
