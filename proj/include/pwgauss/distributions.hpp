#pragma once

// Log-densities of the power-weighted noncentral complex Gaussian family.
//
//   complex    p(z)   = |z|^(2a-2) exp(-|z-mu|^2/s2) / (pi s2^a Gamma(a) L_{a-1}(-|mu|^2/s2))
//   amplitude  p(r)   = 2 r^(2a-1) exp(-(r^2+nu^2)/s2) I0(2 nu r/s2) / (s2^a Gamma(a) L_{a-1}(-nu^2/s2))
//   power      p(x)   = b^a x^(a-1) exp(-b x) I0(2 sqrt(b l x)) / (Gamma(a) L_{-a}(l))
//   mixing     p(n)   = (a)_n l^n / ((n!)^2 L_{-a}(l))
//
// with b = 1/s2 and l = nu^2/s2. Everything is evaluated in the log domain;
// the pdf_* wrappers only exponentiate.

#include <cmath>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace pwgauss {

struct ComplexParams {
    std::complex<double> mu{0.0, 0.0};
    double sigma2 = 1.0;
    double alpha = 1.0;

    void validate() const;
};

struct AmplitudeParams {
    double nu = 0.0;  // |mu|
    double sigma2 = 1.0;
    double alpha = 1.0;

    void validate() const;
};

struct PowerParams {
    double alpha = 1.0;
    double beta = 1.0;
    double lambda = 0.0;

    void validate() const;
};

struct PoissonTypeParams {
    double lambda = 0.0;
    double alpha = 1.0;

    void validate() const;
};

// Parameter conversions along the complex -> amplitude -> power chain.
AmplitudeParams to_amplitude(const ComplexParams& p);
PowerParams to_power(const AmplitudeParams& p);
PowerParams to_power(const ComplexParams& p);
PoissonTypeParams mixing_params(const PowerParams& p);

double log_pdf_complex(std::complex<double> z, const ComplexParams& p);
double log_pdf_joint_polar(double r, double theta, const ComplexParams& p);
// von Mises log-density of the phase given the amplitude.
double log_pdf_phase_given_r(double theta, double r, const ComplexParams& p);
double log_pdf_amplitude(double r, const AmplitudeParams& p);
double log_pdf_power(double x, const PowerParams& p);
double log_pmf_poisson_type(std::size_t n, const PoissonTypeParams& p);

// Sum of log_pdf_power over a batch with the normalizer evaluated once.
double log_likelihood_power(std::span<const double> xs, const PowerParams& p);

inline double pdf_complex(std::complex<double> z, const ComplexParams& p) { return std::exp(log_pdf_complex(z, p)); }
inline double pdf_amplitude(double r, const AmplitudeParams& p) { return std::exp(log_pdf_amplitude(r, p)); }
inline double pdf_power(double x, const PowerParams& p) { return std::exp(log_pdf_power(x, p)); }

// ---------------------------------------------------------------------------
// Classical baselines, each in the parametrization used alongside the
// proposed family.

struct ExponentialParams {
    double rate = 1.0;
};
struct GammaParams {
    double alpha = 1.0;
    double beta = 1.0;  // rate
};
// Noncentral gamma (scaled noncentral chi-square), a Poisson(lambda) mixture
// of Gamma(alpha + n, beta).
struct NoncentralGammaParams {
    double alpha = 1.0;
    double beta = 1.0;
    double lambda = 0.0;
};
// Rice(r; nu, s2) = 2r/s2 exp(-(r^2+nu^2)/s2) I0(2 nu r/s2).
struct RiceParams {
    double nu = 0.0;
    double sigma2 = 1.0;
};
struct NakagamiParams {
    double m = 1.0;
    double omega = 1.0;
};
// Unit-variance noncentral chi with k degrees of freedom.
struct NoncentralChiParams {
    double k = 2.0;
    double nu = 0.0;
};

using BaselineParams = std::variant<ExponentialParams, GammaParams, NoncentralGammaParams, RiceParams,
                                    NakagamiParams, NoncentralChiParams>;

double log_pdf_baseline(double x, const BaselineParams& params);

double log_pdf_exponential(double x, const ExponentialParams& p);
double log_pdf_gamma(double x, const GammaParams& p);
double log_pdf_noncentral_gamma(double x, const NoncentralGammaParams& p);
double log_pdf_rice(double r, const RiceParams& p);
double log_pdf_nakagami(double r, const NakagamiParams& p);
double log_pdf_noncentral_chi(double r, const NoncentralChiParams& p);

double log_likelihood_noncentral_gamma(std::span<const double> xs, const NoncentralGammaParams& p);

// ---------------------------------------------------------------------------
// Density grids for plotting.

struct GridAxis {
    double lo = -3.0;
    double hi = 3.0;
    std::size_t points = 101;

    double at(std::size_t i) const;
};

struct ComplexGridRow {
    double re, im, density;
};
struct ScalarGridRow {
    double x, density;
};

// Density over a re x im tensor grid (row-major in im). Points where the
// density is singular (z = 0 with alpha < 1) are reported as +inf.
std::vector<ComplexGridRow> density_grid_complex(const ComplexParams& p, const GridAxis& re, const GridAxis& im);

enum class ScalarDensity { amplitude, power, noncentral_gamma };

// x <= 0 grid points are skipped.
std::vector<ScalarGridRow> density_grid_scalar(ScalarDensity which, const PowerParams& p, const GridAxis& x);

void write_csv(std::ostream& os, std::span<const ComplexGridRow> rows);
void write_csv(std::ostream& os, std::span<const ScalarGridRow> rows);

}  // namespace pwgauss
