#pragma once

// Closed-form moments of the power distribution and the noncentral gamma
// cumulants it is compared against.

#include "pwgauss/distributions.hpp"

#include <iosfwd>
#include <span>
#include <vector>

namespace pwgauss {

struct MomentReport {
    double m1 = 0.0, m2 = 0.0, m3 = 0.0, m4 = 0.0;
    double kappa2 = 0.0;
    double kappa4 = 0.0;
    double excess_kurtosis = 0.0;
};

// E[x^n] = (alpha)_n / beta^n * L_{-alpha-n}(lambda) / L_{-alpha}(lambda).
double raw_moment(unsigned n, const PowerParams& p);
double log_raw_moment(unsigned n, const PowerParams& p);

// R_alpha(lambda) = L_{-alpha-1}(lambda) / L_{-alpha}(lambda) >= 1.
double laguerre_ratio(double alpha, double lambda);

struct MeanVariance {
    double mean;
    double variance;
};
MeanVariance mean_variance(const PowerParams& p);

// Moment generating function, defined for t < beta.
double mgf(double t, const PowerParams& p);

double excess_kurtosis(const PowerParams& p);
MomentReport moment_report(const PowerParams& p);

// n-th cumulant of the noncentral gamma: (n-1)! (alpha + n lambda) / beta^n.
double ncgamma_cumulant(unsigned n, const PowerParams& p);
double ncgamma_excess_kurtosis(const PowerParams& p);

struct KurtosisSweepRow {
    double lambda, alpha, gamma2_proposed, gamma2_ncgamma;
};

// Excess kurtosis of both families over lambda in [lambda_lo, lambda_hi] for
// each alpha; beta does not enter (kurtosis is scale free).
std::vector<KurtosisSweepRow> kurtosis_sweep(std::span<const double> alphas, double lambda_lo, double lambda_hi,
                                             std::size_t points);
void write_csv(std::ostream& os, std::span<const KurtosisSweepRow> rows);

}  // namespace pwgauss
