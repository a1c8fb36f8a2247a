#include "pwgauss/moments.hpp"

#include "pwgauss/error.hpp"
#include "pwgauss/special_functions.hpp"

#include <cmath>
#include <ostream>

namespace pwgauss {

double log_raw_moment(unsigned n, const PowerParams& p) {
    p.validate();
    if (n == 0) return 0.0;
    const double dn = static_cast<double>(n);
    return log_pochhammer(p.alpha, n) - dn * std::log(p.beta) + log_laguerre_neg(p.alpha + dn, p.lambda) -
           log_laguerre_neg(p.alpha, p.lambda);
}

double raw_moment(unsigned n, const PowerParams& p) {
    if (n == 0) detail::domain_fail("raw_moment", "order must be >= 1");
    return std::exp(log_raw_moment(n, p));
}

double laguerre_ratio(double alpha, double lambda) {
    return std::exp(log_laguerre_neg(alpha + 1.0, lambda) - log_laguerre_neg(alpha, lambda));
}

MeanVariance mean_variance(const PowerParams& p) {
    const double m1 = raw_moment(1, p);
    const double m2 = raw_moment(2, p);
    return {m1, m2 - m1 * m1};
}

double mgf(double t, const PowerParams& p) {
    p.validate();
    if (!(t < p.beta)) detail::domain_fail("mgf", "requires t < beta");
    const double shrink = p.beta / (p.beta - t);
    return std::exp(p.alpha * std::log(shrink) + log_laguerre_neg(p.alpha, p.lambda * shrink) -
                    log_laguerre_neg(p.alpha, p.lambda));
}

MomentReport moment_report(const PowerParams& p) {
    // Cumulants are invariant in shape under scaling, so evaluate at beta = 1
    // and rescale; this keeps the raw moments O(1) for the subtraction below.
    const PowerParams unit{p.alpha, 1.0, p.lambda};
    const double m1 = raw_moment(1, unit);
    const double m2 = raw_moment(2, unit);
    const double m3 = raw_moment(3, unit);
    const double m4 = raw_moment(4, unit);
    const double k2 = m2 - m1 * m1;
    const double k4 = m4 - 4.0 * m1 * m3 - 3.0 * m2 * m2 + 12.0 * m1 * m1 * m2 - 6.0 * m1 * m1 * m1 * m1;

    const double s = 1.0 / p.beta;
    MomentReport r;
    r.m1 = m1 * s;
    r.m2 = m2 * s * s;
    r.m3 = m3 * s * s * s;
    r.m4 = m4 * s * s * s * s;
    r.kappa2 = k2 * s * s;
    r.kappa4 = k4 * s * s * s * s;
    r.excess_kurtosis = k4 / (k2 * k2);
    return r;
}

double excess_kurtosis(const PowerParams& p) { return moment_report(p).excess_kurtosis; }

double ncgamma_cumulant(unsigned n, const PowerParams& p) {
    p.validate();
    if (n == 0) detail::domain_fail("ncgamma_cumulant", "order must be >= 1");
    const double dn = static_cast<double>(n);
    return std::exp(log_gamma(dn) - dn * std::log(p.beta)) * (p.alpha + dn * p.lambda);
}

double ncgamma_excess_kurtosis(const PowerParams& p) {
    const double k2 = ncgamma_cumulant(2, p);
    return ncgamma_cumulant(4, p) / (k2 * k2);
}

std::vector<KurtosisSweepRow> kurtosis_sweep(std::span<const double> alphas, double lambda_lo, double lambda_hi,
                                             std::size_t points) {
    if (!(lambda_lo >= 0.0) || !(lambda_hi >= lambda_lo) || points == 0) {
        detail::domain_fail("kurtosis_sweep", "requires 0 <= lambda_lo <= lambda_hi and points >= 1");
    }
    std::vector<KurtosisSweepRow> rows;
    rows.reserve(alphas.size() * points);
    for (double a : alphas) {
        for (std::size_t i = 0; i < points; ++i) {
            const double lambda =
                points == 1 ? lambda_lo
                            : lambda_lo + (lambda_hi - lambda_lo) * static_cast<double>(i) / static_cast<double>(points - 1);
            const PowerParams p{a, 1.0, lambda};
            rows.push_back({lambda, a, excess_kurtosis(p), ncgamma_excess_kurtosis(p)});
        }
    }
    return rows;
}

void write_csv(std::ostream& os, std::span<const KurtosisSweepRow> rows) {
    const auto old = os.precision(17);
    os << "lambda,alpha,gamma2_proposed,gamma2_ncgamma\n";
    for (const auto& r : rows) {
        os << r.lambda << ',' << r.alpha << ',' << r.gamma2_proposed << ',' << r.gamma2_ncgamma << '\n';
    }
    os.precision(old);
}

}  // namespace pwgauss
