#include "oracles.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

namespace pwgauss::testing {

namespace {

using Mp = boost::multiprecision::cpp_bin_float_50;
using Mp100 = boost::multiprecision::cpp_bin_float_100;

// Log weights (unnormalized) of a discrete mixing law, n = 0..N, grown until
// the terms are past their peak and negligible.
template <class LogTerm>
std::vector<double> mixture_weights(LogTerm log_term) {
    std::vector<double> logw;
    double peak = -INFINITY;
    for (unsigned n = 0; n < 5000; ++n) {
        const double lw = log_term(n);
        logw.push_back(lw);
        peak = std::max(peak, lw);
        if (n > 2 && lw < logw[n - 1] && lw < peak - 45.0) break;
    }
    double total = 0.0;
    for (double lw : logw) total += std::exp(lw - peak);
    std::vector<double> w(logw.size());
    for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(logw[i] - peak) / total;
    return w;
}

std::vector<double> poisson_type_weights(double alpha, double lambda) {
    if (lambda == 0.0) return {1.0};
    return mixture_weights([&](unsigned n) {
        return boost::math::lgamma(alpha + n) - boost::math::lgamma(alpha) + n * std::log(lambda) -
               2.0 * boost::math::lgamma(n + 1.0);
    });
}

std::vector<double> poisson_weights(double lambda) {
    if (lambda == 0.0) return {1.0};
    return mixture_weights(
        [&](unsigned n) { return -lambda + n * std::log(lambda) - boost::math::lgamma(n + 1.0); });
}

double gamma_pdf(double x, double shape, double rate) {
    if (!std::isfinite(x)) return 0.0;
    return std::exp(shape * std::log(rate) - boost::math::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x);
}

struct Resonator {
    double a1 = 0.0, a2 = 0.0, gain = 1.0, y1 = 0.0, y2 = 0.0;
    void tune(double freq, double bw, double rate) {
        const double r = std::exp(-std::numbers::pi * bw / rate);
        a1 = 2.0 * r * std::cos(2.0 * std::numbers::pi * freq / rate);
        a2 = -r * r;
        gain = 1.0 - r;
    }
    double operator()(double x) {
        const double y = gain * x + a1 * y1 + a2 * y2;
        y2 = y1;
        y1 = y;
        return y;
    }
};

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double tol) {
    return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, a, b, 20, tol);
}

double integrate_half_line(const std::function<double(double)>& f, double tol) {
    boost::math::quadrature::exp_sinh<double> integrator;
    return integrator.integrate(f, tol);
}

double log_hyp1f1_b1_series(double a, double x, unsigned terms) {
    Mp sum = 0, term = 1;
    const Mp ma = a, mx = x;
    for (unsigned n = 0; n < terms; ++n) {
        sum += term;
        term *= (ma + n) * mx / ((n + 1) * Mp(n + 1));
    }
    return static_cast<double>(log(sum));
}

double log_laguerre_alternating_series(double alpha, double lambda) {
    Mp100 sum = 0, term = 1, peak = 0;
    const Mp100 a = Mp100(1) - Mp100(alpha), z = -Mp100(lambda);
    for (unsigned n = 0; n < 4000; ++n) {
        sum += term;
        peak = std::max(peak, abs(term));
        if (term == 0 || (n > lambda && abs(term) < peak * Mp100("1e-90"))) break;
        term *= (a + n) * z / (Mp100(n + 1) * Mp100(n + 1));
    }
    return static_cast<double>(log(sum));
}

double log_bessel_i0_series(double x, unsigned terms) {
    Mp sum = 0, term = 1;
    const Mp q = Mp(x) * Mp(x) / 4;
    for (unsigned n = 0; n < terms; ++n) {
        sum += term;
        term *= q / (Mp(n + 1) * Mp(n + 1));
        if (term < sum * Mp("1e-45")) break;
    }
    return static_cast<double>(log(sum));
}

double log_bessel_i_boost(double nu, double x) { return std::log(boost::math::cyl_bessel_i(nu, x)); }

double power_pdf_mixture(double x, double alpha, double beta, double lambda) {
    const std::vector<double> w = poisson_type_weights(alpha, lambda);
    double sum = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) sum += w[n] * gamma_pdf(x, alpha + n, beta);
    return sum;
}

double poisson_type_pmf_bruteforce(unsigned n, double lambda, double alpha) {
    Mp total = 0, target = 0, term = 1;
    const Mp ma = alpha, ml = lambda;
    for (unsigned k = 0; k <= 400; ++k) {
        total += term;
        if (k == n) target = term;
        term *= (ma + k) * ml / (Mp(k + 1) * Mp(k + 1));
    }
    return static_cast<double>(target / total);
}

double ncgamma_pdf_mixture(double x, double alpha, double beta, double lambda) {
    const std::vector<double> w = poisson_weights(lambda);
    double sum = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) sum += w[n] * gamma_pdf(x, alpha + n, beta);
    return sum;
}

double power_cdf(double x, double alpha, double beta, double lambda) {
    if (x <= 0.0) return 0.0;
    // Integrating the mixture term by term gives regularized incomplete
    // gamma functions.
    const std::vector<double> w = poisson_type_weights(alpha, lambda);
    double sum = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) sum += w[n] * boost::math::gamma_p(alpha + n, beta * x);
    return sum;
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
    }
    return d;
}

double ks_critical_001(std::size_t n) { return 1.6276 / std::sqrt(static_cast<double>(n)); }

double chi2_critical_001(double dof) {
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(dof), 0.01));
}

std::vector<double> synth_speech(unsigned sample_rate, double seconds, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const double fs = sample_rate;
    const auto n = static_cast<std::size_t>(seconds * fs);
    std::vector<double> out(n, 0.0);

    enum class Kind { voiced, fricative, pause };
    std::array<Resonator, 3> formants;
    double hp_prev_in = 0.0, hp_prev_out = 0.0;
    double phase = 0.0;
    std::size_t i = 0;
    while (i < n) {
        const double u = uni(rng);
        const Kind kind = u < 0.6 ? Kind::voiced : (u < 0.8 ? Kind::fricative : Kind::pause);
        const auto len = std::min(n - i, static_cast<std::size_t>((0.08 + 0.17 * uni(rng)) * fs));
        const double f1 = 350.0 + 450.0 * uni(rng);
        const double f2 = 900.0 + 1400.0 * uni(rng);
        const double f3 = 2400.0 + 600.0 * uni(rng);
        formants[0].tune(f1, 80.0, fs);
        formants[1].tune(f2, 110.0, fs);
        formants[2].tune(f3, 160.0, fs);
        const double f0_base = 100.0 + 120.0 * uni(rng);
        const double level = 0.3 + 0.7 * uni(rng);
        const auto ramp = static_cast<std::size_t>(0.01 * fs);
        for (std::size_t k = 0; k < len; ++k, ++i) {
            const double t = static_cast<double>(i) / fs;
            double env = 1.0;
            if (k < ramp) env = 0.5 - 0.5 * std::cos(std::numbers::pi * k / ramp);
            if (len - k < ramp) env = std::min(env, 0.5 - 0.5 * std::cos(std::numbers::pi * (len - k) / ramp));
            double s = 0.0;
            if (kind == Kind::voiced) {
                const double f0 = f0_base * (1.0 + 0.08 * std::sin(2.0 * std::numbers::pi * 3.0 * t)) *
                                  (1.0 + 0.01 * gauss(rng));
                phase += 2.0 * std::numbers::pi * f0 / fs;
                if (phase > 2.0 * std::numbers::pi) phase -= 2.0 * std::numbers::pi;
                double src = 0.0;
                for (int h = 1; h * f0 < 0.45 * fs; ++h) src += std::cos(h * phase) / h;
                src += 0.05 * gauss(rng);
                s = formants[2](formants[1](formants[0](src))) * 4.0;
            } else if (kind == Kind::fricative) {
                const double w = gauss(rng);
                const double hp = 0.95 * (hp_prev_out + w - hp_prev_in);
                hp_prev_in = w;
                hp_prev_out = hp;
                s = 0.15 * hp;
            }
            out[i] = level * env * s;
        }
    }
    double peak = 0.0;
    for (double v : out) peak = std::max(peak, std::fabs(v));
    for (double& v : out) v = (peak > 0.0 ? 0.6 * v / peak : 0.0) + 3e-3 * gauss(rng);
    return out;
}

TempDir::TempDir(const std::string& tag) {
    std::random_device rd;
    path_ = std::filesystem::temp_directory_path() /
            ("pwgauss-" + tag + "-" + std::to_string(rd()) + std::to_string(rd()));
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace pwgauss::testing
