#include "pwgauss/fitting.hpp"

#include "pwgauss/distributions.hpp"
#include "pwgauss/error.hpp"
#include "pwgauss/moments.hpp"
#include "pwgauss/sampling.hpp"
#include "pwgauss/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace pwgauss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNestedLambdaLogit = -40.0;  // softplus(-40) ~ 4e-18
constexpr double kMaxLambda = 1e5;
constexpr double kMaxLogBeta = 40.0;

// Batch after division by its mean, plus the sufficient statistics every
// objective needs.
struct ScaledBatch {
    std::vector<double> y;
    double scale = 1.0;     // original mean
    double mean_y = 1.0;    // ~1 up to rounding
    double mean_log_y = 0.0;
    std::size_t n = 0;

    double unscale_ll(double per_sample_ll) const {
        return static_cast<double>(n) * (per_sample_ll - std::log(scale));
    }
};

ScaledBatch prepare(std::span<const double> data, const char* fn) {
    if (data.empty()) throw std::invalid_argument(std::string(fn) + ": empty batch");
    double sum = 0.0;
    for (double x : data) {
        if (!(x > 0.0) || !std::isfinite(x)) detail::domain_fail(fn, "batch values must be positive and finite");
        sum += x;
    }
    ScaledBatch b;
    b.n = data.size();
    b.scale = sum / static_cast<double>(b.n);
    b.y.reserve(b.n);
    double sy = 0.0, sl = 0.0;
    for (double x : data) {
        const double y = x / b.scale;
        b.y.push_back(y);
        sy += y;
        sl += std::log(y);
    }
    b.mean_y = sy / static_cast<double>(b.n);
    b.mean_log_y = sl / static_cast<double>(b.n);
    return b;
}

bool alpha_in_bounds(double log_alpha) {
    return log_alpha >= std::log(kMinAlpha) && log_alpha <= std::log(kMaxAlpha);
}

// Per-sample negative log-likelihood of the gamma model at shape alpha with
// the rate profiled out (beta = alpha / mean).
double gamma_profile_nll(const ScaledBatch& b, double alpha) {
    const double beta = alpha / b.mean_y;
    return -(alpha * std::log(beta) - log_gamma(alpha) + (alpha - 1.0) * b.mean_log_y - beta * b.mean_y);
}

double ncgamma_nll(const ScaledBatch& b, double alpha, double beta, double lambda) {
    double acc = 0.0;
    const double nu = alpha - 1.0;
    const double c = beta * lambda;
    for (double y : b.y) acc += log_bessel_i_nu_scaled(nu, c * y);
    const double ll = -lambda + alpha * std::log(beta) + nu * b.mean_log_y - beta * b.mean_y +
                      acc / static_cast<double>(b.n);
    return -ll;
}

double proposed_nll(const ScaledBatch& b, double alpha, double beta, double lambda) {
    double acc = 0.0;
    if (lambda > 0.0) {
        const double c = 4.0 * beta * lambda;
        for (double y : b.y) acc += log_bessel_i0(std::sqrt(c * y));
    }
    const double ll = alpha * std::log(beta) - log_gamma(alpha) - log_laguerre_neg(alpha, lambda) +
                      (alpha - 1.0) * b.mean_log_y - beta * b.mean_y + acc / static_cast<double>(b.n);
    return -ll;
}

struct Unpacked {
    double alpha, beta, lambda;
};

std::optional<Unpacked> unpack(std::span<const double> th) {
    if (!alpha_in_bounds(th[0]) || std::fabs(th[1]) > kMaxLogBeta) return std::nullopt;
    const double lambda = softplus(th[2]);
    if (!(lambda <= kMaxLambda)) return std::nullopt;
    return Unpacked{std::exp(th[0]), std::exp(th[1]), lambda};
}

bool degenerate_batch(const ScaledBatch& b) {
    // ln(mean) - mean(ln) is zero exactly when every value is equal.
    return b.n < 2 || std::log(b.mean_y) - b.mean_log_y <= 1e-14;
}

FitResult finish(Model m, const ScaledBatch& b, double alpha, double beta_scaled, double lambda, double nll,
                 const MinimizeResult* opt) {
    FitResult r;
    r.model = m;
    r.alpha = alpha;
    r.beta = beta_scaled / b.scale;
    r.lambda = lambda;
    r.log_likelihood = b.unscale_ll(-nll);
    r.avg_log_likelihood = r.log_likelihood / static_cast<double>(b.n);
    if (opt) {
        r.converged = opt->converged;
        r.iterations = opt->iterations;
        r.grad_max_norm = opt->grad_max_norm;
    }
    return r;
}

FitResult degenerate_result(Model m, const ScaledBatch& b) {
    // Shape at its bound, rate matching the mean.
    const double alpha = m == Model::exponential ? 1.0 : kMaxAlpha;
    FitResult r = finish(m, b, alpha, alpha / b.mean_y, 0.0, gamma_profile_nll(b, alpha), nullptr);
    r.degenerate = true;
    return r;
}

// Moment-matched start for the proposed model at a fixed noncentrality:
// choose alpha so the coefficient of variation matches, then beta so the
// mean matches.
std::optional<std::array<double, 3>> proposed_moment_start(const ScaledBatch& b, double lambda) {
    double var = 0.0;
    for (double y : b.y) var += (y - b.mean_y) * (y - b.mean_y);
    var /= static_cast<double>(b.n);
    const double target = var / (b.mean_y * b.mean_y);
    auto cv2 = [lambda](double alpha) {
        const PowerParams p{alpha, 1.0, lambda};
        const double m1 = raw_moment(1, p);
        return raw_moment(2, p) / (m1 * m1) - 1.0;
    };
    double lo = std::log(1e-3), hi = std::log(1e4);
    const double cv_lo = cv2(std::exp(lo)), cv_hi = cv2(std::exp(hi));
    if (!(target < cv_lo && target > cv_hi)) return std::nullopt;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (cv2(std::exp(mid)) > target ? lo : hi) = mid;
    }
    const double alpha = std::exp(0.5 * (lo + hi));
    const double beta = alpha * laguerre_ratio(alpha, lambda) / b.mean_y;
    return std::array<double, 3>{std::log(alpha), std::log(beta), softplus_inverse(lambda)};
}

using Nll = double (*)(const ScaledBatch&, double, double, double);

// Multi-start BFGS over (ln alpha, ln beta, softplus^-1 lambda). The first
// start sits on the nested gamma optimum with lambda ~ 0, so the best run is
// never worse than the gamma fit.
FitResult fit_three_parameter(Model m, std::span<const double> data, const OptimizerConfig& cfg, std::uint64_t seed,
                              Nll nll, const char* fn) {
    cfg.validate();
    const ScaledBatch b = prepare(data, fn);
    if (degenerate_batch(b)) return degenerate_result(m, b);

    const FitResult g = fit_gamma(data, cfg);
    const double g_log_alpha = std::log(g.alpha);
    const double g_log_beta = std::log(g.beta * b.scale);

    const Objective f = [&b, nll](std::span<const double> th) {
        const auto u = unpack(th);
        if (!u) return kInf;
        const double v = nll(b, u->alpha, u->beta, u->lambda);
        return std::isfinite(v) ? v : kInf;
    };

    std::vector<std::vector<double>> starts;
    starts.push_back({g_log_alpha, g_log_beta, kNestedLambdaLogit});
    starts.push_back({g_log_alpha, g_log_beta, softplus_inverse(0.01)});
    if (m == Model::proposed) {
        for (double lam : {0.5, 3.0}) {
            if (auto s = proposed_moment_start(b, lam)) starts.push_back({(*s)[0], (*s)[1], (*s)[2]});
        }
    } else {
        // Cumulants: mean = (a + l)/b, var = (a + 2l)/b^2. With a = l these
        // give l = 3 mean^2 / (4 var).
        double var = 0.0;
        for (double y : b.y) var += (y - b.mean_y) * (y - b.mean_y);
        var /= static_cast<double>(b.n);
        const double lam = 0.75 * b.mean_y * b.mean_y / var;
        const double alpha = lam;
        const double beta = (alpha + lam) / b.mean_y;
        if (alpha > kMinAlpha && std::isfinite(beta)) {
            starts.push_back({std::log(alpha), std::log(beta), softplus_inverse(lam)});
        }
    }

    MinimizeResult best;
    best.fx = kInf;
    for (const auto& s : starts) {
        MinimizeResult r = minimize_bfgs(f, s, cfg);
        if (r.fx < best.fx) best = std::move(r);
    }
    RngStream rng(seed);
    for (std::size_t k = 0; k < cfg.restarts && std::isfinite(best.fx); ++k) {
        std::vector<double> s = best.x;
        for (double& v : s) v += 0.5 * rng.normal();
        s[2] = std::max(s[2], -10.0);
        MinimizeResult r = minimize_bfgs(f, s, cfg);
        if (r.fx < best.fx - 1e-12) best = std::move(r);
    }

    const auto u = unpack(best.x);
    if (!u) return degenerate_result(m, b);
    return finish(m, b, u->alpha, u->beta, u->lambda, best.fx, &best);
}

}  // namespace

std::string_view model_name(Model m) {
    switch (m) {
        case Model::exponential: return "exp";
        case Model::gamma: return "gamma";
        case Model::noncentral_gamma: return "ncgamma";
        case Model::proposed: return "proposed";
    }
    return "?";
}

std::optional<Model> parse_model(std::string_view name) {
    for (Model m : kAllModels) {
        if (model_name(m) == name) return m;
    }
    return std::nullopt;
}

FitResult fit_exponential(std::span<const double> data) {
    const ScaledBatch b = prepare(data, "fit_exponential");
    const double rate = 1.0 / b.mean_y;
    FitResult r = finish(Model::exponential, b, 1.0, rate, 0.0, -(std::log(rate) - rate * b.mean_y), nullptr);
    r.converged = true;
    return r;
}

FitResult fit_gamma(std::span<const double> data, const OptimizerConfig& cfg) {
    cfg.validate();
    const ScaledBatch b = prepare(data, "fit_gamma");
    if (degenerate_batch(b)) return degenerate_result(Model::gamma, b);

    // Closed-form approximation of the profile maximizer as the start.
    const double s = std::log(b.mean_y) - b.mean_log_y;
    const double a0 = (3.0 - s + std::sqrt((s - 3.0) * (s - 3.0) + 24.0 * s)) / (12.0 * s);
    const Objective f = [&b](std::span<const double> th) {
        if (!alpha_in_bounds(th[0])) return kInf;
        return gamma_profile_nll(b, std::exp(th[0]));
    };
    const double start = std::clamp(std::log(a0), std::log(kMinAlpha) + 1e-6, std::log(kMaxAlpha) - 1e-6);
    const MinimizeResult r = minimize_bfgs(f, {start}, cfg);
    const double alpha = std::exp(r.x[0]);
    FitResult out = finish(Model::gamma, b, alpha, alpha / b.mean_y, 0.0, r.fx, &r);
    if (alpha >= kMaxAlpha * 0.999) out.degenerate = true;
    return out;
}

FitResult fit_noncentral_gamma(std::span<const double> data, const OptimizerConfig& cfg, std::uint64_t seed) {
    return fit_three_parameter(Model::noncentral_gamma, data, cfg, seed, &ncgamma_nll, "fit_noncentral_gamma");
}

FitResult fit_proposed(std::span<const double> data, const OptimizerConfig& cfg, std::uint64_t seed) {
    return fit_three_parameter(Model::proposed, data, cfg, seed, &proposed_nll, "fit_proposed");
}

FitResult fit_model(Model m, std::span<const double> data, const OptimizerConfig& cfg, std::uint64_t seed) {
    switch (m) {
        case Model::exponential: return fit_exponential(data);
        case Model::gamma: return fit_gamma(data, cfg);
        case Model::noncentral_gamma: return fit_noncentral_gamma(data, cfg, seed);
        case Model::proposed: return fit_proposed(data, cfg, seed);
    }
    throw std::invalid_argument("fit_model: unknown model");
}

double model_log_likelihood(Model m, std::span<const double> data, double alpha, double beta, double lambda) {
    double total = 0.0;
    switch (m) {
        case Model::exponential:
            for (double x : data) total += log_pdf_exponential(x, {beta});
            return total;
        case Model::gamma:
            for (double x : data) total += log_pdf_gamma(x, {alpha, beta});
            return total;
        case Model::noncentral_gamma: return log_likelihood_noncentral_gamma(data, {alpha, beta, lambda});
        case Model::proposed: return log_likelihood_power(data, {alpha, beta, lambda});
    }
    throw std::invalid_argument("model_log_likelihood: unknown model");
}

}  // namespace pwgauss
