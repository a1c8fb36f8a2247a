#include "pwgauss/sampling.hpp"

#include "pwgauss/error.hpp"
#include "pwgauss/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace pwgauss {

namespace {

constexpr double kPi = std::numbers::pi;

double wrap_angle(double theta) {
    double w = std::fmod(theta + kPi, 2.0 * kPi);
    if (w < 0.0) w += 2.0 * kPi;
    w -= kPi;
    return w >= kPi ? -kPi : w;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

double RngStream::uniform() {
    // (k + 0.5) / 2^53 never hits 0 or 1.
    const std::uint64_t k = engine_() >> 11;
    return (static_cast<double>(k) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
    // Marsaglia polar method; the spare is discarded to keep the stream
    // position a function of the call count only.
    for (;;) {
        const double u = 2.0 * uniform() - 1.0;
        const double v = 2.0 * uniform() - 1.0;
        const double s = u * u + v * v;
        if (s > 0.0 && s < 1.0) return u * std::sqrt(-2.0 * std::log(s) / s);
    }
}

RngStream RngStream::derive(std::uint64_t seed, std::uint64_t index) {
    return RngStream(splitmix64(seed ^ splitmix64(index + 0x632be59bd9b4e019ULL)));
}

void MhConfig::validate() const {
    if (thin < 1) detail::domain_fail("MhConfig", "thin must be >= 1");
    if (chain_len < 1) detail::domain_fail("MhConfig", "chain_len must be >= 1");
}

// ---------------------------------------------------------------------------

PoissonTypeTable::PoissonTypeTable(const PoissonTypeParams& p, double tail_tol, std::size_t max_terms) {
    p.validate();
    if (p.lambda == 0.0) {
        cdf_ = {1.0};
        return;
    }
    const double log_tail_tol = std::log(tail_tol);
    std::vector<double> log_f{0.0};
    double log_cum = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double dk = static_cast<double>(k);
        const double log_ratio = std::log(p.lambda * (p.alpha + dk) / ((dk + 1.0) * (dk + 1.0)));
        if (log_f.back() - log_cum < log_tail_tol && log_ratio < 0.0) break;
        if (log_f.size() >= max_terms) {
            throw TruncationError("PoissonTypeTable: tail mass not below tolerance within " +
                                  std::to_string(max_terms) + " terms");
        }
        const double next = log_f.back() + log_ratio;
        log_f.push_back(next);
        const double hi = std::max(log_cum, next);
        log_cum = hi + std::log(std::exp(log_cum - hi) + std::exp(next - hi));
    }
    cdf_.resize(log_f.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < log_f.size(); ++k) {
        acc += std::exp(log_f[k] - log_cum);
        cdf_[k] = acc;
    }
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
}

std::size_t PoissonTypeTable::sample(RngStream& rng) const {
    // Smallest n with u <= F(n).
    const double u = rng.uniform();
    const auto it = std::lower_bound(cdf_.begin(), cdf_.end(), u);
    return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(), std::ssize(cdf_) - 1));
}

double PoissonTypeTable::mass(std::size_t n) const {
    if (n >= cdf_.size()) return 0.0;
    return n == 0 ? cdf_[0] : cdf_[n] - cdf_[n - 1];
}

// ---------------------------------------------------------------------------

MhChain::MhChain(const PoissonTypeParams& p, RngStream& rng) : p_(p), proposal_(p.lambda > 0.0 ? p.lambda : 1.0) {
    p.validate();
    state_ = p.lambda > 0.0 ? proposal_(rng.engine()) : 0;
}

double MhChain::log_acceptance_ratio(std::size_t current, std::size_t proposed, double alpha) {
    // alpha = 1: the proposal is the target and the ratio is identically 1.
    if (current == proposed || alpha == 1.0) return 0.0;
    const std::size_t lo = std::min(current, proposed), hi = std::max(current, proposed);
    const double sign = proposed > current ? 1.0 : -1.0;
    if (hi - lo <= 256) {
        // Gamma(alpha + hi) hi!^-1 / (Gamma(alpha + lo) lo!^-1) as a product of
        // (alpha + k) / (k + 1); exactly 0 for alpha = 1.
        double sum = 0.0;
        for (std::size_t k = lo; k < hi; ++k) sum += std::log1p((alpha - 1.0) / (static_cast<double>(k) + 1.0));
        return sign * sum;
    }
    const double c = static_cast<double>(current);
    const double q = static_cast<double>(proposed);
    return log_gamma(c + 1.0) + log_gamma(alpha + q) - log_gamma(q + 1.0) - log_gamma(alpha + c);
}

bool MhChain::step(RngStream& rng) {
    ++steps_;
    if (p_.lambda == 0.0) {
        ++accepted_;
        return true;
    }
    const std::size_t proposed = proposal_(rng.engine());
    const double log_a = log_acceptance_ratio(state_, proposed, p_.alpha);
    const double u = rng.uniform();
    if (log_a >= 0.0 || std::log(u) < log_a) {
        state_ = proposed;
        ++accepted_;
        return true;
    }
    return false;
}

std::size_t sample_poisson_type_truncated(const PoissonTypeParams& p, RngStream& rng) {
    if (p.lambda == 0.0) {
        p.validate();
        return 0;
    }
    return PoissonTypeTable(p).sample(rng);
}

std::size_t sample_poisson_type_mh(const PoissonTypeParams& p, const MhConfig& cfg, RngStream& rng) {
    p.validate();
    cfg.validate();
    if (p.lambda == 0.0) return 0;
    MhChain chain(p, rng);
    const std::size_t total = cfg.burn_in + cfg.chain_len * cfg.thin;
    for (std::size_t i = 0; i < total; ++i) chain.step(rng);
    return chain.state();
}

// ---------------------------------------------------------------------------

double sample_gamma(double shape, double rate, RngStream& rng) {
    if (!(shape > 0.0) || !(rate > 0.0)) detail::domain_fail("sample_gamma", "shape and rate must be > 0");
    // Marsaglia-Tsang on shape >= 1; shape < 1 is boosted by U^(1/shape).
    const double a = shape < 1.0 ? shape + 1.0 : shape;
    const double d = a - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    double v = 0.0;
    for (;;) {
        double z = 0.0;
        do {
            z = rng.normal();
            v = 1.0 + c * z;
        } while (v <= 0.0);
        v = v * v * v;
        const double u = rng.uniform();
        if (std::log(u) < 0.5 * z * z + d - d * v + d * std::log(v)) break;
    }
    double x = d * v;
    if (shape < 1.0) x *= std::pow(rng.uniform(), 1.0 / shape);
    return x / rate;
}

double sample_von_mises(double mean_dir, double kappa, RngStream& rng) {
    if (!(kappa >= 0.0) || !std::isfinite(kappa)) detail::domain_fail("sample_von_mises", "kappa must be >= 0");
    if (kappa < 1e-10) return wrap_angle(kPi * (2.0 * rng.uniform() - 1.0));
    if (kappa > 1e6) {
        // Best-Fisher loses all precision in acos(f) here; the von Mises law
        // is within O(1/kappa) of N(mean, 1/kappa).
        return wrap_angle(mean_dir + rng.normal() / std::sqrt(kappa));
    }
    // Best & Fisher (1979), wrapped-Cauchy envelope.
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double s = (1.0 + rho * rho) / (2.0 * rho);
    double f = 0.0;
    for (;;) {
        const double z = std::cos(kPi * rng.uniform());
        f = (1.0 + s * z) / (s + z);
        const double c = kappa * (s - f);
        const double u2 = rng.uniform();
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) break;
    }
    const double u3 = rng.uniform();
    const double theta = (u3 > 0.5 ? 1.0 : -1.0) * std::acos(std::clamp(f, -1.0, 1.0));
    return wrap_angle(mean_dir + theta);
}

// ---------------------------------------------------------------------------

PowerSampler::PowerSampler(const PowerParams& p, PoissonTypeMethod method, MhConfig mh)
    : p_(p), method_(method), mh_(mh) {
    p.validate();
    mh.validate();
    if (method_ == PoissonTypeMethod::metropolis_hastings && p.alpha > kMhMaxAlpha) {
        method_ = PoissonTypeMethod::truncated;
    }
    if (method_ == PoissonTypeMethod::truncated) table_.emplace(mixing_params(p));
}

std::size_t PowerSampler::draw_mixing_index(RngStream& rng) {
    if (table_) return table_->sample(rng);
    const PoissonTypeParams mp = mixing_params(p_);
    if (!mh_.reuse_chain) return sample_poisson_type_mh(mp, mh_, rng);
    if (!chain_) {
        chain_.emplace(mp, rng);
        for (std::size_t i = 0; i < mh_.burn_in; ++i) chain_->step(rng);
    }
    for (std::size_t i = 0; i < mh_.thin; ++i) chain_->step(rng);
    return chain_->state();
}

double PowerSampler::operator()(RngStream& rng) {
    const std::size_t n = draw_mixing_index(rng);
    return sample_gamma(static_cast<double>(n) + p_.alpha, p_.beta, rng);
}

ComplexSampler::ComplexSampler(const ComplexParams& p, PoissonTypeMethod method, MhConfig mh)
    : p_(p), power_((p.validate(), to_power(p)), method, mh) {}

std::complex<double> ComplexSampler::operator()(RngStream& rng) {
    const double r = std::sqrt(power_(rng));
    const double kappa = 2.0 * std::abs(p_.mu) * r / p_.sigma2;
    const double theta = sample_von_mises(std::arg(p_.mu), kappa, rng);
    return std::polar(r, theta);
}

double sample_power(const PowerParams& p, RngStream& rng, PoissonTypeMethod method) {
    return PowerSampler(p, method)(rng);
}

std::complex<double> sample_complex(const ComplexParams& p, RngStream& rng, PoissonTypeMethod method) {
    return ComplexSampler(p, method)(rng);
}

}  // namespace pwgauss
