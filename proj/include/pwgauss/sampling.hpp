#pragma once

// Exact and MCMC samplers for the family. A complex draw is composed as
//
//   n ~ PoissonType(lambda, alpha)        (truncated inversion or MH)
//   x ~ Gamma(n + alpha, rate = 1/sigma2)
//   r = sqrt(x)
//   theta ~ VonMises(arg mu, 2 |mu| r / sigma2)
//   z = r e^{i theta}

#include "pwgauss/distributions.hpp"

#include <complex>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

namespace pwgauss {

// Seedable single-owner random stream. Identical seeds give identical
// sequences; never share one stream between threads.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed = 0x5eedULL) : engine_(seed), seed_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform();
    double normal();
    std::uint64_t next_u64() { return engine_(); }

    // Child stream for work item `index`, independent of scheduling order.
    static RngStream derive(std::uint64_t seed, std::uint64_t index);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
};

std::uint64_t splitmix64(std::uint64_t x);

enum class PoissonTypeMethod { truncated, metropolis_hastings };

struct MhConfig {
    std::size_t burn_in = 50;
    std::size_t thin = 5;
    std::size_t chain_len = 1;
    // Keep one chain alive across draws instead of a fresh chain per draw.
    // Draws are then correlated, thinned by `thin`.
    bool reuse_chain = false;

    void validate() const;
};

// The MH sampler hands alpha above this to the truncated sampler when the
// method is chosen automatically (the Poisson proposal mixes poorly there).
inline constexpr double kMhMaxAlpha = 20.0;

// Inverse-transform table over the truncated support {0..N} built from
// f(0) = 1, f(k+1) = lambda (alpha + k) / (k+1)^2 f(k). N grows until
// f(N)/F(N) < tail_tol and the terms are past their mode.
class PoissonTypeTable {
public:
    explicit PoissonTypeTable(const PoissonTypeParams& p, double tail_tol = 1e-13, std::size_t max_terms = 100'000);

    std::size_t sample(RngStream& rng) const;
    std::size_t support_size() const { return cdf_.size(); }
    // Normalized mass of n on the truncated support.
    double mass(std::size_t n) const;

private:
    std::vector<double> cdf_;
};

// Independence Metropolis-Hastings chain with Poisson(lambda) proposal.
class MhChain {
public:
    MhChain(const PoissonTypeParams& p, RngStream& rng);

    // One proposal + accept/reject; returns whether the move was accepted.
    bool step(RngStream& rng);
    std::size_t state() const { return state_; }
    std::size_t steps() const { return steps_; }
    std::size_t accepted() const { return accepted_; }

    // ln of the acceptance ratio for moving current -> proposed:
    //   ln[ current! Gamma(alpha + proposed) / (proposed! Gamma(alpha + current)) ].
    static double log_acceptance_ratio(std::size_t current, std::size_t proposed, double alpha);

private:
    PoissonTypeParams p_;
    std::poisson_distribution<std::size_t> proposal_;
    std::size_t state_ = 0;
    std::size_t steps_ = 0;
    std::size_t accepted_ = 0;
};

std::size_t sample_poisson_type_truncated(const PoissonTypeParams& p, RngStream& rng);
std::size_t sample_poisson_type_mh(const PoissonTypeParams& p, const MhConfig& cfg, RngStream& rng);

double sample_gamma(double shape, double rate, RngStream& rng);
// Returns an angle in [-pi, pi).
double sample_von_mises(double mean_dir, double kappa, RngStream& rng);

// Reusable sampler for many draws at fixed parameters.
class PowerSampler {
public:
    PowerSampler(const PowerParams& p, PoissonTypeMethod method = PoissonTypeMethod::truncated, MhConfig mh = {});

    double operator()(RngStream& rng);
    std::size_t draw_mixing_index(RngStream& rng);
    const PowerParams& params() const { return p_; }

private:
    PowerParams p_;
    PoissonTypeMethod method_;
    MhConfig mh_;
    std::optional<PoissonTypeTable> table_;
    std::optional<MhChain> chain_;
};

class ComplexSampler {
public:
    ComplexSampler(const ComplexParams& p, PoissonTypeMethod method = PoissonTypeMethod::truncated, MhConfig mh = {});

    std::complex<double> operator()(RngStream& rng);

private:
    ComplexParams p_;
    PowerSampler power_;
};

double sample_power(const PowerParams& p, RngStream& rng, PoissonTypeMethod method = PoissonTypeMethod::truncated);
std::complex<double> sample_complex(const ComplexParams& p, RngStream& rng,
                                    PoissonTypeMethod method = PoissonTypeMethod::truncated);

}  // namespace pwgauss
