#pragma once

// Maximum-likelihood fitting of the four power models on a batch of
// positive values.
//
// Every batch is divided by its mean before fitting; rates are mapped back
// afterwards and the log-likelihood shifted by -n ln(mean), so results are
// scale equivariant by construction. Free parameters are optimized as
// (ln alpha, ln beta, u) with lambda = softplus(u), which lets lambda reach
// (numerically) zero.

#include "pwgauss/optimize.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace pwgauss {

enum class Model { exponential, gamma, noncentral_gamma, proposed };

inline constexpr Model kAllModels[] = {Model::exponential, Model::gamma, Model::noncentral_gamma, Model::proposed};

// "exp", "gamma", "ncgamma", "proposed".
std::string_view model_name(Model m);
std::optional<Model> parse_model(std::string_view name);

// Shape bounds explored by the optimizer.
inline constexpr double kMinAlpha = 1e-4;
inline constexpr double kMaxAlpha = 1e7;

struct FitResult {
    Model model = Model::exponential;
    // Exponential: alpha = 1, lambda = 0. Gamma: lambda = 0.
    double alpha = 1.0;
    double beta = 1.0;
    double lambda = 0.0;
    double log_likelihood = 0.0;      // total over the batch
    double avg_log_likelihood = 0.0;  // log_likelihood / n
    bool converged = false;
    // Zero-variance or single-sample batch: the shape ran to its bound.
    bool degenerate = false;
    std::size_t iterations = 0;
    double grad_max_norm = 0.0;
};

FitResult fit_exponential(std::span<const double> data);
FitResult fit_gamma(std::span<const double> data, const OptimizerConfig& cfg = {});
FitResult fit_noncentral_gamma(std::span<const double> data, const OptimizerConfig& cfg = {}, std::uint64_t seed = 0);
FitResult fit_proposed(std::span<const double> data, const OptimizerConfig& cfg = {}, std::uint64_t seed = 0);
FitResult fit_model(Model m, std::span<const double> data, const OptimizerConfig& cfg = {}, std::uint64_t seed = 0);

// Total log-likelihood of `data` under a model at the given parameters,
// evaluated directly from the densities (independent of the fit path).
double model_log_likelihood(Model m, std::span<const double> data, double alpha, double beta, double lambda);

}  // namespace pwgauss
