#pragma once

// Spectrogram model-comparison experiment: every patch of every input file
// is fitted with each requested power model, patch log-likelihoods are
// averaged per model and the proposed model is compared against each
// baseline with a paired one-sided t-test.

#include "pwgauss/fitting.hpp"
#include "pwgauss/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pwgauss {

// How a patch's log-likelihood enters the model average.
//   patch_total: sum over the patch's samples (default)
//   per_sample:  patch total divided by the number of samples
enum class Averaging { patch_total, per_sample };

std::string_view averaging_name(Averaging a);
std::optional<Averaging> parse_averaging(std::string_view s);

struct ExperimentConfig {
    StftConfig stft;
    std::size_t patch_freq = 3;
    std::size_t patch_time = 20;
    std::vector<Model> models{kAllModels, kAllModels + 4};
    // Power values below floor_eps * (mean power of the file) are raised to
    // that floor before fitting.
    double floor_eps = 1e-10;
    std::uint64_t seed = 0;
    OptimizerConfig optimizer;
    Averaging averaging = Averaging::patch_total;
    // Worker threads for patch fitting; 0 picks the hardware concurrency.
    unsigned threads = 0;

    void validate() const;
};

struct ModelFit {
    double ll = 0.0;  // patch total log-likelihood
    double alpha = 0.0, beta = 0.0, lambda = 0.0;
    bool converged = false;
    bool degenerate = false;
};

struct PatchRecord {
    std::size_t file = 0;  // index into ExperimentReport::files
    std::size_t f0 = 0;
    std::size_t t0 = 0;
    std::size_t n_values = 0;
    std::size_t floored = 0;  // values raised to the floor
    std::map<Model, ModelFit> fits;
};

struct FileRecord {
    std::string path;
    bool ok = false;
    std::string error;  // set when !ok
    unsigned sample_rate = 0;
    unsigned channels = 0;
    std::size_t n_samples = 0;
    std::size_t n_bins = 0;
    std::size_t n_frames = 0;
    std::size_t n_patches = 0;
    std::size_t dropped_bins = 0;
    std::size_t dropped_frames = 0;
    double mean_power = 0.0;
    double floor_value = 0.0;
    std::size_t floored = 0;
    std::vector<std::string> warnings;
};

struct ParamSummary {
    double median_alpha = 0.0;
    double median_beta = 0.0;
    double median_lambda = 0.0;
    double converged_fraction = 0.0;
    double degenerate_fraction = 0.0;
    // Fraction of patches whose fitted lambda is below 1e-6.
    double zero_lambda_fraction = 0.0;
};

struct ModelSummary {
    double avg_ll = 0.0;
    ParamSummary params;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<FileRecord> files;
    std::vector<PatchRecord> patches;
    std::map<Model, ModelSummary> models;
    // One-sided p-values for H1: proposed beats the baseline, keyed by
    // baseline. NaN when fewer than two patches exist.
    std::map<Model, double> p_values;
    std::string library_version;

    // Per-patch metric vector (after the averaging normalization) for a model.
    std::vector<double> patch_metric(Model m) const;
};

// Expands a directory into its .wav/.WAV files (sorted, non-recursive); a
// file path is returned unchanged.
std::vector<std::filesystem::path> collect_inputs(const std::filesystem::path& input);

// Runs the experiment. Files that fail to load or are too short are recorded
// with their error and skipped; throws std::runtime_error when no file
// yields a patch.
ExperimentReport run_experiment(const std::vector<std::filesystem::path>& paths, const ExperimentConfig& cfg);

// Fits one patch (already floored) with every configured model.
std::map<Model, ModelFit> fit_patch(std::span<const double> values, const ExperimentConfig& cfg, std::uint64_t seed);

// JSON: {config, files[], models{}, patches[], tests{}, provenance}. The
// body is a pure function of inputs, config and seed.
void write_json(std::ostream& os, const ExperimentReport& r);
// Flat per-patch table: file,f0,t0,floored,<model>_ll,<model>_alpha,...
void write_csv(std::ostream& os, const ExperimentReport& r);

std::string_view library_version();

}  // namespace pwgauss
