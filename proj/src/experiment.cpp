#include "pwgauss/experiment.hpp"

#include "pwgauss/error.hpp"
#include "pwgauss/sampling.hpp"
#include "pwgauss/statistics.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <thread>

#ifndef PWGAUSS_VERSION
#define PWGAUSS_VERSION "0.0.0"
#endif

namespace pwgauss {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double median(std::vector<double> v) {
    if (v.empty()) return kNaN;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
    const double hi = v[mid];
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

struct WorkItem {
    std::size_t file;
    Patch patch;
    std::size_t floored;
};

struct LoadedFile {
    FileRecord record;
    std::vector<Patch> patches;
};

LoadedFile load_and_tile(const std::filesystem::path& path, const ExperimentConfig& cfg) {
    LoadedFile out;
    FileRecord& rec = out.record;
    rec.path = path.string();
    try {
        Signal sig = load_wav(path);
        rec.sample_rate = sig.sample_rate;
        rec.channels = sig.channels;
        rec.n_samples = sig.samples.size();
        rec.warnings = std::move(sig.warnings);
        const PowerSpectrogram spec = stft_power(sig.samples, sig.sample_rate, cfg.stft);
        rec.n_bins = spec.n_bins();
        rec.n_frames = spec.n_frames();

        double sum = 0.0;
        for (double v : spec.values()) sum += v;
        rec.mean_power = sum / static_cast<double>(spec.values().size());
        // An all-zero file has no scale to be relative to; the floor is then
        // floor_eps itself.
        rec.floor_value = rec.mean_power > 0.0 ? cfg.floor_eps * rec.mean_power : cfg.floor_eps;

        Tiling tiles = tile_patches(spec, cfg.patch_freq, cfg.patch_time);
        rec.n_patches = tiles.patches.size();
        rec.dropped_bins = tiles.dropped_bins;
        rec.dropped_frames = tiles.dropped_frames;
        out.patches = std::move(tiles.patches);
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
        out.patches.clear();
    }
    return out;
}

std::size_t apply_floor(std::vector<double>& values, double floor) {
    std::size_t n = 0;
    for (double& v : values) {
        if (v < floor) {
            v = floor;
            ++n;
        }
    }
    return n;
}

Json fit_json(const ModelFit& f) {
    return Json{{"ll", f.ll},
                {"params", Json{{"alpha", f.alpha}, {"beta", f.beta}, {"lambda", f.lambda}}},
                {"converged", f.converged},
                {"degenerate", f.degenerate}};
}

}  // namespace

std::string_view library_version() { return PWGAUSS_VERSION; }

std::string_view averaging_name(Averaging a) { return a == Averaging::patch_total ? "patch_total" : "per_sample"; }

std::optional<Averaging> parse_averaging(std::string_view s) {
    if (s == "patch_total") return Averaging::patch_total;
    if (s == "per_sample") return Averaging::per_sample;
    return std::nullopt;
}

void ExperimentConfig::validate() const {
    if (patch_freq == 0 || patch_time == 0) detail::domain_fail("ExperimentConfig", "patch spans must be positive");
    if (!(floor_eps > 0.0) || !std::isfinite(floor_eps)) detail::domain_fail("ExperimentConfig", "floor_eps must be > 0");
    if (models.empty()) detail::domain_fail("ExperimentConfig", "no models selected");
    optimizer.validate();
}

std::vector<double> ExperimentReport::patch_metric(Model m) const {
    std::vector<double> out;
    out.reserve(patches.size());
    for (const PatchRecord& p : patches) {
        const auto it = p.fits.find(m);
        if (it == p.fits.end()) continue;
        double v = it->second.ll;
        if (config.averaging == Averaging::per_sample) v /= static_cast<double>(p.n_values);
        out.push_back(v);
    }
    return out;
}

std::vector<std::filesystem::path> collect_inputs(const std::filesystem::path& input) {
    if (!std::filesystem::is_directory(input)) return {input};
    std::vector<std::filesystem::path> out;
    for (const auto& entry : std::filesystem::directory_iterator(input)) {
        if (!entry.is_regular_file()) continue;
        const std::string ext = entry.path().extension().string();
        if (ext == ".wav" || ext == ".WAV") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::map<Model, ModelFit> fit_patch(std::span<const double> values, const ExperimentConfig& cfg, std::uint64_t seed) {
    std::map<Model, ModelFit> fits;
    for (Model m : cfg.models) {
        const FitResult r = fit_model(m, values, cfg.optimizer, seed);
        fits[m] = ModelFit{r.log_likelihood, r.alpha, r.beta, r.lambda, r.converged, r.degenerate};
    }
    return fits;
}

ExperimentReport run_experiment(const std::vector<std::filesystem::path>& paths, const ExperimentConfig& cfg) {
    cfg.validate();
    ExperimentReport report;
    report.config = cfg;
    report.library_version = std::string(library_version());

    std::vector<WorkItem> work;
    for (const auto& path : paths) {
        LoadedFile lf = load_and_tile(path, cfg);
        const std::size_t file_index = report.files.size();
        for (Patch& p : lf.patches) {
            const std::size_t floored = apply_floor(p.values, lf.record.floor_value);
            lf.record.floored += floored;
            work.push_back(WorkItem{file_index, std::move(p), floored});
        }
        report.files.push_back(std::move(lf.record));
    }
    if (work.empty()) {
        std::string msg = "run_experiment: no input produced a patch";
        for (const FileRecord& f : report.files) {
            if (!f.ok) msg += "; " + f.path + ": " + f.error;
        }
        throw std::runtime_error(msg);
    }

    report.patches.resize(work.size());
    std::vector<std::string> errors(work.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (std::size_t i = next.fetch_add(1); i < work.size(); i = next.fetch_add(1)) {
            const WorkItem& w = work[i];
            PatchRecord& rec = report.patches[i];
            rec.file = w.file;
            rec.f0 = w.patch.f0;
            rec.t0 = w.patch.t0;
            rec.n_values = w.patch.values.size();
            rec.floored = w.floored;
            try {
                rec.fits = fit_patch(w.patch.values, cfg, splitmix64(cfg.seed ^ splitmix64(i)));
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    unsigned n_threads = cfg.threads != 0 ? cfg.threads : std::max(1U, std::thread::hardware_concurrency());
    n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, work.size()));
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
    pool.clear();

    // A patch whose fit raised is dropped from every model so the per-model
    // vectors stay paired.
    std::vector<PatchRecord> kept;
    kept.reserve(report.patches.size());
    for (std::size_t i = 0; i < report.patches.size(); ++i) {
        if (errors[i].empty()) {
            kept.push_back(std::move(report.patches[i]));
        } else {
            FileRecord& f = report.files[work[i].file];
            f.warnings.push_back("patch f0=" + std::to_string(work[i].patch.f0) + " t0=" +
                                 std::to_string(work[i].patch.t0) + " dropped: " + errors[i]);
        }
    }
    report.patches = std::move(kept);

    for (Model m : cfg.models) {
        const std::vector<double> metric = report.patch_metric(m);
        ModelSummary s;
        double sum = 0.0;
        for (double v : metric) sum += v;
        s.avg_ll = metric.empty() ? kNaN : sum / static_cast<double>(metric.size());
        std::vector<double> a, b, l;
        std::size_t conv = 0, degen = 0, zero = 0;
        for (const PatchRecord& p : report.patches) {
            const ModelFit& f = p.fits.at(m);
            a.push_back(f.alpha);
            b.push_back(f.beta);
            l.push_back(f.lambda);
            conv += f.converged ? 1 : 0;
            degen += f.degenerate ? 1 : 0;
            zero += f.lambda < 1e-6 ? 1 : 0;
        }
        const double n = static_cast<double>(report.patches.size());
        s.params = ParamSummary{median(a), median(b), median(l), static_cast<double>(conv) / n,
                                static_cast<double>(degen) / n, static_cast<double>(zero) / n};
        report.models[m] = s;
    }

    const bool has_proposed = std::find(cfg.models.begin(), cfg.models.end(), Model::proposed) != cfg.models.end();
    if (has_proposed) {
        const std::vector<double> prop = report.patch_metric(Model::proposed);
        for (Model m : cfg.models) {
            if (m == Model::proposed) continue;
            const std::vector<double> base = report.patch_metric(m);
            report.p_values[m] = prop.size() >= 2 ? paired_t_test_one_sided(prop, base) : kNaN;
        }
    }
    return report;
}

void write_json(std::ostream& os, const ExperimentReport& r) {
    const ExperimentConfig& c = r.config;
    Json models_cfg = Json::array();
    for (Model m : c.models) models_cfg.push_back(std::string(model_name(m)));
    Json config{{"frame_ms", c.stft.frame_ms},
                {"hop_ms", c.stft.hop_ms},
                {"window", std::string(window_name(c.stft.window))},
                {"fft_len", c.stft.fft_len},
                {"scaling", std::string(scaling_name(c.stft.scaling))},
                {"patch_freq", c.patch_freq},
                {"patch_time", c.patch_time},
                {"models", models_cfg},
                {"floor_eps", c.floor_eps},
                {"seed", c.seed},
                {"averaging", std::string(averaging_name(c.averaging))},
                {"optimizer",
                 Json{{"grad_tol", c.optimizer.grad_tol},
                      {"max_iters", c.optimizer.max_iters},
                      {"restarts", c.optimizer.restarts}}}};

    Json files = Json::array();
    for (const FileRecord& f : r.files) {
        Json j{{"path", f.path}, {"ok", f.ok}};
        if (!f.ok) j["error"] = f.error;
        j["sample_rate"] = f.sample_rate;
        j["channels"] = f.channels;
        j["n_samples"] = f.n_samples;
        j["n_bins"] = f.n_bins;
        j["n_frames"] = f.n_frames;
        j["n_patches"] = f.n_patches;
        files.push_back(std::move(j));
    }

    Json models = Json::object();
    for (const auto& [m, s] : r.models) {
        models[std::string(model_name(m))] =
            Json{{"avg_ll", s.avg_ll},
                 {"params_summary",
                  Json{{"median_alpha", s.params.median_alpha},
                       {"median_beta", s.params.median_beta},
                       {"median_lambda", s.params.median_lambda},
                       {"converged_fraction", s.params.converged_fraction},
                       {"degenerate_fraction", s.params.degenerate_fraction},
                       {"zero_lambda_fraction", s.params.zero_lambda_fraction}}}};
    }

    Json patches = Json::array();
    for (const PatchRecord& p : r.patches) {
        Json per_model = Json::object();
        for (const auto& [m, f] : p.fits) per_model[std::string(model_name(m))] = fit_json(f);
        patches.push_back(Json{{"file", r.files[p.file].path},
                               {"f0", p.f0},
                               {"t0", p.t0},
                               {"n_values", p.n_values},
                               {"floored", p.floored},
                               {"models", per_model}});
    }

    Json tests = Json::object();
    for (const auto& [m, pv] : r.p_values) tests[std::string(model_name(m))] = pv;

    Json prov_files = Json::array();
    std::size_t total_floored = 0;
    for (const FileRecord& f : r.files) {
        total_floored += f.floored;
        prov_files.push_back(Json{{"path", f.path},
                                  {"warnings", f.warnings},
                                  {"dropped_bins", f.dropped_bins},
                                  {"dropped_frames", f.dropped_frames},
                                  {"mean_power", f.mean_power},
                                  {"floor_value", f.floor_value},
                                  {"floored", f.floored}});
    }
    Json provenance{{"library_version", r.library_version},
                    {"seed", c.seed},
                    {"patch_count", r.patches.size()},
                    {"floored_total", total_floored},
                    {"files", prov_files}};

    const Json doc{{"config", config},     {"files", files}, {"models", models},
                   {"patches", patches},   {"tests", tests}, {"provenance", provenance}};
    os << doc.dump(2) << '\n';
}

void write_csv(std::ostream& os, const ExperimentReport& r) {
    os << "file,f0,t0,n_values,floored";
    for (Model m : r.config.models) {
        const std::string n(model_name(m));
        os << ',' << n << "_ll," << n << "_alpha," << n << "_beta," << n << "_lambda," << n << "_converged";
    }
    os << '\n';
    const auto old_precision = os.precision(17);
    for (const PatchRecord& p : r.patches) {
        os << r.files[p.file].path << ',' << p.f0 << ',' << p.t0 << ',' << p.n_values << ',' << p.floored;
        for (Model m : r.config.models) {
            const ModelFit& f = p.fits.at(m);
            os << ',' << f.ll << ',' << f.alpha << ',' << f.beta << ',' << f.lambda << ',' << (f.converged ? 1 : 0);
        }
        os << '\n';
    }
    os.precision(old_precision);
}

}  // namespace pwgauss
