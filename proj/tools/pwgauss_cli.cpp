// Command-line front end over the C API.

#include "pwgauss/pwgauss.h"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

namespace {

int report_failure(pwg_status s) {
    std::cerr << "error: " << pwg_status_string(s) << ": " << pwg_last_error() << '\n';
    return s == PWG_ERR_INVALID_ARGUMENT ? 2 : 1;
}

std::vector<double> parse_doubles(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(std::stod(item));
    }
    return out;
}

std::vector<std::string> split(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

struct ReportDeleter {
    void operator()(pwg_report* r) const { pwg_report_destroy(r); }
};
using ReportPtr = std::unique_ptr<pwg_report, ReportDeleter>;

struct RngDeleter {
    void operator()(pwg_rng* r) const { pwg_rng_destroy(r); }
};

// Output sink: stdout for "-", otherwise a file.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path != "-") {
            file_.open(path);
            if (!file_) throw std::runtime_error("cannot open " + path);
        }
    }
    std::ostream& stream() { return file_.is_open() ? static_cast<std::ostream&>(file_) : std::cout; }

private:
    std::ofstream file_;
};

struct FitSpectraOptions {
    std::vector<std::string> inputs;
    double frame_ms = 16.0;
    double hop_ms = 4.0;
    std::string window = "hann";
    std::size_t fft_len = 0;
    std::string scaling = "none";
    std::size_t patch_freq = 3;
    std::size_t patch_time = 20;
    std::string models = "exp,gamma,ncgamma,proposed";
    double floor_eps = 1e-10;
    std::uint64_t seed = 0;
    std::string averaging = "patch_total";
    unsigned threads = 0;
    double grad_tol = 1e-7;
    std::size_t max_iters = 500;
    std::size_t restarts = 3;
    std::string out = "-";
    std::string csv;
    bool sweep = false;
    std::string reference;
};

pwg_experiment_config make_config(const FitSpectraOptions& o) {
    pwg_experiment_config c;
    pwg_experiment_config_default(&c);
    c.frame_ms = o.frame_ms;
    c.hop_ms = o.hop_ms;
    c.window = o.window.c_str();
    c.fft_len = o.fft_len;
    c.scaling = o.scaling.c_str();
    c.patch_freq = o.patch_freq;
    c.patch_time = o.patch_time;
    c.models = o.models.c_str();
    c.floor_eps = o.floor_eps;
    c.seed = o.seed;
    c.averaging = o.averaging.c_str();
    c.threads = o.threads;
    c.optimizer.grad_tol = o.grad_tol;
    c.optimizer.max_iters = o.max_iters;
    c.optimizer.restarts = o.restarts;
    return c;
}

int run_fit_spectra(const FitSpectraOptions& o) {
    std::vector<const char*> inputs;
    for (const auto& s : o.inputs) inputs.push_back(s.c_str());

    if (!o.sweep) {
        const pwg_experiment_config c = make_config(o);
        pwg_report* raw = nullptr;
        if (auto s = pwg_experiment_run(inputs.data(), inputs.size(), &c, &raw); s != PWG_OK) return report_failure(s);
        ReportPtr report(raw);
        if (auto s = pwg_report_write_json(report.get(), o.out.c_str()); s != PWG_OK) return report_failure(s);
        if (!o.csv.empty()) {
            if (auto s = pwg_report_write_csv(report.get(), o.csv.c_str()); s != PWG_OK) return report_failure(s);
        }
        size_t total = 0, failed = 0;
        pwg_report_file_count(report.get(), &total, &failed);
        if (failed > 0) std::cerr << "warning: " << failed << " of " << total << " inputs skipped (see report)\n";
        return 0;
    }

    // Sweep: every window x scaling combination; one summary row each.
    const std::vector<std::string> models = split(o.models);
    const std::vector<double> ref = o.reference.empty() ? std::vector<double>{} : parse_doubles(o.reference);
    if (!ref.empty() && ref.size() != models.size()) {
        std::cerr << "error: --reference needs one value per model\n";
        return 2;
    }
    Sink sink(o.out);
    std::ostream& os = sink.stream();
    os << "window,scaling";
    for (const auto& m : models) os << ',' << m;
    if (!ref.empty()) os << ",max_abs_dev";
    os << '\n';
    os.precision(10);
    for (const char* window : {"hann", "hamming", "rect"}) {
        for (const char* scaling : {"none", "window", "length"}) {
            FitSpectraOptions v = o;
            v.window = window;
            v.scaling = scaling;
            const pwg_experiment_config c = make_config(v);
            pwg_report* raw = nullptr;
            if (auto s = pwg_experiment_run(inputs.data(), inputs.size(), &c, &raw); s != PWG_OK) {
                return report_failure(s);
            }
            ReportPtr report(raw);
            os << window << ',' << scaling;
            double dev = 0.0;
            for (std::size_t i = 0; i < models.size(); ++i) {
                pwg_model m;
                if (auto s = pwg_model_parse(models[i].c_str(), &m); s != PWG_OK) return report_failure(s);
                double ll = 0.0;
                if (auto s = pwg_report_avg_ll(report.get(), m, &ll); s != PWG_OK) return report_failure(s);
                os << ',' << ll;
                if (!ref.empty()) dev = std::max(dev, std::fabs(ll - ref[i]));
            }
            if (!ref.empty()) os << ',' << dev;
            os << '\n';
        }
    }
    return 0;
}

struct GridOptions {
    std::string kind = "complex";
    double mu_re = 0.0, mu_im = 0.0, sigma2 = 1.0, alpha = 1.0;
    double nu = 0.0, beta = 1.0, lambda = 0.0;
    double lo = -3.0, hi = 3.0;
    std::size_t points = 121;
    double im_lo = -3.0, im_hi = 3.0;
    std::size_t im_points = 121;
    std::string out = "-";
};

int run_density_grid(const GridOptions& o) {
    pwg_status s;
    if (o.kind == "complex") {
        const pwg_complex_params p{o.mu_re, o.mu_im, o.sigma2, o.alpha};
        s = pwg_export_density_grid_complex(&p, o.lo, o.hi, o.points, o.im_lo, o.im_hi, o.im_points, o.out.c_str());
    } else if (o.kind == "amplitude") {
        const pwg_power_params p{o.alpha, 1.0 / o.sigma2, o.nu * o.nu / o.sigma2};
        s = pwg_export_density_grid_scalar("amplitude", &p, o.lo, o.hi, o.points, o.out.c_str());
    } else {
        const pwg_power_params p{o.alpha, o.beta, o.lambda};
        s = pwg_export_density_grid_scalar(o.kind.c_str(), &p, o.lo, o.hi, o.points, o.out.c_str());
    }
    return s == PWG_OK ? 0 : report_failure(s);
}

struct SweepOptions {
    std::string alphas = "0.5,1,2";
    double lambda_lo = 0.0, lambda_hi = 10.0;
    std::size_t points = 101;
    std::string out = "-";
};

int run_kurtosis_sweep(const SweepOptions& o) {
    const std::vector<double> alphas = parse_doubles(o.alphas);
    const pwg_status s =
        pwg_export_kurtosis_sweep(alphas.data(), alphas.size(), o.lambda_lo, o.lambda_hi, o.points, o.out.c_str());
    return s == PWG_OK ? 0 : report_failure(s);
}

struct SampleOptions {
    std::string dist = "power";
    double mu_re = 0.0, mu_im = 0.0, sigma2 = 1.0, alpha = 1.0;
    double beta = 1.0, lambda = 0.0;
    std::size_t count = 10;
    std::uint64_t seed = 0;
    std::string method = "trunc";
    std::string out = "-";
};

int run_sample(const SampleOptions& o) {
    const pwg_method method = o.method == "mh" ? PWG_METHOD_MH : PWG_METHOD_TRUNCATED;
    pwg_rng* raw = nullptr;
    if (auto s = pwg_rng_create(o.seed, &raw); s != PWG_OK) return report_failure(s);
    std::unique_ptr<pwg_rng, RngDeleter> rng(raw);
    Sink sink(o.out);
    std::ostream& os = sink.stream();
    os.precision(17);
    if (o.dist == "complex") {
        const pwg_complex_params p{o.mu_re, o.mu_im, o.sigma2, o.alpha};
        std::vector<double> re(o.count), im(o.count);
        if (auto s = pwg_sample_complex(rng.get(), &p, method, o.count, re.data(), im.data()); s != PWG_OK) {
            return report_failure(s);
        }
        for (std::size_t i = 0; i < o.count; ++i) os << re[i] << ',' << im[i] << '\n';
    } else if (o.dist == "power") {
        const pwg_power_params p{o.alpha, o.beta, o.lambda};
        std::vector<double> x(o.count);
        if (auto s = pwg_sample_power(rng.get(), &p, method, o.count, x.data()); s != PWG_OK) return report_failure(s);
        for (double v : x) os << v << '\n';
    } else {
        std::vector<std::uint64_t> n(o.count);
        if (auto s = pwg_sample_poisson_type(rng.get(), o.lambda, o.alpha, method, o.count, n.data()); s != PWG_OK) {
            return report_failure(s);
        }
        for (auto v : n) os << v << '\n';
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Power-weighted noncentral complex Gaussian toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(pwg_version()));

    FitSpectraOptions fs;
    auto* fit = app.add_subcommand("fit-spectra", "Fit the power models to speech spectrogram patches");
    fit->add_option("--input", fs.inputs, "WAV file or directory (repeatable)")->required();
    fit->add_option("--frame-ms", fs.frame_ms, "STFT frame length in ms")->capture_default_str();
    fit->add_option("--hop-ms", fs.hop_ms, "STFT hop in ms")->capture_default_str();
    fit->add_option("--window", fs.window, "hann|hamming|rect")->capture_default_str();
    fit->add_option("--fft-len", fs.fft_len, "FFT length in samples (0: frame length)")->capture_default_str();
    fit->add_option("--scaling", fs.scaling, "none|window|length")->capture_default_str();
    fit->add_option("--patch-freq", fs.patch_freq, "patch height in bins")->capture_default_str();
    fit->add_option("--patch-time", fs.patch_time, "patch width in frames")->capture_default_str();
    fit->add_option("--models", fs.models, "comma-separated subset of exp,gamma,ncgamma,proposed")
        ->capture_default_str();
    fit->add_option("--floor-eps", fs.floor_eps, "power floor relative to the file's mean power")
        ->capture_default_str();
    fit->add_option("--seed", fs.seed, "seed for optimizer restarts")->capture_default_str();
    fit->add_option("--averaging", fs.averaging, "patch_total|per_sample")->capture_default_str();
    fit->add_option("--threads", fs.threads, "worker threads (0: all cores)")->capture_default_str();
    fit->add_option("--grad-tol", fs.grad_tol)->capture_default_str();
    fit->add_option("--max-iters", fs.max_iters)->capture_default_str();
    fit->add_option("--restarts", fs.restarts)->capture_default_str();
    fit->add_option("--out", fs.out, "JSON report path, or - for stdout (sweep: CSV summary)")->capture_default_str();
    fit->add_option("--csv", fs.csv, "per-patch CSV path");
    fit->add_flag("--sweep", fs.sweep, "run every window x scaling combination and print average log-likelihoods");
    fit->add_option("--reference", fs.reference, "sweep only: comma-separated reference averages, one per model");

    GridOptions g;
    auto* grid = app.add_subcommand("density-grid", "Evaluate a density on a grid and write CSV");
    grid->add_option("--kind", g.kind, "complex|amplitude|power|ncgamma")->capture_default_str();
    grid->add_option("--mu-re", g.mu_re);
    grid->add_option("--mu-im", g.mu_im);
    grid->add_option("--sigma2", g.sigma2)->capture_default_str();
    grid->add_option("--alpha", g.alpha)->capture_default_str();
    grid->add_option("--nu", g.nu, "amplitude: |mu|");
    grid->add_option("--beta", g.beta)->capture_default_str();
    grid->add_option("--lambda", g.lambda)->capture_default_str();
    grid->add_option("--lo", g.lo, "lower end (real axis for complex)")->capture_default_str();
    grid->add_option("--hi", g.hi)->capture_default_str();
    grid->add_option("--points", g.points)->capture_default_str();
    grid->add_option("--im-lo", g.im_lo)->capture_default_str();
    grid->add_option("--im-hi", g.im_hi)->capture_default_str();
    grid->add_option("--im-points", g.im_points)->capture_default_str();
    grid->add_option("--out", g.out)->capture_default_str();

    SweepOptions ks;
    auto* kurt = app.add_subcommand("kurtosis-sweep", "Excess kurtosis of the power model and the noncentral gamma");
    kurt->add_option("--alphas", ks.alphas)->capture_default_str();
    kurt->add_option("--lambda-lo", ks.lambda_lo)->capture_default_str();
    kurt->add_option("--lambda-hi", ks.lambda_hi)->capture_default_str();
    kurt->add_option("--points", ks.points)->capture_default_str();
    kurt->add_option("--out", ks.out)->capture_default_str();

    SampleOptions so;
    auto* sample = app.add_subcommand("sample", "Draw samples, one per line");
    sample->add_option("--dist", so.dist, "power|complex|poisson")
        ->check(CLI::IsMember({"power", "complex", "poisson"}))
        ->capture_default_str();
    sample->add_option("--mu-re", so.mu_re);
    sample->add_option("--mu-im", so.mu_im);
    sample->add_option("--sigma2", so.sigma2)->capture_default_str();
    sample->add_option("--alpha", so.alpha)->capture_default_str();
    sample->add_option("--beta", so.beta)->capture_default_str();
    sample->add_option("--lambda", so.lambda)->capture_default_str();
    sample->add_option("--count", so.count)->capture_default_str();
    sample->add_option("--seed", so.seed)->capture_default_str();
    sample->add_option("--method", so.method)->check(CLI::IsMember({"trunc", "mh"}))->capture_default_str();
    sample->add_option("--out", so.out)->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*fit) return run_fit_spectra(fs);
        if (*grid) return run_density_grid(g);
        if (*kurt) return run_kurtosis_sweep(ks);
        if (*sample) return run_sample(so);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
