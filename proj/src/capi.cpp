#include "pwgauss/pwgauss.h"

#include "pwgauss/distributions.hpp"
#include "pwgauss/error.hpp"
#include "pwgauss/experiment.hpp"
#include "pwgauss/fitting.hpp"
#include "pwgauss/moments.hpp"
#include "pwgauss/sampling.hpp"
#include "pwgauss/statistics.hpp"

#include <algorithm>
#include <cstring>
#include <exception>
#include <fstream>
#include <iostream>
#include <limits>
#include <new>
#include <sstream>
#include <string>

struct pwg_rng {
    pwgauss::RngStream stream;
};

struct pwg_report {
    pwgauss::ExperimentReport report;
};

namespace {

thread_local std::string g_last_error;

pwg_status fail(pwg_status s, const char* what) {
    g_last_error = what;
    return s;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
pwg_status guarded(F&& body) {
    try {
        g_last_error.clear();
        body();
        return PWG_OK;
    } catch (const pwgauss::DomainError& e) {
        return fail(PWG_ERR_DOMAIN, e.what());
    } catch (const pwgauss::ConvergenceError& e) {
        return fail(PWG_ERR_CONVERGENCE, e.what());
    } catch (const pwgauss::TruncationError& e) {
        return fail(PWG_ERR_TRUNCATION, e.what());
    } catch (const pwgauss::IoError& e) {
        return fail(PWG_ERR_IO, e.what());
    } catch (const pwgauss::FormatError& e) {
        return fail(PWG_ERR_FORMAT, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(PWG_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PWG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PWG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(PWG_ERR_INTERNAL, "unknown error");
    }
}

void require(bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(what);
}

pwgauss::ComplexParams to_cpp(const pwg_complex_params& p) {
    return pwgauss::ComplexParams{{p.mu_re, p.mu_im}, p.sigma2, p.alpha};
}

pwgauss::PowerParams to_cpp(const pwg_power_params& p) { return pwgauss::PowerParams{p.alpha, p.beta, p.lambda}; }

pwgauss::PoissonTypeMethod to_cpp(pwg_method m) {
    switch (m) {
        case PWG_METHOD_TRUNCATED: return pwgauss::PoissonTypeMethod::truncated;
        case PWG_METHOD_MH: return pwgauss::PoissonTypeMethod::metropolis_hastings;
    }
    throw std::invalid_argument("unknown sampling method");
}

pwgauss::Model to_cpp(pwg_model m) {
    switch (m) {
        case PWG_MODEL_EXPONENTIAL: return pwgauss::Model::exponential;
        case PWG_MODEL_GAMMA: return pwgauss::Model::gamma;
        case PWG_MODEL_NONCENTRAL_GAMMA: return pwgauss::Model::noncentral_gamma;
        case PWG_MODEL_PROPOSED: return pwgauss::Model::proposed;
    }
    throw std::invalid_argument("unknown model");
}

pwg_model to_c(pwgauss::Model m) {
    switch (m) {
        case pwgauss::Model::exponential: return PWG_MODEL_EXPONENTIAL;
        case pwgauss::Model::gamma: return PWG_MODEL_GAMMA;
        case pwgauss::Model::noncentral_gamma: return PWG_MODEL_NONCENTRAL_GAMMA;
        case pwgauss::Model::proposed: return PWG_MODEL_PROPOSED;
    }
    return PWG_MODEL_EXPONENTIAL;
}

pwgauss::OptimizerConfig to_cpp(const pwg_optimizer_config* c) {
    pwgauss::OptimizerConfig out;
    if (c) {
        out.grad_tol = c->grad_tol;
        out.max_iters = c->max_iters;
        out.restarts = c->restarts;
    }
    return out;
}

// Streams to stdout for "-", otherwise to a file.
template <class Writer>
void with_output(const char* path, Writer&& write) {
    require(path != nullptr, "output path is NULL");
    if (std::strcmp(path, "-") == 0) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream os(path);
    if (!os) throw pwgauss::IoError(std::string("cannot open ") + path + " for writing");
    write(os);
    if (!os) throw pwgauss::IoError(std::string("write failed for ") + path);
}

std::vector<pwgauss::Model> parse_model_list(const char* list) {
    require(list != nullptr, "model list is NULL");
    std::vector<pwgauss::Model> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto m = pwgauss::parse_model(item);
        if (!m) throw std::invalid_argument("unknown model '" + item + "'");
        if (std::find(out.begin(), out.end(), *m) == out.end()) out.push_back(*m);
    }
    if (out.empty()) throw std::invalid_argument("model list is empty");
    return out;
}

}  // namespace

extern "C" {

const char* pwg_version(void) { return pwgauss::library_version().data(); }

const char* pwg_status_string(pwg_status status) {
    switch (status) {
        case PWG_OK: return "ok";
        case PWG_ERR_DOMAIN: return "domain error";
        case PWG_ERR_CONVERGENCE: return "convergence error";
        case PWG_ERR_TRUNCATION: return "truncation error";
        case PWG_ERR_IO: return "i/o error";
        case PWG_ERR_FORMAT: return "format error";
        case PWG_ERR_INVALID_ARGUMENT: return "invalid argument";
        case PWG_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* pwg_last_error(void) { return g_last_error.c_str(); }

pwg_status pwg_log_pdf_complex(const pwg_complex_params* p, double re, double im, double* out) {
    return guarded([&] {
        require(p && out, "NULL argument");
        *out = pwgauss::log_pdf_complex({re, im}, to_cpp(*p));
    });
}

pwg_status pwg_log_pdf_amplitude(double r, double nu, double sigma2, double alpha, double* out) {
    return guarded([&] {
        require(out, "NULL argument");
        *out = pwgauss::log_pdf_amplitude(r, {nu, sigma2, alpha});
    });
}

pwg_status pwg_log_pdf_power(const pwg_power_params* p, double x, double* out) {
    return guarded([&] {
        require(p && out, "NULL argument");
        *out = pwgauss::log_pdf_power(x, to_cpp(*p));
    });
}

pwg_status pwg_log_pmf_poisson_type(size_t n, double lambda, double alpha, double* out) {
    return guarded([&] {
        require(out, "NULL argument");
        *out = pwgauss::log_pmf_poisson_type(n, {lambda, alpha});
    });
}

pwg_status pwg_raw_moment(unsigned n, const pwg_power_params* p, double* out) {
    return guarded([&] {
        require(p && out, "NULL argument");
        *out = pwgauss::raw_moment(n, to_cpp(*p));
    });
}

pwg_status pwg_mean_variance(const pwg_power_params* p, double* mean, double* variance) {
    return guarded([&] {
        require(p && mean && variance, "NULL argument");
        const auto mv = pwgauss::mean_variance(to_cpp(*p));
        *mean = mv.mean;
        *variance = mv.variance;
    });
}

pwg_status pwg_mgf(double t, const pwg_power_params* p, double* out) {
    return guarded([&] {
        require(p && out, "NULL argument");
        *out = pwgauss::mgf(t, to_cpp(*p));
    });
}

pwg_status pwg_excess_kurtosis(const pwg_power_params* p, double* out) {
    return guarded([&] {
        require(p && out, "NULL argument");
        *out = pwgauss::excess_kurtosis(to_cpp(*p));
    });
}

pwg_status pwg_ncgamma_excess_kurtosis(const pwg_power_params* p, double* out) {
    return guarded([&] {
        require(p && out, "NULL argument");
        *out = pwgauss::ncgamma_excess_kurtosis(to_cpp(*p));
    });
}

pwg_status pwg_rng_create(uint64_t seed, pwg_rng** out) {
    return guarded([&] {
        require(out, "NULL argument");
        *out = new pwg_rng{pwgauss::RngStream(seed)};
    });
}

void pwg_rng_destroy(pwg_rng* rng) { delete rng; }

pwg_status pwg_sample_power(pwg_rng* rng, const pwg_power_params* p, pwg_method method, size_t count, double* out) {
    return guarded([&] {
        require(rng && p && (out || count == 0), "NULL argument");
        pwgauss::PowerSampler sampler(to_cpp(*p), to_cpp(method));
        for (size_t i = 0; i < count; ++i) out[i] = sampler(rng->stream);
    });
}

pwg_status pwg_sample_complex(pwg_rng* rng, const pwg_complex_params* p, pwg_method method, size_t count,
                              double* out_re, double* out_im) {
    return guarded([&] {
        require(rng && p && ((out_re && out_im) || count == 0), "NULL argument");
        pwgauss::ComplexSampler sampler(to_cpp(*p), to_cpp(method));
        for (size_t i = 0; i < count; ++i) {
            const auto z = sampler(rng->stream);
            out_re[i] = z.real();
            out_im[i] = z.imag();
        }
    });
}

pwg_status pwg_sample_poisson_type(pwg_rng* rng, double lambda, double alpha, pwg_method method, size_t count,
                                   uint64_t* out) {
    return guarded([&] {
        require(rng && (out || count == 0), "NULL argument");
        const pwgauss::PoissonTypeParams p{lambda, alpha};
        p.validate();
        if (method == PWG_METHOD_TRUNCATED) {
            const pwgauss::PoissonTypeTable table(p);
            for (size_t i = 0; i < count; ++i) out[i] = table.sample(rng->stream);
        } else {
            to_cpp(method);
            const pwgauss::MhConfig mh;
            for (size_t i = 0; i < count; ++i) out[i] = pwgauss::sample_poisson_type_mh(p, mh, rng->stream);
        }
    });
}

void pwg_optimizer_config_default(pwg_optimizer_config* cfg) {
    if (!cfg) return;
    const pwgauss::OptimizerConfig d;
    cfg->grad_tol = d.grad_tol;
    cfg->max_iters = d.max_iters;
    cfg->restarts = d.restarts;
}

pwg_status pwg_model_parse(const char* name, pwg_model* out) {
    return guarded([&] {
        require(name && out, "NULL argument");
        const auto m = pwgauss::parse_model(name);
        if (!m) throw std::invalid_argument(std::string("unknown model '") + name + "'");
        *out = to_c(*m);
    });
}

const char* pwg_model_name(pwg_model model) {
    switch (model) {
        case PWG_MODEL_EXPONENTIAL: return "exp";
        case PWG_MODEL_GAMMA: return "gamma";
        case PWG_MODEL_NONCENTRAL_GAMMA: return "ncgamma";
        case PWG_MODEL_PROPOSED: return "proposed";
    }
    return "?";
}

pwg_status pwg_fit(pwg_model model, const double* data, size_t n, const pwg_optimizer_config* cfg, uint64_t seed,
                   pwg_fit_result* out) {
    return guarded([&] {
        require(out && (data || n == 0), "NULL argument");
        const auto r = pwgauss::fit_model(to_cpp(model), {data, n}, to_cpp(cfg), seed);
        *out = pwg_fit_result{model,
                              r.alpha,
                              r.beta,
                              r.lambda,
                              r.log_likelihood,
                              r.avg_log_likelihood,
                              r.converged ? 1 : 0,
                              r.degenerate ? 1 : 0,
                              r.iterations,
                              r.grad_max_norm};
    });
}

pwg_status pwg_paired_t_test(const double* a, const double* b, size_t n, double* p_value) {
    return guarded([&] {
        require(a && b && p_value, "NULL argument");
        *p_value = pwgauss::paired_t_test_one_sided({a, n}, {b, n});
    });
}

void pwg_experiment_config_default(pwg_experiment_config* cfg) {
    if (!cfg) return;
    const pwgauss::ExperimentConfig d;
    cfg->frame_ms = d.stft.frame_ms;
    cfg->hop_ms = d.stft.hop_ms;
    cfg->window = "hann";
    cfg->fft_len = d.stft.fft_len;
    cfg->scaling = "none";
    cfg->patch_freq = d.patch_freq;
    cfg->patch_time = d.patch_time;
    cfg->models = "exp,gamma,ncgamma,proposed";
    cfg->floor_eps = d.floor_eps;
    cfg->seed = d.seed;
    cfg->averaging = "patch_total";
    cfg->threads = d.threads;
    pwg_optimizer_config_default(&cfg->optimizer);
}

pwg_status pwg_experiment_run(const char* const* inputs, size_t n_inputs, const pwg_experiment_config* cfg,
                              pwg_report** out) {
    return guarded([&] {
        require(inputs && cfg && out, "NULL argument");
        require(n_inputs > 0, "no inputs");
        pwgauss::ExperimentConfig c;
        c.stft.frame_ms = cfg->frame_ms;
        c.stft.hop_ms = cfg->hop_ms;
        const auto w = pwgauss::parse_window(cfg->window ? cfg->window : "");
        if (!w) throw std::invalid_argument("unknown window");
        c.stft.window = *w;
        c.stft.fft_len = cfg->fft_len;
        const auto s = pwgauss::parse_scaling(cfg->scaling ? cfg->scaling : "");
        if (!s) throw std::invalid_argument("unknown spectrum scaling");
        c.stft.scaling = *s;
        c.patch_freq = cfg->patch_freq;
        c.patch_time = cfg->patch_time;
        c.models = parse_model_list(cfg->models);
        c.floor_eps = cfg->floor_eps;
        c.seed = cfg->seed;
        const auto a = pwgauss::parse_averaging(cfg->averaging ? cfg->averaging : "");
        if (!a) throw std::invalid_argument("unknown averaging mode");
        c.averaging = *a;
        c.threads = cfg->threads;
        c.optimizer = to_cpp(&cfg->optimizer);

        std::vector<std::filesystem::path> paths;
        for (size_t i = 0; i < n_inputs; ++i) {
            require(inputs[i] != nullptr, "NULL input path");
            for (auto& p : pwgauss::collect_inputs(inputs[i])) paths.push_back(std::move(p));
        }
        if (paths.empty()) throw pwgauss::IoError("no .wav files found in the given inputs");
        auto* r = new pwg_report{pwgauss::run_experiment(paths, c)};
        *out = r;
    });
}

void pwg_report_destroy(pwg_report* report) { delete report; }

pwg_status pwg_report_write_json(const pwg_report* report, const char* path) {
    return guarded([&] {
        require(report, "NULL report");
        with_output(path, [&](std::ostream& os) { pwgauss::write_json(os, report->report); });
    });
}

pwg_status pwg_report_write_csv(const pwg_report* report, const char* path) {
    return guarded([&] {
        require(report, "NULL report");
        with_output(path, [&](std::ostream& os) { pwgauss::write_csv(os, report->report); });
    });
}

pwg_status pwg_report_avg_ll(const pwg_report* report, pwg_model model, double* out) {
    return guarded([&] {
        require(report && out, "NULL argument");
        const auto it = report->report.models.find(to_cpp(model));
        if (it == report->report.models.end()) throw std::invalid_argument("model was not part of the run");
        *out = it->second.avg_ll;
    });
}

pwg_status pwg_report_p_value(const pwg_report* report, pwg_model baseline, double* out) {
    return guarded([&] {
        require(report && out, "NULL argument");
        const auto it = report->report.p_values.find(to_cpp(baseline));
        if (it == report->report.p_values.end()) throw std::invalid_argument("no test for this baseline");
        *out = it->second;
    });
}

pwg_status pwg_report_patch_count(const pwg_report* report, size_t* out) {
    return guarded([&] {
        require(report && out, "NULL argument");
        *out = report->report.patches.size();
    });
}

pwg_status pwg_report_file_count(const pwg_report* report, size_t* total, size_t* failed) {
    return guarded([&] {
        require(report && total && failed, "NULL argument");
        *total = report->report.files.size();
        *failed = 0;
        for (const auto& f : report->report.files) *failed += f.ok ? 0 : 1;
    });
}

pwg_status pwg_export_density_grid_complex(const pwg_complex_params* p, double re_lo, double re_hi, size_t re_points,
                                           double im_lo, double im_hi, size_t im_points, const char* path) {
    return guarded([&] {
        require(p, "NULL params");
        const auto rows =
            pwgauss::density_grid_complex(to_cpp(*p), {re_lo, re_hi, re_points}, {im_lo, im_hi, im_points});
        with_output(path, [&](std::ostream& os) { pwgauss::write_csv(os, std::span<const pwgauss::ComplexGridRow>(rows)); });
    });
}

pwg_status pwg_export_density_grid_scalar(const char* which, const pwg_power_params* p, double lo, double hi,
                                          size_t points, const char* path) {
    return guarded([&] {
        require(which && p, "NULL argument");
        pwgauss::ScalarDensity d;
        if (std::strcmp(which, "amplitude") == 0) {
            d = pwgauss::ScalarDensity::amplitude;
        } else if (std::strcmp(which, "power") == 0) {
            d = pwgauss::ScalarDensity::power;
        } else if (std::strcmp(which, "ncgamma") == 0) {
            d = pwgauss::ScalarDensity::noncentral_gamma;
        } else {
            throw std::invalid_argument(std::string("unknown density '") + which + "'");
        }
        const auto rows = pwgauss::density_grid_scalar(d, to_cpp(*p), {lo, hi, points});
        with_output(path, [&](std::ostream& os) { pwgauss::write_csv(os, std::span<const pwgauss::ScalarGridRow>(rows)); });
    });
}

pwg_status pwg_export_kurtosis_sweep(const double* alphas, size_t n_alphas, double lambda_lo, double lambda_hi,
                                     size_t points, const char* path) {
    return guarded([&] {
        require(alphas || n_alphas == 0, "NULL alphas");
        const auto rows = pwgauss::kurtosis_sweep({alphas, n_alphas}, lambda_lo, lambda_hi, points);
        with_output(path,
                    [&](std::ostream& os) { pwgauss::write_csv(os, std::span<const pwgauss::KurtosisSweepRow>(rows)); });
    });
}

}  // extern "C"
