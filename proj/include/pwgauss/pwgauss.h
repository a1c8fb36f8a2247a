/* C interface to the pwgauss library.
 *
 * Every fallible call returns a pwg_status; on failure the message is
 * available from pwg_last_error() until the next call on the same thread.
 * Objects are opaque handles released with their *_destroy function.
 * Output file paths accept "-" for standard output.
 */
#ifndef PWGAUSS_H
#define PWGAUSS_H

#include <stddef.h>
#include <stdint.h>

#if defined(PWGAUSS_BUILDING_LIBRARY)
#define PWG_API __attribute__((visibility("default")))
#else
#define PWG_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pwg_status {
    PWG_OK = 0,
    PWG_ERR_DOMAIN = 1,
    PWG_ERR_CONVERGENCE = 2,
    PWG_ERR_TRUNCATION = 3,
    PWG_ERR_IO = 4,
    PWG_ERR_FORMAT = 5,
    PWG_ERR_INVALID_ARGUMENT = 6,
    PWG_ERR_INTERNAL = 7
} pwg_status;

PWG_API const char* pwg_version(void);
PWG_API const char* pwg_status_string(pwg_status status);
/* Thread-local message of the last failed call; "" if none. */
PWG_API const char* pwg_last_error(void);

typedef struct pwg_complex_params {
    double mu_re;
    double mu_im;
    double sigma2;
    double alpha;
} pwg_complex_params;

typedef struct pwg_power_params {
    double alpha;
    double beta;
    double lambda;
} pwg_power_params;

/* Densities (natural log). */
PWG_API pwg_status pwg_log_pdf_complex(const pwg_complex_params* p, double re, double im, double* out);
PWG_API pwg_status pwg_log_pdf_amplitude(double r, double nu, double sigma2, double alpha, double* out);
PWG_API pwg_status pwg_log_pdf_power(const pwg_power_params* p, double x, double* out);
PWG_API pwg_status pwg_log_pmf_poisson_type(size_t n, double lambda, double alpha, double* out);

/* Moments of the power distribution. */
PWG_API pwg_status pwg_raw_moment(unsigned n, const pwg_power_params* p, double* out);
PWG_API pwg_status pwg_mean_variance(const pwg_power_params* p, double* mean, double* variance);
PWG_API pwg_status pwg_mgf(double t, const pwg_power_params* p, double* out);
PWG_API pwg_status pwg_excess_kurtosis(const pwg_power_params* p, double* out);
PWG_API pwg_status pwg_ncgamma_excess_kurtosis(const pwg_power_params* p, double* out);

/* Random streams and samplers. */
typedef struct pwg_rng pwg_rng;

typedef enum pwg_method { PWG_METHOD_TRUNCATED = 0, PWG_METHOD_MH = 1 } pwg_method;

PWG_API pwg_status pwg_rng_create(uint64_t seed, pwg_rng** out);
PWG_API void pwg_rng_destroy(pwg_rng* rng);

PWG_API pwg_status pwg_sample_power(pwg_rng* rng, const pwg_power_params* p, pwg_method method, size_t count,
                                    double* out);
PWG_API pwg_status pwg_sample_complex(pwg_rng* rng, const pwg_complex_params* p, pwg_method method, size_t count,
                                      double* out_re, double* out_im);
PWG_API pwg_status pwg_sample_poisson_type(pwg_rng* rng, double lambda, double alpha, pwg_method method,
                                           size_t count, uint64_t* out);

/* Maximum-likelihood fitting. */
typedef enum pwg_model {
    PWG_MODEL_EXPONENTIAL = 0,
    PWG_MODEL_GAMMA = 1,
    PWG_MODEL_NONCENTRAL_GAMMA = 2,
    PWG_MODEL_PROPOSED = 3
} pwg_model;

typedef struct pwg_optimizer_config {
    double grad_tol;
    size_t max_iters;
    size_t restarts;
} pwg_optimizer_config;

typedef struct pwg_fit_result {
    pwg_model model;
    double alpha;
    double beta;
    double lambda;
    double log_likelihood;
    double avg_log_likelihood;
    int converged;
    int degenerate;
    size_t iterations;
    double grad_max_norm;
} pwg_fit_result;

PWG_API void pwg_optimizer_config_default(pwg_optimizer_config* cfg);
/* Parses "exp", "gamma", "ncgamma" or "proposed". */
PWG_API pwg_status pwg_model_parse(const char* name, pwg_model* out);
PWG_API const char* pwg_model_name(pwg_model model);
/* cfg may be NULL for defaults. */
PWG_API pwg_status pwg_fit(pwg_model model, const double* data, size_t n, const pwg_optimizer_config* cfg,
                           uint64_t seed, pwg_fit_result* out);
/* One-sided paired t-test of mean(a - b) > 0. */
PWG_API pwg_status pwg_paired_t_test(const double* a, const double* b, size_t n, double* p_value);

/* Spectrogram experiment. */
typedef struct pwg_experiment_config {
    double frame_ms;
    double hop_ms;
    const char* window;    /* "hann", "hamming", "rect" */
    size_t fft_len;        /* 0: frame length */
    const char* scaling;   /* "none", "window", "length" */
    size_t patch_freq;
    size_t patch_time;
    const char* models;    /* comma separated model names */
    double floor_eps;
    uint64_t seed;
    const char* averaging; /* "patch_total", "per_sample" */
    unsigned threads;      /* 0: hardware concurrency */
    pwg_optimizer_config optimizer;
} pwg_experiment_config;

typedef struct pwg_report pwg_report;

PWG_API void pwg_experiment_config_default(pwg_experiment_config* cfg);
/* Each input may be a file or a directory of .wav files. */
PWG_API pwg_status pwg_experiment_run(const char* const* inputs, size_t n_inputs, const pwg_experiment_config* cfg,
                                      pwg_report** out);
PWG_API void pwg_report_destroy(pwg_report* report);
PWG_API pwg_status pwg_report_write_json(const pwg_report* report, const char* path);
PWG_API pwg_status pwg_report_write_csv(const pwg_report* report, const char* path);
PWG_API pwg_status pwg_report_avg_ll(const pwg_report* report, pwg_model model, double* out);
/* p-value of proposed vs `baseline`. */
PWG_API pwg_status pwg_report_p_value(const pwg_report* report, pwg_model baseline, double* out);
PWG_API pwg_status pwg_report_patch_count(const pwg_report* report, size_t* out);
PWG_API pwg_status pwg_report_file_count(const pwg_report* report, size_t* total, size_t* failed);

/* CSV exports. `which` for scalar grids: "amplitude", "power", "ncgamma";
 * the amplitude grid reads p as (alpha, 1/sigma2, nu^2/sigma2). */
PWG_API pwg_status pwg_export_density_grid_complex(const pwg_complex_params* p, double re_lo, double re_hi,
                                                   size_t re_points, double im_lo, double im_hi, size_t im_points,
                                                   const char* path);
PWG_API pwg_status pwg_export_density_grid_scalar(const char* which, const pwg_power_params* p, double lo, double hi,
                                                  size_t points, const char* path);
PWG_API pwg_status pwg_export_kurtosis_sweep(const double* alphas, size_t n_alphas, double lambda_lo,
                                             double lambda_hi, size_t points, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* PWGAUSS_H */
