/* uthresh — universal thresholding estimators for bounded regression.
 *
 * C interface to the shared library: opaque handles, integer status codes,
 * strings owned by the library and released with uth_string_free. All entry
 * points are thread-compatible; handles are immutable after creation and may
 * be used from several threads at once. Error details for the calling thread
 * are available from uth_last_error().
 */
#ifndef UTHRESH_H
#define UTHRESH_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define UTH_API __declspec(dllexport)
#else
#define UTH_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum uth_status {
    UTH_OK = 0,
    UTH_ERR_INVALID_ARGUMENT = 1,
    UTH_ERR_ASSUMPTION_VIOLATED = 2, /* Gram matrix failed the almost-diagonal test */
    UTH_ERR_SINGULAR_SYSTEM = 3,
    UTH_ERR_CONFIG = 4,
    UTH_ERR_DATA = 5,
    UTH_ERR_IO = 6,
    UTH_ERR_INTERNAL = 7
} uth_status;

typedef struct uth_sample uth_sample;
typedef struct uth_kernel uth_kernel;
typedef struct uth_rkhs_fit uth_rkhs_fit;
typedef struct uth_wavelet_fit uth_wavelet_fit;

typedef struct uth_delta_certificate {
    double delta;
    double lambda_min;
    double lambda_max;
    double inf_norm_inverse;
} uth_delta_certificate;

UTH_API const char* uth_version(void);

/* Message for the last failing call on this thread; empty string when none. */
UTH_API const char* uth_last_error(void);

UTH_API void uth_string_free(char* s);

/* ---- samples ---------------------------------------------------------- */

/* x is n*dim doubles (row-major points), y is n doubles. */
UTH_API uth_status uth_sample_create(const double* x, const double* y, size_t n, size_t dim,
                                     uth_sample** out);
/* CSV with header "x,y"; one-dimensional design. */
UTH_API uth_status uth_sample_from_csv(const char* path, uth_sample** out);
UTH_API size_t uth_sample_size(const uth_sample* s);
UTH_API void uth_sample_free(uth_sample* s);

/* ---- thresholding helpers --------------------------------------------- */

UTH_API uth_status uth_threshold_schedule(size_t n, double T, double* t_n, double* lambda_n);
UTH_API uth_status uth_hard_threshold(const double* z, size_t len, double lambda, double* out);
UTH_API uth_status uth_soft_threshold(const double* z, size_t len, double lambda, double* out);
UTH_API uth_status uth_select_anchor_count(size_t n, size_t* p);
/* s <= 0 requests the adaptive level choice. */
UTH_API uth_status uth_select_max_level(size_t n, double s, int* J);

/* ---- kernels ----------------------------------------------------------- */

/* name: "gaussian" | "laplacian" | "indicator-partition" */
UTH_API uth_status uth_kernel_create(const char* name, double bandwidth, double scale,
                                     uth_kernel** out);
/* Caller-supplied symmetric kernel bounded by kappa; ctx is passed through. */
UTH_API uth_status uth_kernel_create_custom(double (*eval)(const double* a, const double* b,
                                                           size_t dim, void* ctx),
                                            void* ctx, double kappa, uth_kernel** out);
UTH_API void uth_kernel_free(uth_kernel* k);

/* ---- kernel thresholding estimator ------------------------------------- */

/* anchors: p*dim doubles. Fails with UTH_ERR_ASSUMPTION_VIOLATED /
 * UTH_ERR_SINGULAR_SYSTEM when the design cannot be certified or solved. */
UTH_API uth_status uth_rkhs_fit_create(const uth_sample* sample, const uth_kernel* kernel,
                                       const double* anchors, size_t p, double T,
                                       uth_rkhs_fit** out);
UTH_API double uth_rkhs_fit_eval(const uth_rkhs_fit* fit, const double* x, size_t dim);
UTH_API size_t uth_rkhs_fit_anchor_count(const uth_rkhs_fit* fit);
/* Buffers of length >= anchor count; either may be NULL. */
UTH_API uth_status uth_rkhs_fit_coefficients(const uth_rkhs_fit* fit, double* z_raw,
                                             double* z_thresholded);
UTH_API double uth_rkhs_fit_lambda(const uth_rkhs_fit* fit);
UTH_API uth_status uth_rkhs_fit_certificate(const uth_rkhs_fit* fit, uth_delta_certificate* out);
UTH_API uth_status uth_rkhs_fit_to_json(const uth_rkhs_fit* fit, char** out);
UTH_API uth_status uth_rkhs_fit_from_json(const char* text, uth_rkhs_fit** out);
UTH_API void uth_rkhs_fit_free(uth_rkhs_fit* fit);

/* Certificate for a (kernel, anchors, data) triple without fitting. */
UTH_API uth_status uth_check_assumption(const uth_sample* sample, const uth_kernel* kernel,
                                        const double* anchors, size_t p,
                                        uth_delta_certificate* out);

/* ---- wavelet thresholding estimator ------------------------------------ */

/* family: "haar" | "daubechies-4" | "daubechies-6"; J < 0 requests the
 * adaptive level choice. One-dimensional designs only. */
UTH_API uth_status uth_wavelet_fit_create(const uth_sample* sample, const char* family, double T,
                                          int J, uth_wavelet_fit** out);
UTH_API double uth_wavelet_fit_eval(const uth_wavelet_fit* fit, double x);
UTH_API int uth_wavelet_fit_level(const uth_wavelet_fit* fit);
UTH_API double uth_wavelet_fit_lambda(const uth_wavelet_fit* fit);
UTH_API uth_status uth_wavelet_fit_to_json(const uth_wavelet_fit* fit, char** out);
UTH_API uth_status uth_wavelet_fit_from_json(const char* text, uth_wavelet_fit** out);
UTH_API void uth_wavelet_fit_free(uth_wavelet_fit* fit);

/* ---- config-driven runs ------------------------------------------------- */

/* Executes one command (fit-rkhs | fit-wavelet | check-assumption |
 * simulate-ac | rate-study) described by a JSON config document, writing
 * result files into the configured output directory. overrides_json may be
 * NULL or a flat JSON object (seed, out, threads, n, T, eta, R, kernel,
 * basis, s, input, command). On success *summary_out (when non-NULL) receives
 * a JSON report for stdout. Warnings are line-buffered into *warnings_out
 * when non-NULL. */
UTH_API uth_status uth_run(const char* config_json, const char* overrides_json,
                           char** summary_out, char** warnings_out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* UTHRESH_H */
