#include "uthresh.h"

#include <cstring>
#include <new>
#include <sstream>
#include <string>

#include "core/config.hpp"
#include "core/errors.hpp"
#include "core/io.hpp"
#include "core/kernels.hpp"
#include "core/rkhs.hpp"
#include "core/thresholding.hpp"
#include "core/wavelets.hpp"

// Opaque handle definitions wrap the C++ core types by value.
struct uth_sample {
    uthresh::Sample value;
};
struct uth_kernel {
    uthresh::Kernel value;
};
struct uth_rkhs_fit {
    uthresh::RkhsFit value;
};
struct uth_wavelet_fit {
    uthresh::WaveletFit value;
};

namespace {

thread_local std::string g_last_error;

uth_status record(uth_status code, const char* what) {
    g_last_error = what ? what : "";
    return code;
}

// Runs fn, translating core exceptions into status codes.
template <typename Fn>
uth_status guarded(Fn&& fn) {
    try {
        fn();
        g_last_error.clear();
        return UTH_OK;
    } catch (const uthresh::assumption_violated& e) {
        return record(UTH_ERR_ASSUMPTION_VIOLATED, e.what());
    } catch (const uthresh::singular_system& e) {
        return record(UTH_ERR_SINGULAR_SYSTEM, e.what());
    } catch (const uthresh::config_error& e) {
        return record(UTH_ERR_CONFIG, e.what());
    } catch (const uthresh::data_error& e) {
        return record(UTH_ERR_DATA, e.what());
    } catch (const uthresh::io_error& e) {
        return record(UTH_ERR_IO, e.what());
    } catch (const std::invalid_argument& e) {
        return record(UTH_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return record(UTH_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return record(UTH_ERR_INTERNAL, e.what());
    } catch (...) {
        return record(UTH_ERR_INTERNAL, "unknown error");
    }
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

void to_c(const uthresh::DeltaCertificate& c, uth_delta_certificate* out) {
    out->delta = c.delta;
    out->lambda_min = c.lambda_min;
    out->lambda_max = c.lambda_max;
    out->inf_norm_inverse = c.inf_norm_inverse;
}

}  // namespace

extern "C" {

const char* uth_version(void) { return "0.1.0"; }

const char* uth_last_error(void) { return g_last_error.c_str(); }

void uth_string_free(char* s) { delete[] s; }

uth_status uth_sample_create(const double* x, const double* y, size_t n, size_t dim,
                             uth_sample** out) {
    if (!x || !y || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new uth_sample{
            uthresh::Sample(std::vector<double>(x, x + n * dim), std::vector<double>(y, y + n), dim)};
    });
}

uth_status uth_sample_from_csv(const char* path, uth_sample** out) {
    if (!path || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new uth_sample{uthresh::ingest_xy(path)}; });
}

size_t uth_sample_size(const uth_sample* s) { return s ? s->value.n : 0; }

void uth_sample_free(uth_sample* s) { delete s; }

uth_status uth_threshold_schedule(size_t n, double T, double* t_n, double* lambda_n) {
    return guarded([&] {
        uthresh::ThresholdSchedule sched = uthresh::critical_threshold(n, T);
        if (t_n) *t_n = sched.t_n;
        if (lambda_n) *lambda_n = sched.lambda_n;
    });
}

uth_status uth_hard_threshold(const double* z, size_t len, double lambda, double* out) {
    if (!z || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        std::vector<double> r = uthresh::hard_threshold(std::vector<double>(z, z + len), lambda);
        std::memcpy(out, r.data(), len * sizeof(double));
    });
}

uth_status uth_soft_threshold(const double* z, size_t len, double lambda, double* out) {
    if (!z || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        std::vector<double> r = uthresh::soft_threshold(std::vector<double>(z, z + len), lambda);
        std::memcpy(out, r.data(), len * sizeof(double));
    });
}

uth_status uth_select_anchor_count(size_t n, size_t* p) {
    if (!p) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *p = uthresh::select_anchor_count(n); });
}

uth_status uth_select_max_level(size_t n, double s, int* J) {
    if (!J) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *J = s > 0.0 ? uthresh::select_max_level(n, s) : uthresh::select_max_level(n);
    });
}

uth_status uth_kernel_create(const char* name, double bandwidth, double scale, uth_kernel** out) {
    if (!name || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new uth_kernel{uthresh::make_kernel(name, bandwidth, scale)}; });
}

uth_status uth_kernel_create_custom(double (*eval)(const double*, const double*, size_t, void*),
                                    void* ctx, double kappa, uth_kernel** out) {
    if (!eval || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new uth_kernel{uthresh::make_custom_kernel(
            [eval, ctx](const double* a, const double* b, std::size_t dim) {
                return eval(a, b, dim, ctx);
            },
            kappa)};
    });
}

void uth_kernel_free(uth_kernel* k) { delete k; }

uth_status uth_rkhs_fit_create(const uth_sample* sample, const uth_kernel* kernel,
                               const double* anchors, size_t p, double T, uth_rkhs_fit** out) {
    if (!sample || !kernel || !anchors || !out)
        return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        uthresh::AnchorSet set(std::vector<double>(anchors, anchors + p * sample->value.dim),
                               sample->value.dim);
        *out = new uth_rkhs_fit{uthresh::fit_rkhs(sample->value, kernel->value, set, T)};
    });
}

double uth_rkhs_fit_eval(const uth_rkhs_fit* fit, const double* x, size_t dim) {
    return fit->value.evaluate(x, dim);
}

size_t uth_rkhs_fit_anchor_count(const uth_rkhs_fit* fit) { return fit->value.anchors.p; }

uth_status uth_rkhs_fit_coefficients(const uth_rkhs_fit* fit, double* z_raw,
                                     double* z_thresholded) {
    if (!fit) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    const auto& v = fit->value;
    if (z_raw) std::memcpy(z_raw, v.z_raw.data(), v.z_raw.size() * sizeof(double));
    if (z_thresholded)
        std::memcpy(z_thresholded, v.z_thresholded.data(),
                    v.z_thresholded.size() * sizeof(double));
    return UTH_OK;
}

double uth_rkhs_fit_lambda(const uth_rkhs_fit* fit) { return fit->value.schedule.lambda_n; }

uth_status uth_rkhs_fit_certificate(const uth_rkhs_fit* fit, uth_delta_certificate* out) {
    if (!fit || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    to_c(fit->value.certificate, out);
    return UTH_OK;
}

uth_status uth_rkhs_fit_to_json(const uth_rkhs_fit* fit, char** out) {
    if (!fit || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = copy_string(uthresh::rkhs_fit_to_json(fit->value)); });
}

uth_status uth_rkhs_fit_from_json(const char* text, uth_rkhs_fit** out) {
    if (!text || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new uth_rkhs_fit{uthresh::rkhs_fit_from_json(text)}; });
}

void uth_rkhs_fit_free(uth_rkhs_fit* fit) { delete fit; }

uth_status uth_check_assumption(const uth_sample* sample, const uth_kernel* kernel,
                                const double* anchors, size_t p, uth_delta_certificate* out) {
    if (!sample || !kernel || !anchors || !out)
        return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        uthresh::AnchorSet set(std::vector<double>(anchors, anchors + p * sample->value.dim),
                               sample->value.dim);
        uthresh::DesignMatrices design =
            uthresh::build_design(kernel->value, set, sample->value);
        to_c(uthresh::certify_delta(design.m_np), out);
    });
}

uth_status uth_wavelet_fit_create(const uth_sample* sample, const char* family, double T, int J,
                                  uth_wavelet_fit** out) {
    if (!sample || !family || !out)
        return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] {
        uthresh::WaveletBasis basis = uthresh::WaveletBasis::make(family);
        int level = J >= 0 ? J : uthresh::select_max_level(sample->value.n);
        *out = new uth_wavelet_fit{uthresh::fit_wavelet(sample->value, basis, T, level)};
    });
}

double uth_wavelet_fit_eval(const uth_wavelet_fit* fit, double x) {
    return fit->value.evaluate(x);
}

int uth_wavelet_fit_level(const uth_wavelet_fit* fit) { return fit->value.J; }

double uth_wavelet_fit_lambda(const uth_wavelet_fit* fit) { return fit->value.schedule.lambda_n; }

uth_status uth_wavelet_fit_to_json(const uth_wavelet_fit* fit, char** out) {
    if (!fit || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = copy_string(uthresh::wavelet_fit_to_json(fit->value)); });
}

uth_status uth_wavelet_fit_from_json(const char* text, uth_wavelet_fit** out) {
    if (!text || !out) return record(UTH_ERR_INVALID_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = new uth_wavelet_fit{uthresh::wavelet_fit_from_json(text)}; });
}

void uth_wavelet_fit_free(uth_wavelet_fit* fit) { delete fit; }

uth_status uth_run(const char* config_json, const char* overrides_json, char** summary_out,
                   char** warnings_out) {
    if (!config_json) return record(UTH_ERR_INVALID_ARGUMENT, "null config");
    return guarded([&] {
        std::string warnings;
        auto warn = [&warnings](const std::string& msg) {
            warnings += msg;
            warnings += '\n';
        };
        uthresh::RunConfig cfg =
            uthresh::parse_config(config_json, overrides_json ? overrides_json : "");
        uthresh::RunReport report = uthresh::run_command(cfg, warn);
        if (summary_out) *summary_out = copy_string(report.summary);
        if (warnings_out) *warnings_out = copy_string(warnings);
    });
}

}  // extern "C"
