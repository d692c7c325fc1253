#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "uthresh.h"

namespace fs = std::filesystem;

namespace {

double indicator_eval(const double* a, const double* b, size_t dim, void*) {
    for (size_t i = 0; i < dim; ++i)
        if (a[i] != b[i]) return 0.0;
    return 1.0;
}

}  // namespace

TEST_CASE("c api: version and error reporting") {
    CHECK(std::strlen(uth_version()) > 0);
    CHECK(uth_sample_create(nullptr, nullptr, 0, 1, nullptr) == UTH_ERR_INVALID_ARGUMENT);
    CHECK(std::strlen(uth_last_error()) > 0);
}

TEST_CASE("c api: thresholding helpers") {
    double t_n = 0.0, lambda = 0.0;
    REQUIRE(uth_threshold_schedule(100, 4.0, &t_n, &lambda) == UTH_OK);
    CHECK(lambda == doctest::Approx(0.8583864105157389));
    CHECK(uth_threshold_schedule(0, 4.0, &t_n, &lambda) == UTH_ERR_INVALID_ARGUMENT);

    double z[3] = {0.3, 0.7, -0.6};
    double out[3];
    REQUIRE(uth_hard_threshold(z, 3, 0.5, out) == UTH_OK);
    CHECK(out[0] == 0.0);
    CHECK(out[1] == 0.7);
    CHECK(out[2] == -0.6);
    REQUIRE(uth_soft_threshold(z, 3, 0.5, out) == UTH_OK);
    CHECK(out[1] == doctest::Approx(0.2));
    CHECK(uth_hard_threshold(z, 3, -1.0, out) == UTH_ERR_INVALID_ARGUMENT);

    size_t p = 0;
    REQUIRE(uth_select_anchor_count(100, &p) == UTH_OK);
    CHECK(p == 4);
    int J = -1;
    REQUIRE(uth_select_max_level(1024, 0.0, &J) == UTH_OK);
    CHECK(J == 3);
    REQUIRE(uth_select_max_level(1024, 1.0, &J) == UTH_OK);
    CHECK(J == 3);
}

TEST_CASE("c api: rkhs fit lifecycle") {
    // noiseless data in the span of a custom point-mass kernel
    const size_t n = 8;
    double xs[n], ys[n];
    for (size_t i = 0; i < n; ++i) {
        xs[i] = static_cast<double>(i) / n;
        ys[i] = (i % 2 == 0) ? 1.0 : -1.0;
    }
    uth_sample* sample = nullptr;
    REQUIRE(uth_sample_create(xs, ys, n, 1, &sample) == UTH_OK);
    CHECK(uth_sample_size(sample) == n);

    uth_kernel* kernel = nullptr;
    REQUIRE(uth_kernel_create_custom(indicator_eval, nullptr, 1.0, &kernel) == UTH_OK);

    uth_rkhs_fit* fit = nullptr;
    REQUIRE(uth_rkhs_fit_create(sample, kernel, xs, n, 0.05, &fit) == UTH_OK);
    CHECK(uth_rkhs_fit_anchor_count(fit) == n);

    std::vector<double> z(n), zt(n);
    REQUIRE(uth_rkhs_fit_coefficients(fit, z.data(), zt.data()) == UTH_OK);
    // point-mass design: K = I, so (K K^t)^-1 K Y = Y
    for (size_t i = 0; i < n; ++i) CHECK(z[i] == doctest::Approx(ys[i]).epsilon(1e-9));

    uth_delta_certificate cert{};
    REQUIRE(uth_rkhs_fit_certificate(fit, &cert) == UTH_OK);
    CHECK(cert.delta < 1.0);
    CHECK(uth_rkhs_fit_lambda(fit) > 0.0);

    double x = xs[3];
    CHECK(uth_rkhs_fit_eval(fit, &x, 1) == doctest::Approx(ys[3]).epsilon(1e-9));

    uth_rkhs_fit_free(fit);
    uth_kernel_free(kernel);

    // a gaussian fit serializes through JSON and evaluates identically
    uth_kernel* gauss = nullptr;
    REQUIRE(uth_kernel_create("gaussian", 0.2, 1.0, &gauss) == UTH_OK);
    double anchors[2] = {0.25, 0.75};
    uth_rkhs_fit* gfit = nullptr;
    REQUIRE(uth_rkhs_fit_create(sample, gauss, anchors, 2, 0.1, &gfit) == UTH_OK);
    char* text = nullptr;
    REQUIRE(uth_rkhs_fit_to_json(gfit, &text) == UTH_OK);
    uth_rkhs_fit* back = nullptr;
    REQUIRE(uth_rkhs_fit_from_json(text, &back) == UTH_OK);
    for (double q : {0.1, 0.4, 0.9}) {
        CHECK(uth_rkhs_fit_eval(back, &q, 1) ==
              doctest::Approx(uth_rkhs_fit_eval(gfit, &q, 1)).epsilon(1e-12));
    }
    uth_string_free(text);
    uth_rkhs_fit_free(back);
    uth_rkhs_fit_free(gfit);
    uth_kernel_free(gauss);
    uth_sample_free(sample);
}

TEST_CASE("c api: assumption check reports failure codes") {
    const size_t n = 4;
    double xs[n] = {0.1, 0.2, 0.3, 0.4};
    double ys[n] = {0.0, 0.0, 0.0, 0.0};
    uth_sample* sample = nullptr;
    REQUIRE(uth_sample_create(xs, ys, n, 1, &sample) == UTH_OK);

    // both anchors share the single partition cell: identical rows, singular Gram
    uth_kernel* kernel = nullptr;
    REQUIRE(uth_kernel_create("indicator-partition", 1.0, 1.0, &kernel) == UTH_OK);
    double anchors[2] = {0.4, 0.6};
    uth_delta_certificate cert{};
    CHECK(uth_check_assumption(sample, kernel, anchors, 2, &cert) ==
          UTH_ERR_ASSUMPTION_VIOLATED);
    CHECK(std::strlen(uth_last_error()) > 0);
    uth_kernel_free(kernel);

    REQUIRE(uth_kernel_create("gaussian", 0.05, 4.0, &kernel) == UTH_OK);
    double spread[2] = {0.15, 0.35};
    CHECK(uth_check_assumption(sample, kernel, spread, 2, &cert) == UTH_OK);
    CHECK(cert.delta >= 0.0);
    CHECK(cert.delta < 1.0);
    uth_kernel_free(kernel);
    uth_sample_free(sample);
}

TEST_CASE("c api: wavelet fit lifecycle") {
    const size_t n = 64;
    std::vector<double> xs(n), ys(n);
    for (size_t i = 0; i < n; ++i) {
        xs[i] = static_cast<double>(i) / n;
        ys[i] = std::sin(5.0 * xs[i]) * 0.4;
    }
    uth_sample* sample = nullptr;
    REQUIRE(uth_sample_create(xs.data(), ys.data(), n, 1, &sample) == UTH_OK);

    uth_wavelet_fit* fit = nullptr;
    REQUIRE(uth_wavelet_fit_create(sample, "haar", 0.5, -1, &fit) == UTH_OK);
    // adaptive level for n = 64: largest 2^J <= sqrt(64 / log 64) = 3.92
    CHECK(uth_wavelet_fit_level(fit) == 1);
    CHECK(uth_wavelet_fit_lambda(fit) == doctest::Approx(0.5 * std::sqrt(std::log(64.0) / 64.0)));

    char* text = nullptr;
    REQUIRE(uth_wavelet_fit_to_json(fit, &text) == UTH_OK);
    uth_wavelet_fit* back = nullptr;
    REQUIRE(uth_wavelet_fit_from_json(text, &back) == UTH_OK);
    for (double q : {0.05, 0.33, 0.77, 1.0})
        CHECK(uth_wavelet_fit_eval(back, q) == doctest::Approx(uth_wavelet_fit_eval(fit, q)));
    uth_string_free(text);
    uth_wavelet_fit_free(back);
    uth_wavelet_fit_free(fit);

    uth_wavelet_fit* bad = nullptr;
    CHECK(uth_wavelet_fit_create(sample, "symlet-8", 1.0, -1, &bad) == UTH_ERR_INVALID_ARGUMENT);
    uth_sample_free(sample);
}

TEST_CASE("c api: config-driven run") {
    fs::path dir = fs::temp_directory_path() / "uthresh_capi_run";
    fs::remove_all(dir);
    std::string config = R"({
        "command": "simulate-ac",
        "estimator": {"kind": "wavelet", "T": 1.0},
        "scenario": {
            "design": {"name": "uniform"},
            "truth": {"family": "holder", "s": 1.0, "c": 0.4, "j_max": 8, "fill": "full", "basis": "haar"},
            "noise": {"kind": "uniform", "amplitude": 0.2},
            "M": 2.0
        },
        "n": 128, "eta": [0.05, 0.1, 0.2], "R": 30, "seed": 12,
        "out": ")" + dir.string() + R"("
    })";
    char* summary = nullptr;
    char* warnings = nullptr;
    REQUIRE(uth_run(config.c_str(), nullptr, &summary, &warnings) == UTH_OK);
    CHECK(fs::exists(dir / "ac_curve.csv"));
    CHECK(summary != nullptr);
    uth_string_free(summary);
    uth_string_free(warnings);

    CHECK(uth_run(R"({"command":"nope"})", nullptr, nullptr, nullptr) == UTH_ERR_CONFIG);
    CHECK(uth_run("{not json", nullptr, nullptr, nullptr) == UTH_ERR_CONFIG);
}
