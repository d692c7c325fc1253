#include <doctest.h>

#include <cmath>

#include "core/rng.hpp"
#include "core/scenario.hpp"

using namespace uthresh;

TEST_CASE("analytic warps: closed forms and inverse consistency") {
    SUBCASE("uniform on [0,1] is the identity") {
        auto w = analytic_warp("uniform");
        CHECK(w.G(0.3) == doctest::Approx(0.3));
        CHECK(w.G_inverse(0.3) == doctest::Approx(0.3));
    }
    SUBCASE("uniform on [a,b]") {
        auto w = analytic_warp("uniform", 2.0, 6.0);
        CHECK(w.G(3.0) == doctest::Approx(0.25));
        CHECK(w.G(1.0) == 0.0);
        CHECK(w.G(7.0) == 1.0);
    }
    SUBCASE("triangular with peak 1/2") {
        auto w = analytic_warp("triangular");
        CHECK(w.G(0.25) == doctest::Approx(0.125));  // integrates 4t on [0, 1/4]
        CHECK(w.G(0.5) == doctest::Approx(0.5));
    }
    SUBCASE("every design satisfies G(G^-1(u)) = u on a fine grid") {
        for (const char* name : {"uniform", "triangular", "smooth-beta"}) {
            auto w = analytic_warp(name);
            for (int i = 1; i < 1000; ++i) {
                double u = static_cast<double>(i) / 1000.0;
                CHECK(w.G(w.G_inverse(u)) == doctest::Approx(u).epsilon(1e-10));
            }
        }
    }
    SUBCASE("unknown designs are rejected") {
        CHECK_THROWS_AS(analytic_warp("cauchy"), std::invalid_argument);
    }
}

TEST_CASE("sample drawing: determinism, noiseless exactness, range bound") {
    auto design = analytic_warp("uniform");
    SUBCASE("zero noise amplitude reproduces f_rho exactly") {
        Scenario sc = make_holder_scenario(1.0, "haar", design, 2.0, 0.0);
        sc.master_seed = 123;
        Sample s = draw_sample(sc, 100, 0);
        for (std::size_t i = 0; i < s.n; ++i)
            CHECK(s.y[i] == doctest::Approx(sc.f_rho(s.x[i])).epsilon(1e-14));
    }
    SUBCASE("same seed and replication give identical samples") {
        Scenario sc = make_holder_scenario(1.0, "haar", design, 2.0, 0.2);
        sc.master_seed = 321;
        Sample a = draw_sample(sc, 64, 5);
        Sample b = draw_sample(sc, 64, 5);
        CHECK(a.x == b.x);
        CHECK(a.y == b.y);
        Sample c = draw_sample(sc, 64, 6);
        CHECK(a.x != c.x);
    }
    SUBCASE("the range bound holds pair by pair") {
        Scenario sc = make_holder_scenario(0.75, "daubechies-4", design, 2.0, 0.25);
        sc.master_seed = 9;
        for (std::uint64_t rep = 0; rep < 10; ++rep) {
            Sample s = draw_sample(sc, 256, rep);
            for (double y : s.y) CHECK(std::fabs(y) <= sc.M / 2.0);
        }
    }
    SUBCASE("uniform design passes a DKW band check at n = 10^4") {
        Scenario sc = make_zero_scenario(design, 2.0, 0.1);
        sc.master_seed = 20260808;
        Sample s = draw_sample(sc, 10000, 0);
        std::sort(s.x.begin(), s.x.end());
        double worst = 0.0;
        for (std::size_t i = 0; i < s.n; ++i) {
            double ecdf_hi = static_cast<double>(i + 1) / static_cast<double>(s.n);
            double ecdf_lo = static_cast<double>(i) / static_cast<double>(s.n);
            worst = std::max(worst, std::fabs(ecdf_hi - s.x[i]));
            worst = std::max(worst, std::fabs(ecdf_lo - s.x[i]));
        }
        // 99% band sqrt(log(2/0.01) / (2n))
        double band = std::sqrt(std::log(2.0 / 0.01) / (2.0 * static_cast<double>(s.n)));
        CHECK(worst <= band);
    }
    SUBCASE("noise is symmetric: the empirical mean vanishes at the CLT scale") {
        const double a = 0.3;
        Scenario sc = make_zero_scenario(design, 2.0, a);
        sc.master_seed = 77;
        const std::size_t big = 100000;
        Sample s = draw_sample(sc, big, 0);
        double mean = 0.0;
        for (double y : s.y) mean += y;
        mean /= static_cast<double>(big);
        double sigma = a / std::sqrt(3.0);
        CHECK(std::fabs(mean) <= 4.0 * sigma / std::sqrt(static_cast<double>(big)));
    }
}

TEST_CASE("holder scenario: certified coefficients and amplitude budget") {
    auto design = analytic_warp("uniform");
    const double s = 1.0;
    Scenario sc = make_holder_scenario(s, "haar", design, 2.0, 0.2, 0.4, 8, true);

    SUBCASE("declared Besov norm equals c exactly") {
        auto grid = sc.holder_grid(8);
        CHECK(besov_sup_norm(grid, s) == doctest::Approx(0.4).epsilon(1e-13));
        // at a rougher gamma the norm grows with the level count
        CHECK(besov_sup_norm(grid, s + 0.5) > besov_sup_norm(grid, s));
    }
    SUBCASE("warped truth agrees with the explicit expansion") {
        auto grid = sc.holder_grid(8);
        RngStream rng(2);
        for (int trial = 0; trial < 50; ++trial) {
            double u = rng.uniform01();
            double direct = 0.0;
            for (int j = 0; j <= 8; ++j)
                for (int k = 0; k < (1 << j); ++k)
                    if (grid.detail[j][k] != 0.0)
                        direct += grid.detail[j][k] * sc.basis->psi_eval(j, k, u);
            CHECK(sc.f_warped(u) == doctest::Approx(direct).epsilon(1e-11).scale(1.0));
        }
    }
    SUBCASE("truncation tail matches the geometric series bound") {
        // L2 tail of levels beyond j_max: full levels give
        // sum_{j > j_max} 2^j (c 2^{-j(s+1/2)})^2 = c^2 4^{-s(j_max+1)} / (1 - 4^-s)
        const double c = 0.4;
        const int j_max = 8;
        double tail2 = 0.0;
        for (int j = j_max + 1; j < 200; ++j)
            tail2 += std::pow(2.0, j) * std::pow(c * std::pow(2.0, -j * (s + 0.5)), 2.0);
        double tail = std::sqrt(tail2);
        double bound = c * std::pow(2.0, -j_max * s) / std::sqrt(1.0 - std::pow(4.0, -s));
        CHECK(tail <= bound);
        CHECK(tail >= 0.25 * bound);  // the bound is tight up to the first-term factor
    }
    SUBCASE("over-budget construction is rejected") {
        CHECK_THROWS_AS(make_holder_scenario(1.0, "haar", design, 2.0, 0.2, 5.0),
                        std::invalid_argument);
        CHECK_THROWS_AS(make_holder_scenario(1.0, "haar", design, 2.0, 1.0),
                        std::invalid_argument);
    }
}

TEST_CASE("rkhs-sparse scenario: weak-l counting and tail sum") {
    Kernel kernel = make_kernel("indicator-partition", 1.0 / 64.0, 8.0);
    AnchorSet anchors = grid_anchors(0.0, 1.0, 64);
    const double s = 1.0;
    Scenario sc = make_rkhs_sparse_scenario(kernel, anchors, s, 100.0, 0.0, 1.0);

    SUBCASE("f_rho lies in the span exactly") {
        RngStream rng(4);
        for (int trial = 0; trial < 20; ++trial) {
            double x = rng.uniform01();
            double direct = 0.0;
            for (std::size_t l = 0; l < anchors.p; ++l)
                direct += sc.alpha[l] * kernel.eval(anchors.point(l), &x, 1);
            CHECK(sc.f_rho(x) == doctest::Approx(direct));
        }
    }
    SUBCASE("counting bound card{|alpha_l| >= lambda} = floor(lambda^{-2/(1+2s)})") {
        for (double lambda : {1.0, 0.7, 0.5, 0.3, 0.2, 0.1, 0.05, 1.0 / 32.0}) {
            std::size_t count = 0;
            for (double a : sc.alpha)
                if (std::fabs(a) >= lambda) ++count;
            auto expect = static_cast<std::size_t>(
                std::floor(std::pow(lambda, -2.0 / (1.0 + 2.0 * s)) * (1.0 + 1e-12)));
            CHECK(count == expect);
        }
    }
    SUBCASE("small-coefficient energy obeys the weak-type tail bound") {
        // sum alpha_l^2 1{alpha_l < lambda} <= lambda^{4s/(1+2s)} for unit c
        for (int e = 0; e >= -10; --e) {
            double lambda = std::pow(2.0, e);
            double sum = 0.0;
            for (double a : sc.alpha)
                if (std::fabs(a) < lambda) sum += a * a;
            CHECK(sum <= std::pow(lambda, 4.0 * s / (1.0 + 2.0 * s)));
        }
    }
}
