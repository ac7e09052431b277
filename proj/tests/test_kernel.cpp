#include "fou/kernel.hpp"
#include "fou/quadrature.hpp"
#include "fou/special.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace fou;

TEST_SUITE_BEGIN("kernel");

// High-precision reference values computed with an independent
// arbitrary-precision tool before the build (beta/gamma closed forms and the
// incomplete-beta form of the kernel integral).
namespace oracle {
constexpr double c_h_060 = 0.10760051841318069364;
constexpr double c_h_075 = 0.26741115875799758103;
constexpr double c_h_090 = 0.32448825925734099558;
constexpr double K_1_025_060 = 1.064307992801427482;
constexpr double K_1_050_075 = 0.937591963698057233;
constexpr double K_1_050_090 = 0.675897991721780469;
constexpr double K_08_03_075 = 0.958072233098160276;
constexpr double gamma_075 = 1.22541670246517765;
constexpr double beta_05_025 = 5.24411510858423962;
constexpr double beta_025_075 = 4.44288293815836625;
constexpr double beta_08_01 = 10.3645993436061294;
constexpr double C2_075 = -0.611147660824083654;
constexpr double C2_060 = -0.191220087149700993;
constexpr double C2_090 = -1.29232789599876409;
} // namespace oracle

TEST_CASE("Hurst parameter domain") {
    CHECK_THROWS_AS(HurstParam(0.5), std::domain_error);
    CHECK_THROWS_AS(HurstParam(1.0), std::domain_error);
    CHECK_THROWS_AS(HurstParam(0.3), std::domain_error);
    CHECK_NOTHROW(HurstParam(0.51));
    CHECK_NOTHROW(HurstParam(0.99));
}

TEST_CASE("special functions hold 1e-12 against the frozen oracles") {
    CHECK(special::gamma_fn(0.75) == doctest::Approx(oracle::gamma_075).epsilon(1e-12));
    CHECK(special::beta_fn(0.5, 0.25) == doctest::Approx(oracle::beta_05_025).epsilon(1e-12));
    CHECK(special::beta_fn(0.25, 0.75) == doctest::Approx(oracle::beta_025_075).epsilon(1e-12));
    CHECK(special::beta_fn(0.8, 0.1) == doctest::Approx(oracle::beta_08_01).epsilon(1e-12));
}

TEST_CASE("Gauss-Jacobi rules integrate weighted monomials to beta values") {
    for (double a : {0.0, -0.25, 0.4}) {
        for (double b : {-0.9, -0.25, 0.0}) {
            quad::Rule r = quad::gauss_jacobi01(16, a, b);
            for (int k : {0, 1, 3, 7}) {
                double acc = 0.0;
                for (int i = 0; i < r.size(); ++i) acc += r.w[i] * std::pow(r.x[i], k);
                CHECK(acc == doctest::Approx(special::beta_fn(b + k + 1.0, a + 1.0)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("c_H matches the beta-function oracle and vanishes toward H=1/2") {
    CHECK(c_H(HurstParam(0.6)) == doctest::Approx(oracle::c_h_060).epsilon(1e-9));
    CHECK(c_H(HurstParam(0.75)) == doctest::Approx(oracle::c_h_075).epsilon(1e-9));
    CHECK(c_H(HurstParam(0.9)) == doctest::Approx(oracle::c_h_090).epsilon(1e-9));
    CHECK(c_H(HurstParam(0.5001)) < 0.02);
}

TEST_CASE("eval_kernel: causality, positivity, domain, oracle values") {
    HurstParam H(0.75);
    CHECK(eval_kernel(H, 0.5, 0.7) == 0.0);
    CHECK(eval_kernel(H, 0.5, 0.5) == 0.0);
    CHECK(eval_kernel(H, 1.0, 0.3) > 0.0);
    CHECK_THROWS_AS(eval_kernel(H, 0.5, 0.0), std::domain_error);
    CHECK_THROWS_AS(eval_kernel(H, 0.5, -0.1), std::domain_error);

    CHECK(eval_kernel(HurstParam(0.75), 1.0, 0.5)
          == doctest::Approx(oracle::K_1_050_075).epsilon(1e-5));
    CHECK(eval_kernel(HurstParam(0.6), 1.0, 0.25)
          == doctest::Approx(oracle::K_1_025_060).epsilon(1e-5));
    CHECK(eval_kernel(HurstParam(0.9), 1.0, 0.5)
          == doctest::Approx(oracle::K_1_050_090).epsilon(1e-5));
    CHECK(eval_kernel(HurstParam(0.75), 0.8, 0.3)
          == doctest::Approx(oracle::K_08_03_075).epsilon(1e-5));
}

TEST_CASE("kernel self-similarity K(at,as) = a^{H-1/2} K(t,s)") {
    for (double h : {0.6, 0.75, 0.9}) {
        HurstParam H(h);
        double a = 0.5;
        double lhs = eval_kernel(H, a * 1.0, a * 0.4);
        double rhs = std::pow(a, h - 0.5) * eval_kernel(H, 1.0, 0.4);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("kernel matrix is lower triangular with finite positive entries") {
    HurstParam H(0.8);
    DiscreteKernel k = kernel_matrix(H, make_grid(64));
    for (int i = 0; i < 64; ++i)
        for (int j = 0; j < 64; ++j) {
            if (j > i) {
                CHECK(k.at(i, j) == 0.0);
            } else {
                CHECK(std::isfinite(k.at(i, j)));
                CHECK(k.at(i, j) > 0.0);
            }
        }
}

TEST_CASE("serial and parallel builds are bit-identical") {
    HurstParam H(0.7);
    TimeGrid g = make_grid(96);
    DiscreteKernel a = kernel_matrix(H, g, Exec::serial);
    DiscreteKernel b = kernel_matrix(H, g, Exec::parallel);
    CHECK(a.m == b.m);
}

TEST_CASE("last row reproduces Var B^H_1 = 1 with grid refinement") {
    HurstParam H(0.75);
    double prev = 1.0;
    for (int n : {64, 128, 256}) {
        DiscreteKernel k = kernel_matrix(H, make_grid(n));
        double acc = 0.0;
        for (int j = 0; j < n; ++j) acc += k.at(n - 1, j) * k.at(n - 1, j);
        double err = std::fabs(acc / n - 1.0);
        CHECK(err < prev + 1e-12);
        prev = err;
    }
    CHECK(prev < 2e-3);
}

TEST_CASE("covariance reproduction within 0.01 of R_H on a pair lattice") {
    for (double h : {0.6, 0.9}) {
        HurstParam H(h);
        int n = 256;
        DiscreteKernel k = kernel_matrix(H, make_grid(n));
        double worst = 0.0;
        for (int a = n / 8; a <= n; a += n / 8)
            for (int b = n / 8; b <= n; b += n / 8) {
                double cov = 0.0;
                for (int j = 0; j < std::min(a, b); ++j) cov += k.at(a - 1, j) * k.at(b - 1, j);
                cov /= n;
                worst = std::max(worst, std::fabs(cov - fbm_covariance(H, (double)a / n, (double)b / n)));
            }
        CHECK(worst < 0.01);
    }
}

TEST_CASE("fbm covariance oracle closed forms") {
    HurstParam H(0.75);
    CHECK(fbm_covariance(H, 1.0, 1.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fbm_covariance(H, 1.0, 0.0) == doctest::Approx(0.0));
    CHECK(fbm_covariance(H, 0.5, 0.25)
          == doctest::Approx(0.5 * std::pow(0.5, 1.5)).epsilon(1e-15));
}

TEST_CASE("fit_C1 bounds the kernel and is stable under lattice refinement") {
    HurstParam H(0.75);
    double c1 = fit_C1(H, 48);
    CHECK(c1 > 0.0);
    double c1_fine = fit_C1(H, 96);
    CHECK(std::fabs(c1_fine / c1 - 1.0) <= 0.01);

    // validation on a finer, shifted lattice
    KernelEval kev(H);
    for (int k = 1; k <= 64; ++k)
        for (int l = 1; l <= 64; ++l) {
            double t = (k - 0.3) / 64.0, s = t * (l - 0.45) / 64.0;
            CHECK(kev(t, s) * std::pow(s, 0.25) <= c1_fine * 1.02);
        }
}

TEST_CASE("matrix entries obey the C1 s^{1/2-H} bound cellwise") {
    HurstParam H(0.75);
    double h = 0.75;
    int n = 128;
    DiscreteKernel k = kernel_matrix(H, make_grid(n));
    double c1 = fit_C1(H, 64);
    double dt = 1.0 / n;
    // profile functional matching the entry definition: average for j>=1, L2 for j=0
    double prof0 = std::pow(dt, 0.5 - h) * std::sqrt(1.0 / (2.0 - 2.0 * h));
    for (int i = 0; i < n; ++i) {
        CHECK(k.at(i, 0) <= c1 * prof0 * 1.05);
        for (int j = 1; j <= i; ++j) {
            double avg = (std::pow((j + 1) * dt, 1.5 - h) - std::pow(j * dt, 1.5 - h))
                         / ((1.5 - h) * dt);
            CHECK(k.at(i, j) <= c1 * avg * 1.05);
        }
    }
}

TEST_CASE("compute_C2 is negative, self-similar and matches the brute-force oracle") {
    for (double h : {0.6, 0.75, 0.9}) CHECK(compute_C2(HurstParam(h)) < 0.0);

    CHECK(compute_C2(HurstParam(0.75)) == doctest::Approx(oracle::C2_075).epsilon(1e-6));
    CHECK(compute_C2(HurstParam(0.6)) == doctest::Approx(oracle::C2_060).epsilon(1e-6));
    CHECK(compute_C2(HurstParam(0.9)) == doctest::Approx(oracle::C2_090).epsilon(1e-6));

    // independent brute-force midpoint rule at s=1 (1e6 panels)
    double h = 0.75, a = 0.5 - h, b = 0.5 + h;
    long n = 1000000;
    double acc = 0.0;
    for (long i = 0; i < n; ++i) {
        double u = (i + 0.5) / (double)n;
        acc += (1.0 - std::pow(u, a)) * std::pow(1.0 - u, -b);
    }
    acc /= (double)n;
    CHECK(compute_C2(HurstParam(0.75)) == doctest::Approx(acc).epsilon(1e-4));
}

TEST_SUITE_END();
