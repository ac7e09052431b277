#include "fou/grid.hpp"
#include "fou/rng.hpp"
#include "fou/stats.hpp"

#include <doctest.h>

#include <stdexcept>

using namespace fou;

TEST_SUITE_BEGIN("grid");

TEST_CASE("make_grid lays out the uniform partition") {
    TimeGrid g = make_grid(4);
    REQUIRE(g.points.size() == 5);
    CHECK(g.points[0] == 0.0);
    CHECK(g.points[1] == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(g.points[2] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g.points[3] == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(g.points[4] == 1.0);

    TimeGrid big = make_grid(512);
    CHECK(big.dt == doctest::Approx(1.0 / 512).epsilon(1e-16));
    CHECK(big.points.size() == 513);
}

TEST_CASE("degenerate grids are rejected") {
    CHECK_THROWS_AS(make_grid(1), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(0), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(-4), std::invalid_argument);
}

TEST_CASE("increments are a pure function of the seed spec") {
    TimeGrid g = make_grid(64);
    RngSpec spec{1234, 7};
    auto a = sample_bm_increments(g, 2, spec);
    auto b = sample_bm_increments(g, 2, spec);
    CHECK(a == b);

    auto c = sample_bm_increments(g, 2, RngSpec{1234, 8});
    CHECK(a != c);
}

TEST_CASE("increment moments match the CLT error bars") {
    TimeGrid g = make_grid(256);
    stats::MeanVar mv;
    int n_paths = 400;   // 400*256 ~ 1e5 draws
    for (int p = 0; p < n_paths; ++p) {
        auto inc = sample_bm_increments(g, 1, RngSpec{99, (std::uint64_t)p});
        for (double x : inc) mv.add(x);
    }
    double dt = g.dt;
    long long n = mv.count();
    // mean: SE = sqrt(dt/n); variance: SE ~ dt sqrt(2/n)
    CHECK(std::fabs(mv.mean()) < 4.0 * std::sqrt(dt / (double)n));
    CHECK(std::fabs(mv.variance() - dt) < 4.0 * dt * std::sqrt(2.0 / (double)n));
}

TEST_CASE("cumulative sum at t=1 has unit variance") {
    TimeGrid g = make_grid(128);
    stats::MeanVar end;
    for (int p = 0; p < 4000; ++p) {
        auto inc = sample_bm_increments(g, 1, RngSpec{5, (std::uint64_t)p});
        double s = 0.0;
        for (double x : inc) s += x;
        end.add(s);
    }
    CHECK(std::fabs(end.variance() - 1.0) < 4.0 * std::sqrt(2.0 / 4000.0));
}

TEST_SUITE_END();
