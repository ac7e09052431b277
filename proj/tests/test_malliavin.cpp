#include "fou/malliavin.hpp"
#include "fou/rng.hpp"
#include "fou/simulate.hpp"

#include <doctest.h>

#include <stdexcept>

#include <cmath>

using namespace fou;

TEST_SUITE_BEGIN("malliavin");

namespace {

CylindricalFunctional constant_functional(double c) {
    CylindricalFunctional F;
    F.label = "const";
    F.times = {1.0};
    F.eval = [c](std::span<const double>) { return c; };
    F.grad = [](std::span<const double> x) { return std::vector<double>(x.size(), 0.0); };
    F.constant_gradient = true;
    return F;
}

VecPath random_path(const TimeGrid& g, int dim, std::uint64_t seed) {
    VecPath p(g, dim);
    SplitMix64 rng(seed);
    for (int k = 1; k <= g.n_steps; ++k)
        for (int d = 0; d < dim; ++d)
            p.at(k, d) = p.at(k - 1, d) + 0.1 * rng.next_gaussian();
    return p;
}

} // namespace

TEST_CASE("functional evaluation basics") {
    TimeGrid g = make_grid(64);
    CylindricalFunctional lin = make_functional("linear", 1);
    VecPath p(g, 1);
    p.at(64, 0) = 0.3;
    CHECK(eval_functional(lin, p) == doctest::Approx(0.3).epsilon(1e-15));

    CylindricalFunctional cf = constant_functional(2.5);
    CHECK(eval_functional(cf, random_path(g, 1, 4)) == 2.5);

    CylindricalFunctional prod = make_functional("product", 1);
    VecPath q(g, 1);
    q.at(32, 0) = 0.4;
    q.at(64, 0) = -0.2;
    CHECK(eval_functional(prod, q) == doctest::Approx(0.4 * -0.2).epsilon(1e-15));
}

TEST_CASE("off-grid functional times raise an alignment error") {
    TimeGrid g = make_grid(64);
    CylindricalFunctional F = make_functional("linear", 1);
    F.times = {1.0 / 3.0};
    CHECK_THROWS_AS(time_indices(F, g), std::invalid_argument);
    CHECK_THROWS_AS(make_functional("no-such-label", 1), std::invalid_argument);
}

TEST_CASE("analytic gradients match central finite differences") {
    TimeGrid g = make_grid(64);
    SplitMix64 rng(5);
    for (const std::string& label : functional_labels()) {
        CylindricalFunctional F = make_functional(label, 1);
        std::size_t m = F.times.size();
        for (int trial = 0; trial < 100; ++trial) {
            std::vector<double> x(m);
            for (auto& v : x) v = rng.next_gaussian();
            std::vector<double> grad = F.grad(x);
            for (std::size_t i = 0; i < m; ++i) {
                double eps = 1e-6;
                std::vector<double> xp = x, xm = x;
                xp[i] += eps;
                xm[i] -= eps;
                double fd = (F.eval(xp) - F.eval(xm)) / (2.0 * eps);
                CHECK(grad[i] == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
            }
        }
    }
}

TEST_CASE("directional derivative: zero direction, linear exactness, FD oracle") {
    HurstParam H(0.75);
    TimeGrid g = make_grid(64);
    DiscreteKernel k = kernel_matrix(H, g);
    VecPath p = random_path(g, 1, 7);

    std::vector<double> zero(64, 0.0);
    CylindricalFunctional lin = make_functional("linear", 1);
    CHECK(directional_derivative(lin, p, zero, k) == 0.0);

    std::vector<double> h = direction_values("cosine", g, 1);
    auto kh = apply_K(k, h, 1);
    CHECK(directional_derivative(lin, p, h, k) == doctest::Approx(kh[64]).epsilon(1e-14));

    for (const std::string& label : functional_labels()) {
        CylindricalFunctional F = make_functional(label, 1);
        double exact = directional_derivative(F, p, h, k);
        double delta = 1e-5;
        VecPath shifted = p;
        for (std::size_t i = 0; i < shifted.values.size(); ++i)
            shifted.values[i] += delta * kh[i];
        double fd = (eval_functional(F, shifted) - eval_functional(F, p)) / delta;
        CHECK(std::fabs(exact - fd) <= 1e-3 * std::max(std::fabs(exact), 0.02));
    }
}

TEST_CASE("k_inv_gradient: constant F vanishes, linear F is the kernel row") {
    HurstParam H(0.8);
    TimeGrid g = make_grid(64);
    DiscreteKernel k = kernel_matrix(H, g);
    VecPath p = random_path(g, 1, 9);

    auto gz = k_inv_gradient(constant_functional(1.0), p, k);
    for (double v : gz) CHECK(v == 0.0);

    CylindricalFunctional lin = make_functional("linear", 1);
    auto gl = k_inv_gradient(lin, p, k);
    for (int j = 0; j < 64; ++j) CHECK(gl[j] == k.at(63, j));
    auto gl2 = k_inv_gradient(lin, random_path(g, 1, 10), k);
    CHECK(gl == gl2);   // path-independent
}

TEST_CASE("duality <K^-1 DF, h> = D_h F on random directions") {
    HurstParam H(0.7);
    TimeGrid g = make_grid(96);
    DiscreteKernel k = kernel_matrix(H, g);
    VecPath p = random_path(g, 1, 21);
    SplitMix64 rng(22);
    for (const std::string& label : functional_labels()) {
        CylindricalFunctional F = make_functional(label, 1);
        auto kig = k_inv_gradient(F, p, k);
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> h(96);
            for (auto& v : h) v = rng.next_gaussian();
            double lhs = inner_product(g, kig, h, 1);
            double rhs = directional_derivative(F, p, h, k);
            CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
        }
    }
}

TEST_CASE("chain rule: K^-1 D(F^2) = 2F K^-1 DF pointwise") {
    HurstParam H(0.75);
    TimeGrid g = make_grid(64);
    DiscreteKernel k = kernel_matrix(H, g);
    VecPath p = random_path(g, 1, 33);

    CylindricalFunctional F = make_functional("product", 1);
    CylindricalFunctional F2;
    F2.label = "product_sq";
    F2.times = F.times;
    F2.eval = [F](std::span<const double> x) {
        double v = F.eval(x);
        return v * v;
    };
    F2.grad = [F](std::span<const double> x) {
        double v = F.eval(x);
        std::vector<double> gr = F.grad(x);
        for (auto& q : gr) q *= 2.0 * v;
        return gr;
    };

    double fv = eval_functional(F, p);
    auto g1 = k_inv_gradient(F, p, k);
    auto g2 = k_inv_gradient(F2, p, k);
    for (int j = 0; j < 64; ++j)
        CHECK(g2[j] == doctest::Approx(2.0 * fv * g1[j]).epsilon(1e-12));
}

TEST_CASE("direction library shapes and adaptedness flags") {
    TimeGrid g = make_grid(32);
    CHECK(direction_is_deterministic("const1"));
    CHECK(direction_is_deterministic("cosine"));
    CHECK(!direction_is_deterministic("tanhx"));
    CHECK_THROWS_AS(direction_values("tanhx", g, 1), std::invalid_argument);
    CHECK_THROWS_AS(direction_values("nope", g, 1), std::invalid_argument);
    auto ones = direction_values("const1", g, 2);
    CHECK(ones.size() == 64);
    VecPath p = random_path(g, 1, 40);
    auto tb = direction_values("tanhx", g, 1, &p);
    for (int k = 0; k < 32; ++k) CHECK(tb[k] == doctest::Approx(std::tanh(p.at(k, 0))));
}

TEST_SUITE_END();
