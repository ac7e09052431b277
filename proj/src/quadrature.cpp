#include "fou/quadrature.hpp"
#include "fou/special.hpp"

#include <cmath>
#include <stdexcept>

namespace fou::quad {

namespace {

double jacobi_p(int n, double a, double b, double x) {
    if (n == 0) return 1.0;
    double p0 = 1.0;
    double p1 = 0.5 * (a - b + (a + b + 2.0) * x);
    for (int k = 2; k <= n; ++k) {
        double c = 2.0 * k + a + b;
        double a1 = 2.0 * k * (k + a + b) * (c - 2.0);
        double a2 = (c - 1.0) * (a * a - b * b);
        double a3 = (c - 2.0) * (c - 1.0) * c;
        double a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * c;
        double p2 = ((a2 + a3 * x) * p1 - a4 * p0) / a1;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

double jacobi_dp(int n, double a, double b, double x) {
    if (n == 0) return 0.0;
    // (2n+a+b)(1-x^2) P_n' = n(a-b-(2n+a+b)x) P_n + 2(n+a)(n+b) P_{n-1}
    double pn = jacobi_p(n, a, b, x);
    double pm = jacobi_p(n - 1, a, b, x);
    double c = 2.0 * n + a + b;
    return (n * (a - b - c * x) * pn + 2.0 * (n + a) * (n + b) * pm) / (c * (1.0 - x * x));
}

} // namespace

Rule gauss_jacobi(int n, double a, double b) {
    if (n < 1) throw std::invalid_argument("gauss_jacobi: order must be >= 1");
    if (a <= -1.0 || b <= -1.0) throw std::invalid_argument("gauss_jacobi: exponents must be > -1");

    Rule r;
    r.x.resize(n);
    r.w.resize(n);

    using special::log_gamma;
    double logfac = (a + b) * std::log(2.0) + log_gamma(n + a + 1.0) + log_gamma(n + b + 1.0)
                    - log_gamma(n + a + b + 1.0) - log_gamma(n + 2.0);
    double wfac = -(2.0 * n + a + b + 2.0) / (n + a + b + 1.0) * std::exp(logfac);

    for (int i = 1; i <= n; ++i) {
        // root ordering: descending in x for ascending i
        double x = std::cos(M_PI * (0.5 * a + i - 0.25) / (0.5 * (1.0 + a + b) + n));
        double pn = 0.0, dpn = 1.0;
        for (int it = 0; it < 100; ++it) {
            pn = jacobi_p(n, a, b, x);
            dpn = jacobi_dp(n, a, b, x);
            double dx = pn / dpn;
            x -= dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        r.x[i - 1] = x;
        r.w[i - 1] = wfac / (jacobi_p(n + 1, a, b, x) * jacobi_dp(n, a, b, x));
    }
    return r;
}

Rule gauss_legendre(int n) { return gauss_jacobi(n, 0.0, 0.0); }

Rule gauss_jacobi01(int n, double a, double b) {
    Rule r = gauss_jacobi(n, a, b);
    double scale = std::pow(2.0, -(a + b + 1.0));
    for (int i = 0; i < n; ++i) {
        r.x[i] = 0.5 * (1.0 + r.x[i]);
        r.w[i] *= scale;
    }
    return r;
}

Rule mapped(const Rule& r, double a, double b) {
    Rule out = r;
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (std::size_t i = 0; i < out.x.size(); ++i) {
        out.x[i] = mid + half * r.x[i];
        out.w[i] = half * r.w[i];
    }
    return out;
}

} // namespace fou::quad
