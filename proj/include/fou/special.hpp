#pragma once
#include <cmath>
#include <stdexcept>

namespace fou::special {

inline double gamma_fn(double x) {
    if (x <= 0.0 && x == std::floor(x))
        throw std::domain_error("gamma_fn: pole at non-positive integer");
    return std::tgamma(x);
}

inline double log_gamma(double x) {
    if (x <= 0.0) throw std::domain_error("log_gamma: requires x > 0");
    return std::lgamma(x);
}

inline double beta_fn(double a, double b) {
    if (a <= 0.0 || b <= 0.0) throw std::domain_error("beta_fn: requires a, b > 0");
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

} // namespace fou::special
