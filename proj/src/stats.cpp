#include "fou/stats.hpp"

#include <stdexcept>

namespace fou::stats {

std::vector<double> covariance_matrix(const std::vector<std::span<const double>>& cols) {
    std::size_t k = cols.size();
    if (k == 0) return {};
    std::size_t n = cols[0].size();
    for (const auto& c : cols)
        if (c.size() != n) throw std::invalid_argument("covariance_matrix: ragged columns");
    std::vector<double> mu(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) mu[a] = mean(cols[a]);
    std::vector<double> cov(k * k, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = a; b < k; ++b)
                cov[a * k + b] += (cols[a][i] - mu[a]) * (cols[b][i] - mu[b]);
    double denom = n > 1 ? (double)(n - 1) : 1.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a; b < k; ++b) {
            cov[a * k + b] /= denom;
            cov[b * k + a] = cov[a * k + b];
        }
    return cov;
}

double delta_method_var(std::span<const double> grad, std::span<const double> cov, long long n) {
    std::size_t k = grad.size();
    if (cov.size() != k * k) throw std::invalid_argument("delta_method_var: shape mismatch");
    double acc = 0.0;
    for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = 0; b < k; ++b) acc += grad[a] * cov[a * k + b] * grad[b];
    return n > 0 ? acc / (double)n : 0.0;
}

} // namespace fou::stats
