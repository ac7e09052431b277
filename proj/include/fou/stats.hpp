#pragma once
#include <cmath>
#include <span>
#include <vector>

namespace fou::stats {

// Plain accumulation; callers feed values in a fixed order so results stay
// reproducible.
class MeanVar {
public:
    void add(double x) {
        ++n_;
        sum_ += x;
        sumsq_ += x * x;
    }
    long long count() const { return n_; }
    double mean() const { return n_ ? sum_ / n_ : 0.0; }
    double variance() const {
        if (n_ < 2) return 0.0;
        double m = mean();
        double v = (sumsq_ - n_ * m * m) / (n_ - 1);
        return v > 0.0 ? v : 0.0;
    }
    double sd() const { return std::sqrt(variance()); }
    double se() const { return n_ ? std::sqrt(variance() / n_) : 0.0; }

private:
    long long n_ = 0;
    double sum_ = 0.0, sumsq_ = 0.0;
};

inline double mean(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return v.empty() ? 0.0 : s / (double)v.size();
}

inline double variance(std::span<const double> v) {
    if (v.size() < 2) return 0.0;
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / (double)(v.size() - 1);
}

// Sample covariance matrix (row-major k x k) of k statistics given per-sample
// rows; used by the delta-method error bars.
std::vector<double> covariance_matrix(const std::vector<std::span<const double>>& cols);

// Var(f(means)) ~ grad^T Cov grad / n for a smooth scalar of sample means.
double delta_method_var(std::span<const double> grad, std::span<const double> cov, long long n);

} // namespace fou::stats
