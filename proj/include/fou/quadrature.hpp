#pragma once
#include <vector>

namespace fou::quad {

struct Rule {
    std::vector<double> x;
    std::vector<double> w;
    int size() const { return (int)x.size(); }
};

// Nodes/weights on [-1,1] for weight (1-x)^alpha (1+x)^beta, alpha,beta > -1.
// Newton iteration on the Jacobi recurrence; no special-function calls at
// evaluation time.
Rule gauss_jacobi(int n, double alpha, double beta);

// Plain Gauss-Legendre on [-1,1].
Rule gauss_legendre(int n);

// Same weight transplanted to [0,1]: integrates f(u) (1-u)^alpha u^beta du.
Rule gauss_jacobi01(int n, double alpha, double beta);

// Affine map of a [-1,1] rule to [a,b] (unit weight rules only).
Rule mapped(const Rule& r, double a, double b);

} // namespace fou::quad
