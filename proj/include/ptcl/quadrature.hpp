#pragma once

#include <cmath>
#include <vector>

#include <Eigen/Dense>

namespace ptcl {

struct GaussRule {
    std::vector<double> x;  // nodes on [-1, 1]
    std::vector<double> w;
};

// Golub-Welsch.
inline GaussRule gauss_legendre(int n) {
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) J(k, k - 1) = J(k - 1, k) = k / std::sqrt(4.0 * k * k - 1.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    GaussRule r;
    for (int k = 0; k < n; ++k) {
        r.x.push_back(es.eigenvalues()(k));
        r.w.push_back(2.0 * es.eigenvectors()(0, k) * es.eigenvectors()(0, k));
    }
    return r;
}

// Composite rule on [a, b] with n_panels equal panels.
template <class F>
auto integrate_panels(F&& f, double a, double b, int n_panels, const GaussRule& rule) {
    using R = decltype(f(a));
    R sum{};
    const double h = (b - a) / n_panels;
    for (int p = 0; p < n_panels; ++p) {
        const double lo = a + p * h;
        for (std::size_t k = 0; k < rule.x.size(); ++k) sum += rule.w[k] * 0.5 * h * f(lo + 0.5 * h * (1.0 + rule.x[k]));
    }
    return sum;
}

}  // namespace ptcl
