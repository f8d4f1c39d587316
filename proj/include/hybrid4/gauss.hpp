#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>

#include "hybrid4/jacobi.hpp"

namespace hybrid4 {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// n-point Gauss-Jacobi rule for the weight (1-x)^a (1+x)^b on [-1, 1].
/// Golub-Welsch supplies starting values, Newton on P_n polishes the nodes
/// and the weights come from the closed-form derivative expression.
inline Rule1D gauss_jacobi(int n, double alpha, double beta)
{
    check_jacobi_params(n, alpha, beta);
    Rule1D rule;
    if (n == 0)
        return rule;

    const double apb = alpha + beta;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double k = i;
        const double den = (2 * k + apb) * (2 * k + apb + 2);
        jac(i, i) = (den == 0.0) ? (beta - alpha) / (apb + 2) : (beta * beta - alpha * alpha) / den;
        if (i + 1 < n) {
            const double k1 = k + 1;
            const double num = 4 * k1 * (k1 + alpha) * (k1 + beta) * (k1 + apb);
            const double d2 = (2 * k1 + apb) * (2 * k1 + apb) * (2 * k1 + apb + 1) * (2 * k1 + apb - 1);
            jac(i, i + 1) = jac(i + 1, i) = std::sqrt(num / d2);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
    rule.nodes.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);

    const double lognorm = (apb + 1) * std::log(2.0) + std::lgamma(n + alpha + 1) + std::lgamma(n + beta + 1)
                           - std::lgamma(n + apb + 1) - std::lgamma(n + 1.0);
    rule.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = rule.nodes[i];
        double dp = 0.0;
        for (int it = 0; it < 8; ++it) {
            const double p = jacobi_p(n, alpha, beta, x);
            dp = 0.5 * (n + apb + 1) * jacobi_p(n - 1, alpha + 1, beta + 1, x);
            const double step = p / dp;
            x -= step;
            if (std::abs(step) < 1e-17)
                break;
        }
        dp = 0.5 * (n + apb + 1) * jacobi_p(n - 1, alpha + 1, beta + 1, x);
        rule.nodes[i] = x;
        rule.weights[i] = std::exp(lognorm) / ((1 - x * x) * dp * dp);
    }
    // lgamma leaves a common relative error near 1e-15 in every weight;
    // rescale to the zeroth moment 2^(a+b+1) B(a+1, b+1).
    const double mu0 = std::pow(2.0, apb + 1) * std::tgamma(alpha + 1) * std::tgamma(beta + 1) / std::tgamma(apb + 2);
    double sum = 0.0;
    for (double w : rule.weights)
        sum += w;
    for (double& w : rule.weights)
        w *= mu0 / sum;
    return rule;
}

inline Rule1D gauss_legendre(int n)
{
    return gauss_jacobi(n, 0.0, 0.0);
}

/// Gauss-Legendre rule mapped to [lo, hi].
inline Rule1D gauss_legendre(int n, double lo, double hi)
{
    Rule1D r = gauss_legendre(n);
    const double h = 0.5 * (hi - lo);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) {
        r.nodes[i] = lo + h * (r.nodes[i] + 1.0);
        r.weights[i] *= h;
    }
    return r;
}

} // namespace hybrid4
