#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "hybrid4/error.hpp"

namespace hybrid4 {

struct JacobiParams {
    int n = 0;
    double alpha = 0.0;
    double beta = 0.0;
};

inline void check_jacobi_params(int n, double alpha, double beta)
{
    if (n < 0 || !(alpha > -1.0) || !(beta > -1.0) || !std::isfinite(alpha) || !std::isfinite(beta))
        throw Error(ErrorCode::InvalidParams, "Jacobi polynomial needs n >= 0 and alpha, beta > -1");
}

/// Squared L2 norm of P_n^(a,b) against (1-x)^a (1+x)^b on [-1, 1].
inline double jacobi_norm_squared(int n, double alpha, double beta)
{
    check_jacobi_params(n, alpha, beta);
    const double ab1 = alpha + beta + 1.0;
    if (n == 0) {
        // The general expression is 0/0 when alpha + beta = -1.
        return std::exp(ab1 * std::log(2.0) + std::lgamma(alpha + 1.0) + std::lgamma(beta + 1.0)
                        - std::lgamma(ab1 + 1.0));
    }
    const double lg = std::lgamma(n + alpha + 1.0) + std::lgamma(n + beta + 1.0) - std::lgamma(n + 1.0)
                      - std::lgamma(n + ab1);
    return std::exp(ab1 * std::log(2.0) + lg) / (2.0 * n + ab1);
}

inline double jacobi_inverse_norm(int n, double alpha, double beta)
{
    return 1.0 / std::sqrt(jacobi_norm_squared(n, alpha, beta));
}

/// Fills out[m] = t^m P_m^(a,b)(s / t) for m = 0..out.size()-1.
///
/// This is the homogenised three-term recurrence: every term is a polynomial
/// in (s, t), so collapsed coordinates of the form s/t are never formed and
/// the apex of a pyramid (t = 0) is evaluated without special cases.
template <class T>
void jacobi_homogeneous(double alpha, double beta, const T& s, const T& t, std::span<T> out)
{
    if (out.empty())
        return;
    const double apb = alpha + beta;
    out[0] = T(1.0);
    if (out.size() == 1)
        return;
    out[1] = (0.5 * (apb + 2.0)) * s + (0.5 * (alpha - beta)) * t;
    const T t2 = t * t;
    for (std::size_t m = 2; m < out.size(); ++m) {
        const double n = static_cast<double>(m);
        const double c0 = 2.0 * n * (n + apb) * (2.0 * n + apb - 2.0);
        const double c1 = (2.0 * n + apb - 1.0) * (2.0 * n + apb) * (2.0 * n + apb - 2.0);
        const double c2 = (2.0 * n + apb - 1.0) * (alpha * alpha - beta * beta);
        const double c3 = 2.0 * (n + alpha - 1.0) * (n + beta - 1.0) * (2.0 * n + apb);
        out[m] = ((c1 / c0) * s + (c2 / c0) * t) * out[m - 1] - (c3 / c0) * t2 * out[m - 2];
    }
}

/// Same as jacobi_homogeneous but with each degree scaled to unit norm.
template <class T>
void jacobi_homogeneous_normalized(double alpha, double beta, const T& s, const T& t, std::span<T> out)
{
    jacobi_homogeneous(alpha, beta, s, t, out);
    for (std::size_t m = 0; m < out.size(); ++m)
        out[m] = jacobi_inverse_norm(static_cast<int>(m), alpha, beta) * out[m];
}

/// P_n^(a,b)(x) via the three-term recurrence (no normalisation).
template <class T>
T jacobi_p(int n, double alpha, double beta, const T& x)
{
    check_jacobi_params(n, alpha, beta);
    std::vector<T> vals(static_cast<std::size_t>(n) + 1);
    jacobi_homogeneous(alpha, beta, x, T(1.0), std::span<T>(vals));
    return vals.back();
}

/// Orthonormal Jacobi polynomial: P_n^(a,b)(x) / ||P_n^(a,b)||.
template <class T>
T jacobi_orthonormal(const JacobiParams& params, const T& x)
{
    return jacobi_inverse_norm(params.n, params.alpha, params.beta)
           * jacobi_p(params.n, params.alpha, params.beta, x);
}

} // namespace hybrid4
