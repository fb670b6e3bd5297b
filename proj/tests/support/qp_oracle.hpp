#ifndef ICSIM_TESTS_QP_ORACLE_HPP
#define ICSIM_TESTS_QP_ORACLE_HPP

// Dense projected-gradient solver for the one-class SVM dual, independent of
// the SMO implementation it checks:
//     min 1/2 a'Ka   s.t.  0 <= a_i <= 1/(nu n),  sum a = 1.
// The feasible-set projection solves a 1-D root find; descent uses exact line
// search along the projected direction, valid for convex quadratics.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "icsim/detect/matrix.hpp"
#include "icsim/detect/ocsvm.hpp"

namespace icsim::test_oracle {

struct QpSolution {
    std::vector<double> alpha;
    double objective = 0.0;
};

// Euclidean projection onto { 0 <= a <= cap, sum a = 1 } by bisection on the
// shift tau in a_i = clip(y_i - tau, 0, cap).
inline std::vector<double> project_box_simplex(std::vector<double> y, double cap)
{
    auto mass = [&](double tau) {
        double s = 0.0;
        for (double v : y)
            s += std::clamp(v - tau, 0.0, cap);
        return s;
    };
    double lo = -1.0, hi = 1.0;
    for (double v : y) {
        lo = std::min(lo, v - cap);
        hi = std::max(hi, v);
    }
    lo -= 1.0;
    hi += 1.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (mass(mid) > 1.0 ? lo : hi) = mid;
    }
    const double tau = 0.5 * (lo + hi);
    for (double& v : y)
        v = std::clamp(v - tau, 0.0, cap);
    return y;
}

inline QpSolution solve_ocsvm_dual(const icsim::detect::FeatureMatrix& x, double nu, double gamma,
                                   std::size_t max_iter = 200000, double tol = 1e-13)
{
    using icsim::detect::rbf_kernel;
    const std::size_t n = x.n;
    const double cap = 1.0 / (nu * static_cast<double>(n));

    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kernel[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = rbf_kernel(x.row(i), x.row(j), gamma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }
    auto grad_of = [&](const std::vector<double>& a, std::vector<double>& g) {
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                s += kernel[i * n + j] * a[j];
            g[i] = s;
        }
    };

    std::vector<double> alpha = project_box_simplex(std::vector<double>(n, 1.0 / n), cap);
    std::vector<double> grad(n), trial(n), direction(n);
    const double step = 1.0 / static_cast<double>(n); // 1/L with L <= trace scale

    for (std::size_t it = 0; it < max_iter; ++it) {
        grad_of(alpha, grad);
        for (std::size_t i = 0; i < n; ++i)
            trial[i] = alpha[i] - step * grad[i];
        trial = project_box_simplex(trial, cap);
        double dir_norm = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            direction[i] = trial[i] - alpha[i];
            dir_norm = std::max(dir_norm, std::fabs(direction[i]));
        }
        if (dir_norm < tol)
            break;

        // Exact line search: f(a + t d) quadratic in t, minimized on [0,1].
        double gd = 0.0, dkd = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            gd += grad[i] * direction[i];
        for (std::size_t i = 0; i < n; ++i) {
            double kd = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                kd += kernel[i * n + j] * direction[j];
            dkd += direction[i] * kd;
        }
        double t = dkd > 0.0 ? std::clamp(-gd / dkd, 0.0, 1.0) : 1.0;
        if (t <= 0.0)
            break;
        for (std::size_t i = 0; i < n; ++i)
            alpha[i] += t * direction[i];
    }

    QpSolution sol;
    sol.alpha = alpha;
    grad_of(alpha, grad);
    double obj = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        obj += alpha[i] * grad[i];
    sol.objective = 0.5 * obj;
    return sol;
}

} // namespace icsim::test_oracle

#endif
