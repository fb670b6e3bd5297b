#include "icsim/detect/ocsvm.hpp"

#include <cmath>
#include <stdexcept>

namespace icsim::detect {

double mean_feature_variance(const FeatureMatrix& x)
{
    if (x.n == 0 || x.d == 0)
        return 0.0;
    double total = 0.0;
    for (std::size_t j = 0; j < x.d; ++j) {
        double mean = 0.0;
        for (std::size_t i = 0; i < x.n; ++i)
            mean += x.data[i * x.d + j];
        mean /= static_cast<double>(x.n);
        double var = 0.0;
        for (std::size_t i = 0; i < x.n; ++i) {
            const double diff = x.data[i * x.d + j] - mean;
            var += diff * diff;
        }
        total += var / static_cast<double>(x.n);
    }
    return total / static_cast<double>(x.d);
}

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma)
{
    return std::exp(-gamma * squared_distance(a, b));
}

double OcsvmModel::decision(std::span<const double> x) const
{
    if (x.size() != dim)
        throw std::invalid_argument("ocsvm decision: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < support_vectors.n; ++i)
        s += alpha[i] * rbf_kernel(support_vectors.row(i), x, gamma);
    return s - rho;
}

OcsvmModel fit_ocsvm(const FeatureMatrix& x, const OcsvmFitOptions& options,
                     std::vector<double>* dense_alpha)
{
    const std::size_t n = x.n;
    if (n < 2)
        throw std::invalid_argument("fit_ocsvm: need at least two training rows");
    if (options.nu <= 0.0 || options.nu > 1.0)
        throw std::invalid_argument("fit_ocsvm: nu must be in (0,1]");

    double gamma = options.gamma;
    if (gamma <= 0.0) {
        const double meanvar = mean_feature_variance(x);
        if (meanvar <= 0.0)
            throw std::invalid_argument("fit_ocsvm: degenerate training data (zero variance)");
        gamma = 1.0 / (static_cast<double>(x.d) * meanvar);
    }

    // Full kernel matrix; training sets here are at most a few thousand rows.
    std::vector<double> kernel(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        kernel[i * n + i] = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double k = rbf_kernel(x.row(i), x.row(j), gamma);
            kernel[i * n + j] = k;
            kernel[j * n + i] = k;
        }
    }

    const double cap = 1.0 / (options.nu * static_cast<double>(n));
    std::vector<double> alpha(n, 0.0);
    const auto n_full = static_cast<std::size_t>(options.nu * static_cast<double>(n));
    for (std::size_t i = 0; i < n_full && i < n; ++i)
        alpha[i] = cap;
    if (n_full < n)
        alpha[n_full] = 1.0 - cap * static_cast<double>(n_full);

    // Gradient of 1/2 a'Ka.
    std::vector<double> grad(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] == 0.0)
            continue;
        for (std::size_t j = 0; j < n; ++j)
            grad[j] += alpha[i] * kernel[i * n + j];
    }

    const double bound_slop = cap * 1e-12;
    for (std::uint64_t iter = 0; iter < options.max_iter; ++iter) {
        // Maximal violating pair: push mass toward the smallest gradient.
        std::size_t up = n, down = n;
        double g_up = 0.0, g_down = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (alpha[i] < cap - bound_slop && (up == n || grad[i] < g_up)) {
                up = i;
                g_up = grad[i];
            }
            if (alpha[i] > bound_slop && (down == n || grad[i] > g_down)) {
                down = i;
                g_down = grad[i];
            }
        }
        if (up == n || down == n || g_down - g_up < options.tol)
            break;

        const double curvature =
            std::max(kernel[up * n + up] + kernel[down * n + down] - 2.0 * kernel[up * n + down],
                     1e-12);
        double delta = (g_down - g_up) / curvature;
        delta = std::min(delta, cap - alpha[up]);
        delta = std::min(delta, alpha[down]);
        alpha[up] += delta;
        alpha[down] -= delta;
        if (alpha[down] < bound_slop)
            alpha[down] = 0.0;
        if (alpha[up] > cap - bound_slop)
            alpha[up] = cap;

        const double* k_up = kernel.data() + up * n;
        const double* k_down = kernel.data() + down * n;
        for (std::size_t i = 0; i < n; ++i)
            grad[i] += delta * (k_up[i] - k_down[i]);
    }

    // Offset from the margin support vectors; fall back to the bound midpoint.
    double rho = 0.0;
    std::size_t margin_count = 0;
    const double margin_lo = cap * 1e-8;
    const double margin_hi = cap * (1.0 - 1e-8);
    double bounded_max = -1e300, free_min = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > margin_lo && alpha[i] < margin_hi) {
            rho += grad[i];
            ++margin_count;
        } else if (alpha[i] >= margin_hi) {
            bounded_max = std::max(bounded_max, grad[i]);
        } else {
            free_min = std::min(free_min, grad[i]);
        }
    }
    if (margin_count > 0) {
        rho /= static_cast<double>(margin_count);
    } else if (bounded_max > -1e300 && free_min < 1e300) {
        rho = 0.5 * (bounded_max + free_min);
    } else if (bounded_max > -1e300) {
        rho = bounded_max;
    } else {
        rho = free_min;
    }
    // Margin support vectors sit numerically at decision zero; break those
    // ties toward "normal" so solver noise cannot flag boundary points.
    rho -= 1e-6 * std::fabs(rho);

    if (dense_alpha)
        *dense_alpha = alpha;

    OcsvmModel model;
    model.nu = options.nu;
    model.gamma = gamma;
    model.rho = rho;
    model.dim = x.d;
    for (std::size_t i = 0; i < n; ++i) {
        if (alpha[i] > 0.0) {
            model.support_vectors.push_row(x.row(i));
            model.alpha.push_back(alpha[i]);
        }
    }
    return model;
}

double ocsvm_dual_objective(const FeatureMatrix& x, const OcsvmModel& model)
{
    (void)x;
    const auto& sv = model.support_vectors;
    double obj = 0.0;
    for (std::size_t i = 0; i < sv.n; ++i)
        for (std::size_t j = 0; j < sv.n; ++j)
            obj += model.alpha[i] * model.alpha[j] * rbf_kernel(sv.row(i), sv.row(j), model.gamma);
    return 0.5 * obj;
}

} // namespace icsim::detect
