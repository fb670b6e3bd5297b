#include "icsim/detect/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsim::detect {

namespace {

constexpr double log_two_pi = 1.8378770664093454836;

// In-place lower Cholesky; false if the matrix is not positive definite.
bool cholesky(std::vector<double>& a, std::size_t d)
{
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double sum = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k)
                sum -= a[i * d + k] * a[j * d + k];
            if (i == j) {
                if (sum <= 0.0)
                    return false;
                a[i * d + i] = std::sqrt(sum);
            } else {
                a[i * d + j] = sum / a[j * d + j];
            }
        }
        for (std::size_t j = i + 1; j < d; ++j)
            a[i * d + j] = 0.0;
    }
    return true;
}

} // namespace

GaussianModel fit_gaussian(const FeatureMatrix& x, const GaussianFitOptions& options)
{
    const std::size_t n = x.n;
    const std::size_t d = x.d;
    if (n == 0 || d == 0)
        throw std::invalid_argument("fit_gaussian: empty training data");
    if (options.mode == GaussianModel::Mode::multivariate && n < d + 1)
        throw std::invalid_argument("fit_gaussian: multivariate mode needs n >= d+1");

    GaussianModel m;
    m.mode = options.mode;
    m.mean.assign(d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m.mean[j] += x.data[i * d + j];
    for (auto& v : m.mean)
        v /= static_cast<double>(n);

    if (m.mode == GaussianModel::Mode::independent) {
        m.variance.assign(d, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < d; ++j) {
                const double diff = x.data[i * d + j] - m.mean[j];
                m.variance[j] += diff * diff;
            }
        for (auto& v : m.variance)
            v = std::max(v / static_cast<double>(n), options.variance_floor);
        return m;
    }

    std::vector<double> cov(d * d, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            const double dj = x.data[i * d + j] - m.mean[j];
            for (std::size_t k = 0; k <= j; ++k)
                cov[j * d + k] += dj * (x.data[i * d + k] - m.mean[k]);
        }
    for (std::size_t j = 0; j < d; ++j)
        for (std::size_t k = 0; k <= j; ++k) {
            cov[j * d + k] /= static_cast<double>(n);
            cov[k * d + j] = cov[j * d + k];
        }

    double lambda = options.ridge;
    while (true) {
        std::vector<double> work = cov;
        for (std::size_t j = 0; j < d; ++j)
            work[j * d + j] += lambda;
        if (cholesky(work, d)) {
            m.covariance_chol = std::move(work);
            m.lambda = lambda;
            return m;
        }
        lambda *= 10.0;
        if (lambda > 1e-2)
            throw std::runtime_error("fit_gaussian: covariance not positive definite");
    }
}

double GaussianModel::log_density(std::span<const double> x) const
{
    const std::size_t d = mean.size();
    if (x.size() != d)
        throw std::invalid_argument("gaussian log_density: dimension mismatch");

    if (mode == Mode::independent) {
        double log_p = 0.0;
        for (std::size_t j = 0; j < d; ++j) {
            const double diff = x[j] - mean[j];
            log_p += -0.5 * (log_two_pi + std::log(variance[j]) + diff * diff / variance[j]);
        }
        return log_p;
    }

    // Solve L y = (x - mean); log det = 2 sum log L_ii.
    std::vector<double> y(d);
    double log_det = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        double sum = x[i] - mean[i];
        for (std::size_t k = 0; k < i; ++k)
            sum -= covariance_chol[i * d + k] * y[k];
        const double lii = covariance_chol[i * d + i];
        y[i] = sum / lii;
        log_det += 2.0 * std::log(lii);
    }
    double quad = 0.0;
    for (double v : y)
        quad += v * v;
    return -0.5 * (static_cast<double>(d) * log_two_pi + log_det + quad);
}

double tune_log_epsilon(const std::vector<double>& log_densities, const std::vector<int>& labels)
{
    if (log_densities.size() != labels.size() || log_densities.empty())
        throw std::invalid_argument("tune_log_epsilon: bad validation data");

    std::vector<double> sorted = log_densities;
    std::sort(sorted.begin(), sorted.end());

    // Candidate thresholds between consecutive distinct scores.
    std::vector<double> candidates;
    candidates.push_back(sorted.front() - 1.0);
    for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
        if (sorted[i] < sorted[i + 1])
            candidates.push_back(0.5 * (sorted[i] + sorted[i + 1]));
    candidates.push_back(sorted.back() + 1.0);

    double best_f1 = -1.0;
    double best_eps = candidates.front();
    for (double eps : candidates) {
        std::size_t tp = 0, fp = 0, fn = 0;
        for (std::size_t i = 0; i < log_densities.size(); ++i) {
            const bool flagged = log_densities[i] < eps;
            if (flagged && labels[i] == 1)
                ++tp;
            else if (flagged && labels[i] == 0)
                ++fp;
            else if (!flagged && labels[i] == 1)
                ++fn;
        }
        const double f1 = tp > 0 ? 2.0 * static_cast<double>(tp) /
                                       static_cast<double>(2 * tp + fp + fn)
                                 : 0.0;
        if (f1 > best_f1) {
            best_f1 = f1;
            best_eps = eps;
        }
    }
    return best_eps;
}

} // namespace icsim::detect
