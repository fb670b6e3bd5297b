#ifndef ICSIM_DETECT_GAUSSIAN_HPP
#define ICSIM_DETECT_GAUSSIAN_HPP

#include <span>
#include <vector>

#include "icsim/detect/matrix.hpp"

namespace icsim::detect {

// Gaussian density scorers: independent per-feature normals (IGA) or one full
// multivariate normal with a ridge on the covariance (MGA). Densities are
// handled in log space; a sample is anomalous iff log density < log epsilon.
struct GaussianModel {
    enum class Mode { independent, multivariate };

    Mode mode = Mode::independent;
    std::vector<double> mean;
    std::vector<double> variance;         // independent mode
    std::vector<double> covariance_chol;  // multivariate mode: lower Cholesky of cov + lambda I
    double lambda = 0.0;
    double log_epsilon = -1e300;

    double log_density(std::span<const double> x) const;
    bool is_anomaly(std::span<const double> x) const { return log_density(x) < log_epsilon; }
};

struct GaussianFitOptions {
    GaussianModel::Mode mode = GaussianModel::Mode::independent;
    double variance_floor = 1e-9;
    double ridge = 1e-6; // grows x10 up to 1e-2 if the Cholesky fails
};

GaussianModel fit_gaussian(const FeatureMatrix& x, const GaussianFitOptions& options = {});

// Picks the log-density threshold maximizing F1 on a labeled validation set
// (label 1 = anomaly).
double tune_log_epsilon(const std::vector<double>& log_densities, const std::vector<int>& labels);

} // namespace icsim::detect

#endif
