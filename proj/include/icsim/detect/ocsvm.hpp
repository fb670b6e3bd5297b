#ifndef ICSIM_DETECT_OCSVM_HPP
#define ICSIM_DETECT_OCSVM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "icsim/detect/matrix.hpp"

namespace icsim::detect {

// nu-one-class SVM with RBF kernel. decision(x) = sum_i alpha_i K(sv_i, x) - rho;
// a sample is anomalous iff its decision value is negative.
struct OcsvmModel {
    double nu = 0.05;
    double gamma = 1.0;
    double rho = 0.0;
    std::size_t dim = 0;
    FeatureMatrix support_vectors;
    std::vector<double> alpha; // dual coefficients of the kept SVs

    double decision(std::span<const double> x) const;
    bool is_anomaly(std::span<const double> x) const { return decision(x) < 0.0; }
};

struct OcsvmFitOptions {
    double nu = 0.05;
    double gamma = 0.0;    // <= 0: use 1 / (d * mean feature variance)
    double tol = 1e-9;     // KKT gap at which SMO stops; margin-SV decision
                           // noise stays well below anomaly thresholds
    std::uint64_t max_iter = 50'000'000;
};

// Solves the dual  min 1/2 a'Ka  s.t. 0 <= a_i <= 1/(nu n), sum a = 1  by
// sequential minimal optimization with maximal-violating-pair selection.
// dense_alpha, when given, receives one coefficient per training row (zeros
// included) for cross-checking against an independent QP solver.
OcsvmModel fit_ocsvm(const FeatureMatrix& x, const OcsvmFitOptions& options = {},
                     std::vector<double>* dense_alpha = nullptr);

// 1/2 a'Ka of a fitted model, for comparison with a QP oracle's objective.
double ocsvm_dual_objective(const FeatureMatrix& x, const OcsvmModel& model);

double rbf_kernel(std::span<const double> a, std::span<const double> b, double gamma);

} // namespace icsim::detect

#endif
