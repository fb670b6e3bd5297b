#ifndef ICSIM_DETECT_LOF_HPP
#define ICSIM_DETECT_LOF_HPP

#include <span>
#include <vector>

#include "icsim/detect/matrix.hpp"

namespace icsim::detect {

// Local outlier factor in novelty mode: queries are scored against the
// training set only. Neighborhoods include k-distance ties; local
// reachability densities are floored at 1e-12 to survive duplicate points.
struct LofModel {
    FeatureMatrix train;
    std::size_t k = 20;
    std::vector<double> k_distance;          // per training point
    std::vector<std::vector<std::size_t>> neighbors; // per training point, ties included
    std::vector<double> lrd;                 // per training point
    double threshold = 1.0;                  // anomaly iff lof > threshold

    double score(std::span<const double> x) const; // LOF value of x
    bool is_anomaly(std::span<const double> x) const { return score(x) > threshold; }
};

struct LofFitOptions {
    std::size_t k = 20;
    double nu = 0.05; // threshold = (1-nu) quantile of training LOF values
};

LofModel fit_lof(const FeatureMatrix& x, const LofFitOptions& options = {});

} // namespace icsim::detect

#endif
