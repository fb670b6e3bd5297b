#ifndef ICSIM_DETECT_IFOREST_HPP
#define ICSIM_DETECT_IFOREST_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "icsim/detect/matrix.hpp"

namespace icsim::detect {

// Isolation forest scored as 2^(-E[h(x)] / c(psi)); anomaly iff the score
// exceeds the (1-nu) quantile of the training scores.
struct IsolationForest {
    struct Node {
        int feature = -1; // -1: external node
        double split = 0.0;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::int32_t size = 0; // external node population
    };
    struct Tree {
        std::vector<Node> nodes;
    };

    std::vector<Tree> trees;
    std::size_t dim = 0;
    std::size_t subsample = 256;
    double normalizer = 1.0; // c(psi)
    double score_threshold = 0.5;

    double path_length(const Tree& tree, std::span<const double> x) const;
    double score(std::span<const double> x) const;
    bool is_anomaly(std::span<const double> x) const { return score(x) > score_threshold; }
};

struct IforestFitOptions {
    std::size_t trees = 100;
    std::size_t subsample = 256;
    std::uint64_t seed = 1;
    double nu = 0.05; // sets the training-score quantile threshold
};

IsolationForest fit_iforest(const FeatureMatrix& x, const IforestFitOptions& options = {});

// Average unsuccessful-search path length c(n) = 2 H(n-1) - 2 (n-1)/n with
// exact harmonic numbers; c(1) = 0.
double iforest_average_path_length(std::size_t n);

} // namespace icsim::detect

#endif
