#include "icsim/detect/lof.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace icsim::detect {

namespace {

constexpr double lrd_floor = 1e-12;

// k-distance and the tie-inclusive neighborhood of a query against train,
// optionally skipping one index (leave-self-out for training points).
void knn_of(const FeatureMatrix& train, std::span<const double> x, std::size_t k,
            std::size_t skip, double& k_dist, std::vector<std::size_t>& neighbors)
{
    std::vector<std::pair<double, std::size_t>> dist;
    dist.reserve(train.n);
    for (std::size_t i = 0; i < train.n; ++i) {
        if (i == skip)
            continue;
        dist.emplace_back(std::sqrt(squared_distance(train.row(i), x)), i);
    }
    if (dist.size() < k)
        throw std::invalid_argument("lof: fewer candidates than k");
    std::sort(dist.begin(), dist.end());
    k_dist = dist[k - 1].first;
    neighbors.clear();
    for (const auto& [d, i] : dist) {
        if (d > k_dist)
            break;
        neighbors.push_back(i);
    }
}

} // namespace

LofModel fit_lof(const FeatureMatrix& x, const LofFitOptions& options)
{
    if (x.n <= options.k)
        throw std::invalid_argument("fit_lof: need more training rows than k");

    LofModel m;
    m.train = x;
    m.k = options.k;
    m.k_distance.resize(x.n);
    m.neighbors.resize(x.n);
    m.lrd.resize(x.n);

    for (std::size_t i = 0; i < x.n; ++i)
        knn_of(x, x.row(i), m.k, i, m.k_distance[i], m.neighbors[i]);

    for (std::size_t i = 0; i < x.n; ++i) {
        double reach_sum = 0.0;
        for (std::size_t o : m.neighbors[i]) {
            const double d = std::sqrt(squared_distance(x.row(i), x.row(o)));
            reach_sum += std::max(m.k_distance[o], d);
        }
        const double mean_reach = reach_sum / static_cast<double>(m.neighbors[i].size());
        m.lrd[i] = 1.0 / std::max(mean_reach, lrd_floor);
    }

    // Training LOF values set the alarm threshold.
    std::vector<double> lof(x.n);
    for (std::size_t i = 0; i < x.n; ++i) {
        double sum = 0.0;
        for (std::size_t o : m.neighbors[i])
            sum += m.lrd[o];
        lof[i] = sum / (static_cast<double>(m.neighbors[i].size()) * m.lrd[i]);
    }
    std::sort(lof.begin(), lof.end());
    auto rank =
        static_cast<std::size_t>(std::ceil((1.0 - options.nu) * static_cast<double>(x.n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, x.n);
    m.threshold = lof[rank - 1];
    return m;
}

double LofModel::score(std::span<const double> x) const
{
    if (x.size() != train.d)
        throw std::invalid_argument("lof score: dimension mismatch");

    double k_dist = 0.0;
    std::vector<std::size_t> nbrs;
    knn_of(train, x, k, train.n /* skip nothing */, k_dist, nbrs);

    double reach_sum = 0.0;
    double lrd_sum = 0.0;
    for (std::size_t o : nbrs) {
        const double d = std::sqrt(squared_distance(train.row(o), x));
        reach_sum += std::max(k_distance[o], d);
        lrd_sum += lrd[o];
    }
    const double count = static_cast<double>(nbrs.size());
    const double lrd_x = 1.0 / std::max(reach_sum / count, lrd_floor);
    return (lrd_sum / count) / lrd_x;
}

} // namespace icsim::detect
