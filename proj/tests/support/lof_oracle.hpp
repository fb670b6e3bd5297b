#ifndef ICSIM_TESTS_LOF_ORACLE_HPP
#define ICSIM_TESTS_LOF_ORACLE_HPP

// Direct transcription of the LOF definition, all pairs, no caching: an
// independent check for the fitted-model scoring path.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "icsim/detect/matrix.hpp"

namespace icsim::test_oracle {

inline double lof_brute_force(const icsim::detect::FeatureMatrix& train,
                              std::span<const double> query, std::size_t k)
{
    using icsim::detect::squared_distance;
    const std::size_t n = train.n;

    auto distance = [&](std::span<const double> a, std::span<const double> b) {
        return std::sqrt(squared_distance(a, b));
    };

    // k-distance of a training point (self excluded) or of the query.
    auto k_distance = [&](std::span<const double> p, std::size_t self) {
        std::vector<double> d;
        for (std::size_t i = 0; i < n; ++i)
            if (i != self)
                d.push_back(distance(train.row(i), p));
        std::sort(d.begin(), d.end());
        return d[k - 1];
    };
    auto neighborhood = [&](std::span<const double> p, std::size_t self, double kd) {
        std::vector<std::size_t> nbrs;
        for (std::size_t i = 0; i < n; ++i)
            if (i != self && distance(train.row(i), p) <= kd)
                nbrs.push_back(i);
        return nbrs;
    };

    std::vector<double> kd(n);
    for (std::size_t i = 0; i < n; ++i)
        kd[i] = k_distance(train.row(i), i);

    auto lrd = [&](std::span<const double> p, std::size_t self) {
        const double kdp = self < n ? kd[self] : k_distance(p, n);
        const auto nbrs = neighborhood(p, self, kdp);
        double reach = 0.0;
        for (std::size_t o : nbrs)
            reach += std::max(kd[o], distance(train.row(o), p));
        return 1.0 / std::max(reach / static_cast<double>(nbrs.size()), 1e-12);
    };

    const double kdq = k_distance(query, n);
    const auto nbrs = neighborhood(query, n, kdq);
    double sum_lrd = 0.0;
    for (std::size_t o : nbrs)
        sum_lrd += lrd(train.row(o), o);
    return (sum_lrd / static_cast<double>(nbrs.size())) / lrd(query, n);
}

} // namespace icsim::test_oracle

#endif
