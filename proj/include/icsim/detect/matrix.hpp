#ifndef ICSIM_DETECT_MATRIX_HPP
#define ICSIM_DETECT_MATRIX_HPP

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace icsim::detect {

// Row-major feature matrix.
struct FeatureMatrix {
    std::size_t n = 0;
    std::size_t d = 0;
    std::vector<double> data; // n * d

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n_, std::size_t d_) : n(n_), d(d_), data(n_ * d_, 0.0) {}

    std::span<const double> row(std::size_t i) const { return {data.data() + i * d, d}; }
    std::span<double> row(std::size_t i) { return {data.data() + i * d, d}; }

    void push_row(std::span<const double> r)
    {
        if (d == 0)
            d = r.size();
        if (r.size() != d)
            throw std::invalid_argument("FeatureMatrix: inconsistent row width");
        data.insert(data.end(), r.begin(), r.end());
        ++n;
    }
};

inline double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

// Mean of per-feature population variances; the scale the RBF width heuristic
// normalizes by.
double mean_feature_variance(const FeatureMatrix& x);

} // namespace icsim::detect

#endif
