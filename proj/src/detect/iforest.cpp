#include "icsim/detect/iforest.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

namespace icsim::detect {

namespace {

double average_path_length_exact(std::size_t n)
{
    if (n <= 1)
        return 0.0;
    double harmonic = 0.0;
    for (std::size_t i = 1; i < n; ++i)
        harmonic += 1.0 / static_cast<double>(i);
    return 2.0 * harmonic - 2.0 * static_cast<double>(n - 1) / static_cast<double>(n);
}

} // namespace

double iforest_average_path_length(std::size_t n)
{
    static const std::vector<double> table = [] {
        std::vector<double> t(4097);
        for (std::size_t i = 0; i < t.size(); ++i)
            t[i] = average_path_length_exact(i);
        return t;
    }();
    return n < table.size() ? table[n] : average_path_length_exact(n);
}

namespace {

struct TreeBuilder {
    const FeatureMatrix& x;
    std::mt19937_64& rng;
    std::size_t height_limit;
    IsolationForest::Tree tree;

    std::int32_t build(std::vector<std::size_t>& idx, std::size_t lo, std::size_t hi,
                       std::size_t depth)
    {
        const std::size_t size = hi - lo;
        const auto node_id = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.emplace_back();

        if (size <= 1 || depth >= height_limit) {
            tree.nodes[node_id].size = static_cast<std::int32_t>(size);
            return node_id;
        }

        // Candidate features must actually vary on this node's population.
        std::vector<int> candidates;
        std::vector<std::pair<double, double>> ranges(x.d);
        for (std::size_t j = 0; j < x.d; ++j) {
            double mn = x.data[idx[lo] * x.d + j];
            double mx = mn;
            for (std::size_t i = lo + 1; i < hi; ++i) {
                const double v = x.data[idx[i] * x.d + j];
                mn = std::min(mn, v);
                mx = std::max(mx, v);
            }
            ranges[j] = {mn, mx};
            if (mx > mn)
                candidates.push_back(static_cast<int>(j));
        }
        if (candidates.empty()) {
            tree.nodes[node_id].size = static_cast<std::int32_t>(size);
            return node_id;
        }

        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        const int feature = candidates[pick(rng)];
        const auto [mn, mx] = ranges[static_cast<std::size_t>(feature)];
        std::uniform_real_distribution<double> split_dist(mn, mx);
        const double split = split_dist(rng);

        auto mid_it = std::partition(idx.begin() + static_cast<long>(lo),
                                     idx.begin() + static_cast<long>(hi), [&](std::size_t i) {
                                         return x.data[i * x.d + static_cast<std::size_t>(feature)] <
                                                split;
                                     });
        std::size_t mid = static_cast<std::size_t>(mid_it - idx.begin());
        // A degenerate split isolates nothing; force one element across.
        if (mid == lo)
            ++mid;
        else if (mid == hi)
            --mid;

        tree.nodes[node_id].feature = feature;
        tree.nodes[node_id].split = split;
        const std::int32_t left = build(idx, lo, mid, depth + 1);
        const std::int32_t right = build(idx, mid, hi, depth + 1);
        tree.nodes[node_id].left = left;
        tree.nodes[node_id].right = right;
        return node_id;
    }
};

} // namespace

double IsolationForest::path_length(const Tree& tree, std::span<const double> x) const
{
    std::int32_t node = 0;
    double depth = 0.0;
    while (true) {
        const Node& n = tree.nodes[static_cast<std::size_t>(node)];
        if (n.feature < 0)
            return depth + iforest_average_path_length(static_cast<std::size_t>(n.size));
        node = x[static_cast<std::size_t>(n.feature)] < n.split ? n.left : n.right;
        depth += 1.0;
    }
}

double IsolationForest::score(std::span<const double> x) const
{
    if (x.size() != dim)
        throw std::invalid_argument("iforest score: dimension mismatch");
    double mean_path = 0.0;
    for (const auto& t : trees)
        mean_path += path_length(t, x);
    mean_path /= static_cast<double>(trees.size());
    return std::pow(2.0, -mean_path / normalizer);
}

IsolationForest fit_iforest(const FeatureMatrix& x, const IforestFitOptions& options)
{
    if (x.n < 2)
        throw std::invalid_argument("fit_iforest: need at least two training rows");

    IsolationForest forest;
    forest.dim = x.d;
    forest.subsample = std::min(options.subsample, x.n);
    forest.normalizer = iforest_average_path_length(forest.subsample);
    const auto height_limit = static_cast<std::size_t>(
        std::ceil(std::log2(static_cast<double>(forest.subsample))));

    std::mt19937_64 rng(options.seed);
    std::vector<std::size_t> all(x.n);
    std::iota(all.begin(), all.end(), 0);

    for (std::size_t t = 0; t < options.trees; ++t) {
        // Partial Fisher-Yates draw of the subsample.
        std::vector<std::size_t> idx = all;
        for (std::size_t i = 0; i < forest.subsample; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
            std::swap(idx[i], idx[pick(rng)]);
        }
        idx.resize(forest.subsample);

        TreeBuilder builder{x, rng, height_limit, {}};
        builder.build(idx, 0, idx.size(), 0);
        forest.trees.push_back(std::move(builder.tree));
    }

    std::vector<double> train_scores(x.n);
    for (std::size_t i = 0; i < x.n; ++i)
        train_scores[i] = forest.score(x.row(i));
    std::sort(train_scores.begin(), train_scores.end());
    const double q = 1.0 - options.nu;
    auto rank = static_cast<std::size_t>(
        std::ceil(q * static_cast<double>(x.n) - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, x.n);
    forest.score_threshold = train_scores[rank - 1];
    return forest;
}

} // namespace icsim::detect
