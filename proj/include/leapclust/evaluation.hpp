#pragma once

#include "leapclust/types.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <variant>

namespace leapclust {

struct KMeansParams {
    int k = 2;
    std::size_t max_iters = 300;
    std::size_t restarts = 10;
    std::uint64_t seed = 0;
};

struct DbscanParams {
    double eps = 0.1;
    std::size_t min_pts = 5;
};

struct SingleLinkageParams {
    int k = 2;
};

using BaselineParams = std::variant<KMeansParams, DbscanParams, SingleLinkageParams>;

struct KMeansResult {
    ClusterAssignment assignment;
    RowMatrix centroids;
    double sse = 0.0;
    /// SSE after each Lloyd iteration of the winning restart.
    std::vector<double> sse_trace;
};

/// Lloyd iterations from k distinct data points drawn with the seeded RNG; best of
/// `restarts` by within-cluster SSE. Empty clusters keep their previous centroid.
KMeansResult kmeans(const PointSet& points, const KMeansParams& params);

/// Raw DBSCAN labels: cluster ids 0..C-1 and -1 for noise.
std::vector<int> dbscan_raw(const PointSet& points, const DbscanParams& params);

/// DBSCAN with every noise point promoted to its own singleton class.
ClusterAssignment dbscan(const PointSet& points, const DbscanParams& params);

/// Cuts the Euclidean minimum spanning tree at its k-1 heaviest edges.
ClusterAssignment single_linkage(const PointSet& points, int k);

ClusterAssignment run_baseline(const PointSet& points, const BaselineParams& params);

/// Fraction of the n(n-1)/2 pairs on which the two partitions agree. One point gives 1.
double rand_index(std::span<const int> a, std::span<const int> b);
double rand_index(const ClusterAssignment& a, const ClusterAssignment& b);

/// Rand index restricted to the listed indices.
double rand_index_subset(std::span<const int> a, std::span<const int> b,
                         std::span<const std::size_t> subset);

}  // namespace leapclust
