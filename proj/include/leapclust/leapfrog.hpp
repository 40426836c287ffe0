#pragma once

#include "leapclust/types.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace leapclust {

struct LeapfrogOptions {
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
    /// Precompute the squared-distance cost matrix when n is at most this.
    std::size_t cost_matrix_limit = 4096;
};

/// Leapfrog distances from one source: shortest-path costs on the complete graph whose
/// edge (i, j) costs ||a_i - a_j||^2. Dense Dijkstra, O(n^2 d).
std::vector<double> lf_from_source(const PointSet& points, std::size_t source);

/// All-pairs leapfrog distances, one Dijkstra run per source. Entry (i, j) and (j, i) are
/// set to the smaller of the two single-source results so the matrix is exactly symmetric.
/// The result does not depend on the number of threads.
DistanceMatrix lf_all_pairs(const PointSet& points, const LeapfrogOptions& options = {});

/// Prefix form of the 1D closed form: entry i is LF(a_0, a_i) = sum over k < i of
/// (a_{k+1} - a_k)^2. Requires strictly ascending input.
std::vector<double> lf_1d_prefix(std::span<const double> sorted_points);

/// Closed-form 1D leapfrog matrix: LF(a_i, a_j) = sum_{k=i}^{j-1} (a_{k+1} - a_k)^2 for i < j.
DistanceMatrix lf_1d_closed_form(std::span<const double> sorted_points);

}  // namespace leapclust
