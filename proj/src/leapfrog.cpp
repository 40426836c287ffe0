#include "leapclust/leapfrog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>

namespace leapclust {

namespace {

// Dense Dijkstra with the unvisited set kept as a compact index array. `cost(u, v)` returns
// the edge cost. Writes LF(source, .) into `dist`.
template <typename Cost>
void dijkstra_dense(std::size_t n, std::size_t source, Cost&& cost, double* dist,
                    std::vector<std::size_t>& remaining) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::fill(dist, dist + n, inf);
    dist[source] = 0.0;

    remaining.resize(n - 1);
    std::size_t r = 0;
    for (std::size_t v = 0; v < n; ++v) {
        if (v != source) remaining[r++] = v;
    }

    std::size_t u = source;
    std::size_t count = n - 1;
    while (count > 0) {
        const double du = dist[u];
        double best = inf;
        std::size_t best_k = 0;
        for (std::size_t k = 0; k < count; ++k) {
            const std::size_t v = remaining[k];
            const double candidate = du + cost(u, v);
            if (candidate < dist[v]) dist[v] = candidate;
            if (dist[v] < best) {
                best = dist[v];
                best_k = k;
            }
        }
        u = remaining[best_k];
        remaining[best_k] = remaining[count - 1];
        --count;
    }
}

void check_finite(const PointSet& points) {
    if (points.size() == 0) throw InputError("leapfrog distances need at least one point");
    if (!points.matrix().allFinite()) throw InputError("point set contains non-finite coordinates");
}

double squared_distance(const RowMatrix& a, std::size_t i, std::size_t j) {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    double s = 0.0;
    for (Eigen::Index c = 0; c < a.cols(); ++c) {
        const double diff = a(ii, c) - a(jj, c);
        s += diff * diff;
    }
    return s;
}

}  // namespace

std::vector<double> lf_from_source(const PointSet& points, std::size_t source) {
    check_finite(points);
    const std::size_t n = points.size();
    if (source >= n) {
        throw std::out_of_range("leapfrog source index " + std::to_string(source) +
                                " out of range for " + std::to_string(n) + " points");
    }
    std::vector<double> dist(n);
    std::vector<std::size_t> scratch;
    const RowMatrix& a = points.matrix();
    dijkstra_dense(
        n, source, [&](std::size_t u, std::size_t v) { return squared_distance(a, u, v); },
        dist.data(), scratch);
    return dist;
}

DistanceMatrix lf_all_pairs(const PointSet& points, const LeapfrogOptions& options) {
    check_finite(points);
    const std::size_t n = points.size();
    const RowMatrix& a = points.matrix();

    // Row-major so each source writes one contiguous row.
    RowMatrix rows(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));

    RowMatrix costs;
    const bool precompute = n <= options.cost_matrix_limit;
    if (precompute) {
        costs.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i) {
            costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double c = squared_distance(a, i, j);
                costs(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = c;
                costs(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = c;
            }
        }
    }

    auto run_range = [&](std::size_t begin, std::size_t end) {
        std::vector<std::size_t> scratch;
        for (std::size_t s = begin; s < end; ++s) {
            double* out = rows.data() + s * n;
            if (precompute) {
                const double* c = costs.data();
                dijkstra_dense(
                    n, s, [c, n](std::size_t u, std::size_t v) { return c[u * n + v]; }, out,
                    scratch);
            } else {
                dijkstra_dense(
                    n, s, [&](std::size_t u, std::size_t v) { return squared_distance(a, u, v); },
                    out, scratch);
            }
        }
    };

    unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
    if (threads == 1) {
        run_range(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + threads - 1) / threads;
        for (unsigned t = 0; t < threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    Matrix values(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    for (Eigen::Index i = 0; i < values.rows(); ++i) {
        values(i, i) = 0.0;
        for (Eigen::Index j = i + 1; j < values.cols(); ++j) {
            const double v = std::min(rows(i, j), rows(j, i));
            values(i, j) = v;
            values(j, i) = v;
        }
    }
    return DistanceMatrix(std::move(values));
}

std::vector<double> lf_1d_prefix(std::span<const double> sorted_points) {
    if (sorted_points.empty()) throw InputError("1D leapfrog needs at least one point");
    std::vector<double> prefix(sorted_points.size(), 0.0);
    for (std::size_t k = 0; k + 1 < sorted_points.size(); ++k) {
        const double gap = sorted_points[k + 1] - sorted_points[k];
        if (!(gap > 0.0)) {
            throw InputError("1D closed form requires strictly ascending points (index " +
                             std::to_string(k + 1) + ")");
        }
        prefix[k + 1] = prefix[k] + gap * gap;
    }
    return prefix;
}

DistanceMatrix lf_1d_closed_form(std::span<const double> sorted_points) {
    lf_1d_prefix(sorted_points);  // validates ordering
    const auto n = static_cast<Eigen::Index>(sorted_points.size());
    Matrix values = Matrix::Zero(n, n);
    // Summing gaps from i upward keeps each entry a direct sum of squared gaps rather than a
    // difference of prefix sums, which would cancel badly for far-apart indices.
    for (Eigen::Index i = 0; i < n; ++i) {
        double acc = 0.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double gap = sorted_points[static_cast<std::size_t>(j)] -
                               sorted_points[static_cast<std::size_t>(j - 1)];
            acc += gap * gap;
            values(i, j) = acc;
            values(j, i) = acc;
        }
    }
    return DistanceMatrix(std::move(values));
}

}  // namespace leapclust
