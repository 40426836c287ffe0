#include "leapclust/evaluation.hpp"

#include "leapclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace leapclust {

namespace {

double assign_and_sse(const RowMatrix& a, const RowMatrix& centroids, std::vector<int>& labels) {
    double sse = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        double best = std::numeric_limits<double>::infinity();
        int arg = 0;
        for (Eigen::Index c = 0; c < centroids.rows(); ++c) {
            const double d = (a.row(i) - centroids.row(c)).squaredNorm();
            if (d < best) {
                best = d;
                arg = static_cast<int>(c);
            }
        }
        labels[static_cast<std::size_t>(i)] = arg;
        sse += best;
    }
    return sse;
}

}  // namespace

KMeansResult kmeans(const PointSet& points, const KMeansParams& params) {
    const RowMatrix& a = points.matrix();
    const std::size_t n = points.size();
    if (params.k < 1) throw ParameterError("k-means needs k >= 1");
    const auto k = static_cast<std::size_t>(params.k);
    if (k > n) throw ParameterError("k-means k = " + std::to_string(k) + " exceeds n = " + std::to_string(n));
    const std::size_t restarts = std::max<std::size_t>(1, params.restarts);

    KMeansResult best;
    best.sse = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < restarts; ++r) {
        CounterRng rng(CounterRng::derive(params.seed, r));
        // Partial Fisher-Yates picks k distinct initial points.
        std::vector<std::size_t> idx(n);
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        for (std::size_t c = 0; c < k; ++c) {
            const std::size_t pick = c + static_cast<std::size_t>(rng.below(n - c));
            std::swap(idx[c], idx[pick]);
        }
        RowMatrix centroids(static_cast<Eigen::Index>(k), a.cols());
        for (std::size_t c = 0; c < k; ++c) centroids.row(static_cast<Eigen::Index>(c)) = a.row(static_cast<Eigen::Index>(idx[c]));

        std::vector<int> labels(n, 0);
        std::vector<double> trace;
        double sse = assign_and_sse(a, centroids, labels);
        trace.push_back(sse);
        for (std::size_t it = 0; it < params.max_iters; ++it) {
            RowMatrix sums = RowMatrix::Zero(centroids.rows(), centroids.cols());
            std::vector<std::size_t> counts(k, 0);
            for (std::size_t i = 0; i < n; ++i) {
                sums.row(labels[i]) += a.row(static_cast<Eigen::Index>(i));
                ++counts[static_cast<std::size_t>(labels[i])];
            }
            for (std::size_t c = 0; c < k; ++c) {
                if (counts[c] > 0) centroids.row(static_cast<Eigen::Index>(c)) = sums.row(static_cast<Eigen::Index>(c)) / static_cast<double>(counts[c]);
            }
            std::vector<int> next(n, 0);
            const double next_sse = assign_and_sse(a, centroids, next);
            trace.push_back(next_sse);
            const bool stable = next == labels;
            labels = std::move(next);
            sse = next_sse;
            if (stable) break;
        }
        if (sse < best.sse) {
            best.sse = sse;
            best.centroids = centroids;
            best.assignment = ClusterAssignment::from_labels(labels);
            best.sse_trace = std::move(trace);
        }
    }
    return best;
}

std::vector<int> dbscan_raw(const PointSet& points, const DbscanParams& params) {
    if (!(params.eps > 0.0)) throw ParameterError("DBSCAN eps must be > 0");
    if (params.min_pts < 1) throw ParameterError("DBSCAN min_pts must be >= 1");
    const RowMatrix& a = points.matrix();
    const std::size_t n = points.size();
    const double eps2 = params.eps * params.eps;

    // Neighborhoods include the point itself, as in the original formulation.
    std::vector<std::vector<std::size_t>> neighbors(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if ((a.row(static_cast<Eigen::Index>(i)) - a.row(static_cast<Eigen::Index>(j))).squaredNorm() <= eps2) {
                neighbors[i].push_back(j);
            }
        }
    }
    constexpr int kUnvisited = -2;
    constexpr int kNoise = -1;
    std::vector<int> labels(n, kUnvisited);
    int cluster = 0;
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < n; ++i) {
        if (labels[i] != kUnvisited) continue;
        if (neighbors[i].size() < params.min_pts) {
            labels[i] = kNoise;
            continue;
        }
        labels[i] = cluster;
        frontier.assign(neighbors[i].begin(), neighbors[i].end());
        while (!frontier.empty()) {
            const std::size_t q = frontier.back();
            frontier.pop_back();
            if (labels[q] == kNoise) labels[q] = cluster;  // border point
            if (labels[q] != kUnvisited) continue;
            labels[q] = cluster;
            if (neighbors[q].size() >= params.min_pts) {
                frontier.insert(frontier.end(), neighbors[q].begin(), neighbors[q].end());
            }
        }
        ++cluster;
    }
    return labels;
}

ClusterAssignment dbscan(const PointSet& points, const DbscanParams& params) {
    std::vector<int> raw = dbscan_raw(points, params);
    int next = *std::max_element(raw.begin(), raw.end()) + 1;
    for (int& l : raw) {
        if (l < 0) l = next++;
    }
    return ClusterAssignment::from_labels(raw);
}

ClusterAssignment single_linkage(const PointSet& points, int k) {
    const std::size_t n = points.size();
    if (k < 1 || static_cast<std::size_t>(k) > n) throw ParameterError("single linkage needs 1 <= k <= n");
    const RowMatrix& a = points.matrix();

    // Prim's algorithm on the dense Euclidean graph.
    struct Edge {
        double w;
        std::size_t u, v;
    };
    std::vector<Edge> mst;
    mst.reserve(n > 0 ? n - 1 : 0);
    std::vector<double> best(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> from(n, 0);
    std::vector<char> in_tree(n, 0);
    std::size_t u = 0;
    in_tree[0] = 1;
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        double next_w = std::numeric_limits<double>::infinity();
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double d = (a.row(static_cast<Eigen::Index>(u)) - a.row(static_cast<Eigen::Index>(v))).norm();
            if (d < best[v]) {
                best[v] = d;
                from[v] = u;
            }
            if (best[v] < next_w || next == n) {
                next_w = best[v];
                next = v;
            }
        }
        in_tree[next] = 1;
        mst.push_back({next_w, from[next], next});
        u = next;
    }
    std::stable_sort(mst.begin(), mst.end(), [](const Edge& x, const Edge& y) { return x.w < y.w; });

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    const std::size_t keep = n - static_cast<std::size_t>(k);
    for (std::size_t e = 0; e < keep; ++e) {
        const std::size_t ru = find(mst[e].u);
        const std::size_t rv = find(mst[e].v);
        parent[std::max(ru, rv)] = std::min(ru, rv);
    }
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<int>(find(i));
    return ClusterAssignment::from_labels(raw);
}

ClusterAssignment run_baseline(const PointSet& points, const BaselineParams& params) {
    if (const auto* km = std::get_if<KMeansParams>(&params)) return kmeans(points, *km).assignment;
    if (const auto* db = std::get_if<DbscanParams>(&params)) return dbscan(points, *db);
    return single_linkage(points, std::get<SingleLinkageParams>(params).k);
}

namespace {

// Agreeing pairs from the contingency table: pairs together in both plus pairs apart in both.
double rand_from_labels(const std::vector<std::pair<int, int>>& labels) {
    const auto n = static_cast<double>(labels.size());
    if (labels.size() < 2) return 1.0;
    std::unordered_map<long long, double> joint;
    std::unordered_map<int, double> ra;
    std::unordered_map<int, double> rb;
    for (const auto& [x, y] : labels) {
        joint[(static_cast<long long>(x) << 32) ^ static_cast<unsigned int>(y)] += 1.0;
        ra[x] += 1.0;
        rb[y] += 1.0;
    }
    auto pairs = [](double c) { return c * (c - 1.0) / 2.0; };
    double both = 0.0, in_a = 0.0, in_b = 0.0;
    for (const auto& [key, c] : joint) both += pairs(c);
    for (const auto& [key, c] : ra) in_a += pairs(c);
    for (const auto& [key, c] : rb) in_b += pairs(c);
    const double total = pairs(n);
    const double apart_both = total - in_a - in_b + both;
    return (both + apart_both) / total;
}

}  // namespace

double rand_index(std::span<const int> a, std::span<const int> b) {
    if (a.size() != b.size()) throw InputError("rand_index: label vectors differ in length");
    std::vector<std::pair<int, int>> labels(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) labels[i] = {a[i], b[i]};
    return rand_from_labels(labels);
}

double rand_index(const ClusterAssignment& a, const ClusterAssignment& b) {
    return rand_index(std::span<const int>(a.labels), std::span<const int>(b.labels));
}

double rand_index_subset(std::span<const int> a, std::span<const int> b, std::span<const std::size_t> subset) {
    if (a.size() != b.size()) throw InputError("rand_index: label vectors differ in length");
    std::vector<std::pair<int, int>> labels;
    labels.reserve(subset.size());
    for (std::size_t i : subset) {
        if (i >= a.size()) throw std::out_of_range("rand_index subset index out of range");
        labels.emplace_back(a[i], b[i]);
    }
    return rand_from_labels(labels);
}

}  // namespace leapclust
