#include "leapclust/datagen.hpp"
#include "leapclust/evaluation.hpp"
#include "leapclust/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace leapclust;

namespace {

double rand_by_pairs(const std::vector<int>& a, const std::vector<int>& b) {
    std::size_t agree = 0, total = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) {
            ++total;
            agree += (a[i] == a[j]) == (b[i] == b[j]);
        }
    return total ? static_cast<double>(agree) / static_cast<double>(total) : 1.0;
}

// Naive agglomeration: repeatedly merge the two clusters with the smallest single-link gap.
std::vector<int> naive_single_linkage(const PointSet& p, int k) {
    const std::size_t n = p.size();
    std::vector<int> lab(n);
    std::iota(lab.begin(), lab.end(), 0);
    int clusters = static_cast<int>(n);
    while (clusters > k) {
        double best = 1e300;
        int ba = -1, bb = -1;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                if (lab[i] == lab[j]) continue;
                const double d = (p.row(i) - p.row(j)).norm();
                if (d < best) {
                    best = d;
                    ba = lab[i];
                    bb = lab[j];
                }
            }
        for (int& l : lab)
            if (l == bb) l = ba;
        --clusters;
    }
    return ClusterAssignment::from_labels(lab).labels;
}

PointSet random_points(std::size_t n, std::uint64_t seed) {
    CounterRng rng(seed);
    RowMatrix m(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < m.rows(); ++i) m.row(i) << rng.uniform(), rng.uniform();
    return PointSet(m);
}

}  // namespace

TEST(RandIndex, Examples) {
    const std::vector<int> a{0, 0, 1, 1}, b{0, 1, 0, 1};
    EXPECT_DOUBLE_EQ(rand_index(a, a), 1.0);
    EXPECT_DOUBLE_EQ(rand_index(std::vector<int>{0, 0}, std::vector<int>{0, 1}), 0.0);
    EXPECT_NEAR(rand_index(a, b), 2.0 / 6.0, 1e-15);
    EXPECT_DOUBLE_EQ(rand_index(std::vector<int>{3}, std::vector<int>{9}), 1.0);
    EXPECT_THROW(rand_index(std::vector<int>{0, 1}, std::vector<int>{0}), InputError);
}

TEST(RandIndex, PairEnumerationOracle) {
    CounterRng rng(2);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 1 + rng.below(30);
        std::vector<int> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            a[i] = static_cast<int>(rng.below(4));
            b[i] = static_cast<int>(rng.below(3)) * 7 - 2;
        }
        EXPECT_NEAR(rand_index(a, b), rand_by_pairs(a, b), 1e-15);
        EXPECT_DOUBLE_EQ(rand_index(a, b), rand_index(b, a));
        std::vector<int> relabeled(a);
        for (int& l : relabeled) l = 10 - 3 * l;
        EXPECT_DOUBLE_EQ(rand_index(relabeled, b), rand_index(a, b));
    }
}

TEST(RandIndex, Subset) {
    const std::vector<int> a{0, 0, 1, 1, 2}, b{0, 1, 1, 1, 2};
    const std::vector<std::size_t> sub{2, 3, 4};
    EXPECT_DOUBLE_EQ(rand_index_subset(a, b, sub), 1.0);
    const std::vector<std::size_t> all{0, 1, 2, 3, 4};
    EXPECT_DOUBLE_EQ(rand_index_subset(a, b, all), rand_index(a, b));
}

TEST(KMeans, TrivialCases) {
    const PointSet p = random_points(12, 1);
    const KMeansResult all = kmeans(p, KMeansParams{12, 300, 3, 1});
    EXPECT_EQ(all.assignment.num_clusters, 12);
    EXPECT_NEAR(all.sse, 0.0, 1e-24);
    const KMeansResult one = kmeans(p, KMeansParams{1, 300, 3, 1});
    EXPECT_EQ(one.assignment.num_clusters, 1);
    EXPECT_LT((one.centroids.row(0) - p.matrix().colwise().mean()).norm(), 1e-14);
    EXPECT_THROW(kmeans(p, KMeansParams{13, 300, 3, 1}), ParameterError);
}

TEST(KMeans, TwoGroupsMatchExhaustiveOptimum) {
    const PointSet p = PointSet::from_rows({{0.0}, {0.1}, {10.0}, {10.1}});
    // Exhaustive 2-partition search for the least SSE.
    double best = 1e300;
    std::vector<int> best_lab;
    for (int mask = 1; mask < 15; ++mask) {
        std::vector<int> lab(4);
        double s[2] = {0, 0}, c[2] = {0, 0};
        for (int i = 0; i < 4; ++i) {
            lab[i] = (mask >> i) & 1;
            s[lab[i]] += p.row(i)(0);
            ++c[lab[i]];
        }
        double sse = 0;
        for (int i = 0; i < 4; ++i) sse += std::pow(p.row(i)(0) - s[lab[i]] / c[lab[i]], 2);
        if (sse < best) {
            best = sse;
            best_lab = lab;
        }
    }
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const KMeansResult r = kmeans(p, KMeansParams{2, 300, 1, seed});
        EXPECT_NEAR(r.sse, best, 1e-12);
        EXPECT_DOUBLE_EQ(rand_index(r.assignment.labels, best_lab), 1.0);
    }
}

TEST(KMeans, SseNonIncreasingAndDeterministic) {
    const PointSet p = random_points(300, 4);
    const KMeansResult r = kmeans(p, KMeansParams{5, 300, 4, 9});
    ASSERT_FALSE(r.sse_trace.empty());
    for (std::size_t k = 1; k < r.sse_trace.size(); ++k) EXPECT_LE(r.sse_trace[k], r.sse_trace[k - 1] + 1e-12);
    const KMeansResult again = kmeans(p, KMeansParams{5, 300, 4, 9});
    EXPECT_EQ(r.assignment.labels, again.assignment.labels);
    EXPECT_EQ(r.sse, again.sse);
}

TEST(Dbscan, Examples) {
    const PointSet same = PointSet::from_rows({{1, 1}, {1, 1}, {1, 1}, {1, 1}});
    EXPECT_EQ(dbscan(same, DbscanParams{0.1, 3}).num_clusters, 1);
    const PointSet two = PointSet::from_rows({{0, 0}, {0.05, 0}, {0, 0.05}, {5, 5}, {5.05, 5}, {5, 5.05}});
    const ClusterAssignment c = dbscan(two, DbscanParams{0.1, 3});
    EXPECT_EQ(c.labels, (std::vector<int>{0, 0, 0, 1, 1, 1}));
    EXPECT_THROW(dbscan(two, DbscanParams{0.0, 3}), ParameterError);
}

TEST(Dbscan, NoiseBecomesSingletons) {
    const PointSet p = PointSet::from_rows({{0, 0}, {0.05, 0}, {0, 0.05}, {3, 3}, {8, 8}});
    const std::vector<int> raw = dbscan_raw(p, DbscanParams{0.1, 3});
    EXPECT_EQ(raw, (std::vector<int>{0, 0, 0, -1, -1}));
    EXPECT_EQ(dbscan(p, DbscanParams{0.1, 3}).labels, (std::vector<int>{0, 0, 0, 1, 2}));
}

TEST(Dbscan, BorderPointJoinsCluster) {
    // Point 3 has only two neighbours (not core) but sits within eps of core point 2.
    const PointSet p = PointSet::from_rows({{0.0}, {0.1}, {0.2}, {0.29}, {5.0}});
    const std::vector<int> raw = dbscan_raw(p, DbscanParams{0.1, 3});
    EXPECT_EQ(raw, (std::vector<int>{0, 0, 0, 0, -1}));
}

TEST(Dbscan, MoonsRegression) {
    const LabeledDataset ds = gen_moons(400, 0.05, 7);
    EXPECT_DOUBLE_EQ(rand_index(dbscan(ds.points, DbscanParams{0.2, 5}), ds.truth), 1.0);
}

TEST(SingleLinkage, Examples) {
    const PointSet p = PointSet::from_rows({{0.0}, {1.0}, {2.0}, {10.0}});
    EXPECT_EQ(single_linkage(p, 2).labels, (std::vector<int>{0, 0, 0, 1}));
    EXPECT_EQ(single_linkage(p, 4).num_clusters, 4);
    EXPECT_EQ(single_linkage(p, 1).num_clusters, 1);
    EXPECT_THROW(single_linkage(p, 0), ParameterError);
    EXPECT_THROW(single_linkage(p, 5), ParameterError);
}

TEST(SingleLinkage, MatchesNaiveAgglomeration) {
    CounterRng rng(6);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + rng.below(199);
        const PointSet p = random_points(n, 1000 + trial);
        const int k = 1 + static_cast<int>(rng.below(std::min<std::size_t>(n, 8)));
        EXPECT_EQ(single_linkage(p, k).labels, naive_single_linkage(p, k)) << "n=" << n << " k=" << k;
    }
}

TEST(Baselines, Dispatch) {
    const PointSet p = PointSet::from_rows({{0.0}, {0.1}, {10.0}, {10.1}});
    EXPECT_EQ(run_baseline(p, KMeansParams{2, 100, 2, 0}).num_clusters, 2);
    EXPECT_EQ(run_baseline(p, DbscanParams{0.5, 2}).num_clusters, 2);
    EXPECT_EQ(run_baseline(p, SingleLinkageParams{3}).num_clusters, 3);
}
