#include "leapclust/leapfrog.hpp"
#include "leapclust/rng.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace leapclust;

namespace {

PointSet random_points(std::size_t n, std::size_t d, std::uint64_t seed, double scale = 1.0) {
    CounterRng rng(seed);
    RowMatrix m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index c = 0; c < m.cols(); ++c) m(i, c) = scale * rng.uniform();
    return PointSet(std::move(m));
}

// Floyd-Warshall on the squared-distance graph.
Matrix floyd_warshall(const PointSet& p) {
    const auto n = static_cast<Eigen::Index>(p.size());
    Matrix d(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j) d(i, j) = (p.matrix().row(i) - p.matrix().row(j)).squaredNorm();
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j) d(i, j) = std::min(d(i, j), d(i, k) + d(k, j));
    return d;
}

PointSet line(const std::vector<double>& xs) {
    std::vector<std::vector<double>> rows;
    for (double x : xs) rows.push_back({x});
    return PointSet::from_rows(rows);
}

}  // namespace

TEST(Leapfrog, SpecExamples) {
    EXPECT_DOUBLE_EQ(lf_all_pairs(line({0.0, 1.0}))(0, 1), 1.0);
    EXPECT_DOUBLE_EQ(lf_all_pairs(line({0.0, 1.0, 2.0}))(0, 2), 2.0);
    EXPECT_NEAR(lf_all_pairs(line({0.0, 0.1, 0.5, 1.0}))(0, 3), 0.42, 1e-15);

    const auto s = lf_from_source(line({0.0, 1.0, 2.0}), 0);
    EXPECT_EQ(s, (std::vector<double>{0.0, 1.0, 2.0}));
    const auto t = lf_from_source(PointSet::from_rows({{0, 0}, {3, 0}, {3, 4}}), 0);
    EXPECT_EQ(t, (std::vector<double>{0.0, 9.0, 25.0}));
}

TEST(Leapfrog, SourceEntryIsZero) {
    const PointSet p = random_points(20, 3, 1);
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_EQ(lf_from_source(p, i)[i], 0.0);
    EXPECT_THROW(lf_from_source(p, 20), std::out_of_range);
}

TEST(Leapfrog, RejectsNonFinite) {
    RowMatrix m(2, 1);
    m << 0.0, std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(PointSet{m}, InputError);
}

TEST(Leapfrog, MatchesFloydWarshall) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const PointSet p = random_points(10 + 5 * seed, 1 + seed % 3, seed);
        const Matrix ref = floyd_warshall(p);
        const DistanceMatrix d = lf_all_pairs(p);
        EXPECT_LT((d.matrix() - ref).cwiseAbs().maxCoeff(), 1e-12) << "seed " << seed;
    }
}

TEST(Leapfrog, MetricAxioms) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const PointSet p = random_points(50, 2, 100 + seed, 3.0);
        const DistanceMatrix d = lf_all_pairs(p);
        const std::size_t n = p.size();
        for (std::size_t i = 0; i < n; ++i) {
            EXPECT_EQ(d(i, i), 0.0);
            for (std::size_t j = 0; j < n; ++j) {
                ASSERT_EQ(d(i, j), d(j, i));
                ASSERT_GE(d(i, j), 0.0);
                for (std::size_t k = 0; k < n; ++k)
                    ASSERT_LE(d(i, k), (d(i, j) + d(j, k)) * (1.0 + 1e-9)) << i << " " << j << " " << k;
            }
        }
    }
}

TEST(Leapfrog, DominatedBySquaredEuclidean) {
    const PointSet p = random_points(60, 3, 9);
    const DistanceMatrix d = lf_all_pairs(p);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < p.size(); ++j) EXPECT_LE(d(i, j), (p.row(i) - p.row(j)).squaredNorm());
}

TEST(Leapfrog, InsertionNeverIncreases) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const PointSet p = random_points(30, 2, 200 + seed);
        const DistanceMatrix before = lf_all_pairs(p);
        RowMatrix m(31, 2);
        m.topRows(30) = p.matrix();
        CounterRng rng(seed);
        m.row(30) << rng.uniform(), rng.uniform();
        const DistanceMatrix after = lf_all_pairs(PointSet(m));
        for (std::size_t i = 0; i < 30; ++i)
            for (std::size_t j = 0; j < 30; ++j) EXPECT_LE(after(i, j), before(i, j));
    }
}

TEST(Leapfrog, ScalingCovariance) {
    const PointSet p = random_points(40, 2, 77);
    const DistanceMatrix d = lf_all_pairs(p);
    for (double s : {0.1, 3.0, 17.5}) {
        const DistanceMatrix ds = lf_all_pairs(PointSet(RowMatrix(s * p.matrix())));
        for (std::size_t i = 0; i < p.size(); ++i)
            for (std::size_t j = 0; j < p.size(); ++j)
                EXPECT_NEAR(ds(i, j), s * s * d(i, j), 1e-12 * (s * s * d(i, j) + 1e-300));
    }
}

TEST(Leapfrog, ClosedForm1D) {
    EXPECT_DOUBLE_EQ(lf_1d_closed_form(std::vector<double>{0.0, 1.0})(0, 1), 1.0);
    const DistanceMatrix small = lf_1d_closed_form(std::vector<double>{0.0, 0.1, 0.5, 1.0});
    EXPECT_NEAR(small(0, 2), 0.17, 1e-15);
    EXPECT_NEAR(small(0, 3), 0.42, 1e-15);
    EXPECT_THROW(lf_1d_closed_form(std::vector<double>{0.0, 2.0, 1.0}), InputError);
    EXPECT_THROW(lf_1d_closed_form(std::vector<double>{0.0, 1.0, 1.0}), InputError);

    for (std::size_t n : {2u, 5u, 37u, 120u, 200u}) {
        CounterRng rng(n);
        std::vector<double> xs(n);
        for (double& x : xs) x = rng.uniform(-2.0, 3.0);
        std::sort(xs.begin(), xs.end());
        const DistanceMatrix cf = lf_1d_closed_form(xs);
        const DistanceMatrix dj = lf_all_pairs(line(xs));
        EXPECT_LT((cf.matrix() - dj.matrix()).cwiseAbs().maxCoeff(), 1e-12) << n;
        const auto prefix = lf_1d_prefix(xs);
        for (std::size_t i = 0; i < n; ++i) EXPECT_NEAR(prefix[i], cf(0, i), 1e-12);
    }
}

TEST(Leapfrog, ThreadCountIndependent) {
    const PointSet p = random_points(150, 2, 5);
    LeapfrogOptions one, many, streamed;
    one.threads = 1;
    many.threads = 4;
    streamed.threads = 3;
    streamed.cost_matrix_limit = 0;
    const DistanceMatrix a = lf_all_pairs(p, one);
    EXPECT_EQ(a.matrix(), lf_all_pairs(p, many).matrix());
    // Without the precomputed cost matrix the edge costs are recomputed identically.
    EXPECT_EQ(a.matrix(), lf_all_pairs(p, streamed).matrix());
}

TEST(Leapfrog, DuplicatePoints) {
    const DistanceMatrix d = lf_all_pairs(PointSet::from_rows({{1, 1}, {1, 1}, {2, 1}, {1, 1}}));
    EXPECT_EQ(d(0, 1), 0.0);
    EXPECT_EQ(d(1, 3), 0.0);
    EXPECT_DOUBLE_EQ(d(0, 2), 1.0);
    EXPECT_EQ(lf_all_pairs(line({4.0}))(0, 0), 0.0);
}

// Averaged over 20 seeds, the largest LF between uniform samples on the unit square
// shrinks as n doubles.
TEST(Leapfrog, DecayOnUnitSquare) {
    std::vector<double> mean_max;
    for (std::size_t n : {250u, 500u, 1000u, 2000u}) {
        double sum = 0.0;
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const PointSet p = random_points(n, 2, CounterRng::derive(n, seed));
            sum += lf_all_pairs(p).matrix().maxCoeff();
        }
        mean_max.push_back(sum / 20.0);
    }
    for (std::size_t k = 1; k < mean_max.size(); ++k) EXPECT_LT(mean_max[k], mean_max[k - 1]) << k;
}
