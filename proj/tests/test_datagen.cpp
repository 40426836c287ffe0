#include "leapclust/datagen.hpp"
#include "leapclust/rng.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace leapclust;

namespace {

std::vector<std::size_t> counts(const ClusterAssignment& a) { return a.cluster_sizes(); }

std::size_t count_label(const LabeledDataset& ds, int label) {
    std::size_t c = 0;
    for (int l : ds.truth.labels) c += l == label;
    return c;
}

}  // namespace

TEST(Rng, ReproducibleAndDerived) {
    CounterRng a(42), b(42);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next_u64(), b.next_u64());
    EXPECT_EQ(a.counter(), 100u);
    EXPECT_NE(CounterRng::derive(1, 0), CounterRng::derive(1, 1));
    EXPECT_NE(CounterRng::derive(1, 0), CounterRng::derive(2, 0));
    CounterRng u(3);
    for (int i = 0; i < 1000; ++i) {
        const double x = u.uniform();
        ASSERT_GE(x, 0.0);
        ASSERT_LT(x, 1.0);
        ASSERT_LT(u.below(7), 7u);
    }
}

TEST(Rng, NormalMoments) {
    CounterRng r(5);
    double s = 0, s2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = r.normal();
        s += z;
        s2 += z * z;
    }
    EXPECT_NEAR(s / n, 0.0, 0.01);
    EXPECT_NEAR(s2 / n, 1.0, 0.01);
}

TEST(Datagen, Determinism) {
    const auto eq = [](const LabeledDataset& a, const LabeledDataset& b) {
        return a.points.matrix() == b.points.matrix() && a.truth.labels == b.truth.labels;
    };
    EXPECT_TRUE(eq(gen_moons(100, 0.05, 3), gen_moons(100, 0.05, 3)));
    EXPECT_FALSE(eq(gen_moons(100, 0.05, 3), gen_moons(100, 0.05, 4)));
    EXPECT_TRUE(eq(gen_circles(100, 0.02, 0.5, 3), gen_circles(100, 0.02, 0.5, 3)));
    EXPECT_TRUE(eq(gen_aniso_blobs(90, 3), gen_aniso_blobs(90, 3)));
    const MixtureSpec spec = MixtureSpec::unit_axes(2, 0.1, 2);
    EXPECT_TRUE(eq(gen_gaussian_mixture(spec, 50, 9), gen_gaussian_mixture(spec, 50, 9)));
    const IntervalSet set{{{0.0, 1.0 / 3.0}, {2.0 / 3.0, 1.0}}};
    EXPECT_TRUE(eq(gen_uniform_intervals(set, 50, 9), gen_uniform_intervals(set, 50, 9)));
}

TEST(Datagen, MixtureTinySigma) {
    MixtureSpec spec = MixtureSpec::unit_axes(3, 1e-12, 3);
    const LabeledDataset ds = gen_gaussian_mixture(spec, 300, 1);
    for (std::size_t i = 0; i < ds.points.size(); ++i)
        EXPECT_LT((ds.points.row(i) - spec.means.row(ds.truth.labels[i])).norm(), 1e-9);
}

TEST(Datagen, MixtureValidation) {
    MixtureSpec bad = MixtureSpec::one_d({0.5, 0.4}, {0.0, 1.0}, {0.1, 0.1});
    EXPECT_THROW(gen_gaussian_mixture(bad, 10, 0), ParameterError);
    MixtureSpec neg = MixtureSpec::one_d({0.5, 0.5}, {0.0, 1.0}, {0.1, 0.0});
    EXPECT_THROW(gen_gaussian_mixture(neg, 10, 0), ParameterError);
}

// Binomial concentration of the component counts.
TEST(Datagen, MixtureComponentCounts) {
    const MixtureSpec spec = MixtureSpec::unit_axes(2, 0.1, 2);
    int ok = 0;
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const LabeledDataset ds = gen_gaussian_mixture(spec, 400, seed);
        const double c0 = static_cast<double>(count_label(ds, 0));
        if (std::abs(c0 - 200.0) <= 4.0 * std::sqrt(400 * 0.25)) ++ok;
    }
    EXPECT_GE(ok, 95);
}

TEST(Datagen, UnitAxesMeans) {
    const MixtureSpec s = MixtureSpec::unit_axes(3, 0.2, 2);
    EXPECT_EQ(s.means.row(0).norm(), 0.0);
    EXPECT_EQ(s.means(1, 0), 1.0);
    EXPECT_EQ(s.means(2, 1), 1.0);
    EXPECT_DOUBLE_EQ(s.weights[0] + s.weights[1] + s.weights[2], 1.0);
}

TEST(Datagen, UniformIntervals) {
    const LabeledDataset one = gen_uniform_intervals(IntervalSet{{{0.0, 1.0}}}, 10000, 2);
    EXPECT_NEAR(one.points.matrix().col(0).mean(), 0.5, 0.02);

    const IntervalSet two{{{0.0, 1.0 / 3.0}, {2.0 / 3.0, 1.0}}};
    const LabeledDataset ds = gen_uniform_intervals(two, 2000, 2);
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
        const double x = ds.points.row(i)(0);
        const bool in0 = x >= 0.0 && x <= 1.0 / 3.0, in1 = x >= 2.0 / 3.0 && x <= 1.0;
        ASSERT_TRUE(in0 || in1) << x;
    }
    EXPECT_NEAR(static_cast<double>(count_label(ds, 1)), 1000.0, 100.0);
    EXPECT_THROW(gen_uniform_intervals(IntervalSet{}, 10, 0), ParameterError);
    EXPECT_THROW(gen_uniform_intervals(IntervalSet{{{0.0, 1.0}, {0.5, 2.0}}}, 10, 0), ParameterError);
}

TEST(Datagen, IntervalLabelIsIntervalIndex) {
    const IntervalSet two{{{0.0, 1.0 / 3.0}, {2.0 / 3.0, 1.0}}};
    const LabeledDataset ds = gen_uniform_intervals(two, 500, 8);
    // Labels are numbered by first occurrence; points in the same interval share a label.
    for (std::size_t i = 0; i < ds.points.size(); ++i)
        for (std::size_t j = 0; j < ds.points.size(); j += 37) {
            const bool same = (ds.points.row(i)(0) < 0.5) == (ds.points.row(j)(0) < 0.5);
            EXPECT_EQ(same, ds.truth.labels[i] == ds.truth.labels[j]);
        }
}

TEST(Datagen, MoonsOnArcsWithoutNoise) {
    const LabeledDataset ds = gen_moons(400, 0.0, 1);
    ASSERT_EQ(ds.truth.num_clusters, 2);
    EXPECT_EQ(counts(ds.truth), (std::vector<std::size_t>{200, 200}));
    double min_gap = 1e300;
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
        const double x = ds.points.row(i)(0), y = ds.points.row(i)(1);
        const double r_upper = std::hypot(x, y), r_lower = std::hypot(x - 1.0, y - 0.5);
        const bool upper = std::abs(r_upper - 1.0) < 1e-12 && y >= -1e-12;
        const bool lower = std::abs(r_lower - 1.0) < 1e-12 && y <= 0.5 + 1e-12;
        EXPECT_TRUE(upper || lower) << x << "," << y;
        for (std::size_t j = 0; j < ds.points.size(); ++j)
            if (ds.truth.labels[i] != ds.truth.labels[j])
                min_gap = std::min(min_gap, (ds.points.row(i) - ds.points.row(j)).norm());
    }
    EXPECT_GT(min_gap, 0.29);
    EXPECT_THROW(gen_moons(10, -0.1, 0), ParameterError);
}

// Closest approach of the two continuous arcs.
TEST(Datagen, MoonsArcGapOracle) {
    double best = 1e300;
    const int m = 4000;
    for (int a = 0; a <= m; ++a) {
        const double t = std::numbers::pi * a / m;
        for (int b = 0; b <= m; b += 1) {
            const double s = std::numbers::pi * b / m;
            best = std::min(best, std::hypot(std::cos(t) - (1 - std::cos(s)), std::sin(t) - (0.5 - std::sin(s))));
        }
    }
    EXPECT_GT(best, 0.29);
}

TEST(Datagen, CirclesRadii) {
    const LabeledDataset ds = gen_circles(1000, 0.0, 0.5, 1);
    EXPECT_EQ(counts(ds.truth), (std::vector<std::size_t>{500, 500}));
    for (std::size_t i = 0; i < ds.points.size(); ++i) {
        const double r = ds.points.row(i).norm();
        EXPECT_TRUE(std::abs(r - 1.0) < 1e-12 || std::abs(r - 0.5) < 1e-12) << r;
    }
    EXPECT_THROW(gen_circles(10, 0.0, 1.0, 0), ParameterError);
    EXPECT_THROW(gen_circles(10, 0.0, 0.0, 0), ParameterError);
}

TEST(Datagen, AnisoCovariance) {
    const LabeledDataset ds = gen_aniso_blobs(30000, 4);
    Eigen::Matrix2d T;
    T << kAnisoTransform[0][0], kAnisoTransform[0][1], kAnisoTransform[1][0], kAnisoTransform[1][1];
    const Eigen::Matrix2d expected = T * T.transpose();
    for (int k = 0; k < 3; ++k) {
        std::vector<Eigen::Vector2d> pts;
        for (std::size_t i = 0; i < ds.points.size(); ++i)
            if (ds.truth.labels[i] == k) pts.emplace_back(ds.points.row(i)(0), ds.points.row(i)(1));
        ASSERT_GT(pts.size(), 9000u);
        Eigen::Vector2d mean = Eigen::Vector2d::Zero();
        for (const auto& p : pts) mean += p;
        mean /= static_cast<double>(pts.size());
        Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
        for (const auto& p : pts) cov += (p - mean) * (p - mean).transpose();
        cov /= static_cast<double>(pts.size() - 1);
        EXPECT_LT((cov - expected).cwiseAbs().maxCoeff(), 0.05) << "blob " << k;
        // The mean is the transformed center of one of the blobs.
        double closest = 1e300;
        for (const auto& c : kAnisoCenters) closest = std::min(closest, (mean - T * Eigen::Vector2d(c[0], c[1])).norm());
        EXPECT_LT(closest, 0.05);
    }
    EXPECT_THROW(gen_aniso_blobs(2, 0), ParameterError);
}

TEST(Datagen, ClassesNonEmpty) {
    for (std::uint64_t seed : {0u, 7u, 123u}) {
        EXPECT_EQ(gen_moons(40, 0.05, seed).truth.num_clusters, 2);
        EXPECT_EQ(gen_circles(40, 0.05, 0.5, seed).truth.num_clusters, 2);
        EXPECT_EQ(gen_aniso_blobs(30, seed).truth.num_clusters, 3);
        EXPECT_EQ(gen_gaussian_mixture(MixtureSpec::unit_axes(3, 0.1, 3), 30, seed).truth.num_clusters, 3);
    }
}
