#pragma once

#include "leapclust/types.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace leapclust {

/// Isotropic Gaussian mixture. `means` holds one component mean per row.
struct MixtureSpec {
    std::vector<double> weights;
    RowMatrix means;
    std::vector<double> sigmas;

    std::size_t components() const noexcept { return weights.size(); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(means.cols()); }
    void validate() const;

    /// K components in R^K (or R^dim) with means at 0, e_1, ..., e_{K-1}, equal weights and
    /// common sigma.
    static MixtureSpec unit_axes(std::size_t k, double sigma, std::size_t dim);
    /// One-dimensional mixture.
    static MixtureSpec one_d(std::vector<double> weights, std::vector<double> means, std::vector<double> sigmas);
};

/// Disjoint intervals (lo, hi), lo < hi.
struct IntervalSet {
    std::vector<std::pair<double, double>> intervals;
    double total_length() const;
    void validate() const;
};

struct LabeledDataset {
    PointSet points;
    ClusterAssignment truth;
    std::uint64_t seed = 0;
    std::string generator_name;
};

LabeledDataset gen_gaussian_mixture(const MixtureSpec& spec, std::size_t n, std::uint64_t seed);
LabeledDataset gen_uniform_intervals(const IntervalSet& set, std::size_t n, std::uint64_t seed);

/// Upper arc (cos t, sin t) and lower arc (1 - cos t, 0.5 - sin t), t evenly spaced on
/// [0, pi]; n/2 points on the upper arc. Gaussian noise of std `noise`, then a seeded shuffle.
LabeledDataset gen_moons(std::size_t n, double noise, std::uint64_t seed);

/// Outer circle of radius 1 (n/2 points) and inner circle of radius `factor`, angles evenly
/// spaced on [0, 2 pi). Gaussian noise, then a seeded shuffle.
LabeledDataset gen_circles(std::size_t n, double noise, double factor, std::uint64_t seed);

inline constexpr double kAnisoTransform[2][2] = {{0.6, -0.6}, {-0.4, 0.8}};
inline constexpr double kAnisoCenters[3][2] = {{-6.0, -7.0}, {5.0, -1.0}, {0.0, 6.0}};

/// Three unit-variance blobs at kAnisoCenters (sizes as even as possible), each point then
/// mapped x -> T x with T = kAnisoTransform. Shuffled.
LabeledDataset gen_aniso_blobs(std::size_t n, std::uint64_t seed);

}  // namespace leapclust
