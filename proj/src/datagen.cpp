#include "leapclust/datagen.hpp"

#include "leapclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace leapclust {

void MixtureSpec::validate() const {
    const std::size_t k = weights.size();
    if (k == 0) throw ParameterError("mixture needs at least one component");
    if (static_cast<std::size_t>(means.rows()) != k || sigmas.size() != k) {
        throw ParameterError("mixture weights, means and sigmas must have the same length");
    }
    if (means.cols() < 1) throw ParameterError("mixture means need dimension >= 1");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w > 0.0)) throw ParameterError("mixture weights must be positive");
        sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) throw ParameterError("mixture weights must sum to 1");
    for (double s : sigmas)
        if (!(s > 0.0) || !std::isfinite(s)) throw ParameterError("mixture sigmas must be positive");
    if (!means.allFinite()) throw ParameterError("mixture means must be finite");
}

MixtureSpec MixtureSpec::unit_axes(std::size_t k, double sigma, std::size_t dim) {
    if (k == 0 || dim == 0 || k - 1 > dim) throw ParameterError("unit_axes needs 1 <= k <= dim + 1");
    MixtureSpec s;
    s.weights.assign(k, 1.0 / static_cast<double>(k));
    s.means = RowMatrix::Zero(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(dim));
    for (std::size_t c = 1; c < k; ++c) s.means(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(c - 1)) = 1.0;
    s.sigmas.assign(k, sigma);
    return s;
}

MixtureSpec MixtureSpec::one_d(std::vector<double> weights, std::vector<double> means, std::vector<double> sigmas) {
    MixtureSpec s;
    s.weights = std::move(weights);
    s.means.resize(static_cast<Eigen::Index>(means.size()), 1);
    for (std::size_t i = 0; i < means.size(); ++i) s.means(static_cast<Eigen::Index>(i), 0) = means[i];
    s.sigmas = std::move(sigmas);
    return s;
}

double IntervalSet::total_length() const {
    double t = 0.0;
    for (const auto& [lo, hi] : intervals) t += hi - lo;
    return t;
}

void IntervalSet::validate() const {
    if (intervals.empty()) throw ParameterError("interval set is empty");
    for (const auto& [lo, hi] : intervals) {
        if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) throw ParameterError("intervals need finite lo < hi");
    }
    for (std::size_t i = 0; i < intervals.size(); ++i)
        for (std::size_t j = i + 1; j < intervals.size(); ++j) {
            const auto& a = intervals[i];
            const auto& b = intervals[j];
            if (a.first < b.second && b.first < a.second) throw ParameterError("intervals must be pairwise disjoint");
        }
}

namespace {

void shuffle_dataset(RowMatrix& pts, std::vector<int>& labels, CounterRng& rng) {
    const std::size_t n = labels.size();
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.below(i));
        pts.row(static_cast<Eigen::Index>(i - 1)).swap(pts.row(static_cast<Eigen::Index>(j)));
        std::swap(labels[i - 1], labels[j]);
    }
}

LabeledDataset finish(RowMatrix pts, const std::vector<int>& labels, std::uint64_t seed, std::string name) {
    LabeledDataset ds;
    ds.points = PointSet(std::move(pts));
    // Class ids are the generator's component ids, not first-occurrence order.
    ds.truth.labels = labels;
    ds.truth.num_clusters = labels.empty() ? 0 : *std::max_element(labels.begin(), labels.end()) + 1;
    ds.seed = seed;
    ds.generator_name = std::move(name);
    return ds;
}

}  // namespace

LabeledDataset gen_gaussian_mixture(const MixtureSpec& spec, std::size_t n, std::uint64_t seed) {
    spec.validate();
    if (n < 1) throw ParameterError("dataset size must be >= 1");
    CounterRng rng(seed);
    const std::size_t k = spec.components();
    std::vector<double> cumulative(k);
    std::partial_sum(spec.weights.begin(), spec.weights.end(), cumulative.begin());
    RowMatrix pts(static_cast<Eigen::Index>(n), spec.means.cols());
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = rng.uniform() * cumulative.back();
        std::size_t c = static_cast<std::size_t>(std::upper_bound(cumulative.begin(), cumulative.end(), u) - cumulative.begin());
        c = std::min(c, k - 1);
        labels[i] = static_cast<int>(c);
        for (Eigen::Index j = 0; j < spec.means.cols(); ++j) {
            pts(static_cast<Eigen::Index>(i), j) = spec.means(static_cast<Eigen::Index>(c), j) + spec.sigmas[c] * rng.normal();
        }
    }
    return finish(std::move(pts), labels, seed, "gaussian_mixture");
}

LabeledDataset gen_uniform_intervals(const IntervalSet& set, std::size_t n, std::uint64_t seed) {
    set.validate();
    if (n < 1) throw ParameterError("dataset size must be >= 1");
    CounterRng rng(seed);
    const double total = set.total_length();
    RowMatrix pts(static_cast<Eigen::Index>(n), 1);
    std::vector<int> labels(n);
    for (std::size_t i = 0; i < n; ++i) {
        // One uniform on [0, total) mapped through the concatenated intervals.
        double u = rng.uniform() * total;
        std::size_t c = 0;
        while (c + 1 < set.intervals.size() && u >= set.intervals[c].second - set.intervals[c].first) {
            u -= set.intervals[c].second - set.intervals[c].first;
            ++c;
        }
        const auto& [lo, hi] = set.intervals[c];
        pts(static_cast<Eigen::Index>(i), 0) = std::min(lo + u, std::nextafter(hi, lo));
        labels[i] = static_cast<int>(c);
    }
    return finish(std::move(pts), labels, seed, "uniform_intervals");
}

namespace {

double evenly_spaced(std::size_t k, std::size_t count, double end, bool include_end) {
    if (count <= 1) return 0.0;
    const double denom = include_end ? static_cast<double>(count - 1) : static_cast<double>(count);
    return end * static_cast<double>(k) / denom;
}

}  // namespace

LabeledDataset gen_moons(std::size_t n, double noise, std::uint64_t seed) {
    if (!(noise >= 0.0)) throw ParameterError("moons noise must be >= 0");
    if (n < 1) throw ParameterError("dataset size must be >= 1");
    CounterRng rng(seed);
    const std::size_t n_upper = n / 2;
    const std::size_t n_lower = n - n_upper;
    RowMatrix pts(static_cast<Eigen::Index>(n), 2);
    std::vector<int> labels(n);
    for (std::size_t k = 0; k < n_upper; ++k) {
        const double t = evenly_spaced(k, n_upper, std::numbers::pi, true);
        pts(static_cast<Eigen::Index>(k), 0) = std::cos(t);
        pts(static_cast<Eigen::Index>(k), 1) = std::sin(t);
        labels[k] = 0;
    }
    for (std::size_t k = 0; k < n_lower; ++k) {
        const double t = evenly_spaced(k, n_lower, std::numbers::pi, true);
        const auto row = static_cast<Eigen::Index>(n_upper + k);
        pts(row, 0) = 1.0 - std::cos(t);
        pts(row, 1) = 0.5 - std::sin(t);
        labels[n_upper + k] = 1;
    }
    if (noise > 0.0)
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            for (Eigen::Index j = 0; j < 2; ++j) pts(i, j) += noise * rng.normal();
    shuffle_dataset(pts, labels, rng);
    return finish(std::move(pts), labels, seed, "moons");
}

LabeledDataset gen_circles(std::size_t n, double noise, double factor, std::uint64_t seed) {
    if (!(factor > 0.0 && factor < 1.0)) throw ParameterError("circles factor must lie in (0, 1)");
    if (!(noise >= 0.0)) throw ParameterError("circles noise must be >= 0");
    if (n < 1) throw ParameterError("dataset size must be >= 1");
    CounterRng rng(seed);
    const std::size_t n_outer = n / 2;
    const std::size_t n_inner = n - n_outer;
    RowMatrix pts(static_cast<Eigen::Index>(n), 2);
    std::vector<int> labels(n);
    for (std::size_t k = 0; k < n_outer; ++k) {
        const double t = evenly_spaced(k, n_outer, 2.0 * std::numbers::pi, false);
        pts(static_cast<Eigen::Index>(k), 0) = std::cos(t);
        pts(static_cast<Eigen::Index>(k), 1) = std::sin(t);
        labels[k] = 0;
    }
    for (std::size_t k = 0; k < n_inner; ++k) {
        const double t = evenly_spaced(k, n_inner, 2.0 * std::numbers::pi, false);
        const auto row = static_cast<Eigen::Index>(n_outer + k);
        pts(row, 0) = factor * std::cos(t);
        pts(row, 1) = factor * std::sin(t);
        labels[n_outer + k] = 1;
    }
    if (noise > 0.0)
        for (Eigen::Index i = 0; i < pts.rows(); ++i)
            for (Eigen::Index j = 0; j < 2; ++j) pts(i, j) += noise * rng.normal();
    shuffle_dataset(pts, labels, rng);
    return finish(std::move(pts), labels, seed, "circles");
}

LabeledDataset gen_aniso_blobs(std::size_t n, std::uint64_t seed) {
    if (n < 3) throw ParameterError("aniso blobs need n >= 3");
    CounterRng rng(seed);
    RowMatrix pts(static_cast<Eigen::Index>(n), 2);
    std::vector<int> labels(n);
    std::size_t row = 0;
    for (std::size_t c = 0; c < 3; ++c) {
        const std::size_t count = n / 3 + (c < n % 3 ? 1 : 0);
        for (std::size_t k = 0; k < count; ++k, ++row) {
            const double x = kAnisoCenters[c][0] + rng.normal();
            const double y = kAnisoCenters[c][1] + rng.normal();
            pts(static_cast<Eigen::Index>(row), 0) = kAnisoTransform[0][0] * x + kAnisoTransform[0][1] * y;
            pts(static_cast<Eigen::Index>(row), 1) = kAnisoTransform[1][0] * x + kAnisoTransform[1][1] * y;
            labels[row] = static_cast<int>(c);
        }
    }
    shuffle_dataset(pts, labels, rng);
    return finish(std::move(pts), labels, seed, "aniso_blobs");
}

}  // namespace leapclust
