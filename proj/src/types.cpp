#include "leapclust/types.hpp"

#include <cmath>
#include <unordered_map>

namespace leapclust {

PointSet::PointSet(RowMatrix points) : points_(std::move(points)) {
    if (points_.rows() < 1 || points_.cols() < 1) {
        throw InputError("point set needs at least one point of dimension >= 1");
    }
    if (!points_.allFinite()) {
        throw InputError("point set contains non-finite coordinates");
    }
}

PointSet PointSet::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) throw InputError("point set needs at least one point");
    const std::size_t d = rows.front().size();
    RowMatrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != d) {
            throw InputError("ragged point rows: row " + std::to_string(i) + " has " +
                             std::to_string(rows[i].size()) + " coordinates, expected " +
                             std::to_string(d));
        }
        for (std::size_t j = 0; j < d; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return PointSet(std::move(m));
}

DistanceMatrix::DistanceMatrix(Matrix values) : values_(std::move(values)) {
    if (values_.rows() != values_.cols()) throw InputError("distance matrix must be square");
    const Eigen::Index n = values_.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        if (values_(i, i) != 0.0) throw InputError("distance matrix diagonal must be zero");
        for (Eigen::Index j = 0; j < n; ++j) {
            const double v = values_(i, j);
            if (!std::isfinite(v) || v < 0.0) {
                throw InputError("distance matrix entries must be finite and non-negative");
            }
            if (v != values_(j, i)) throw InputError("distance matrix must be symmetric");
        }
    }
}

ClusterAssignment ClusterAssignment::from_labels(const std::vector<int>& raw) {
    ClusterAssignment out;
    out.labels.reserve(raw.size());
    std::unordered_map<int, int> remap;
    for (int r : raw) {
        auto [it, inserted] = remap.try_emplace(r, static_cast<int>(remap.size()));
        out.labels.push_back(it->second);
    }
    out.num_clusters = static_cast<int>(remap.size());
    return out;
}

std::vector<std::size_t> ClusterAssignment::cluster_sizes() const {
    std::vector<std::size_t> sizes(static_cast<std::size_t>(num_clusters), 0);
    for (int l : labels) ++sizes[static_cast<std::size_t>(l)];
    return sizes;
}

}  // namespace leapclust
