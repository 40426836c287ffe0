#pragma once

#include "leapclust/types.hpp"

#include <cstddef>
#include <variant>

namespace leapclust {

/// G = d - d(0,:) 1^T - 1 d(0,:)^T where d is the entrywise square of the leapfrog matrix.
/// Row and column 0 of G are identically zero.
struct GramMatrix {
    Matrix values;
    std::size_t size() const noexcept { return static_cast<std::size_t>(values.rows()); }
};

/// Eigenpairs sorted by |lambda| descending (ties: larger signed value first, then original
/// index). Each eigenvector column is signed so its largest-magnitude entry is positive.
struct EigenSpectrum {
    Vector eigenvalues;
    Matrix eigenvectors;  // column l pairs with eigenvalues(l)
    double max_residual = 0.0;
    std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
};

/// Column i is b_i, the re-embedded point.
struct Embedding {
    Matrix coords;  // L x n
    std::size_t dim() const noexcept { return static_cast<std::size_t>(coords.rows()); }
    std::size_t size() const noexcept { return static_cast<std::size_t>(coords.cols()); }
    /// Points as rows, the layout every clusterer consumes.
    PointSet as_points() const;
};

struct FixedDim {
    std::size_t dim;
};

struct EigengapRatio {
    double ratio = 0.05;
};

using DimPolicy = std::variant<FixedDim, EigengapRatio>;

GramMatrix gram_from_lf(const DistanceMatrix& lf);

/// Symmetric eigendecomposition. Throws SolverError if the residual contract
/// ||G q - lambda q|| <= 1e-8 (1 + |lambda|) or orthonormality fails.
EigenSpectrum eig_sym(const GramMatrix& gram);

/// Fixed(L) returns L (must satisfy 1 <= L < n). EigengapRatio(r) returns the smallest L with
/// |lambda_{L+1}| / |lambda_1| < r, at least 1 and at most n - 1. A single point yields 1.
std::size_t select_dim(const EigenSpectrum& spectrum, std::size_t n, const DimPolicy& policy);

/// B = Diag(sqrt|lambda_1|, ..., sqrt|lambda_L|) Q_L^T.
Embedding embed(const EigenSpectrum& spectrum, std::size_t dim);

}  // namespace leapclust
