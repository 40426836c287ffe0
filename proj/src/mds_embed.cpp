#include "leapclust/mds_embed.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace leapclust {

PointSet Embedding::as_points() const {
    return PointSet(RowMatrix(coords.transpose()));
}

GramMatrix gram_from_lf(const DistanceMatrix& lf) {
    const Matrix& D = lf.matrix();
    const Eigen::Index n = D.rows();
    const Matrix sq = D.cwiseProduct(D);
    GramMatrix g;
    g.values.resize(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
        for (Eigen::Index i = 0; i < n; ++i) {
            g.values(i, j) = sq(i, j) - sq(0, j) - sq(0, i);
        }
    }
    return g;
}

EigenSpectrum eig_sym(const GramMatrix& gram) {
    const Matrix& G = gram.values;
    const Eigen::Index n = G.rows();
    if (n != G.cols()) throw InputError("Gram matrix must be square");
    EigenSpectrum out;
    if (n == 0) return out;

    Eigen::SelfAdjointEigenSolver<Matrix> solver(G, Eigen::ComputeEigenvectors);
    if (solver.info() != Eigen::Success) {
        throw SolverError("symmetric eigensolver did not converge",
                          std::numeric_limits<double>::infinity());
    }
    const Vector& vals = solver.eigenvalues();
    const Matrix& vecs = solver.eigenvectors();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        const double ma = std::abs(vals(a));
        const double mb = std::abs(vals(b));
        if (ma != mb) return ma > mb;
        if (vals(a) != vals(b)) return vals(a) > vals(b);
        return a < b;
    });

    out.eigenvalues.resize(n);
    out.eigenvectors.resize(n, n);
    for (Eigen::Index l = 0; l < n; ++l) {
        const Eigen::Index src = order[static_cast<std::size_t>(l)];
        out.eigenvalues(l) = vals(src);
        Vector q = vecs.col(src);
        Eigen::Index arg = 0;
        q.cwiseAbs().maxCoeff(&arg);
        if (q(arg) < 0.0) q = -q;
        out.eigenvectors.col(l) = q;
    }

    const Matrix residual = G * out.eigenvectors - out.eigenvectors * out.eigenvalues.asDiagonal();
    double worst = 0.0;
    for (Eigen::Index l = 0; l < n; ++l) {
        worst = std::max(worst, residual.col(l).norm() / (1.0 + std::abs(out.eigenvalues(l))));
    }
    out.max_residual = worst;
    if (worst > 1e-8) throw SolverError("eigenpair residual exceeds 1e-8 (1 + |lambda|)", worst);
    const double ortho =
        (out.eigenvectors.transpose() * out.eigenvectors - Matrix::Identity(n, n)).cwiseAbs().maxCoeff();
    if (ortho > 1e-8) throw SolverError("eigenvectors are not orthonormal within 1e-8", ortho);
    return out;
}

std::size_t select_dim(const EigenSpectrum& spectrum, std::size_t n, const DimPolicy& policy) {
    if (n == 0) throw ParameterError("select_dim needs n >= 1");
    if (const auto* fixed = std::get_if<FixedDim>(&policy)) {
        if (fixed->dim < 1) throw ParameterError("fixed embedding dimension must be >= 1");
        if (n == 1 && fixed->dim == 1) return 1;
        if (fixed->dim >= n) {
            throw ParameterError("fixed embedding dimension " + std::to_string(fixed->dim) +
                                 " must be below n = " + std::to_string(n));
        }
        return fixed->dim;
    }
    const double r = std::get<EigengapRatio>(policy).ratio;
    if (!(r > 0.0)) throw ParameterError("eigengap ratio must be positive");
    if (n == 1) return 1;
    const std::size_t m = std::min(n, spectrum.size());
    if (m == 0) return 1;
    const double top = std::abs(spectrum.eigenvalues(0));
    if (top == 0.0) return 1;
    for (std::size_t L = 1; L < n && L < m; ++L) {
        if (std::abs(spectrum.eigenvalues(static_cast<Eigen::Index>(L))) / top < r) return L;
    }
    return n - 1;
}

Embedding embed(const EigenSpectrum& spectrum, std::size_t dim) {
    const std::size_t n = spectrum.size();
    if (dim < 1 || dim > n) {
        throw ParameterError("embedding dimension " + std::to_string(dim) + " outside [1, " +
                             std::to_string(n) + "]");
    }
    const auto L = static_cast<Eigen::Index>(dim);
    Embedding e;
    e.coords = spectrum.eigenvectors.leftCols(L).transpose();
    for (Eigen::Index l = 0; l < L; ++l) {
        e.coords.row(l) *= std::sqrt(std::abs(spectrum.eigenvalues(l)));
    }
    return e;
}

}  // namespace leapclust
