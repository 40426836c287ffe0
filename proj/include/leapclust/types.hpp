#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace leapclust {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Error hierarchy. The CLI maps InputError (and subclasses) to exit code 2.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InputError : public Error {
public:
    using Error::Error;
};

class ParseError : public InputError {
public:
    ParseError(const std::string& what, std::size_t line)
        : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ParameterError : public Error {
public:
    using Error::Error;
};

class DomainError : public Error {
public:
    using Error::Error;
};

class SolverError : public Error {
public:
    SolverError(const std::string& what, double residual)
        : Error(what + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

/// n points in R^d, one point per row.
class PointSet {
public:
    PointSet() = default;
    explicit PointSet(RowMatrix points);

    std::size_t size() const noexcept { return static_cast<std::size_t>(points_.rows()); }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(points_.cols()); }
    const RowMatrix& matrix() const noexcept { return points_; }
    auto row(std::size_t i) const { return points_.row(static_cast<Eigen::Index>(i)); }

    static PointSet from_rows(const std::vector<std::vector<double>>& rows);

private:
    RowMatrix points_;
};

/// Symmetric hollow n x n matrix of leapfrog distances.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(Matrix values);

    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.rows()); }
    const Matrix& matrix() const noexcept { return values_; }
    double operator()(std::size_t i, std::size_t j) const {
        return values_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    }

private:
    Matrix values_;
};

/// Contiguous labels 0..K-1.
struct ClusterAssignment {
    std::vector<int> labels;
    int num_clusters = 0;

    std::size_t size() const noexcept { return labels.size(); }

    /// Renumbers arbitrary integer labels by first occurrence.
    static ClusterAssignment from_labels(const std::vector<int>& raw);
    std::vector<std::size_t> cluster_sizes() const;
};

}  // namespace leapclust
