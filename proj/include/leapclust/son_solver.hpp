#pragma once

#include "leapclust/types.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace leapclust {

/// Parameters for sum-of-norms clustering,
///   min_x 1/2 sum_i ||x_i - a_i||^2 + lambda sum_{i<j} ||x_i - x_j||.
///
/// Tolerances are relative to the data scale max_i ||a_i - mean(a)|| (1 when every point is
/// the mean).
struct SonParams {
    double lambda = 0.0;
    double primal_tol = 1e-6;
    double dual_tol = 1e-6;
    std::size_t max_iters = 10000;
    double admm_rho = 1.0;
    /// Over-relaxation factor for the difference step; 1 is plain ADMM.
    double relaxation = 1.0;
    bool record_objective = false;

    void validate() const;
};

struct SonSolution {
    RowMatrix centroids;  // n x p
    double lambda = 0.0;
    std::size_t iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0;
    bool converged = false;
    /// Objective at the centroid iterate of each iteration, when requested.
    std::vector<double> objective_trace;
};

/// Full ADMM state. Passing the state of a previous solve to the next one (with a different
/// lambda) warm-starts the iteration; duals are rescaled by the lambda ratio.
struct SonState {
    RowMatrix x;
    std::vector<double> v;  // pairwise differences, pair-major
    std::vector<double> u;  // scaled duals
    double lambda = 0.0;
    double rho = 0.0;
};

/// ADMM step 40 / n, used by the pipeline instead of the fixed default.
double size_scaled_rho(std::size_t n);

/// SON objective evaluated at the given centroids.
double son_objective(const RowMatrix& data, const RowMatrix& centroids, double lambda);

/// ADMM on the split x_i - x_j = v_ij over all pairs. The x-step solves
/// (I + rho (n I - 1 1^T)) x = rhs in closed form, the v-step is a group soft-threshold at
/// lambda / rho. Starts from x = a, v = differences of a, u = 0 unless `warm` is given.
/// Never throws on non-convergence; check SonSolution::converged.
SonSolution solve_son(const PointSet& data, const SonParams& params, SonState* warm = nullptr);

/// i ~ j when ||x_i - x_j|| <= merge_tol; labels are connected components numbered by
/// first occurrence.
ClusterAssignment extract_clusters(const SonSolution& solution, double merge_tol);

/// 1e-3 times the data diameter (a tiny positive value when all points coincide).
double default_merge_tol(const PointSet& data);

struct LambdaMaxResult {
    double lambda = 0.0;
    std::size_t probes = 0;
};

/// Smallest lambda (to 1% relative width, at most 50 solves) at which SON returns a single
/// cluster. Returns 0 when every point coincides.
LambdaMaxResult lambda_max(const PointSet& data, const SonParams& params,
                           std::optional<double> merge_tol = std::nullopt);

struct GeometricGrid {
    double lo;
    double hi;
    std::size_t count;
};

struct LinearGrid {
    double lo;
    double hi;
    double step;
};

struct ExplicitGrid {
    std::vector<double> values;
};

using GridSpec = std::variant<GeometricGrid, LinearGrid, ExplicitGrid>;

/// Grid values in ascending order. Throws ParameterError on an empty or malformed grid.
std::vector<double> grid_values(const GridSpec& grid);

struct GridPoint {
    double lambda = 0.0;
    int num_clusters = 0;
    double rand_index = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
};

struct GridSearchResult {
    double best_lambda = 0.0;
    double best_rand_index = 0.0;
    ClusterAssignment best_assignment;
    SonSolution best_solution;
    std::vector<GridPoint> trace;
    bool all_converged = true;
};

struct GridSearchOptions {
    std::optional<double> merge_tol;
    /// Score only these indices (e.g. points near their component means). Empty = all points.
    std::vector<std::size_t> eval_subset;
    /// Reuse the previous grid point's solution as the starting point.
    bool warm_start = true;
    /// Once a grid point yields one cluster, every larger lambda does too (clusters never
    /// split as lambda grows); the remaining points inherit that result without a solve.
    bool stop_at_single_cluster = true;
};

/// Scans lambda over the grid and returns the value maximizing the Rand index against
/// `truth` (ties go to the smallest lambda).
GridSearchResult lambda_grid_search(const PointSet& data, const ClusterAssignment& truth,
                                    const GridSpec& grid, const SonParams& params,
                                    const GridSearchOptions& options = {});

}  // namespace leapclust
