#include "leapclust/son_solver.hpp"

#include "leapclust/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace leapclust {

void SonParams::validate() const {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw ParameterError("lambda must be finite and >= 0");
    if (!(primal_tol > 0.0) || !(dual_tol > 0.0)) throw ParameterError("SON tolerances must be > 0");
    if (max_iters < 1) throw ParameterError("max_iters must be >= 1");
    if (!(admm_rho > 0.0)) throw ParameterError("admm_rho must be > 0");
    if (!(relaxation > 0.0 && relaxation < 2.0)) throw ParameterError("relaxation must lie in (0, 2)");
}

namespace {

double data_scale(const RowMatrix& a) {
    const Eigen::RowVectorXd mean = a.colwise().mean();
    double s = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i) s = std::max(s, (a.row(i) - mean).norm());
    return s > 0.0 ? s : 1.0;
}

// One ADMM sweep over all pairs, fused with the accumulation the next x-step needs.
// Returns the primal residual.

template <int P>
double pair_sweep(const double* x, std::size_t n, int p_dyn, double threshold, double alpha, double* v,
                       double* u, double* z, double* dz) {
    const int p = P > 0 ? P : p_dyn;
    double primal2 = 0.0;
    std::size_t l = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x + i * static_cast<std::size_t>(p);
        double* zi = z + i * static_cast<std::size_t>(p);
        double* dzi = dz + i * static_cast<std::size_t>(p);
        for (std::size_t j = i + 1; j < n; ++j, ++l) {
            const double* xj = x + j * static_cast<std::size_t>(p);
            double* vl = v + l * static_cast<std::size_t>(p);
            double* ul = u + l * static_cast<std::size_t>(p);
            double* zj = z + j * static_cast<std::size_t>(p);
            double* dzj = dz + j * static_cast<std::size_t>(p);

            double t_sq = 0.0;
            for (int c = 0; c < p; ++c) {
                const double d = xi[c] - xj[c];
                const double t = alpha * d + (1.0 - alpha) * vl[c] + ul[c];
                t_sq += t * t;
            }
            const double t_norm = std::sqrt(t_sq);
            const double shrink = t_norm > threshold ? 1.0 - threshold / t_norm : 0.0;
            double r_sq = 0.0;
            for (int c = 0; c < p; ++c) {
                const double d = xi[c] - xj[c];
                const double relaxed = alpha * d + (1.0 - alpha) * vl[c];
                const double t = relaxed + ul[c];
                const double vnew = shrink * t;
                const double dv = vnew - vl[c];
                const double r = d - vnew;
                r_sq += r * r;
                vl[c] = vnew;
                ul[c] = t - vnew;
                const double w = vnew - ul[c];
                zi[c] += w;
                zj[c] -= w;
                dzi[c] += dv;
                dzj[c] -= dv;
            }
            primal2 = std::max(primal2, r_sq);
        }
    }
    return std::sqrt(primal2);
}

double sweep(const double* x, std::size_t n, int p, double threshold, double alpha, double* v, double* u,
                  double* z, double* dz) {
    switch (p) {
        case 1: return pair_sweep<1>(x, n, p, threshold, alpha, v, u, z, dz);
        case 2: return pair_sweep<2>(x, n, p, threshold, alpha, v, u, z, dz);
        case 3: return pair_sweep<3>(x, n, p, threshold, alpha, v, u, z, dz);
        default: return pair_sweep<0>(x, n, p, threshold, alpha, v, u, z, dz);
    }
}

// Accumulates A^T (v - u) for the current state.
void accumulate_z(std::size_t n, int p, const std::vector<double>& v, const std::vector<double>& u,
                  RowMatrix& z) {
    z.setZero();
    std::size_t l = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j, ++l) {
            for (int c = 0; c < p; ++c) {
                const double w = v[l * p + c] - u[l * p + c];
                z(static_cast<Eigen::Index>(i), c) += w;
                z(static_cast<Eigen::Index>(j), c) -= w;
            }
        }
    }
}

}  // namespace

double size_scaled_rho(std::size_t n) { return 40.0 / static_cast<double>(std::max<std::size_t>(n, 1)); }

double son_objective(const RowMatrix& data, const RowMatrix& centroids, double lambda) {
    const Eigen::Index n = data.rows();
    double fit = 0.5 * (centroids - data).squaredNorm();
    double penalty = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i + 1; j < n; ++j) penalty += (centroids.row(i) - centroids.row(j)).norm();
    }
    return fit + lambda * penalty;
}

SonSolution solve_son(const PointSet& data, const SonParams& params, SonState* warm) {
    params.validate();
    const RowMatrix& a = data.matrix();
    const std::size_t n = data.size();
    const int p = static_cast<int>(data.dim());
    const std::size_t pairs = n * (n - 1) / 2;
    const double rho = params.admm_rho;
    const double scale = data_scale(a);

    SonSolution sol;
    sol.lambda = params.lambda;
    if (params.lambda == 0.0 || n == 1) {
        sol.centroids = a;
        sol.converged = true;
        sol.objective = son_objective(a, a, params.lambda);
        if (warm) {
            warm->x = a;
            warm->v.assign(pairs * static_cast<std::size_t>(p), 0.0);
            warm->u.assign(pairs * static_cast<std::size_t>(p), 0.0);
            std::size_t l = 0;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j, ++l)
                    for (int c = 0; c < p; ++c)
                        warm->v[l * p + c] = a(static_cast<Eigen::Index>(i), c) - a(static_cast<Eigen::Index>(j), c);
            warm->lambda = params.lambda;
            warm->rho = rho;
        }
        return sol;
    }

    SonState local;
    SonState& st = warm ? *warm : local;
    const bool reuse = warm && st.x.rows() == a.rows() && st.x.cols() == a.cols() &&
                       st.v.size() == pairs * static_cast<std::size_t>(p) && st.lambda > 0.0 &&
                       st.rho > 0.0;
    if (reuse) {
        // Optimal scaled duals are proportional to lambda / rho.
        const double factor = (params.lambda / st.lambda) * (st.rho / rho);
        for (double& w : st.u) w *= factor;
    } else {
        st.x = a;
        st.v.assign(pairs * static_cast<std::size_t>(p), 0.0);
        st.u.assign(pairs * static_cast<std::size_t>(p), 0.0);
        std::size_t l = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++l)
                for (int c = 0; c < p; ++c)
                    st.v[l * p + c] = a(static_cast<Eigen::Index>(i), c) - a(static_cast<Eigen::Index>(j), c);
    }
    st.lambda = params.lambda;
    st.rho = rho;

    const Eigen::RowVectorXd mean = a.colwise().mean();
    const double inv_diag = 1.0 / (1.0 + rho * static_cast<double>(n));
    const double threshold = params.lambda / rho;

    RowMatrix z(a.rows(), a.cols());
    RowMatrix dz(a.rows(), a.cols());
    accumulate_z(n, p, st.v, st.u, z);

    const double primal_limit = params.primal_tol * scale;
    const double dual_limit = params.dual_tol * scale;
    if (params.record_objective) sol.objective_trace.reserve(std::min<std::size_t>(params.max_iters, 100000));

    for (std::size_t it = 1; it <= params.max_iters; ++it) {
        // x-step: (I + rho (n I - 1 1^T)) x = a + rho z. The mean of the solution is mean(a)
        // because 1^T z = 0; the centered part is divided by 1 + rho n.
        RowMatrix rhs = a + rho * z;
        const Eigen::RowVectorXd rhs_mean = rhs.colwise().mean();
        for (Eigen::Index i = 0; i < a.rows(); ++i) st.x.row(i) = mean + (rhs.row(i) - rhs_mean) * inv_diag;

        z.setZero();
        dz.setZero();
        const double primal = sweep(st.x.data(), n, p, threshold, params.relaxation, st.v.data(), st.u.data(), z.data(), dz.data());

        double dual = 0.0;
        for (Eigen::Index i = 0; i < dz.rows(); ++i) dual = std::max(dual, dz.row(i).norm());
        dual *= rho;

        if (params.record_objective) sol.objective_trace.push_back(son_objective(a, st.x, params.lambda));

        sol.iterations = it;
        sol.primal_residual = primal;
        sol.dual_residual = dual;
        if (primal <= primal_limit && dual <= dual_limit) {
            sol.converged = true;
            break;
        }
    }
    sol.centroids = st.x;
    sol.objective = son_objective(a, st.x, params.lambda);
    return sol;
}

ClusterAssignment extract_clusters(const SonSolution& solution, double merge_tol) {
    if (!(merge_tol > 0.0)) throw ParameterError("merge_tol must be > 0");
    const RowMatrix& x = solution.centroids;
    const auto n = static_cast<std::size_t>(x.rows());
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t v) {
        while (parent[v] != v) {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        return v;
    };
    const double tol2 = merge_tol * merge_tol;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if ((x.row(static_cast<Eigen::Index>(i)) - x.row(static_cast<Eigen::Index>(j))).squaredNorm() <= tol2) {
                const std::size_t ri = find(i);
                const std::size_t rj = find(j);
                if (ri != rj) parent[std::max(ri, rj)] = std::min(ri, rj);
            }
        }
    }
    std::vector<int> raw(n);
    for (std::size_t i = 0; i < n; ++i) raw[i] = static_cast<int>(find(i));
    return ClusterAssignment::from_labels(raw);
}

double default_merge_tol(const PointSet& data) {
    const RowMatrix& a = data.matrix();
    double diam2 = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.rows(); ++j) diam2 = std::max(diam2, (a.row(i) - a.row(j)).squaredNorm());
    const double tol = 1e-3 * std::sqrt(diam2);
    return tol > 0.0 ? tol : 1e-12;
}

LambdaMaxResult lambda_max(const PointSet& data, const SonParams& params, std::optional<double> merge_tol) {
    const std::size_t n = data.size();
    if (n < 2) throw ParameterError("lambda_max needs at least two points");
    const RowMatrix& a = data.matrix();
    double diam = 0.0;
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = i + 1; j < a.rows(); ++j) diam = std::max(diam, (a.row(i) - a.row(j)).norm());
    LambdaMaxResult out;
    if (diam == 0.0) return out;

    const double tol = merge_tol.value_or(default_merge_tol(data));
    constexpr std::size_t kMaxProbes = 50;
    // Each probe starts from the solution of the closest lambda probed so far.
    std::vector<std::pair<double, SonState>> states;
    auto clusters_at = [&](double lambda) {
        SonParams p = params;
        p.lambda = lambda;
        p.record_objective = false;
        ++out.probes;
        SonState st;
        if (!states.empty()) {
            auto best = std::min_element(states.begin(), states.end(), [&](const auto& x, const auto& y) {
                return std::abs(std::log(x.first / lambda)) < std::abs(std::log(y.first / lambda));
            });
            st = best->second;
        }
        const int k = extract_clusters(solve_son(data, p, &st), tol).num_clusters;
        if (states.size() < 2) states.emplace_back(lambda, std::move(st));
        else {
            auto far = std::max_element(states.begin(), states.end(), [&](const auto& x, const auto& y) {
                return std::abs(std::log(x.first / lambda)) < std::abs(std::log(y.first / lambda));
            });
            *far = {lambda, std::move(st)};
        }
        return k;
    };

    // diam / n always fuses: g_ij = (a_i - a_j) / (n lambda) certifies x = mean(a).
    double hi = diam / static_cast<double>(n);
    while (out.probes < kMaxProbes && clusters_at(hi) != 1) hi *= 2.0;
    double lo = hi / 2.0;
    while (out.probes < kMaxProbes && clusters_at(lo) == 1) {
        hi = lo;
        lo = hi / 2.0;
    }
    while (out.probes < kMaxProbes && (hi - lo) > 0.01 * hi) {
        const double mid = 0.5 * (lo + hi);
        if (clusters_at(mid) == 1) hi = mid;
        else lo = mid;
    }
    out.lambda = hi;
    return out;
}

std::vector<double> grid_values(const GridSpec& grid) {
    std::vector<double> values;
    if (const auto* g = std::get_if<GeometricGrid>(&grid)) {
        if (g->count == 0 || !(g->lo > 0.0) || !(g->hi >= g->lo)) throw ParameterError("geometric grid needs 0 < lo <= hi and count >= 1");
        if (g->count == 1) return {g->lo};
        const double ratio = std::log(g->hi / g->lo) / static_cast<double>(g->count - 1);
        for (std::size_t k = 0; k < g->count; ++k) values.push_back(g->lo * std::exp(ratio * static_cast<double>(k)));
        values.back() = g->hi;
    } else if (const auto* g = std::get_if<LinearGrid>(&grid)) {
        if (!(g->step > 0.0) || !(g->hi >= g->lo) || g->lo < 0.0) throw ParameterError("linear grid needs step > 0 and 0 <= lo <= hi");
        const auto count = static_cast<std::size_t>(std::floor((g->hi - g->lo) / g->step + 1e-9)) + 1;
        for (std::size_t k = 0; k < count; ++k) values.push_back(g->lo + g->step * static_cast<double>(k));
    } else {
        values = std::get<ExplicitGrid>(grid).values;
        for (double v : values)
            if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("grid values must be finite and >= 0");
        std::sort(values.begin(), values.end());
    }
    if (values.empty()) throw ParameterError("lambda grid is empty");
    return values;
}

GridSearchResult lambda_grid_search(const PointSet& data, const ClusterAssignment& truth, const GridSpec& grid,
                                    const SonParams& params, const GridSearchOptions& options) {
    if (truth.size() != data.size()) throw InputError("truth labels do not match the number of points");
    const std::vector<double> lambdas = grid_values(grid);
    const double tol = options.merge_tol.value_or(default_merge_tol(data));

    GridSearchResult result;
    result.best_rand_index = -1.0;
    SonState state;
    bool single = false;
    GridPoint single_point;
    ClusterAssignment single_assignment;
    SonSolution sol;
    for (double lambda : lambdas) {
        GridPoint gp;
        ClusterAssignment labels;
        if (single) {
            gp = single_point;
            gp.lambda = lambda;
            gp.iterations = 0;
            labels = single_assignment;
        } else {
            SonParams p = params;
            p.lambda = lambda;
            p.record_objective = false;
            sol = solve_son(data, p, options.warm_start ? &state : nullptr);
            labels = extract_clusters(sol, tol);
            gp.lambda = lambda;
            gp.num_clusters = labels.num_clusters;
            gp.iterations = sol.iterations;
            gp.converged = sol.converged;
            gp.rand_index = options.eval_subset.empty()
                                ? rand_index(labels, truth)
                                : rand_index_subset(labels.labels, truth.labels, options.eval_subset);
            result.all_converged = result.all_converged && sol.converged;
            if (options.stop_at_single_cluster && labels.num_clusters == 1) {
                single = true;
                single_point = gp;
                single_assignment = labels;
            }
        }
        if (gp.rand_index > result.best_rand_index) {
            result.best_rand_index = gp.rand_index;
            result.best_lambda = lambda;
            result.best_assignment = labels;
            result.best_solution = sol;
        }
        result.trace.push_back(gp);
    }
    return result;
}

}  // namespace leapclust
