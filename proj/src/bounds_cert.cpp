#include "leapclust/bounds_cert.hpp"

#include "leapclust/quadrature.hpp"
#include "leapclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace leapclust {

Density1D Density1D::gaussian_mixture(MixtureSpec spec) {
    spec.validate();
    if (spec.dim() != 1) throw ParameterError("a 1D density needs one-dimensional means");
    return Density1D(std::move(spec));
}

Density1D Density1D::uniform(IntervalSet set) {
    set.validate();
    std::sort(set.intervals.begin(), set.intervals.end());
    return Density1D(std::move(set));
}

double Density1D::operator()(double x) const {
    if (const auto* m = std::get_if<MixtureSpec>(&kind_)) {
        double f = 0.0;
        for (std::size_t k = 0; k < m->components(); ++k) {
            const double s = m->sigmas[k];
            const double z = (x - m->means(static_cast<Eigen::Index>(k), 0)) / s;
            f += m->weights[k] * std::exp(-0.5 * z * z) / (s * std::sqrt(2.0 * std::numbers::pi));
        }
        return f;
    }
    const IntervalSet& set = std::get<IntervalSet>(kind_);
    const double height = 1.0 / set.total_length();
    for (const auto& [lo, hi] : set.intervals)
        if (x >= lo && x <= hi) return height;
    return 0.0;
}

std::vector<std::pair<double, double>> Density1D::effective_support() const {
    if (const auto* m = std::get_if<MixtureSpec>(&kind_)) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (std::size_t k = 0; k < m->components(); ++k) {
            const double mu = m->means(static_cast<Eigen::Index>(k), 0);
            lo = std::min(lo, mu - 12.0 * m->sigmas[k]);
            hi = std::max(hi, mu + 12.0 * m->sigmas[k]);
        }
        return {{lo, hi}};
    }
    return std::get<IntervalSet>(kind_).intervals;
}

std::vector<std::pair<double, double>> Density1D::cluster_windows() const {
    if (const auto* m = std::get_if<MixtureSpec>(&kind_)) {
        std::vector<std::pair<double, double>> w;
        for (std::size_t k = 0; k < m->components(); ++k) {
            const double mu = m->means(static_cast<Eigen::Index>(k), 0);
            w.emplace_back(mu - 2.0 * m->sigmas[k], mu + 2.0 * m->sigmas[k]);
        }
        std::sort(w.begin(), w.end());
        return w;
    }
    return std::get<IntervalSet>(kind_).intervals;
}

std::vector<double> Density1D::sample_sorted(std::size_t n, std::uint64_t seed) const {
    const LabeledDataset ds = is_mixture() ? gen_gaussian_mixture(mixture(), n, seed)
                                           : gen_uniform_intervals(intervals(), n, seed);
    std::vector<double> xs(ds.points.matrix().data(), ds.points.matrix().data() + n);
    std::sort(xs.begin(), xs.end());
    return xs;
}

double inverse_density_integral(const Density1D& f, double a, double b) {
    if (!(a < b)) throw ParameterError("integration needs a < b");
    if (!f.is_mixture()) {
        // 1/f is constant on each interval; [a, b] must sit inside one of them.
        for (const auto& [lo, hi] : f.intervals().intervals) {
            if (a >= lo && b <= hi) return (b - a) / f(0.5 * (a + b));
        }
        throw DomainError("density vanishes on part of [" + std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    auto integrand = [&](double x) {
        const double fx = f(x);
        if (!(fx > 0.0)) throw DomainError("density vanishes at x = " + std::to_string(x));
        return 1.0 / fx;
    };
    return integrate(integrand, a, b).value;
}

double expected_lf(const Density1D& f, double a, double b, std::size_t n) {
    if (n == 0) throw ParameterError("expected_lf needs n >= 1");
    return 2.0 / static_cast<double>(n) * inverse_density_integral(f, a, b);
}

const char* to_string(ErfConvention c) noexcept {
    return c == ErfConvention::GaussMass ? "gauss_mass" : "literal_erf";
}

RecoveryRange recovery_range_intervals(const Density1D& f, const std::vector<std::pair<double, double>>& sets,
                                       const std::vector<double>& rho, std::size_t n) {
    if (sets.empty() || sets.size() != rho.size()) throw ParameterError("need one mass per interval");
    if (n == 0) throw ParameterError("recovery range needs n >= 1");
    for (std::size_t m = 0; m < sets.size(); ++m) {
        if (!(sets[m].first < sets[m].second)) throw ParameterError("intervals need lo < hi");
        if (!(rho[m] > 0.0)) throw ParameterError("interval masses must be positive");
        if (m > 0 && !(sets[m - 1].second < sets[m].first)) {
            throw ParameterError("intervals must be sorted and pairwise disjoint");
        }
    }
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    RecoveryRange out;
    double lower_n2 = 0.0;
    for (std::size_t m = 0; m < sets.size(); ++m) {
        RecoveryComponent c;
        c.lo = sets[m].first;
        c.hi = sets[m].second;
        c.rho = rho[m];
        c.inverse_density = inverse_density_integral(f, c.lo, c.hi);
        c.lower_n2 = 2.0 * c.inverse_density / c.rho;
        lower_n2 = std::max(lower_n2, c.lower_n2);
        out.components.push_back(c);
    }
    double upper_n2 = std::numeric_limits<double>::infinity();
    for (std::size_t m = 0; m + 1 < sets.size(); ++m) {
        RecoveryGap g;
        g.lo = sets[m].second;
        g.hi = sets[m + 1].first;
        g.inverse_density = inverse_density_integral(f, g.lo, g.hi);
        upper_n2 = std::min(upper_n2, g.inverse_density);
        out.gaps.push_back(g);
    }
    out.range.lower_n2 = lower_n2;
    out.range.upper_n2 = upper_n2;
    out.range.lower = lower_n2 / n2;
    out.range.upper = upper_n2 / n2;
    out.range.nonempty = lower_n2 < upper_n2;
    return out;
}

RecoveryRange recovery_range_1d(const MixtureSpec& spec, double theta, std::size_t n, ErfConvention convention) {
    if (!(theta > 0.0)) throw ParameterError("theta must be > 0");
    const Density1D f = Density1D::gaussian_mixture(spec);
    const std::size_t k = spec.components();
    std::vector<std::size_t> order(k);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spec.means(static_cast<Eigen::Index>(a), 0) < spec.means(static_cast<Eigen::Index>(b), 0);
    });
    const double mass = convention == ErfConvention::GaussMass ? std::erf(theta / std::numbers::sqrt2) : std::erf(theta);
    std::vector<std::pair<double, double>> sets;
    std::vector<double> rho;
    for (std::size_t idx : order) {
        const double mu = spec.means(static_cast<Eigen::Index>(idx), 0);
        const double s = spec.sigmas[idx];
        sets.emplace_back(mu - theta * s, mu + theta * s);
        rho.push_back(spec.weights[idx] * mass);
    }
    for (std::size_t m = 0; m + 1 < sets.size(); ++m) {
        if (!(sets[m].second < sets[m + 1].first)) {
            throw ParameterError("intervals mu +- theta sigma overlap; theta too large");
        }
    }
    return recovery_range_intervals(f, sets, rho, n);
}

bool RecoveryCertificate::recovers_truth() const {
    for (bool f : fused)
        if (!f) return false;
    for (const auto& row : separated)
        for (bool s : row)
            if (!s) return false;
    return true;
}

RecoveryCertificate certificate(const PointSet& embedded, const ClusterAssignment& truth, double lambda) {
    const std::size_t n = embedded.size();
    if (truth.size() != n) throw InputError("truth labels do not match the number of points");
    int k = 0;
    for (int l : truth.labels) {
        if (l < 0) throw InputError("truth labels must be non-negative");
        k = std::max(k, l + 1);
    }
    const auto K = static_cast<std::size_t>(k);
    const RowMatrix& b = embedded.matrix();
    std::vector<std::size_t> sizes(K, 0);
    for (int l : truth.labels) ++sizes[static_cast<std::size_t>(l)];

    std::vector<double> max_intra(K, 0.0);
    std::vector<std::vector<double>> max_cross(K, std::vector<double>(K, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        const auto ci = static_cast<std::size_t>(truth.labels[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto cj = static_cast<std::size_t>(truth.labels[j]);
            const double d = (b.row(static_cast<Eigen::Index>(i)) - b.row(static_cast<Eigen::Index>(j))).norm();
            if (ci == cj) {
                max_intra[ci] = std::max(max_intra[ci], d);
            } else {
                const std::size_t lo = std::min(ci, cj), hi = std::max(ci, cj);
                max_cross[lo][hi] = std::max(max_cross[lo][hi], d);
            }
        }
    }

    RecoveryCertificate cert;
    cert.lambda = lambda;
    cert.fusion_thresholds.assign(K, 0.0);
    cert.fused.assign(K, true);
    cert.separation_bounds.assign(K, std::vector<double>(K, std::numeric_limits<double>::infinity()));
    cert.separated.assign(K, std::vector<bool>(K, true));
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < K; ++c) {
        if (sizes[c] == 0) continue;
        cert.fusion_thresholds[c] = max_intra[c] / static_cast<double>(sizes[c]);
        cert.fused[c] = lambda >= cert.fusion_thresholds[c];
        lower = std::max(lower, cert.fusion_thresholds[c]);
    }
    const double denom = 2.0 * static_cast<double>(n > 1 ? n - 1 : 1);
    for (std::size_t c = 0; c < K; ++c) {
        for (std::size_t c2 = c + 1; c2 < K; ++c2) {
            if (sizes[c] == 0 || sizes[c2] == 0) continue;
            const double bound = max_cross[c][c2] / denom;
            cert.separation_bounds[c][c2] = bound;
            cert.separation_bounds[c2][c] = bound;
            cert.separated[c][c2] = lambda < bound;
            cert.separated[c2][c] = lambda < bound;
            upper = std::min(upper, bound);
        }
    }
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    cert.feasible.lower = lower;
    cert.feasible.upper = upper;
    cert.feasible.lower_n2 = lower * n2;
    cert.feasible.upper_n2 = upper * n2;
    cert.feasible.nonempty = lower < upper;
    return cert;
}

RecoveryCertificate certificate(const Embedding& embedding, const ClusterAssignment& truth, double lambda) {
    return certificate(embedding.as_points(), truth, lambda);
}

ConcentrationStats lf_concentration_probe(const Density1D& f, std::size_t n, std::size_t trials, std::uint64_t seed) {
    if (n < 100) throw ParameterError("concentration probe needs n >= 100");
    if (trials < 10) throw ParameterError("concentration probe needs at least 10 trials");
    const auto windows = f.cluster_windows();
    const std::size_t W = windows.size();
    ConcentrationStats stats;
    stats.mean_lf.assign(W, 0.0);
    stats.std_lf.assign(W, 0.0);
    stats.mean_expected.assign(W, 0.0);
    const double scale = std::pow(static_cast<double>(n), 1.04);

    for (std::size_t t = 0; t < trials; ++t) {
        const std::vector<double> xs = f.sample_sorted(n, CounterRng::derive(seed, t));
        // 1D leapfrog distance between sorted samples i < j is the sum of squared gaps.
        std::vector<double> prefix(n, 0.0);
        for (std::size_t k = 1; k < n; ++k) {
            const double g = xs[k] - xs[k - 1];
            prefix[k] = prefix[k - 1] + g * g;
        }
        ConcentrationTrial trial;
        std::vector<std::pair<std::size_t, std::size_t>> extremes;
        for (const auto& [lo, hi] : windows) {
            const auto first = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), lo) - xs.begin());
            const auto last_end = static_cast<std::size_t>(std::upper_bound(xs.begin(), xs.end(), hi) - xs.begin());
            if (last_end <= first + 1) {
                extremes.emplace_back(first, first);
                trial.window_lf.push_back(0.0);
                trial.window_expected.push_back(0.0);
                continue;
            }
            const std::size_t last = last_end - 1;
            extremes.emplace_back(first, last);
            trial.window_lf.push_back(prefix[last] - prefix[first]);
            trial.window_expected.push_back(expected_lf(f, xs[first], xs[last], n));
        }
        for (std::size_t w = 0; w + 1 < W; ++w) {
            const std::size_t from = extremes[w].second;
            const std::size_t to = extremes[w + 1].first;
            trial.cross_lf.push_back(to < n && to > from ? prefix[to] - prefix[from] : 0.0);
        }
        for (std::size_t w = 0; w < W; ++w) {
            stats.mean_lf[w] += trial.window_lf[w];
            stats.mean_expected[w] += trial.window_expected[w];
            stats.max_intra_lf = std::max(stats.max_intra_lf, trial.window_lf[w]);
        }
        for (double c : trial.cross_lf) {
            stats.min_cross_lf = std::min(stats.min_cross_lf, c);
            stats.max_cross_lf = std::max(stats.max_cross_lf, c);
        }
        stats.scaled_deviation.push_back(std::abs(trial.window_lf[0] - trial.window_expected[0]) * scale);
        stats.trials.push_back(std::move(trial));
    }
    const auto T = static_cast<double>(trials);
    for (std::size_t w = 0; w < W; ++w) {
        stats.mean_lf[w] /= T;
        stats.mean_expected[w] /= T;
        double var = 0.0;
        for (const auto& tr : stats.trials) var += (tr.window_lf[w] - stats.mean_lf[w]) * (tr.window_lf[w] - stats.mean_lf[w]);
        stats.std_lf[w] = std::sqrt(var / std::max(1.0, T - 1.0));
    }
    return stats;
}

const std::vector<RecoveryTableRow>& recovery_table_rows() {
    static const std::vector<RecoveryTableRow> rows = {
        {0.5, 0.5, 0.4, 0.4, 1.0, false, 0.0, 0.0},
        {0.5, 0.5, 0.3, 0.3, 1.0, false, 0.0, 0.0},
        {0.5, 0.5, 0.3, 0.3, 0.5, false, 0.0, 0.0},
        {0.5, 0.5, 0.2, 0.2, 1.0, true, 2.3, 3.3},
        {0.5, 0.5, 0.2, 0.2, 0.5, true, 1.6, 3.6},
        {0.5, 0.5, 0.1, 0.1, 2.0, true, 1.9, 4500.0},
        {0.5, 0.5, 0.1, 0.1, 1.0, true, 0.57, 4500.0},
        {0.5, 0.5, 0.1, 0.1, 0.5, true, 0.4, 4500.0},
        {0.9, 0.1, 0.3, 0.3, 1.0, false, 0.0, 0.0},
        {0.9, 0.1, 0.2, 0.2, 1.0, false, 0.0, 0.0},
        {0.9, 0.1, 0.1, 0.1, 1.0, true, 14.0, 7700.0},
    };
    return rows;
}

}  // namespace leapclust
