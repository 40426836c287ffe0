#pragma once

#include "leapclust/datagen.hpp"
#include "leapclust/mds_embed.hpp"
#include "leapclust/types.hpp"

#include <cstdint>
#include <limits>
#include <utility>
#include <variant>
#include <vector>

namespace leapclust {

/// A one-dimensional density: a Gaussian mixture (means with one column) or the uniform
/// density on a union of disjoint intervals.
class Density1D {
public:
    static Density1D gaussian_mixture(MixtureSpec spec);
    static Density1D uniform(IntervalSet set);

    double operator()(double x) const;
    /// Intervals carrying (numerically) all of the mass: the intervals themselves, or
    /// [min mu - 12 sigma, max mu + 12 sigma] for a mixture.
    std::vector<std::pair<double, double>> effective_support() const;
    /// Per-cluster windows used by the concentration probe: each interval, or mu_k +- 2 sigma_k.
    std::vector<std::pair<double, double>> cluster_windows() const;
    /// Sorted i.i.d. sample of size n.
    std::vector<double> sample_sorted(std::size_t n, std::uint64_t seed) const;

    bool is_mixture() const noexcept { return std::holds_alternative<MixtureSpec>(kind_); }
    const MixtureSpec& mixture() const { return std::get<MixtureSpec>(kind_); }
    const IntervalSet& intervals() const { return std::get<IntervalSet>(kind_); }

private:
    explicit Density1D(std::variant<MixtureSpec, IntervalSet> kind) : kind_(std::move(kind)) {}
    std::variant<MixtureSpec, IntervalSet> kind_;
};

/// (2 / n) * integral_a^b dx / f(x). Throws DomainError if f vanishes on [a, b].
double expected_lf(const Density1D& f, double a, double b, std::size_t n);

/// Integral of 1 / f on [a, b] to 1e-8 relative.
double inverse_density_integral(const Density1D& f, double a, double b);

/// How the mass rho_m of S_m = [mu_m - theta sigma_m, mu_m + theta sigma_m] is bounded below.
enum class ErfConvention {
    GaussMass,   // w_m * P(|Z| <= theta) = w_m * erf(theta / sqrt 2)
    LiteralErf,  // w_m * erf(theta)
};

const char* to_string(ErfConvention c) noexcept;

struct LambdaRange {
    double lower = 0.0;     // lambda units
    double upper = 0.0;
    double lower_n2 = 0.0;  // n^2 lambda units
    double upper_n2 = 0.0;
    bool nonempty = false;
};

struct RecoveryComponent {
    double lo = 0.0, hi = 0.0;  // S_m
    double rho = 0.0;
    double inverse_density = 0.0;  // integral of 1/f over S_m
    double lower_n2 = 0.0;         // 2 * inverse_density / rho
};

struct RecoveryGap {
    double lo = 0.0, hi = 0.0;  // T_m
    double inverse_density = 0.0;
};

struct RecoveryRange {
    LambdaRange range;
    std::vector<RecoveryComponent> components;
    std::vector<RecoveryGap> gaps;
};

/// lambda bounds for clustering the points of each S_m together and apart from the
/// neighbouring intervals after 1D re-embedding:
///   lower = max_m 2 int_{S_m} 1/f / (rho_m n^2),  upper = min_m int_{T_m} 1/f / n^2.
/// Intervals must be sorted and pairwise disjoint; rho_m are caller-supplied masses.
RecoveryRange recovery_range_intervals(const Density1D& f, const std::vector<std::pair<double, double>>& sets,
                                       const std::vector<double>& rho, std::size_t n);

/// Same bounds for a 1D Gaussian mixture with S_m = mu_m +- theta sigma_m and rho_m from
/// the chosen convention. Throws ParameterError when the S_m overlap.
RecoveryRange recovery_range_1d(const MixtureSpec& spec, double theta, std::size_t n,
                                ErfConvention convention = ErfConvention::GaussMass);

struct RecoveryCertificate {
    std::vector<double> fusion_thresholds;  // per class: max_{i,j in C_k} ||b_i - b_j|| / |C_k|
    /// Per class pair (k, k'), k < k': max_{i in C_k, j in C_k'} ||b_i - b_j|| / (2 (n - 1)).
    std::vector<std::vector<double>> separation_bounds;
    LambdaRange feasible;  // [max fusion, min separation); upper = inf for a single class
    std::vector<bool> fused;                 // lambda >= fusion threshold
    std::vector<std::vector<bool>> separated;  // lambda < separation bound
    double lambda = 0.0;
    bool recovers_truth() const;
};

/// Sufficient conditions for SON on the embedded points to reproduce `truth` at `lambda`.
RecoveryCertificate certificate(const PointSet& embedded, const ClusterAssignment& truth, double lambda);
RecoveryCertificate certificate(const Embedding& embedding, const ClusterAssignment& truth, double lambda);

struct ConcentrationTrial {
    std::vector<double> window_lf;        // LF between extreme samples in each window
    std::vector<double> window_expected;  // (2/n) int 1/f between those samples
    std::vector<double> cross_lf;         // LF across each window gap (last of k, first of k+1)
};

struct ConcentrationStats {
    std::vector<ConcentrationTrial> trials;
    std::vector<double> mean_lf;   // per window
    std::vector<double> std_lf;
    std::vector<double> mean_expected;
    /// |LF - E[LF]| * n^1.04 per trial, window 0.
    std::vector<double> scaled_deviation;
    double max_intra_lf = 0.0;
    double min_cross_lf = std::numeric_limits<double>::infinity();
    double max_cross_lf = 0.0;
};

/// Monte-Carlo check of the concentration of 1D leapfrog distances. Trial t uses the seed
/// CounterRng::derive(seed, t).
ConcentrationStats lf_concentration_probe(const Density1D& f, std::size_t n, std::size_t trials, std::uint64_t seed);

struct RecoveryTableRow {
    double w1, w2, sigma1, sigma2, theta;
    bool reference_nonempty;
    double reference_lower_n2, reference_upper_n2;  // 0 for a reported empty range
};

/// The eleven benchmark rows (K = 2, mu = [0, 1]) with their reference re-embedding ranges.
const std::vector<RecoveryTableRow>& recovery_table_rows();

}  // namespace leapclust
