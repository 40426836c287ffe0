#pragma once

#include "leapclust/bounds_cert.hpp"
#include "leapclust/datagen.hpp"
#include "leapclust/evaluation.hpp"
#include "leapclust/io.hpp"
#include "leapclust/leapfrog.hpp"
#include "leapclust/mds_embed.hpp"
#include "leapclust/son_solver.hpp"
#include "leapclust/types.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace leapclust {

/// Synthetic input. Text form: "<name>:key=value,..." e.g. "moons:n=400,noise=0.05".
/// Names: moons, circles, aniso, gaussian (K unit-axis components in R^dim), intervals
/// (uniform on "a-b;c-d" intervals).
struct GeneratorSpec {
    std::string name = "moons";
    std::size_t n = 400;
    double noise = 0.05;
    double factor = 0.5;
    double sigma = 0.1;
    std::size_t k = 2;
    std::size_t dim = 2;
    std::vector<std::pair<double, double>> intervals;
};

GeneratorSpec parse_generator_spec(const std::string& text);
std::string to_string(const GeneratorSpec& spec);
LabeledDataset generate(const GeneratorSpec& spec, std::uint64_t seed);

/// A CSV file or a generator.
using InputSpec = std::variant<std::filesystem::path, GeneratorSpec>;

/// SON clustering. With ground truth and no fixed lambda the pipeline scans a lambda grid;
/// otherwise it solves once at params.lambda.
struct SonClusterer {
    SonParams params = default_params();
    /// Replace params.admm_rho by size_scaled_rho(n).
    bool size_scaled_rho = true;
    /// Solve once at params.lambda even when truth is available.
    bool fixed_lambda = false;

    static SonParams default_params() {
        SonParams p;
        p.relaxation = 1.8;
        return p;
    }
};

using ClustererSpec = std::variant<SonClusterer, KMeansParams, DbscanParams, SingleLinkageParams>;

/// Lambda grid whose unset bounds are filled in from lambda_max: geometric
/// [1e-6 lambda_max, 2 lambda_max] with `count` points, linear [step, 2 lambda_max].
/// Text form: "geometric:count=200", "linear:step=1e-5,lo=...,hi=...", "explicit:0.1;0.2".
struct GridRequest {
    enum class Kind { Geometric, Linear, Explicit } kind = Kind::Geometric;
    std::size_t count = 200;
    double step = 1e-5;
    std::optional<double> lo, hi;
    std::vector<double> values;

    bool needs_lambda_max() const { return kind != Kind::Explicit && (!lo || !hi); }
    GridSpec resolve(double lambda_max) const;
};

GridRequest parse_grid_request(const std::string& text);
std::string to_string(const GridRequest& grid);

enum class ClusterSpace { Embedded, Original };

struct PipelineConfig {
    InputSpec input = GeneratorSpec{};
    ClusterSpace space = ClusterSpace::Embedded;
    DimPolicy embedding = EigengapRatio{};
    ClustererSpec clusterer = SonClusterer{};
    GridRequest lambda_grid;
    std::optional<double> merge_tol;
    /// Score only points within this many sigmas of their generating mean (Gaussian
    /// generator only).
    std::optional<double> eval_radius;
    std::filesystem::path output_dir;  // empty: write nothing
    bool write_svg = true;
    std::uint64_t seed = 0;
    LeapfrogOptions leapfrog;
};

std::string config_to_json(const PipelineConfig& config);
/// Missing keys keep their defaults. Throws InputError on unknown keys or bad values.
PipelineConfig config_from_json(const std::string& text);

struct ClusterOutcome {
    ClusterAssignment assignment;
    std::optional<double> lambda;      // SON only
    std::optional<double> lambda_max;  // when a grid was scanned
    std::size_t lambda_max_probes = 0;
    std::vector<GridPoint> grid_trace;
    std::optional<SonSolution> solution;  // SON at the chosen lambda
    bool converged = true;
    std::optional<double> rand_index;       // on the scored subset
    std::optional<double> rand_index_full;  // on all points
};

/// The clustering stage on its own: grid search or a single solve for SON, a direct call
/// for the baselines. `subset` restricts scoring.
ClusterOutcome cluster_stage(const PointSet& points, const std::optional<ClusterAssignment>& truth,
                             const ClustererSpec& clusterer, const GridRequest& grid, std::optional<double> merge_tol,
                             const std::vector<std::size_t>& subset = {});

struct EmbedOutcome {
    EigenSpectrum spectrum;
    std::size_t dim = 0;
    Embedding embedding;
};

EmbedOutcome embed_stage(const DistanceMatrix& lf, const DimPolicy& policy);

struct RunReport {
    std::string config_json;
    std::string config_hash;  // FNV-1a of config_json, hex
    std::uint64_t seed = 0;
    std::size_t n = 0, input_dim = 0;
    std::map<std::string, double> timings;  // seconds per stage
    std::vector<double> spectrum;           // leading eigenvalues / n
    std::size_t embedding_dim = 0;
    ClusterOutcome outcome;
    std::vector<std::size_t> cluster_sizes;
    std::vector<std::string> outputs;

    // Kept for callers; not serialized.
    PointSet data;
    std::optional<ClusterAssignment> truth;
    std::optional<Embedding> embedding;

    /// Deterministic apart from the "timings" object.
    std::string to_json() const;
};

/// Loads or generates the input, embeds it (unless clustering in the original space),
/// clusters, scores against the truth and writes the artifacts to output_dir.
RunReport run_pipeline(const PipelineConfig& config);

struct BoundsTableEntry {
    RecoveryTableRow row;
    ErfConvention convention;
    LambdaRange range;
};

struct BoundsTableReport {
    std::vector<BoundsTableEntry> entries;
    /// Empty/nonempty status agrees with the reference on every row.
    bool pattern_matches(ErfConvention convention) const;
    /// Largest relative deviation of a computed endpoint from its reference over the rows
    /// the reference marks nonempty.
    double max_endpoint_deviation(ErfConvention convention) const;
    std::string csv(ErfConvention convention) const;
    std::string json() const;
};

/// Re-embedding lambda range of every benchmark row under both conventions; writes
/// bounds_<convention>.csv and bounds.json when output_dir is set.
BoundsTableReport run_bounds_table(const std::filesystem::path& output_dir = {}, std::size_t n = 1000);

/// Indices of points within radius * sigma_c of their component mean.
std::vector<std::size_t> near_mean_subset(const PointSet& points, const ClusterAssignment& truth,
                                          const MixtureSpec& spec, double radius);

}  // namespace leapclust
