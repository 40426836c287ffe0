#include "leapclust/pipeline.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdio>
#include <iostream>

using namespace leapclust;
namespace fs = std::filesystem;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out;
    std::string config;
    bool strict = false;
};

void add_common(CLI::App* app, Common& c, bool with_config) {
    app->add_option("--seed", c.seed, "RNG seed");
    app->add_option("--out", c.out, "Output file or directory");
    if (with_config) app->add_option("--config", c.config, "JSON config file");
    app->add_flag("--strict", c.strict, "Exit with status 3 when the solver does not converge");
}

fs::path need_out(const Common& c, const char* what) {
    if (c.out.empty()) throw InputError(std::string("--out is required for ") + what);
    return c.out;
}

// Truth labels from a dataset CSV with a label column, or from a plain labels file.
ClusterAssignment load_truth(const fs::path& path) {
    try {
        IngestedData d = ingest_csv(path);
        if (d.truth) return *d.truth;
        if (d.points.dim() == 1) return read_labels_csv(path);
    } catch (const InputError&) {
        return read_labels_csv(path);
    }
    throw InputError(path.string() + " has no label column");
}

struct ClusterFlags {
    std::string method = "son";
    double lambda = -1.0;
    std::string grid;
    int k = 2;
    double eps = 0.1;
    std::size_t min_pts = 5;
    double merge_tol = -1.0;
    double rho = -1.0;
    std::size_t max_iters = 10000;
};

void add_cluster_flags(CLI::App* app, ClusterFlags& f) {
    app->add_option("--method", f.method, "son | kmeans | dbscan | single_linkage")
        ->check(CLI::IsMember({"son", "kmeans", "dbscan", "single_linkage"}));
    app->add_option("--lambda", f.lambda, "Solve SON once at this lambda instead of a grid search");
    app->add_option("--grid", f.grid, "Lambda grid, e.g. geometric:count=200 or linear:step=1e-5");
    app->add_option("--k", f.k, "Number of clusters (kmeans, single_linkage)");
    app->add_option("--eps", f.eps, "DBSCAN neighbourhood radius");
    app->add_option("--min-pts", f.min_pts, "DBSCAN core threshold");
    app->add_option("--merge-tol", f.merge_tol, "Centroid merge tolerance (default 1e-3 x diameter)");
    app->add_option("--rho", f.rho, "ADMM step (default 40 / n)");
    app->add_option("--max-iters", f.max_iters, "ADMM iteration cap");
}

ClustererSpec clusterer_from(const ClusterFlags& f, std::uint64_t seed) {
    if (f.method == "kmeans") return KMeansParams{f.k, 300, 10, seed};
    if (f.method == "dbscan") return DbscanParams{f.eps, f.min_pts};
    if (f.method == "single_linkage") return SingleLinkageParams{f.k};
    SonClusterer s;
    s.params.max_iters = f.max_iters;
    if (f.lambda >= 0.0) {
        s.params.lambda = f.lambda;
        s.fixed_lambda = true;
    }
    if (f.rho > 0.0) {
        s.params.admm_rho = f.rho;
        s.size_scaled_rho = false;
    }
    return s;
}

int strict_status(bool strict, bool converged) {
    if (!converged) {
        std::fprintf(stderr, "warning: SON did not reach its tolerances\n");
        if (strict) return 3;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Leapfrog re-embedding and sum-of-norms clustering"};
    app.require_subcommand(1);

    Common gen_c, dist_c, emb_c, clu_c, pipe_c, bnd_c, eval_c;

    auto* gen = app.add_subcommand("gen", "Generate a labelled synthetic dataset");
    std::string gen_spec = "moons";
    gen->add_option("--generator,-g", gen_spec, "e.g. moons:n=400,noise=0.05 or gaussian:n=400,sigma=0.1,k=2,dim=2");
    add_common(gen, gen_c, false);

    auto* dist = app.add_subcommand("distances", "All-pairs leapfrog distances of a CSV point set");
    std::string dist_in;
    std::string dist_format = "auto";
    unsigned threads = 0;
    dist->add_option("--input,-i", dist_in, "Point CSV")->required();
    dist->add_option("--format", dist_format, "csv | binary | auto (by extension)")
        ->check(CLI::IsMember({"csv", "binary", "auto"}));
    dist->add_option("--threads", threads, "Worker threads (0 = all cores)");
    add_common(dist, dist_c, false);

    auto* emb = app.add_subcommand("embed", "Re-embed from a leapfrog distance matrix");
    std::string emb_in;
    std::size_t emb_dim = 0;
    double emb_ratio = 0.05;
    emb->add_option("--distances,-i", emb_in, "Distance matrix (CSV or LFD1)")->required();
    emb->add_option("--dim", emb_dim, "Fixed embedding dimension (default: eigengap rule)");
    emb->add_option("--ratio", emb_ratio, "Eigengap ratio");
    add_common(emb, emb_c, false);

    auto* clu = app.add_subcommand("cluster", "Cluster a point or embedding CSV");
    std::string clu_in, clu_truth;
    ClusterFlags clu_f;
    clu->add_option("--input,-i", clu_in, "Point or embedding CSV")->required();
    clu->add_option("--truth", clu_truth, "Truth labels (labels CSV or dataset CSV)");
    add_cluster_flags(clu, clu_f);
    add_common(clu, clu_c, false);

    auto* pipe = app.add_subcommand("pipeline", "Run distances, embedding and clustering in one go");
    std::string pipe_in, pipe_gen, pipe_space = "embedded";
    std::size_t pipe_dim = 0;
    double eval_radius = -1.0;
    ClusterFlags pipe_f;
    pipe->add_option("--input,-i", pipe_in, "Point CSV (optional label column)");
    pipe->add_option("--generator,-g", pipe_gen, "Synthetic input instead of a file");
    pipe->add_option("--space", pipe_space, "embedded | original")->check(CLI::IsMember({"embedded", "original"}));
    pipe->add_option("--dim", pipe_dim, "Fixed embedding dimension (default: eigengap rule)");
    pipe->add_option("--eval-radius", eval_radius, "Score only points within this many sigmas of their mean");
    add_cluster_flags(pipe, pipe_f);
    add_common(pipe, pipe_c, true);

    auto* bnd = app.add_subcommand("bounds", "Recovery lambda ranges for the 1D benchmark mixtures");
    std::size_t bnd_n = 1000;
    bnd->add_option("--n", bnd_n, "Sample size for the lambda-unit columns");
    add_common(bnd, bnd_c, false);

    auto* ev = app.add_subcommand("eval", "Rand index of a labelling against the truth");
    std::string ev_labels, ev_truth;
    ev->add_option("--labels", ev_labels, "Labels CSV")->required();
    ev->add_option("--truth", ev_truth, "Truth labels (labels CSV or dataset CSV)")->required();
    add_common(ev, eval_c, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*gen) {
            const LabeledDataset ds = generate(parse_generator_spec(gen_spec), gen_c.seed);
            write_dataset_csv(need_out(gen_c, "gen"), ds);
            return 0;
        }
        if (*dist) {
            const IngestedData d = ingest_csv(dist_in);
            LeapfrogOptions opts;
            opts.threads = threads;
            const DistanceMatrix lf = lf_all_pairs(d.points, opts);
            const fs::path out = need_out(dist_c, "distances");
            const bool csv = dist_format == "csv" || (dist_format == "auto" && out.extension() == ".csv");
            if (csv) write_distances_csv(out, lf);
            else write_distances_binary(out, lf);
            return 0;
        }
        if (*emb) {
            const DistanceMatrix lf = read_distances(emb_in);
            const DimPolicy policy = emb_dim > 0 ? DimPolicy{FixedDim{emb_dim}} : DimPolicy{EigengapRatio{emb_ratio}};
            const EmbedOutcome e = embed_stage(lf, policy);
            write_embedding_csv(need_out(emb_c, "embed"), e.embedding);
            std::printf("L=%zu\n", e.dim);
            return 0;
        }
        if (*clu) {
            const IngestedData d = ingest_csv(clu_in);
            std::optional<ClusterAssignment> truth = d.truth;
            if (!clu_truth.empty()) truth = load_truth(clu_truth);
            GridRequest grid;
            if (!clu_f.grid.empty()) grid = parse_grid_request(clu_f.grid);
            const std::optional<double> tol = clu_f.merge_tol > 0.0 ? std::optional<double>(clu_f.merge_tol) : std::nullopt;
            const ClusterOutcome o = cluster_stage(d.points, truth, clusterer_from(clu_f, clu_c.seed), grid, tol);
            const fs::path dir = need_out(clu_c, "cluster");
            write_labels_csv(dir / "labels.csv", o.assignment);
            if (o.solution) write_text(dir / "solution.json", son_solution_json(*o.solution, o.assignment));
            nlohmann::ordered_json s;
            s["method"] = clu_f.method;
            s["num_clusters"] = o.assignment.num_clusters;
            s["cluster_sizes"] = o.assignment.cluster_sizes();
            if (o.lambda) s["lambda"] = *o.lambda;
            if (o.lambda_max) s["lambda_max"] = *o.lambda_max;
            s["converged"] = o.converged;
            s["rand_index"] = o.rand_index ? nlohmann::ordered_json(*o.rand_index) : nlohmann::ordered_json(nullptr);
            write_text(dir / "cluster.json", s.dump(2) + "\n");
            if (o.rand_index) std::printf("rand_index=%.6f\n", *o.rand_index);
            std::printf("clusters=%d\n", o.assignment.num_clusters);
            return strict_status(clu_c.strict, o.converged);
        }
        if (*pipe) {
            PipelineConfig cfg;
            if (!pipe_c.config.empty()) cfg = config_from_json(read_text(pipe_c.config));
            if (pipe->count("--seed")) cfg.seed = pipe_c.seed;
            if (!pipe_in.empty() && !pipe_gen.empty()) throw InputError("give either --input or --generator");
            if (!pipe_in.empty()) cfg.input = fs::path(pipe_in);
            if (!pipe_gen.empty()) cfg.input = parse_generator_spec(pipe_gen);
            if (pipe->count("--space")) cfg.space = pipe_space == "original" ? ClusterSpace::Original : ClusterSpace::Embedded;
            if (pipe_dim > 0) cfg.embedding = FixedDim{pipe_dim};
            if (eval_radius > 0.0) cfg.eval_radius = eval_radius;
            if (pipe->count("--method") || pipe_c.config.empty()) cfg.clusterer = clusterer_from(pipe_f, cfg.seed);
            if (!pipe_f.grid.empty()) cfg.lambda_grid = parse_grid_request(pipe_f.grid);
            if (pipe_f.merge_tol > 0.0) cfg.merge_tol = pipe_f.merge_tol;
            if (!pipe_c.out.empty()) cfg.output_dir = pipe_c.out;
            const RunReport r = run_pipeline(cfg);
            if (cfg.output_dir.empty()) std::cout << r.to_json();
            if (r.outcome.rand_index) std::printf("rand_index=%.6f\n", *r.outcome.rand_index);
            std::printf("clusters=%d L=%zu\n", r.outcome.assignment.num_clusters, r.embedding_dim);
            return strict_status(pipe_c.strict, r.outcome.converged);
        }
        if (*bnd) {
            const BoundsTableReport r = run_bounds_table(bnd_c.out, bnd_n);
            std::cout << r.csv(ErfConvention::GaussMass);
            for (ErfConvention c : {ErfConvention::GaussMass, ErfConvention::LiteralErf})
                std::printf("%s: pattern %s, max endpoint deviation %.3f\n", to_string(c),
                            r.pattern_matches(c) ? "matches" : "differs", r.max_endpoint_deviation(c));
            return 0;
        }
        if (*ev) {
            const ClusterAssignment labels = read_labels_csv(ev_labels);
            const ClusterAssignment truth = load_truth(ev_truth);
            std::printf("rand_index=%.6f\n", rand_index(labels, truth));
            return 0;
        }
    } catch (const InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 2;
    } catch (const ParameterError& e) {
        std::fprintf(stderr, "parameter error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
