#include "leapclust/pipeline.hpp"

#include "leapclust/svg.hpp"

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdio>
#include <sstream>

namespace leapclust {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, sep)) out.push_back(item);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

double to_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty()) throw InputError("bad number for " + key + ": '" + v + "'");
    return x;
}

std::size_t to_count(const std::string& key, const std::string& v) {
    const double x = to_double(key, v);
    if (x < 0 || x != static_cast<double>(static_cast<std::size_t>(x))) throw InputError(key + " must be a non-negative integer");
    return static_cast<std::size_t>(x);
}

// "name:k=v,k=v" -> name and pairs.
std::pair<std::string, std::vector<std::pair<std::string, std::string>>> parse_keyed(const std::string& text) {
    const auto colon = text.find(':');
    std::pair<std::string, std::vector<std::pair<std::string, std::string>>> out;
    out.first = text.substr(0, colon);
    if (colon == std::string::npos) return out;
    for (const std::string& item : split(text.substr(colon + 1), ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw InputError("expected key=value in '" + text + "', got '" + item + "'");
        out.second.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

GeneratorSpec parse_generator_spec(const std::string& text) {
    const auto [name, pairs] = parse_keyed(text);
    GeneratorSpec g;
    g.name = name;
    if (name == "aniso") g.n = 600;
    else if (name == "circles") {
        g.n = 1000;
        g.noise = 0.025;
    } else if (name == "intervals") g.n = 2000;
    else if (name != "moons" && name != "gaussian") throw InputError("unknown generator '" + name + "'");
    for (const auto& [k, v] : pairs) {
        if (k == "n") g.n = to_count(k, v);
        else if (k == "noise") g.noise = to_double(k, v);
        else if (k == "factor") g.factor = to_double(k, v);
        else if (k == "sigma") g.sigma = to_double(k, v);
        else if (k == "k") g.k = to_count(k, v);
        else if (k == "dim") g.dim = to_count(k, v);
        else if (k == "set") {
            for (const std::string& iv : split(v, ';')) {
                const auto dots = iv.find("..");
                if (dots == std::string::npos) throw InputError("intervals are written lo..hi, got '" + iv + "'");
                g.intervals.emplace_back(to_double("set", iv.substr(0, dots)), to_double("set", iv.substr(dots + 2)));
            }
        } else throw InputError("unknown generator option '" + k + "'");
    }
    if (name == "intervals" && g.intervals.empty()) g.intervals = {{0.0, 1.0}};
    return g;
}

std::string to_string(const GeneratorSpec& g) {
    std::string s = g.name + ":n=" + std::to_string(g.n);
    if (g.name == "moons") s += ",noise=" + num(g.noise);
    else if (g.name == "circles") s += ",noise=" + num(g.noise) + ",factor=" + num(g.factor);
    else if (g.name == "gaussian") s += ",sigma=" + num(g.sigma) + ",k=" + std::to_string(g.k) + ",dim=" + std::to_string(g.dim);
    else if (g.name == "intervals") {
        s += ",set=";
        for (std::size_t i = 0; i < g.intervals.size(); ++i)
            s += (i ? ";" : "") + num(g.intervals[i].first) + ".." + num(g.intervals[i].second);
    }
    return s;
}

LabeledDataset generate(const GeneratorSpec& g, std::uint64_t seed) {
    if (g.name == "moons") return gen_moons(g.n, g.noise, seed);
    if (g.name == "circles") return gen_circles(g.n, g.noise, g.factor, seed);
    if (g.name == "aniso") return gen_aniso_blobs(g.n, seed);
    if (g.name == "gaussian") return gen_gaussian_mixture(MixtureSpec::unit_axes(g.k, g.sigma, g.dim), g.n, seed);
    if (g.name == "intervals") return gen_uniform_intervals(IntervalSet{g.intervals}, g.n, seed);
    throw InputError("unknown generator '" + g.name + "'");
}

GridSpec GridRequest::resolve(double lmax) const {
    switch (kind) {
        case Kind::Geometric: return GeometricGrid{lo.value_or(1e-6 * lmax), hi.value_or(2.0 * lmax), count};
        case Kind::Linear: return LinearGrid{lo.value_or(step), hi.value_or(2.0 * lmax), step};
        case Kind::Explicit: return ExplicitGrid{values};
    }
    return ExplicitGrid{values};
}

GridRequest parse_grid_request(const std::string& text) {
    GridRequest g;
    if (text.rfind("explicit", 0) == 0) {
        g.kind = GridRequest::Kind::Explicit;
        const auto colon = text.find(':');
        if (colon == std::string::npos) throw InputError("explicit grid needs values");
        for (const std::string& v : split(text.substr(colon + 1), ';')) g.values.push_back(to_double("grid", v));
        return g;
    }
    const auto [name, pairs] = parse_keyed(text);
    if (name == "geometric") g.kind = GridRequest::Kind::Geometric;
    else if (name == "linear") g.kind = GridRequest::Kind::Linear;
    else throw InputError("unknown grid kind '" + name + "'");
    for (const auto& [k, v] : pairs) {
        if (k == "count") g.count = to_count(k, v);
        else if (k == "step") g.step = to_double(k, v);
        else if (k == "lo") g.lo = to_double(k, v);
        else if (k == "hi") g.hi = to_double(k, v);
        else throw InputError("unknown grid option '" + k + "'");
    }
    if (g.kind == GridRequest::Kind::Linear && !(g.step > 0.0)) throw InputError("grid step must be > 0");
    return g;
}

std::string to_string(const GridRequest& g) {
    if (g.kind == GridRequest::Kind::Explicit) {
        std::string s = "explicit:";
        for (std::size_t i = 0; i < g.values.size(); ++i) s += (i ? ";" : "") + num(g.values[i]);
        return s;
    }
    std::string s = g.kind == GridRequest::Kind::Geometric ? "geometric:count=" + std::to_string(g.count)
                                                           : "linear:step=" + num(g.step);
    if (g.lo) s += ",lo=" + num(*g.lo);
    if (g.hi) s += ",hi=" + num(*g.hi);
    return s;
}

namespace {

json config_object(const PipelineConfig& c) {
    json j;
    if (const auto* path = std::get_if<fs::path>(&c.input)) j["input"] = path->string();
    else j["generator"] = to_string(std::get<GeneratorSpec>(c.input));
    j["space"] = c.space == ClusterSpace::Embedded ? "embedded" : "original";
    if (const auto* f = std::get_if<FixedDim>(&c.embedding)) j["embedding"] = {{"policy", "fixed"}, {"dim", f->dim}};
    else j["embedding"] = {{"policy", "eigengap"}, {"ratio", std::get<EigengapRatio>(c.embedding).ratio}};
    json cl;
    if (const auto* s = std::get_if<SonClusterer>(&c.clusterer)) {
        cl["method"] = "son";
        cl["lambda"] = s->params.lambda;
        cl["fixed_lambda"] = s->fixed_lambda;
        cl["primal_tol"] = s->params.primal_tol;
        cl["dual_tol"] = s->params.dual_tol;
        cl["max_iters"] = s->params.max_iters;
        if (s->size_scaled_rho) cl["admm_rho"] = "size_scaled";
        else cl["admm_rho"] = s->params.admm_rho;
        cl["relaxation"] = s->params.relaxation;
        cl["lambda_grid"] = to_string(c.lambda_grid);
    } else if (const auto* k = std::get_if<KMeansParams>(&c.clusterer)) {
        cl = {{"method", "kmeans"}, {"k", k->k}, {"max_iters", k->max_iters}, {"restarts", k->restarts}, {"seed", k->seed}};
    } else if (const auto* d = std::get_if<DbscanParams>(&c.clusterer)) {
        cl = {{"method", "dbscan"}, {"eps", d->eps}, {"min_pts", d->min_pts}};
    } else {
        cl = {{"method", "single_linkage"}, {"k", std::get<SingleLinkageParams>(c.clusterer).k}};
    }
    j["clusterer"] = cl;
    j["merge_tol"] = c.merge_tol ? json(*c.merge_tol) : json(nullptr);
    j["eval_radius"] = c.eval_radius ? json(*c.eval_radius) : json(nullptr);
    j["write_svg"] = c.write_svg;
    j["seed"] = c.seed;
    return j;
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
    if (!j.contains(key) || j[key].is_null()) return fallback;
    try {
        return j[key].get<T>();
    } catch (const json::exception& e) {
        throw InputError(std::string("config key '") + key + "': " + e.what());
    }
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || it.key() == a;
        if (!ok) throw InputError("unknown config key '" + it.key() + "' in " + where);
    }
}

}  // namespace

std::string config_to_json(const PipelineConfig& config) {
    json j = config_object(config);
    j["output_dir"] = config.output_dir.string();
    j["threads"] = config.leapfrog.threads;
    return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw InputError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw InputError("config must be a JSON object");
    check_keys(j, {"input", "generator", "space", "embedding", "clusterer", "merge_tol", "eval_radius", "write_svg", "seed",
                   "output_dir", "threads"},
               "config");
    PipelineConfig c;
    c.seed = get_or<std::uint64_t>(j, "seed", 0);
    if (j.contains("input") && j.contains("generator")) throw InputError("config has both input and generator");
    if (j.contains("input")) c.input = fs::path(get_or<std::string>(j, "input", ""));
    else if (j.contains("generator")) c.input = parse_generator_spec(get_or<std::string>(j, "generator", "moons"));
    const std::string space = get_or<std::string>(j, "space", "embedded");
    if (space == "embedded") c.space = ClusterSpace::Embedded;
    else if (space == "original") c.space = ClusterSpace::Original;
    else throw InputError("space must be 'embedded' or 'original'");
    if (j.contains("embedding")) {
        const json& e = j["embedding"];
        check_keys(e, {"policy", "dim", "ratio"}, "embedding");
        const std::string policy = get_or<std::string>(e, "policy", "eigengap");
        if (policy == "fixed") c.embedding = FixedDim{get_or<std::size_t>(e, "dim", 2)};
        else if (policy == "eigengap") c.embedding = EigengapRatio{get_or<double>(e, "ratio", 0.05)};
        else throw InputError("embedding policy must be 'fixed' or 'eigengap'");
    }
    if (j.contains("clusterer")) {
        const json& cl = j["clusterer"];
        const std::string method = get_or<std::string>(cl, "method", "son");
        if (method == "son") {
            check_keys(cl, {"method", "lambda", "fixed_lambda", "primal_tol", "dual_tol", "max_iters", "admm_rho", "relaxation",
                            "lambda_grid"},
                       "clusterer");
            SonClusterer s;
            s.params.lambda = get_or<double>(cl, "lambda", 0.0);
            s.fixed_lambda = get_or<bool>(cl, "fixed_lambda", cl.contains("lambda"));
            s.params.primal_tol = get_or<double>(cl, "primal_tol", s.params.primal_tol);
            s.params.dual_tol = get_or<double>(cl, "dual_tol", s.params.dual_tol);
            s.params.max_iters = get_or<std::size_t>(cl, "max_iters", s.params.max_iters);
            s.params.relaxation = get_or<double>(cl, "relaxation", s.params.relaxation);
            if (cl.contains("admm_rho") && !(cl["admm_rho"].is_string() && cl["admm_rho"] == "size_scaled")) {
                s.params.admm_rho = get_or<double>(cl, "admm_rho", 1.0);
                s.size_scaled_rho = false;
            }
            if (cl.contains("lambda_grid")) c.lambda_grid = parse_grid_request(get_or<std::string>(cl, "lambda_grid", ""));
            s.params.validate();
            c.clusterer = s;
        } else if (method == "kmeans") {
            check_keys(cl, {"method", "k", "max_iters", "restarts", "seed"}, "clusterer");
            KMeansParams k;
            k.k = get_or<int>(cl, "k", 2);
            k.max_iters = get_or<std::size_t>(cl, "max_iters", k.max_iters);
            k.restarts = get_or<std::size_t>(cl, "restarts", k.restarts);
            k.seed = get_or<std::uint64_t>(cl, "seed", c.seed);
            c.clusterer = k;
        } else if (method == "dbscan") {
            check_keys(cl, {"method", "eps", "min_pts"}, "clusterer");
            c.clusterer = DbscanParams{get_or<double>(cl, "eps", 0.1), get_or<std::size_t>(cl, "min_pts", 5)};
        } else if (method == "single_linkage") {
            check_keys(cl, {"method", "k"}, "clusterer");
            c.clusterer = SingleLinkageParams{get_or<int>(cl, "k", 2)};
        } else {
            throw InputError("unknown clusterer '" + method + "'");
        }
    }
    if (j.contains("merge_tol") && !j["merge_tol"].is_null()) c.merge_tol = get_or<double>(j, "merge_tol", 0.0);
    if (j.contains("eval_radius") && !j["eval_radius"].is_null()) c.eval_radius = get_or<double>(j, "eval_radius", 2.0);
    c.write_svg = get_or<bool>(j, "write_svg", true);
    c.output_dir = get_or<std::string>(j, "output_dir", "");
    c.leapfrog.threads = get_or<unsigned>(j, "threads", 0);
    return c;
}

EmbedOutcome embed_stage(const DistanceMatrix& lf, const DimPolicy& policy) {
    EmbedOutcome out;
    out.spectrum = eig_sym(gram_from_lf(lf));
    out.dim = select_dim(out.spectrum, lf.size(), policy);
    out.embedding = embed(out.spectrum, out.dim);
    return out;
}

ClusterOutcome cluster_stage(const PointSet& points, const std::optional<ClusterAssignment>& truth,
                             const ClustererSpec& clusterer, const GridRequest& grid, std::optional<double> merge_tol,
                             const std::vector<std::size_t>& subset) {
    if (truth && truth->size() != points.size()) throw InputError("truth labels do not match the number of points");
    ClusterOutcome out;
    const std::size_t n = points.size();
    if (const auto* son = std::get_if<SonClusterer>(&clusterer)) {
        SonParams params = son->params;
        if (son->size_scaled_rho) params.admm_rho = size_scaled_rho(n);
        params.validate();
        const double tol = merge_tol.value_or(default_merge_tol(points));
        if (truth && !son->fixed_lambda && n >= 2) {
            GridSpec spec;
            if (grid.needs_lambda_max()) {
                const LambdaMaxResult lm = lambda_max(points, params, tol);
                out.lambda_max = lm.lambda;
                out.lambda_max_probes = lm.probes;
                if (lm.lambda == 0.0) {
                    // Every point coincides: one cluster at any lambda.
                    out.assignment = ClusterAssignment::from_labels(std::vector<int>(n, 0));
                    out.lambda = 0.0;
                }
                spec = grid.resolve(lm.lambda);
            } else {
                spec = grid.resolve(0.0);
            }
            if (!out.lambda) {
                GridSearchOptions opts;
                opts.merge_tol = tol;
                opts.eval_subset = subset;
                GridSearchResult r = lambda_grid_search(points, *truth, spec, params, opts);
                out.assignment = r.best_assignment;
                out.lambda = r.best_lambda;
                out.grid_trace = std::move(r.trace);
                out.converged = r.all_converged;
                out.solution = std::move(r.best_solution);
            }
        } else {
            SonSolution sol = solve_son(points, params);
            out.assignment = extract_clusters(sol, tol);
            out.lambda = params.lambda;
            out.converged = sol.converged;
            out.solution = std::move(sol);
        }
    } else if (const auto* k = std::get_if<KMeansParams>(&clusterer)) {
        out.assignment = kmeans(points, *k).assignment;
    } else if (const auto* d = std::get_if<DbscanParams>(&clusterer)) {
        out.assignment = dbscan(points, *d);
    } else {
        out.assignment = single_linkage(points, std::get<SingleLinkageParams>(clusterer).k);
    }
    if (truth) {
        out.rand_index_full = rand_index(out.assignment, *truth);
        out.rand_index = subset.empty() ? *out.rand_index_full
                                        : rand_index_subset(out.assignment.labels, truth->labels, subset);
    }
    return out;
}

std::vector<std::size_t> near_mean_subset(const PointSet& points, const ClusterAssignment& truth, const MixtureSpec& spec,
                                          double radius) {
    if (points.dim() != spec.dim()) throw InputError("mixture dimension does not match the points");
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(truth.labels[i]);
        if (c >= spec.components()) throw InputError("truth label outside the mixture components");
        const double d = (points.row(i) - spec.means.row(static_cast<Eigen::Index>(c))).norm();
        if (d <= radius * spec.sigmas[c]) idx.push_back(i);
    }
    return idx;
}

std::string RunReport::to_json() const {
    json j;
    j["config"] = json::parse(config_json);
    j["config_hash"] = config_hash;
    j["seed"] = seed;
    j["n"] = n;
    j["input_dim"] = input_dim;
    j["embedding_dim"] = embedding_dim;
    j["spectrum_over_n"] = spectrum;
    if (outcome.lambda) j["lambda"] = *outcome.lambda;
    if (outcome.lambda_max) {
        j["lambda_max"] = *outcome.lambda_max;
        j["lambda_max_probes"] = outcome.lambda_max_probes;
    }
    if (outcome.solution) {
        j["iterations"] = outcome.solution->iterations;
        j["objective"] = outcome.solution->objective;
    }
    j["converged"] = outcome.converged;
    j["num_clusters"] = outcome.assignment.num_clusters;
    j["cluster_sizes"] = cluster_sizes;
    j["rand_index"] = outcome.rand_index ? json(*outcome.rand_index) : json(nullptr);
    j["rand_index_full"] = outcome.rand_index_full ? json(*outcome.rand_index_full) : json(nullptr);
    json grid = json::array();
    for (const GridPoint& g : outcome.grid_trace)
        grid.push_back({{"lambda", g.lambda},
                        {"clusters", g.num_clusters},
                        {"rand_index", g.rand_index},
                        {"iterations", g.iterations},
                        {"converged", g.converged}});
    j["grid"] = std::move(grid);
    j["outputs"] = outputs;
    json t;
    for (const auto& [k, v] : timings) t[k] = v;
    j["timings"] = std::move(t);
    return j.dump(2) + "\n";
}

RunReport run_pipeline(const PipelineConfig& config) {
    RunReport report;
    report.config_json = config_object(config).dump();
    report.config_hash = fnv1a_hex(report.config_json);
    report.seed = config.seed;

    auto t0 = std::chrono::steady_clock::now();
    std::optional<LabeledDataset> generated;
    if (const auto* path = std::get_if<fs::path>(&config.input)) {
        IngestedData in = ingest_csv(*path);
        report.data = std::move(in.points);
        report.truth = std::move(in.truth);
        report.timings["load"] = seconds_since(t0);
    } else {
        generated = generate(std::get<GeneratorSpec>(config.input), config.seed);
        report.data = generated->points;
        report.truth = generated->truth;
        report.timings["generate"] = seconds_since(t0);
    }
    report.n = report.data.size();
    report.input_dim = report.data.dim();

    std::vector<std::size_t> subset;
    if (config.eval_radius) {
        const auto* g = std::get_if<GeneratorSpec>(&config.input);
        if (!g || g->name != "gaussian") throw InputError("eval_radius needs the gaussian generator");
        subset = near_mean_subset(report.data, *report.truth, MixtureSpec::unit_axes(g->k, g->sigma, g->dim), *config.eval_radius);
    }

    PointSet cluster_input = report.data;
    if (config.space == ClusterSpace::Embedded) {
        t0 = std::chrono::steady_clock::now();
        const DistanceMatrix lf = lf_all_pairs(report.data, config.leapfrog);
        report.timings["leapfrog"] = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        EmbedOutcome e = embed_stage(lf, config.embedding);
        report.timings["embed"] = seconds_since(t0);
        const auto nd = static_cast<double>(report.n);
        for (std::size_t l = 0; l < std::min<std::size_t>(20, e.spectrum.size()); ++l)
            report.spectrum.push_back(e.spectrum.eigenvalues(static_cast<Eigen::Index>(l)) / nd);
        report.embedding_dim = e.dim;
        cluster_input = e.embedding.as_points();
        report.embedding = std::move(e.embedding);
    } else {
        report.embedding_dim = report.input_dim;
    }

    t0 = std::chrono::steady_clock::now();
    report.outcome = cluster_stage(cluster_input, report.truth, config.clusterer, config.lambda_grid, config.merge_tol, subset);
    report.timings["cluster"] = seconds_since(t0);
    report.cluster_sizes = report.outcome.assignment.cluster_sizes();

    if (!config.output_dir.empty()) {
        t0 = std::chrono::steady_clock::now();
        const fs::path& dir = config.output_dir;
        fs::create_directories(dir);
        auto note = [&](const std::string& name) { report.outputs.push_back(name); };
        if (generated) {
            write_dataset_csv(dir / "data.csv", *generated);
            note("data.csv");
            note("data.json");
        }
        if (report.embedding) {
            write_embedding_csv(dir / "embedding.csv", *report.embedding);
            note("embedding.csv");
        }
        write_labels_csv(dir / "labels.csv", report.outcome.assignment);
        note("labels.csv");
        if (report.outcome.solution) {
            write_text(dir / "solution.json", son_solution_json(*report.outcome.solution, report.outcome.assignment));
            note("solution.json");
        }
        if (config.write_svg) {
            if (report.input_dim == 2) {
                write_text(dir / "original.svg", scatter_svg(report.data, report.outcome.assignment, {"original space"}));
                note("original.svg");
            }
            if (report.embedding && report.embedding_dim == 2) {
                write_text(dir / "embedded.svg",
                           scatter_svg(report.embedding->as_points(), report.outcome.assignment, {"embedded space"}));
                note("embedded.svg");
            }
        }
        note("report.json");
        report.timings["write"] = seconds_since(t0);
        write_text(dir / "report.json", report.to_json());
    }
    return report;
}

bool BoundsTableReport::pattern_matches(ErfConvention convention) const {
    for (const auto& e : entries)
        if (e.convention == convention && e.range.nonempty != e.row.reference_nonempty) return false;
    return true;
}

double BoundsTableReport::max_endpoint_deviation(ErfConvention convention) const {
    double worst = 0.0;
    for (const auto& e : entries) {
        if (e.convention != convention || !e.row.reference_nonempty) continue;
        worst = std::max(worst, std::abs(e.range.lower_n2 - e.row.reference_lower_n2) / e.row.reference_lower_n2);
        worst = std::max(worst, std::abs(e.range.upper_n2 - e.row.reference_upper_n2) / e.row.reference_upper_n2);
    }
    return worst;
}

std::string BoundsTableReport::csv(ErfConvention convention) const {
    std::string out = "w1,w2,sigma1,sigma2,theta,lower_n2lambda,upper_n2lambda,nonempty\n";
    for (const auto& e : entries) {
        if (e.convention != convention) continue;
        const auto& r = e.row;
        out += num(r.w1) + "," + num(r.w2) + "," + num(r.sigma1) + "," + num(r.sigma2) + "," + num(r.theta) + "," +
               num(e.range.lower_n2) + "," + num(e.range.upper_n2) + "," + (e.range.nonempty ? "1" : "0") + "\n";
    }
    return out;
}

std::string BoundsTableReport::json() const {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& e : entries) {
        if (e.convention != ErfConvention::GaussMass) continue;
        nlohmann::ordered_json row;
        row["w"] = {e.row.w1, e.row.w2};
        row["sigma"] = {e.row.sigma1, e.row.sigma2};
        row["theta"] = e.row.theta;
        row["reference"] = {{"nonempty", e.row.reference_nonempty},
                            {"lower_n2lambda", e.row.reference_lower_n2},
                            {"upper_n2lambda", e.row.reference_upper_n2}};
        for (const auto& other : entries) {
            if (other.row.w1 != e.row.w1 || other.row.w2 != e.row.w2 || other.row.sigma1 != e.row.sigma1 ||
                other.row.sigma2 != e.row.sigma2 || other.row.theta != e.row.theta)
                continue;
            row[to_string(other.convention)] = {{"lower_n2lambda", other.range.lower_n2},
                                                {"upper_n2lambda", other.range.upper_n2},
                                                {"nonempty", other.range.nonempty}};
        }
        rows.push_back(std::move(row));
    }
    nlohmann::ordered_json j;
    j["rows"] = std::move(rows);
    for (ErfConvention c : {ErfConvention::GaussMass, ErfConvention::LiteralErf})
        j["pattern_matches"][to_string(c)] = pattern_matches(c);
    return j.dump(2) + "\n";
}

BoundsTableReport run_bounds_table(const fs::path& output_dir, std::size_t n) {
    BoundsTableReport report;
    for (ErfConvention c : {ErfConvention::GaussMass, ErfConvention::LiteralErf}) {
        for (const RecoveryTableRow& row : recovery_table_rows()) {
            const MixtureSpec spec = MixtureSpec::one_d({row.w1, row.w2}, {0.0, 1.0}, {row.sigma1, row.sigma2});
            BoundsTableEntry e{row, c, {}};
            try {
                e.range = recovery_range_1d(spec, row.theta, n, c).range;
            } catch (const ParameterError&) {
                e.range = LambdaRange{};  // overlapping windows: no certified range
            }
            report.entries.push_back(e);
        }
    }
    if (!output_dir.empty()) {
        for (ErfConvention c : {ErfConvention::GaussMass, ErfConvention::LiteralErf})
            write_text(output_dir / (std::string("bounds_") + to_string(c) + ".csv"), report.csv(c));
        write_text(output_dir / "bounds.json", report.json());
    }
    return report;
}

}  // namespace leapclust
