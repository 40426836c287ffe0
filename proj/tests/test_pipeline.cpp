#include "leapclust/io.hpp"
#include "leapclust/pipeline.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <filesystem>
#include <sys/wait.h>

using namespace leapclust;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::path(LEAPCLUST_TEST_TMP) / "pipeline" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(LEAPCLUST_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

nlohmann::json without_timings(const std::string& report) {
    nlohmann::json j = nlohmann::json::parse(report);
    j.erase("timings");
    j.erase("outputs");
    return j;
}

PipelineConfig small_moons() {
    PipelineConfig cfg;
    GeneratorSpec g;
    g.name = "moons";
    g.n = 60;
    g.noise = 0.05;
    cfg.input = g;
    cfg.seed = 3;
    cfg.lambda_grid = parse_grid_request("geometric:count=30");
    return cfg;
}

}  // namespace

TEST(GeneratorSpec, ParseAndPrint) {
    const GeneratorSpec g = parse_generator_spec("circles:n=100,noise=0.01,factor=0.4");
    EXPECT_EQ(g.name, "circles");
    EXPECT_EQ(g.n, 100u);
    EXPECT_DOUBLE_EQ(g.noise, 0.01);
    EXPECT_DOUBLE_EQ(g.factor, 0.4);
    const GeneratorSpec back = parse_generator_spec(to_string(g));
    EXPECT_EQ(to_string(back), to_string(g));
    EXPECT_EQ(parse_generator_spec("aniso").n, 600u);
    const GeneratorSpec iv = parse_generator_spec("intervals:n=50,set=0..0.25;0.5..1");
    ASSERT_EQ(iv.intervals.size(), 2u);
    EXPECT_DOUBLE_EQ(iv.intervals[1].first, 0.5);
    EXPECT_EQ(generate(iv, 1).points.size(), 50u);
    EXPECT_THROW(parse_generator_spec("spirals"), InputError);
    EXPECT_THROW(parse_generator_spec("moons:n=abc"), InputError);
    EXPECT_THROW(parse_generator_spec("moons:bogus=1"), InputError);
}

TEST(GridRequest, ParseAndResolve) {
    const GridRequest geo = parse_grid_request("geometric:count=5");
    ASSERT_TRUE(std::holds_alternative<GeometricGrid>(geo.resolve(2.0)));
    const auto g = std::get<GeometricGrid>(geo.resolve(2.0));
    EXPECT_DOUBLE_EQ(g.lo, 2e-6);
    EXPECT_DOUBLE_EQ(g.hi, 4.0);
    EXPECT_EQ(g.count, 5u);
    const GridRequest lin = parse_grid_request("linear:step=1e-5");
    const auto l = std::get<LinearGrid>(lin.resolve(1e-3));
    EXPECT_DOUBLE_EQ(l.step, 1e-5);
    EXPECT_DOUBLE_EQ(l.hi, 2e-3);
    const GridRequest ex = parse_grid_request("explicit:0.1;0.3");
    EXPECT_FALSE(ex.needs_lambda_max());
    EXPECT_EQ(std::get<ExplicitGrid>(ex.resolve(0.0)).values, (std::vector<double>{0.1, 0.3}));
    EXPECT_EQ(to_string(parse_grid_request(to_string(lin))), to_string(lin));
    EXPECT_THROW(parse_grid_request("spiral:count=3"), InputError);
}

TEST(Config, JsonRoundTrip) {
    PipelineConfig cfg = small_moons();
    cfg.space = ClusterSpace::Original;
    cfg.embedding = FixedDim{2};
    cfg.merge_tol = 1e-4;
    cfg.eval_radius = 2.0;
    const std::string text = config_to_json(cfg);
    EXPECT_EQ(config_to_json(config_from_json(text)), text);

    cfg.clusterer = DbscanParams{0.2, 4};
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(cfg))), config_to_json(cfg));
    cfg.clusterer = KMeansParams{3, 100, 5, 11};
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(cfg))), config_to_json(cfg));
    cfg.clusterer = SingleLinkageParams{4};
    EXPECT_EQ(config_to_json(config_from_json(config_to_json(cfg))), config_to_json(cfg));
    EXPECT_THROW(config_from_json("{\"bogus\": 1}"), InputError);
    EXPECT_THROW(config_from_json("not json"), InputError);
}

TEST(Pipeline, MoonsDeterministic) {
    PipelineConfig cfg = small_moons();
    const RunReport a = run_pipeline(cfg);
    const RunReport b = run_pipeline(cfg);
    EXPECT_EQ(without_timings(a.to_json()), without_timings(b.to_json()));
    EXPECT_EQ(a.config_hash, b.config_hash);
    EXPECT_EQ(a.n, 60u);
    ASSERT_TRUE(a.outcome.rand_index);
    ASSERT_EQ(a.outcome.grid_trace.size(), 30u);
    double best = 0.0;
    for (const GridPoint& g : a.outcome.grid_trace) best = std::max(best, g.rand_index);
    EXPECT_DOUBLE_EQ(*a.outcome.rand_index, best);
    for (const char* stage : {"generate", "leapfrog", "embed", "cluster"}) EXPECT_TRUE(a.timings.count(stage)) << stage;

    cfg.seed = 4;
    EXPECT_NE(run_pipeline(cfg).config_hash, a.config_hash);
}

TEST(Pipeline, WritesArtifacts) {
    PipelineConfig cfg = small_moons();
    cfg.output_dir = scratch("artifacts");
    const RunReport r = run_pipeline(cfg);
    for (const char* f : {"data.csv", "data.json", "embedding.csv", "labels.csv", "solution.json", "original.svg", "report.json"})
        EXPECT_TRUE(fs::exists(cfg.output_dir / f)) << f;
    EXPECT_EQ(fs::exists(cfg.output_dir / "embedded.svg"), r.embedding_dim == 2);
    const nlohmann::json j = nlohmann::json::parse(read_text(cfg.output_dir / "report.json"));
    for (const char* key : {"config", "config_hash", "seed", "spectrum_over_n", "embedding_dim", "lambda", "rand_index",
                            "cluster_sizes", "timings"})
        EXPECT_TRUE(j.contains(key)) << key;
}

TEST(Pipeline, SinglePoint) {
    const fs::path dir = scratch("single");
    write_text(dir / "one.csv", "0.5,2\n");
    PipelineConfig cfg;
    cfg.input = dir / "one.csv";
    const RunReport r = run_pipeline(cfg);
    EXPECT_EQ(r.outcome.assignment.num_clusters, 1);
    EXPECT_EQ(r.cluster_sizes, (std::vector<std::size_t>{1}));
}

TEST(Pipeline, Baselines) {
    PipelineConfig cfg = small_moons();
    cfg.space = ClusterSpace::Original;
    cfg.clusterer = SingleLinkageParams{2};
    const RunReport r = run_pipeline(cfg);
    EXPECT_EQ(r.outcome.assignment.num_clusters, 2);
    EXPECT_FALSE(r.outcome.lambda);
    cfg.clusterer = DbscanParams{0.3, 3};
    EXPECT_TRUE(run_pipeline(cfg).outcome.rand_index);
}

TEST(Pipeline, MissingInputIsInputError) {
    PipelineConfig cfg;
    cfg.input = fs::path("/nonexistent/points.csv");
    EXPECT_THROW(run_pipeline(cfg), InputError);
}

TEST(BoundsTable, Report) {
    const fs::path dir = scratch("bounds");
    const BoundsTableReport r = run_bounds_table(dir);
    EXPECT_EQ(r.entries.size(), 22u);
    EXPECT_TRUE(r.pattern_matches(ErfConvention::LiteralErf) || r.pattern_matches(ErfConvention::GaussMass));
    EXPECT_TRUE(fs::exists(dir / "bounds_gauss_mass.csv"));
    EXPECT_TRUE(fs::exists(dir / "bounds_literal_erf.csv"));
    const nlohmann::json j = nlohmann::json::parse(read_text(dir / "bounds.json"));
    EXPECT_FALSE(j.empty());
    const std::string csv = r.csv(ErfConvention::GaussMass);
    EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 12);
}

// Stage-by-stage CLI run reproduces the one-shot pipeline.
TEST(Cli, StagesMatchOneShot) {
    const fs::path dir = scratch("stages");
    ASSERT_EQ(run_cli("gen -g moons:n=60,noise=0.05 --seed 3 --out " + (dir / "data.csv").string()), 0);
    ASSERT_EQ(run_cli("distances -i " + (dir / "data.csv").string() + " --format binary --out " + (dir / "lf.lfd").string()), 0);
    ASSERT_EQ(run_cli("embed -i " + (dir / "lf.lfd").string() + " --out " + (dir / "embedding.csv").string()), 0);
    ASSERT_EQ(run_cli("cluster -i " + (dir / "embedding.csv").string() + " --truth " + (dir / "data.csv").string() +
                      " --grid geometric:count=30 --out " + (dir / "cl").string()),
              0);
    ASSERT_EQ(run_cli("pipeline -g moons:n=60,noise=0.05 --seed 3 --grid geometric:count=30 --out " + (dir / "one").string()), 0);

    EXPECT_EQ(read_text(dir / "data.csv"), read_text(dir / "one" / "data.csv"));
    EXPECT_EQ(read_text(dir / "embedding.csv"), read_text(dir / "one" / "embedding.csv"));
    EXPECT_EQ(read_text(dir / "cl" / "labels.csv"), read_text(dir / "one" / "labels.csv"));
    EXPECT_EQ(read_text(dir / "cl" / "solution.json"), read_text(dir / "one" / "solution.json"));

    ASSERT_EQ(run_cli("eval --labels " + (dir / "cl" / "labels.csv").string() + " --truth " + (dir / "data.csv").string()), 0);
}

TEST(Cli, ExitCodes) {
    const fs::path dir = scratch("codes");
    EXPECT_EQ(run_cli("--help"), 0);
    EXPECT_EQ(run_cli("nosuchcommand"), 2);
    EXPECT_EQ(run_cli("distances -i " + (dir / "missing.csv").string() + " --out " + (dir / "x.csv").string()), 2);
    write_text(dir / "ragged.csv", "1,2\n3\n");
    EXPECT_EQ(run_cli("distances -i " + (dir / "ragged.csv").string() + " --out " + (dir / "x.csv").string()), 2);
    EXPECT_EQ(run_cli("gen -g moons:noise=-1 --out " + (dir / "bad.csv").string()), 2);

    write_text(dir / "pts.csv", "0\n0.4\n1\n3\n");
    EXPECT_EQ(run_cli("cluster -i " + (dir / "pts.csv").string() + " --lambda 0.1 --max-iters 2 --out " + (dir / "c").string()), 0);
    EXPECT_EQ(run_cli("cluster -i " + (dir / "pts.csv").string() + " --lambda 0.1 --max-iters 2 --strict --out " +
                      (dir / "c").string()),
              3);
    EXPECT_EQ(run_cli("cluster -i " + (dir / "pts.csv").string() + " --lambda 0.1 --strict --out " + (dir / "c").string()), 0);
    EXPECT_EQ(run_cli("bounds --out " + (dir / "b").string()), 0);
}
