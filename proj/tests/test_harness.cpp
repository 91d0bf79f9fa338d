#include <doctest.h>

#include <unistd.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "sphere/errors.hpp"
#include "sphere/evaluation.hpp"
#include "sphere/experiment.hpp"
#include "sphere/io.hpp"
#include "support.hpp"

using namespace sphere;
namespace fs = std::filesystem;

namespace {

struct Scratch {
    fs::path dir;
    Scratch() : dir(fs::temp_directory_path() / ("sphere_test_" + std::to_string(::getpid()))) {
        fs::remove_all(dir);
        fs::create_directories(dir);
    }
    ~Scratch() { fs::remove_all(dir); }
    fs::path operator/(const std::string& name) const { return dir / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

int run(const std::string& cmd, const std::string& stdout_path = "/dev/null") {
    const int status = std::system((cmd + " >" + stdout_path + " 2>/dev/null").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SeedSet seeds(std::vector<NodeId> nodes) { return {std::move(nodes), "test", "none", {}}; }

InfectionTrace trace(std::vector<double> v) {
    InfectionTrace t;
    t.fractions = std::move(v);
    return t;
}

ExperimentConfig small_config() {
    ExperimentConfig c;
    c.dataset.nodes = 60;
    c.dataset.probability = 0.1;
    c.dataset.seed = 3;
    c.trials = 2;
    c.theta = 0.1;
    c.metrics = {SimilarityMetric::common_neighbors, SimilarityMetric::resource_allocation};
    c.algorithms = {TopKAlgorithm::k_highest, TopKAlgorithm::voterank, TopKAlgorithm::random};
    c.centralities = {CentralityMetric::degree, CentralityMetric::pagerank};
    c.master_seed = 11;
    return c;
}

}  // namespace

TEST_CASE("edge-list loading") {
    std::istringstream in("# comment\n10\t20\n20\t10\n20 30\n30 30\n40\t10\t0.5\n");
    const auto g = load_edge_list(in, "mem");
    CHECK(g.graph.node_count() == 4);
    CHECK(g.graph.edge_count() == 3);
    CHECK(g.original_ids == std::vector<std::int64_t>{10, 20, 30, 40});
    std::istringstream shuffled("7 3\n3 5\n");
    CHECK(load_edge_list(shuffled, "mem").original_ids == std::vector<std::int64_t>{3, 5, 7});
    CHECK(g.graph.weight(0, 3) == 0.5);
    CHECK(g.graph.weight(0, 1) == 1.0);

    std::istringstream bad("1 2\na b\n");
    try {
        load_edge_list(bad, "mem");
        FAIL("expected a parse error");
    } catch (const DataError& e) {
        CHECK(std::string(e.what()).find("mem:2") != std::string::npos);
    }
    std::istringstream heavy("1 2 1.5\n");
    CHECK_THROWS_AS(load_edge_list(heavy, "mem"), DataError);
    std::istringstream short_line("7\n");
    CHECK_THROWS_AS(load_edge_list(short_line, "mem"), DataError);
    CHECK_THROWS_AS(load_edge_list(fs::path("/nonexistent/graph.txt")), DataError);
}

TEST_CASE("edge-list round trip") {
    Scratch tmp;
    std::mt19937_64 rng(71);
    const auto g = testing::build<double>(testing::random_spec(rng, 10, 30));
    write_edge_list(tmp / "g.txt", g);
    const auto back = load_edge_list(tmp / "g.txt");
    CHECK(back.graph.node_count() == g.node_count());
    for (const auto& e : g.edges()) CHECK(back.graph.weight(e.u, e.v) == e.weight);
    CHECK(back.graph.edge_count() == g.edge_count());

    // Isolated nodes survive through the header.
    const auto sparse = WeightedGraph::build(4, {{1, 2, 1.0}});
    std::stringstream s;
    write_edge_list(s, sparse);
    CHECK(s.str().find("\t1\n") == std::string::npos);
    const auto sparse_back = load_edge_list(s, "mem");
    CHECK(sparse_back.graph.node_count() == 4);
    CHECK(sparse_back.graph.has_edge(1, 2));
}

TEST_CASE("number formatting") {
    for (double x : {0.1, 1.0 / 3, 1e-17, 123456.789, 0.0}) CHECK(parse_double(format_double(x)) == x);
    CHECK(format_double(0.5) == "0.5");
    CHECK_THROWS_AS(parse_double("abc"), DataError);
    CHECK_THROWS_AS(parse_double("1.5x"), DataError);
}

TEST_CASE("accuracy") {
    CHECK(accuracy(seeds({1, 2, 3, 4, 5}), seeds({1, 2, 9, 10, 11})) == 0.4);
    CHECK(accuracy(seeds({1, 2, 9, 10, 11}), seeds({1, 2, 3, 4, 5})) == 0.4);
    CHECK(accuracy(seeds({3, 1}), seeds({1, 3})) == 1.0);
    CHECK(accuracy(seeds({0, 1}), seeds({2, 3})) == 0.0);
    CHECK_THROWS_AS(accuracy(seeds({0, 1}), seeds({2})), UsageError);
    CHECK_THROWS_AS(accuracy(seeds({}), seeds({})), UsageError);
}

TEST_CASE("random-baseline accuracy averages k/n") {
    Rng rng(72);
    const auto g = erdos_renyi(500, 0.05, rng);
    const int draws = 4000;
    double sum = 0.0;
    double sum_sq = 0.0;
    for (int i = 0; i < draws; ++i) {
        const double a = accuracy(random_seeds(g, 5, rng), random_seeds(g, 5, rng));
        sum += a;
        sum_sq += a * a;
    }
    const double mean = sum / draws;
    const double sd = std::sqrt((sum_sq / draws - mean * mean) / draws);
    CHECK(std::abs(mean - 0.01) <= 3 * sd);
}

TEST_CASE("mean squared error") {
    CHECK(mse(trace({0.2, 0.2, 0.2, 0.2, 0.2}), trace({0.4, 0.4, 0.4, 0.4, 0.4})) == doctest::Approx(0.04));
    CHECK(mse(trace({0, 0}), trace({0, 1})) == 0.5);
    CHECK(mse(trace({0, 0}), trace({0, 1}), MseDivisor::horizon) == 1.0);
    CHECK(mse(trace({0.3, 0.6}), trace({0.3, 0.6})) == 0.0);
    CHECK(mse(trace({0.1, 0.7}), trace({0.2, 0.3})) == mse(trace({0.2, 0.3}), trace({0.1, 0.7})));
    CHECK_THROWS_AS(mse(trace({0.1}), trace({0.1, 0.2})), UsageError);
    CHECK_THROWS_AS(mse(trace({0.1}), trace({0.1}), MseDivisor::horizon), UsageError);
}

TEST_CASE("config parsing") {
    std::istringstream in(
        "# scenario\n"
        "dataset = snap_file(data/g.txt)\n"
        "fraction = 0.7\n"
        "t = 3\n"
        "k = 25\n"
        "trials = 3   # fewer\n"
        "theta = 0.2\n"
        "metrics = cn, ra2\n"
        "algorithms = k_highest,random\n"
        "centralities = all\n"
        "contagion_horizon = 12\n"
        "bi_weights = 0.2, 0.3, 0.5\n"
        "mse_divisor = horizon\n"
        "master_seed = 99\n");
    const auto c = parse_config(in, "/base");
    CHECK(c.dataset.kind == DatasetSpec::Kind::snap_file);
    CHECK(c.dataset.path == fs::path("/base/data/g.txt"));
    CHECK(c.fraction == 0.7);
    CHECK(c.t == 3);
    CHECK(c.k == 25);
    CHECK(c.trials == 3);
    CHECK(c.theta == 0.2);
    CHECK(c.metrics == std::vector<SimilarityMetric>{SimilarityMetric::common_neighbors, SimilarityMetric::ra2});
    CHECK(c.algorithms == std::vector<TopKAlgorithm>{TopKAlgorithm::k_highest, TopKAlgorithm::random});
    CHECK(c.centralities.size() == kCentralityMetrics.size());
    CHECK(c.contagion_horizon == std::size_t{12});
    CHECK(c.centrality_params.bi_weights.neighbors == 0.5);
    CHECK(c.mse_divisor == MseDivisor::horizon);
    CHECK(c.master_seed == 99);

    std::istringstream er("dataset = er(100, 0.2, 4)\n");
    const auto e = parse_config(er);
    CHECK(e.dataset.nodes == 100);
    CHECK(e.dataset.probability == 0.2);
    CHECK(e.dataset.describe() == "er(100,0.2,4)");

    for (const char* bad : {"colour = red\n", "fraction = 0\n", "trials = 0\n", "metrics = cn, katz\n",
                            "theta = 2\n", "dataset = er(10)\n", "k = five\n", "just words\n"}) {
        std::istringstream s(bad);
        CHECK_THROWS_AS(parse_config(s), UsageError);
    }
}

TEST_CASE("largest-component BFS sample") {
    // Component {0..5} with hub 2, plus a separate triangle.
    const auto g = WeightedGraph::build(
        9, {{0, 1, 1}, {1, 2, 1}, {2, 3, 1}, {2, 4, 1}, {2, 5, 1}, {5, 0, 1}, {6, 7, 1}, {7, 8, 1}, {6, 8, 1}});
    CHECK(bfs_sample_largest_component(g, 0).node_count() == 6);
    CHECK(bfs_sample_largest_component(g, 100).edge_count() == 6);
    const auto four = bfs_sample_largest_component(g, 4);
    CHECK(four.node_count() == 4);
    // Hub 2 and its first three neighbours by id: 1, 3, 4.
    CHECK(four.edge_count() == 3);
}

TEST_CASE("experiment pipeline") {
    const auto config = small_config();
    const auto report = run_experiment(config);
    CHECK(report.node_count == 60);
    // k_highest and random use none/degree/pagerank combos as appropriate.
    CHECK(report.cells.size() == 2 * (2 + 1 + 1));
    for (const auto& cell : report.cells) {
        REQUIRE(cell.ok());
        CHECK(cell.accuracy >= 0.0);
        CHECK(cell.accuracy <= 1.0);
        for (std::size_t m = 0; m < 2; ++m) {
            CHECK(cell.mse[m] >= 0.0);
            const auto& t = cell.traces[m];
            CHECK(t.predicted.size() == t.original.size());
            CHECK(t.training.size() == t.original.size());
            for (double x : t.predicted) CHECK(std::isfinite(x));
        }
    }

    auto same = run_experiment(config);
    for (std::size_t i = 0; i < report.cells.size(); ++i) {
        CHECK(report.cells[i].accuracy == same.cells[i].accuracy);
        CHECK(report.cells[i].mse == same.cells[i].mse);
    }

    auto smoke = config;
    smoke.trials = 1;
    smoke.fraction = 1.0;
    smoke.metrics = {SimilarityMetric::common_neighbors};
    smoke.algorithms = {TopKAlgorithm::k_highest};
    smoke.centralities = {CentralityMetric::degree};
    const auto one = run_experiment(smoke);
    REQUIRE(one.cells.size() == 1);
    CHECK(one.cells[0].ok());
    CHECK(one.cells[0].training_accuracy == 1.0);
}

TEST_CASE("failing cells are recorded, not fatal") {
    auto config = small_config();
    config.trials = 1;
    config.k = 40;
    config.algorithms = {TopKAlgorithm::graph_coloring, TopKAlgorithm::k_highest};
    config.centralities = {CentralityMetric::degree};
    const auto report = run_experiment(config);
    bool coloring_failed = false;
    for (const auto& cell : report.cells) {
        if (cell.algorithm == TopKAlgorithm::graph_coloring) coloring_failed |= !cell.ok();
        if (cell.algorithm == TopKAlgorithm::k_highest) CHECK(cell.ok());
    }
    CHECK(coloring_failed);
}

TEST_CASE("report files") {
    Scratch tmp;
    auto config = small_config();
    config.metrics.assign(kSimilarityMetrics.begin(), kSimilarityMetrics.end());
    config.trials = 1;
    const auto report = run_experiment(config);
    const auto files = emit_report(report, tmp / "out");
    std::set<std::string> names;
    for (const auto& f : files) names.insert(f.filename().string());
    for (const char* want : {"mse_by_metric.csv", "accuracy_by_algorithm.csv", "accuracy_by_centrality.csv",
                             "trace_complex_k_highest.csv", "trace_simple_random.csv"}) {
        CHECK(names.count(want) == 1);
    }

    std::ifstream mse_in(tmp / "out" / "mse_by_metric.csv");
    const auto mse_csv = read_csv(mse_in);
    CHECK(mse_csv.header == std::vector<std::string>{"prediction_metric", "complex", "simple", "overall"});
    CHECK(mse_csv.rows.size() == 8);
    CHECK(mse_csv.rows.back().first == "overall");

    // Parsed values equal the in-memory tables exactly.
    const auto expected = mse_table(report);
    REQUIRE(expected.rows.size() == mse_csv.rows.size());
    for (std::size_t i = 0; i < expected.rows.size(); ++i) {
        CHECK(expected.rows[i].first == mse_csv.rows[i].first);
        CHECK(expected.rows[i].second == mse_csv.rows[i].second);
    }
    std::ifstream acc_in(tmp / "out" / "accuracy_by_algorithm.csv");
    const auto acc = read_csv(acc_in);
    CHECK(acc.header.front() == "algorithm");
    CHECK(acc.header.size() == 1 + 7 + 1);
    for (const auto& [label, values] : acc.rows) {
        for (double v : values) CHECK(std::isfinite(v));
    }

    const auto trace_csv = [&] {
        std::ifstream in(tmp / "out" / "trace_simple_k_highest.csv");
        return read_csv(in);
    }();
    CHECK(trace_csv.header.front() == "t");
    CHECK(trace_csv.header.back() == "training");
    CHECK(trace_csv.rows.front().first == "0");

    const auto text = format_report_dir(tmp / "out");
    CHECK(text.find("mse_by_metric") != std::string::npos);
    CHECK_THROWS_AS(format_report_dir(tmp / "missing"), UsageError);
}

TEST_CASE("command-line tool") {
    Scratch tmp;
    const std::string cli = SPHERE_CLI;
    const auto g = (tmp / "g.txt").string();
    CHECK(run(cli + " gen-er --nodes 40 --prob 0.15 --seed 5 --out " + g) == 0);
    CHECK(load_edge_list(fs::path(g)).graph.node_count() == 40);

    spit(tmp / "f.txt", "0\t1\t0.5\n1\t3\t0.3333333333333333\n1\t4\t0.5\n2\t3\t0.3333333333333333\n"
                        "2\t4\t0.3333333333333333\n");
    const auto f = (tmp / "f.txt").string();
    const auto sim = (tmp / "sim.csv").string();
    CHECK(run(cli + " simulate --graph " + f + " --seeds 0 --model complex --theta 0.3", sim) == 0);
    CHECK(slurp(sim).find("3,1") != std::string::npos);

    const auto pred = (tmp / "pred.txt").string();
    CHECK(run(cli + " predict --graph " + f + " --metric cn --t 1 --out " + pred) == 0);
    CHECK(load_edge_list(fs::path(pred)).graph.edge_count() == 9);

    const auto top = (tmp / "top.txt").string();
    CHECK(run(cli + " topk --graph " + f + " --algorithm k_highest --centrality degree --k 2 --unweighted", top) == 0);
    CHECK(slurp(top).rfind("1,2", 0) == 0);

    spit(tmp / "exp.cfg", "dataset = snap_file(f.txt)\ntrials = 1\nk = 1\nmetrics = cn\n"
                          "algorithms = k_highest\ncentralities = degree\n");
    CHECK(run(cli + " experiment --config " + (tmp / "exp.cfg").string() + " --out " + (tmp / "o").string()) ==
          0);
    CHECK(fs::exists(tmp / "o" / "mse_by_metric.csv"));
    CHECK(run(cli + " report --in " + (tmp / "o").string()) == 0);

    // Exit codes: usage 1, data 2, non-convergence 3.
    CHECK(run(cli + " frobnicate") == 1);
    CHECK(run(cli + " topk --graph " + f + " --algorithm nope --k 1") == 1);
    CHECK(run(cli + " topk --graph " + f + " --algorithm k_highest --centrality degree --k 9") == 1);
    spit(tmp / "bad.txt", "1 2\nx y\n");
    CHECK(run(cli + " topk --graph " + (tmp / "bad.txt").string() + " --algorithm random --k 1") == 2);
    CHECK(run(cli + " simulate --graph /nonexistent --seeds 0 --model simple") == 2);
    spit(tmp / "slow.cfg", "dataset = snap_file(f.txt)\ntrials = 1\nk = 1\nmetrics = cn\n"
                           "algorithms = k_highest\ncentralities = eigenvector\nmax_iter = 1\n");
    CHECK(run(cli + " experiment --config " + (tmp / "slow.cfg").string() + " --out " + (tmp / "o2").string()) ==
          0);
}
