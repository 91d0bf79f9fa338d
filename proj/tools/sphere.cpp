// Command-line front end: graph generation, prediction, seed selection,
// contagion runs and the full experiment.

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "sphere/contagion.hpp"
#include "sphere/errors.hpp"
#include "sphere/experiment.hpp"
#include "sphere/io.hpp"
#include "sphere/predict.hpp"
#include "sphere/topk.hpp"

namespace {

using namespace sphere;

std::vector<NodeId> to_dense(const LoadedGraph& loaded, const std::vector<std::int64_t>& ids) {
    std::unordered_map<std::int64_t, NodeId> dense;
    for (NodeId i = 0; i < loaded.original_ids.size(); ++i) dense.emplace(loaded.original_ids[i], i);
    std::vector<NodeId> out;
    for (auto id : ids) {
        auto it = dense.find(id);
        if (it == dense.end()) throw UsageError("node " + std::to_string(id) + " is not in the graph");
        out.push_back(it->second);
    }
    return out;
}

struct GenEr {
    std::size_t nodes = 0;
    double prob = 0.0;
    std::uint64_t seed = 1;
    std::string out;

    int run() const {
        Rng rng(seed);
        write_edge_list(out, erdos_renyi(nodes, prob, rng));
        return 0;
    }
};

struct Predict {
    std::string graph;
    std::string metric;
    bool weighted = false;
    double epsilon = kDefaultEpsilon;
    int t = 1;
    std::string out;

    int run() const {
        const LoadedGraph loaded = load_edge_list(graph);
        const PredictedGraph p =
            predict_future_graph(loaded.graph, parse_similarity_metric(metric), weighted, epsilon, t);
        std::ofstream file(out);
        if (!file) throw DataError("cannot write " + out);
        file << "# nodes " << p.graph.node_count() << " edges " << p.graph.edge_count() << '\n';
        for (const auto& e : p.graph.edges()) {
            file << loaded.original_ids[e.u] << '\t' << loaded.original_ids[e.v] << '\t' << format_double(e.weight)
                 << '\n';
        }
        std::cerr << "added " << p.predicted_edges.size() << " predicted edges\n";
        return 0;
    }
};

struct TopK {
    std::string graph;
    std::string algorithm;
    std::string centrality = "none";
    std::size_t k = 1;
    std::uint64_t seed = 1;
    bool unweighted = false;

    int run() const {
        const LoadedGraph loaded = load_edge_list(graph);
        const auto alg = parse_topk_algorithm(algorithm);
        std::optional<CentralityVector> c;
        if (centrality != "none") {
            const auto metric = parse_centrality_metric(centrality);
            c = compute_centrality(loaded.graph, metric, !unweighted && supports_weighted(metric));
        }
        Rng rng(seed);
        const SeedSet s = select_seeds(loaded.graph, alg, c ? &*c : nullptr, k, rng);
        for (std::size_t i = 0; i < s.nodes.size(); ++i) {
            std::cout << (i ? "," : "") << loaded.original_ids[s.nodes[i]];
        }
        std::cout << '\n';
        return 0;
    }
};

struct Simulate {
    std::string graph;
    std::vector<std::int64_t> seeds;
    std::string model;
    double theta = 0.3;
    std::optional<std::size_t> horizon;

    int run() const {
        const LoadedGraph loaded = load_edge_list(graph);
        const auto dense = to_dense(loaded, seeds);
        const InfectionTrace trace = parse_contagion_model(model) == ContagionModel::simple
                                         ? simple_contagion(loaded.graph, dense, horizon)
                                         : complex_contagion(loaded.graph, dense, theta, horizon);
        std::cout << "t,fraction\n";
        for (std::size_t t = 0; t < trace.fractions.size(); ++t) {
            std::cout << t << ',' << format_double(trace.fractions[t]) << '\n';
        }
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Future-influencer prediction on weighted graphs"};
    app.require_subcommand(1);

    GenEr gen;
    auto* gen_cmd = app.add_subcommand("gen-er", "Write a G(n,p) random graph");
    gen_cmd->add_option("--nodes", gen.nodes, "Node count")->required();
    gen_cmd->add_option("--prob", gen.prob, "Edge probability")->required();
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--out", gen.out, "Output edge list")->required();

    Predict pred;
    auto* pred_cmd = app.add_subcommand("predict", "Write the predicted future graph");
    pred_cmd->add_option("--graph", pred.graph, "Input edge list")->required();
    pred_cmd->add_option("--metric", pred.metric, "Similarity metric")->required();
    pred_cmd->add_flag("--weighted", pred.weighted, "Use the weighted variant");
    pred_cmd->add_option("--epsilon", pred.epsilon, "Three-path discount");
    pred_cmd->add_option("--t", pred.t, "Horizon in time units")->required();
    pred_cmd->add_option("--out", pred.out, "Output edge list")->required();

    TopK topk;
    auto* topk_cmd = app.add_subcommand("topk", "Print selected seed nodes");
    topk_cmd->add_option("--graph", topk.graph, "Input edge list")->required();
    topk_cmd->add_option("--algorithm", topk.algorithm, "Selection algorithm")->required();
    topk_cmd->add_option("--centrality", topk.centrality, "Centrality metric or none");
    topk_cmd->add_option("--k", topk.k, "Seed count")->required();
    topk_cmd->add_option("--seed", topk.seed, "RNG seed");
    topk_cmd->add_flag("--unweighted", topk.unweighted, "Ignore edge weights in the centrality");

    Simulate sim;
    auto* sim_cmd = app.add_subcommand("simulate", "Print a contagion trace as CSV");
    sim_cmd->add_option("--graph", sim.graph, "Input edge list")->required();
    sim_cmd->add_option("--seeds", sim.seeds, "Seed node ids")->required()->delimiter(',');
    sim_cmd->add_option("--model", sim.model, "simple or complex")->required();
    sim_cmd->add_option("--theta", sim.theta, "Complex-contagion threshold");
    sim_cmd->add_option("--horizon", sim.horizon, "Number of steps");

    std::string config_path;
    std::string out_dir;
    auto* exp_cmd = app.add_subcommand("experiment", "Run the full evaluation and write CSV tables");
    exp_cmd->add_option("--config", config_path, "key = value config file")->required();
    exp_cmd->add_option("--out", out_dir, "Output directory")->required();

    std::string in_dir;
    auto* rep_cmd = app.add_subcommand("report", "Pretty-print the tables of an experiment");
    rep_cmd->add_option("--in", in_dir, "Experiment output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (*gen_cmd) return gen.run();
        if (*pred_cmd) return pred.run();
        if (*topk_cmd) return topk.run();
        if (*sim_cmd) return sim.run();
        if (*exp_cmd) {
            const ExperimentConfig config = load_config(config_path);
            const EvalReport report = run_experiment(config);
            for (const auto& path : emit_report(report, out_dir)) std::cerr << "wrote " << path.string() << '\n';
            return 0;
        }
        if (*rep_cmd) {
            std::cout << format_report_dir(in_dir);
            return 0;
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return 1;
    } catch (const DataError& e) {
        std::cerr << "data error: " << e.what() << '\n';
        return 2;
    } catch (const ConvergenceError& e) {
        std::cerr << "did not converge: " << e.what() << '\n';
        return 3;
    } catch (const sphere::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
