#pragma once

// The evaluation protocol: sample a training graph, predict its future with
// each similarity metric, pick influencers on the predicted, training and
// original graphs, and compare them by overlap and by how they spread on the
// original graph.

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sphere/centrality.hpp"
#include "sphere/contagion.hpp"
#include "sphere/evaluation.hpp"
#include "sphere/graph.hpp"
#include "sphere/linkpred.hpp"
#include "sphere/topk.hpp"

namespace sphere {

struct DatasetSpec {
    enum class Kind { erdos_renyi, snap_file };
    Kind kind = Kind::erdos_renyi;
    std::size_t nodes = 500;
    double probability = 0.05;
    std::uint64_t seed = 1;
    std::filesystem::path path;

    std::string describe() const;
};

struct ExperimentConfig {
    DatasetSpec dataset;
    double fraction = 0.9;
    int t = 1;
    std::size_t k = 5;
    std::size_t trials = 10;
    double theta = 0.3;  // complex contagion threshold
    double epsilon = kDefaultEpsilon;
    CentralityParams centrality_params{};
    std::vector<SimilarityMetric> metrics{kSimilarityMetrics.begin(), kSimilarityMetrics.end()};
    std::vector<TopKAlgorithm> algorithms{kTopKAlgorithms.begin(), kTopKAlgorithms.end()};
    std::vector<CentralityMetric> centralities{kCentralityMetrics.begin(), kCentralityMetrics.end()};
    std::optional<std::size_t> contagion_horizon;  // unset: run each model to its own end
    std::size_t simple_horizon_cap = 100;
    std::uint64_t master_seed = 1;
    bool weighted_prediction = false;
    bool weighted_centrality = true;
    MseDivisor mse_divisor = MseDivisor::samples;
    std::size_t lcc_max_nodes = 0;  // 0 keeps the whole dataset
};

/// Parses `key = value` lines with `#` comments. Relative dataset paths are
/// resolved against `base_dir`.
ExperimentConfig parse_config(std::istream& in, const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

/// Builds or reads `config.dataset`, restricted as configured.
WeightedGraph load_dataset(const ExperimentConfig& config);

/// Largest connected component, trimmed to the first `max_nodes` nodes of a
/// breadth-first sweep from its highest-degree node (lowest id on ties).
WeightedGraph bfs_sample_largest_component(const WeightedGraph& g, std::size_t max_nodes);

inline constexpr std::array kContagionModels = {ContagionModel::complex, ContagionModel::simple};

/// Trial-averaged traces for one model; all share one length.
struct TraceSet {
    std::vector<double> predicted;
    std::vector<double> original;
    std::vector<double> training;
};

/// One (prediction metric, algorithm, centrality) combination.
struct CellResult {
    SimilarityMetric metric = SimilarityMetric::common_neighbors;
    TopKAlgorithm algorithm = TopKAlgorithm::k_highest;
    std::optional<CentralityMetric> centrality;

    double accuracy = 0.0;           // predicted seeds vs original seeds
    double training_accuracy = 0.0;  // training seeds vs original seeds
    std::array<double, 2> mse{};     // indexed like kContagionModels
    std::array<TraceSet, 2> traces;
    std::string error;  // non-empty when a trial failed; the cell is then excluded

    bool ok() const { return error.empty(); }
    std::string centrality_name() const;
};

struct EvalReport {
    ExperimentConfig config;
    std::size_t node_count = 0;
    std::size_t edge_count = 0;
    std::vector<CellResult> cells;  // metric-major, then algorithm, then centrality
};

EvalReport run_experiment(const ExperimentConfig& config);
EvalReport run_experiment(const ExperimentConfig& config, const WeightedGraph& original);

/// A labelled numeric table as written to CSV.
struct Table {
    std::vector<std::string> header;
    std::vector<std::pair<std::string, std::vector<double>>> rows;
};

Table mse_table(const EvalReport& report);
Table accuracy_by_algorithm_table(const EvalReport& report);
Table accuracy_by_centrality_table(const EvalReport& report);
Table trace_table(const EvalReport& report, ContagionModel model, TopKAlgorithm algorithm);

void write_csv(std::ostream& out, const Table& table);
Table read_csv(std::istream& in);

/// Writes every table of the report into `out_dir`, creating it if needed.
/// Returns the files written, in order.
std::vector<std::filesystem::path> emit_report(const EvalReport& report, const std::filesystem::path& out_dir);

/// Renders the CSV tables found in `dir` as aligned text.
std::string format_report_dir(const std::filesystem::path& dir);

}  // namespace sphere
