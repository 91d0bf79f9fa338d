#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "sphere/graph.hpp"

namespace sphere {

enum class CentralityMetric {
    degree,
    coreness,
    h_index,
    w_lobby,
    local_rank,
    cluster_rank,
    closeness,
    betweenness,
    eigenvector,
    pagerank,
    leader_rank,
    balanced_index,
    complex_path,
};

inline constexpr std::array kCentralityMetrics = {
    CentralityMetric::degree,       CentralityMetric::coreness,    CentralityMetric::h_index,
    CentralityMetric::w_lobby,      CentralityMetric::local_rank,  CentralityMetric::cluster_rank,
    CentralityMetric::closeness,    CentralityMetric::betweenness, CentralityMetric::eigenvector,
    CentralityMetric::pagerank,     CentralityMetric::leader_rank, CentralityMetric::balanced_index,
    CentralityMetric::complex_path,
};

std::string_view to_string(CentralityMetric metric);
CentralityMetric parse_centrality_metric(std::string_view name);

/// Whether the metric has a weighted mode (LocalRank does not).
bool supports_weighted(CentralityMetric metric);

struct BalancedIndexWeights {
    double resistance = 1.0 / 3.0;
    double degree = 1.0 / 3.0;
    double neighbors = 1.0 / 3.0;
};

struct CentralityParams {
    int h_index_order = 10;
    double cluster_rank_alpha = 10.0;
    double damping = 1.0;
    double tolerance = 1e-10;
    int max_iterations = 1000;
    BalancedIndexWeights bi_weights{};
    double theta = 0.3;
};

/// Per-node scores for one metric, in NodeId order.
struct CentralityVector {
    CentralityMetric metric = CentralityMetric::degree;
    bool weighted = false;
    Eigen::VectorXd scores;
    CentralityParams params{};

    std::string_view name() const { return to_string(metric); }
    std::size_t size() const { return static_cast<std::size_t>(scores.size()); }
    double operator[](NodeId u) const { return scores[static_cast<Eigen::Index>(u)]; }
};

/// Registry entry point. Throws UsageError for a weighted LocalRank request
/// and ConvergenceError when an iterative metric runs out of iterations.
CentralityVector compute_centrality(const WeightedGraph& g, CentralityMetric metric, bool weighted,
                                    const CentralityParams& params = {});

Eigen::VectorXd degree_centrality(const WeightedGraph& g, bool weighted);

/// k-shell decomposition; the weighted variant peels by residual strength
/// and records floor(residual strength) as the core value.
Eigen::VectorXd coreness(const WeightedGraph& g, bool weighted);

/// n-order H-index (H-degree when weighted). Order 0 is degree / strength.
Eigen::VectorXd h_index(const WeightedGraph& g, int order, bool weighted);

/// Largest integer h with at least h values >= h.
int h_operator(std::vector<double> values);

Eigen::VectorXd w_lobby(const WeightedGraph& g);
Eigen::VectorXd local_rank(const WeightedGraph& g);

/// Undirected links among N(i) over k_i (k_i - 1); zero when k_i < 2.
double clustering_coefficient(const WeightedGraph& g, NodeId i);
Eigen::VectorXd cluster_rank(const WeightedGraph& g, double alpha, bool weighted);

/// (1/(n-1)) * sum of reciprocal distances; unreachable nodes add nothing.
Eigen::VectorXd closeness(const WeightedGraph& g, bool weighted = true);

/// Unnormalized betweenness over unordered pairs, ties retained.
Eigen::VectorXd betweenness(const WeightedGraph& g, bool weighted = true);

/// Principal eigenvector of A (w entries when weighted), max entry 1.
Eigen::VectorXd eigenvector_centrality(const WeightedGraph& g, bool weighted, double tol = 1e-10,
                                       int max_iter = 1000);

Eigen::VectorXd pagerank(const WeightedGraph& g, double damping, bool weighted, double tol = 1e-10,
                         int max_iter = 1000);

Eigen::VectorXd leader_rank(const WeightedGraph& g, bool weighted, double tol = 1e-10, int max_iter = 1000);

Eigen::VectorXd balanced_index(const WeightedGraph& g, const BalancedIndexWeights& weights, double theta,
                               bool weighted);

/// Bridge from i to j: the members of N(j) that are in N(i) or adjacent to
/// some member of N(i).
struct BridgeStructure {
    std::vector<NodeId> members;
    std::size_t width = 0;
    std::size_t resistance = 0;  // T_j
    bool sufficient = false;
};

/// Resistance T_j = max(1, ceil(theta * s_j)) (k_j when unweighted).
std::size_t bridge_resistance(const WeightedGraph& g, NodeId j, double theta, bool weighted = true);
BridgeStructure bridge(const WeightedGraph& g, NodeId i, NodeId j, double theta, bool weighted = true);

/// Number of j != i whose bridge from i is non-empty and sufficient.
std::size_t locally_sufficient_bridges(const WeightedGraph& g, NodeId i, double theta, bool weighted = true);

Eigen::VectorXd complex_path_centrality(const WeightedGraph& g, double theta, bool weighted = true);

}  // namespace sphere
