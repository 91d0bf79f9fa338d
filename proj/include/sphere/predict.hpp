#pragma once

// Future-graph construction: normalized similarity scores become per-step
// link probabilities p, and a t-step horizon turns each into the chance the
// link has formed by then, 1 - (1 - p)^t.

#include <optional>
#include <string>
#include <vector>

#include "sphere/centrality.hpp"
#include "sphere/graph.hpp"
#include "sphere/linkpred.hpp"
#include "sphere/topk.hpp"

namespace sphere {

struct PredictedGraph {
    WeightedGraph graph;                // original edges plus predicted ones
    std::vector<Edge> predicted_edges;  // sorted, u < v
    SimilarityMetric metric = SimilarityMetric::common_neighbors;
    bool weighted = false;
    int horizon = 1;
};

/// 1 - (1 - p)^t, returning p itself at t = 1.
double predicted_weight(double p, int t);

/// Adds every non-adjacent pair whose normalized score exceeds `score_floor`.
PredictedGraph predict_future_graph(const WeightedGraph& g, SimilarityMetric metric, bool weighted, double epsilon,
                                    int t, double score_floor = 0.0);

struct FutureTopKRequest {
    SimilarityMetric metric = SimilarityMetric::common_neighbors;
    bool weighted_prediction = false;
    double epsilon = kDefaultEpsilon;
    int t = 1;
    TopKAlgorithm algorithm = TopKAlgorithm::k_highest;
    std::optional<CentralityMetric> centrality;
    bool weighted_centrality = true;
    CentralityParams params{};
    std::size_t k = 1;
};

/// Predicts the future graph, then selects seeds on it.
SeedSet future_top_k(const WeightedGraph& g, const FutureTopKRequest& request, Rng& rng);

}  // namespace sphere
