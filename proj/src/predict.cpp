#include "sphere/predict.hpp"

#include <cmath>

#include "sphere/errors.hpp"

namespace sphere {

double predicted_weight(double p, int t) {
    if (t < 1) throw UsageError("prediction horizon t must be >= 1");
    if (t == 1) return p;
    return -std::expm1(static_cast<double>(t) * std::log1p(-p));
}

PredictedGraph predict_future_graph(const WeightedGraph& g, SimilarityMetric metric, bool weighted, double epsilon,
                                    int t, double score_floor) {
    if (t < 1) throw UsageError("prediction horizon t must be >= 1");
    const SimilarityTable table = normalize(score_all_pairs(g, metric, weighted, epsilon));

    PredictedGraph out;
    out.metric = metric;
    out.weighted = weighted;
    out.horizon = t;
    std::vector<Edge> edges = g.edges();
    for (const auto& e : table.entries) {
        if (!(e.score > score_floor)) continue;
        out.predicted_edges.push_back(Edge{e.u, e.v, predicted_weight(e.score, t)});
    }
    edges.insert(edges.end(), out.predicted_edges.begin(), out.predicted_edges.end());
    out.graph = WeightedGraph::build(g.node_count(), edges);
    return out;
}

SeedSet future_top_k(const WeightedGraph& g, const FutureTopKRequest& request, Rng& rng) {
    const PredictedGraph future =
        predict_future_graph(g, request.metric, request.weighted_prediction, request.epsilon, request.t);
    std::optional<CentralityVector> c;
    if (request.centrality) {
        const bool weighted = request.weighted_centrality && supports_weighted(*request.centrality);
        c = compute_centrality(future.graph, *request.centrality, weighted, request.params);
    }
    SeedSet seeds = select_seeds(future.graph, request.algorithm, c ? &*c : nullptr, request.k, rng);
    seeds.graph_id = "predicted:" + std::string(to_string(request.metric)) + ":t=" + std::to_string(request.t);
    return seeds;
}

}  // namespace sphere
