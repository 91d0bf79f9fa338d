#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sphere/centrality.hpp"
#include "sphere/graph.hpp"

namespace sphere {

/// k selected influencers plus where they came from.
struct SeedSet {
    std::vector<NodeId> nodes;
    std::string algorithm;
    std::string centrality = "none";
    std::string graph_id;

    std::size_t size() const { return nodes.size(); }
};

enum class TopKAlgorithm {
    k_highest,
    lir,
    lir2,
    joint_nomination,
    voterank,
    centrality_voterank,
    graph_coloring,
    single_influencer,
    random,
};

inline constexpr std::array kTopKAlgorithms = {
    TopKAlgorithm::k_highest,         TopKAlgorithm::lir,
    TopKAlgorithm::lir2,              TopKAlgorithm::joint_nomination,
    TopKAlgorithm::voterank,          TopKAlgorithm::centrality_voterank,
    TopKAlgorithm::graph_coloring,    TopKAlgorithm::single_influencer,
    TopKAlgorithm::random,
};

std::string_view to_string(TopKAlgorithm algorithm);
TopKAlgorithm parse_topk_algorithm(std::string_view name);

/// Whether the algorithm consumes a centrality vector.
bool uses_centrality(TopKAlgorithm algorithm);

SeedSet k_highest(const WeightedGraph& g, const CentralityVector& c, std::size_t k);
SeedSet single_influencer(const WeightedGraph& g, const CentralityVector& c);
SeedSet random_seeds(const WeightedGraph& g, std::size_t k, Rng& rng);

/// LI(u): neighbours with strictly larger degree.
std::vector<std::size_t> local_index(const WeightedGraph& g);

/// LI=0 candidates by centrality (degree when `c` is null), then the LI=1
/// stratum, LI=2, ... until k nodes are found. Isolated nodes never qualify.
SeedSet lir(const WeightedGraph& g, const CentralityVector* c, std::size_t k);

enum class Lir2Scope {
    first_and_second_order,  // N(u) and N_2(u)
    first_order_only,        // literal formula, identical to LI
};

std::vector<std::size_t> local_index2(const WeightedGraph& g, Lir2Scope scope = Lir2Scope::first_and_second_order);
SeedSet lir2(const WeightedGraph& g, const CentralityVector* c, std::size_t k,
             Lir2Scope scope = Lir2Scope::first_and_second_order);

/// One nomination round from nominator u. Returns the nominee, or nullopt
/// when u has no neighbours.
std::optional<NodeId> nominate(const WeightedGraph& g, NodeId u, Rng& rng);

/// Nomination rounds until k distinct nominees, capped at 50k rounds.
SeedSet joint_nomination(const WeightedGraph& g, const CentralityVector* c, std::size_t k, Rng& rng);

/// VoteRank; voting ability starts at 1 or at the centrality score.
SeedSet voterank(const WeightedGraph& g, const CentralityVector* c, std::size_t k);

/// Welsh-Powell colouring; colours are numbered from 1.
std::vector<std::size_t> welsh_powell(const WeightedGraph& g);
SeedSet graph_coloring_select(const WeightedGraph& g, const CentralityVector& c, std::size_t k);

/// Dispatches on the algorithm. `c` may be null for algorithms that accept
/// "none" (lir, lir2, joint_nomination, voterank, random).
SeedSet select_seeds(const WeightedGraph& g, TopKAlgorithm algorithm, const CentralityVector* c, std::size_t k,
                     Rng& rng);

}  // namespace sphere
