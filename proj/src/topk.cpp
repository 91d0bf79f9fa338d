#include "sphere/topk.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "sphere/errors.hpp"

namespace sphere {

namespace {

std::vector<double> score_or_degree(const WeightedGraph& g, const CentralityVector* c) {
    std::vector<double> s(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        s[u] = c ? (*c)[u] : static_cast<double>(g.degree(u));
    }
    return s;
}

void check_size(const WeightedGraph& g, const CentralityVector* c) {
    if (c && c->size() != g.node_count()) {
        throw UsageError("centrality vector size does not match the graph");
    }
}

// Descending score, ascending id.
void rank(std::vector<NodeId>& nodes, const std::vector<double>& score) {
    std::sort(nodes.begin(), nodes.end(), [&](NodeId a, NodeId b) {
        return score[a] != score[b] ? score[a] > score[b] : a < b;
    });
}

std::string centrality_name(const CentralityVector* c) { return c ? std::string(c->name()) : "none"; }

// Sampling weights must be strictly positive.
std::vector<double> positive_weights(std::vector<double> w) {
    if (w.empty()) return w;
    const double lo = *std::min_element(w.begin(), w.end());
    if (lo <= 0.0) {
        for (double& x : w) x += std::abs(lo) + 1e-9;
    }
    return w;
}

template <typename Weights>
std::size_t draw(const Weights& weights, Rng& rng) {
    std::discrete_distribution<std::size_t> dist(weights.begin(), weights.end());
    return dist(rng);
}

}  // namespace

std::string_view to_string(TopKAlgorithm algorithm) {
    switch (algorithm) {
        case TopKAlgorithm::k_highest: return "k_highest";
        case TopKAlgorithm::lir: return "lir";
        case TopKAlgorithm::lir2: return "lir2";
        case TopKAlgorithm::joint_nomination: return "joint_nomination";
        case TopKAlgorithm::voterank: return "voterank";
        case TopKAlgorithm::centrality_voterank: return "centrality_voterank";
        case TopKAlgorithm::graph_coloring: return "graph_coloring";
        case TopKAlgorithm::single_influencer: return "single_influencer";
        case TopKAlgorithm::random: return "random";
    }
    return "?";
}

TopKAlgorithm parse_topk_algorithm(std::string_view name) {
    for (TopKAlgorithm a : kTopKAlgorithms) {
        if (to_string(a) == name) return a;
    }
    throw UsageError("unknown top-k algorithm '" + std::string(name) + "'");
}

bool uses_centrality(TopKAlgorithm algorithm) {
    return algorithm != TopKAlgorithm::voterank && algorithm != TopKAlgorithm::random;
}

SeedSet k_highest(const WeightedGraph& g, const CentralityVector& c, std::size_t k) {
    check_size(g, &c);
    if (k > g.node_count()) throw UsageError("k exceeds the node count");
    std::vector<NodeId> nodes(g.node_count());
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    rank(nodes, score_or_degree(g, &c));
    nodes.resize(k);
    return {std::move(nodes), "k_highest", centrality_name(&c), {}};
}

SeedSet single_influencer(const WeightedGraph& g, const CentralityVector& c) {
    if (g.node_count() == 0) throw UsageError("single influencer of an empty graph");
    SeedSet s = k_highest(g, c, 1);
    s.algorithm = "single_influencer";
    return s;
}

SeedSet random_seeds(const WeightedGraph& g, std::size_t k, Rng& rng) {
    if (k > g.node_count()) throw UsageError("k exceeds the node count");
    std::vector<NodeId> nodes(g.node_count());
    std::iota(nodes.begin(), nodes.end(), NodeId{0});
    for (std::size_t i = 0; i < k; ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, nodes.size() - 1);
        std::swap(nodes[i], nodes[pick(rng)]);
    }
    nodes.resize(k);
    return {std::move(nodes), "random", "none", {}};
}

std::vector<std::size_t> local_index(const WeightedGraph& g) {
    std::vector<std::size_t> li(g.node_count(), 0);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        for (const auto& nb : g.neighbors(u)) li[u] += g.degree(nb.node) > g.degree(u);
    }
    return li;
}

SeedSet lir(const WeightedGraph& g, const CentralityVector* c, std::size_t k) {
    check_size(g, c);
    const auto li = local_index(g);
    std::size_t eligible = 0;
    std::size_t max_li = 0;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (g.degree(u) > 0) {
            ++eligible;
            max_li = std::max(max_li, li[u]);
        }
    }
    if (k > eligible) throw UsageError("k exceeds the number of non-isolated nodes");
    const auto score = score_or_degree(g, c);
    std::vector<NodeId> out;
    for (std::size_t level = 0; out.size() < k && level <= max_li; ++level) {
        std::vector<NodeId> stratum;
        for (NodeId u = 0; u < g.node_count(); ++u) {
            if (g.degree(u) > 0 && li[u] == level) stratum.push_back(u);
        }
        rank(stratum, score);
        for (NodeId u : stratum) {
            if (out.size() == k) break;
            out.push_back(u);
        }
    }
    return {std::move(out), "lir", centrality_name(c), {}};
}

std::vector<std::size_t> local_index2(const WeightedGraph& g, Lir2Scope scope) {
    if (scope == Lir2Scope::first_order_only) return local_index(g);
    const std::size_t n = g.node_count();
    std::vector<std::size_t> li(n, 0);
    std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
    for (NodeId u = 0; u < n; ++u) {
        stamp[u] = u;
        const std::size_t ku = g.degree(u);
        for (const auto& a : g.neighbors(u)) {
            if (stamp[a.node] != u) {
                stamp[a.node] = u;
                li[u] += g.degree(a.node) > ku;
            }
        }
        for (const auto& a : g.neighbors(u)) {
            for (const auto& b : g.neighbors(a.node)) {
                if (stamp[b.node] != u) {
                    stamp[b.node] = u;
                    li[u] += g.degree(b.node) > ku;
                }
            }
        }
    }
    return li;
}

SeedSet lir2(const WeightedGraph& g, const CentralityVector* c, std::size_t k, Lir2Scope scope) {
    check_size(g, c);
    if (k > g.node_count()) throw UsageError("k exceeds the node count");
    const auto li = local_index2(g, scope);
    const auto score = score_or_degree(g, c);
    std::vector<NodeId> order(g.node_count());
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
        if (li[a] != li[b]) return li[a] < li[b];
        return score[a] != score[b] ? score[a] > score[b] : a < b;
    });
    order.resize(k);
    return {std::move(order), "lir2", centrality_name(c), {}};
}

std::optional<NodeId> nominate(const WeightedGraph& g, NodeId u, Rng& rng) {
    auto nu = g.neighbors(u);
    if (nu.empty()) return std::nullopt;
    std::vector<WeightedGraph::Neighbor> candidates(nu.begin(), nu.end());
    std::vector<double> cw;
    for (;;) {
        cw.clear();
        for (const auto& nb : candidates) cw.push_back(nb.weight);
        const auto pick = draw(cw, rng);
        const NodeId v = candidates[pick].node;

        std::vector<NodeId> common;
        std::vector<double> nominee_weights;
        auto nv = g.neighbors(v);
        for (std::size_t a = 0, b = 0; a < nu.size() && b < nv.size();) {
            if (nu[a].node < nv[b].node) {
                ++a;
            } else if (nv[b].node < nu[a].node) {
                ++b;
            } else {
                common.push_back(nu[a].node);
                nominee_weights.push_back(nu[a].weight * nv[b].weight);
                ++a;
                ++b;
            }
        }
        if (!common.empty()) return common[draw(nominee_weights, rng)];

        candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(pick));
        if (candidates.empty()) {
            // No co-nominator shares a neighbour with u: a co-nominator
            // itself becomes the nominee.
            cw.clear();
            for (const auto& nb : nu) cw.push_back(nb.weight);
            return nu[draw(cw, rng)].node;
        }
    }
}

SeedSet joint_nomination(const WeightedGraph& g, const CentralityVector* c, std::size_t k, Rng& rng) {
    check_size(g, c);
    if (k == 0) throw UsageError("joint nomination requires k >= 1");
    const std::size_t n = g.node_count();
    std::vector<double> weights = c ? positive_weights(score_or_degree(g, c)) : std::vector<double>(n, 1.0);
    std::vector<NodeId> nominees;
    std::vector<char> chosen(n, 0);
    const std::size_t cap = 50 * k;
    for (std::size_t round = 0; round < cap && nominees.size() < k && n > 0; ++round) {
        const NodeId u = draw(weights, rng);
        if (auto pick = nominate(g, u, rng); pick && !chosen[*pick]) {
            chosen[*pick] = 1;
            nominees.push_back(*pick);
        }
    }
    if (nominees.size() < k) {
        throw DataError("joint nomination found " + std::to_string(nominees.size()) + " of " +
                        std::to_string(k) + " nominees within " + std::to_string(cap) + " rounds");
    }
    return {std::move(nominees), "joint_nomination", centrality_name(c), {}};
}

SeedSet voterank(const WeightedGraph& g, const CentralityVector* c, std::size_t k) {
    check_size(g, c);
    const std::size_t n = g.node_count();
    if (k > n) throw UsageError("k exceeds the node count");
    std::vector<double> ability = c ? score_or_degree(g, c) : std::vector<double>(n, 1.0);
    const double avg_s = n ? g.average_strength() : 0.0;
    const double penalty = avg_s > 0.0 ? 1.0 / avg_s : 0.0;
    std::vector<char> chosen(n, 0);
    std::vector<double> score(n);
    std::vector<NodeId> out;
    for (std::size_t round = 0; round < k; ++round) {
        std::fill(score.begin(), score.end(), 0.0);
        for (NodeId u = 0; u < n; ++u) {
            if (chosen[u]) continue;
            for (const auto& nb : g.neighbors(u)) {
                if (!chosen[nb.node]) score[nb.node] += ability[u];
            }
        }
        NodeId best = n;
        for (NodeId u = 0; u < n; ++u) {
            if (!chosen[u] && (best == n || score[u] > score[best])) best = u;
        }
        chosen[best] = 1;
        out.push_back(best);
        ability[best] = 0.0;
        for (const auto& nb : g.neighbors(best)) ability[nb.node] = std::max(0.0, ability[nb.node] - penalty);
    }
    return {std::move(out), c ? "centrality_voterank" : "voterank", centrality_name(c), {}};
}

std::vector<std::size_t> welsh_powell(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return g.degree(a) > g.degree(b); });
    std::vector<std::size_t> color(n, 0);
    std::vector<std::size_t> seen_at(n + 2, static_cast<std::size_t>(-1));
    for (NodeId v : order) {
        for (const auto& nb : g.neighbors(v)) {
            if (color[nb.node]) seen_at[color[nb.node]] = v;
        }
        std::size_t c = 1;
        while (seen_at[c] == v) ++c;
        color[v] = c;
    }
    return color;
}

SeedSet graph_coloring_select(const WeightedGraph& g, const CentralityVector& c, std::size_t k) {
    check_size(g, &c);
    const auto color = welsh_powell(g);
    std::vector<std::size_t> class_size(g.node_count() + 2, 0);
    for (std::size_t col : color) ++class_size[col];
    std::size_t best = 1;
    for (std::size_t col = 1; col < class_size.size(); ++col) {
        if (class_size[col] > class_size[best]) best = col;
    }
    if (k > class_size[best]) {
        throw UsageError("k exceeds the largest colour class (" + std::to_string(class_size[best]) + " nodes)");
    }
    std::vector<NodeId> members;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        if (color[u] == best) members.push_back(u);
    }
    rank(members, score_or_degree(g, &c));
    members.resize(k);
    return {std::move(members), "graph_coloring", centrality_name(&c), {}};
}

SeedSet select_seeds(const WeightedGraph& g, TopKAlgorithm algorithm, const CentralityVector* c, std::size_t k,
                     Rng& rng) {
    auto require = [&]() -> const CentralityVector& {
        if (!c) throw UsageError(std::string(to_string(algorithm)) + " requires a centrality metric");
        return *c;
    };
    switch (algorithm) {
        case TopKAlgorithm::k_highest: return k_highest(g, require(), k);
        case TopKAlgorithm::lir: return lir(g, c, k);
        case TopKAlgorithm::lir2: return lir2(g, c, k);
        case TopKAlgorithm::joint_nomination: return joint_nomination(g, c, k, rng);
        case TopKAlgorithm::voterank: return voterank(g, nullptr, k);
        case TopKAlgorithm::centrality_voterank: return voterank(g, &require(), k);
        case TopKAlgorithm::graph_coloring: return graph_coloring_select(g, require(), k);
        case TopKAlgorithm::single_influencer: return single_influencer(g, require());
        case TopKAlgorithm::random: return random_seeds(g, k, rng);
    }
    throw UsageError("unknown top-k algorithm");
}

}  // namespace sphere
