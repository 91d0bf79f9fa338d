#pragma once

// Immutable weighted undirected graph. Edge weights live in (0, 1] and are
// read as per-step interaction probabilities; the distance of an edge is the
// expected waiting time 1/w. Everything here is templated on the scalar type
// so that worked examples can be checked in exact rational arithmetic.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "sphere/errors.hpp"

namespace sphere {

using NodeId = std::size_t;

/// The engine used by every randomized operation.
using Rng = std::mt19937_64;

template <typename Scalar>
struct BasicEdge {
    NodeId u;
    NodeId v;
    Scalar weight;

    friend bool operator==(const BasicEdge&, const BasicEdge&) = default;
};

/// Sums a(p) (edge distances) and b(p) (edge weights) along a path.
template <typename Scalar>
struct PathSums {
    Scalar distance;
    Scalar weight;
};

template <typename Scalar>
class BasicWeightedGraph {
public:
    using scalar_type = Scalar;
    using Edge = BasicEdge<Scalar>;

    struct Neighbor {
        NodeId node;
        Scalar weight;
    };

    BasicWeightedGraph() = default;

    /// Validates and builds. Rejects self-loops, out-of-range ids, weights
    /// outside (0, 1] and duplicate pairs, naming the offending edge.
    static BasicWeightedGraph build(std::size_t n, std::span<const Edge> edges) {
        BasicWeightedGraph g;
        g.n_ = n;
        std::vector<Edge> canon;
        canon.reserve(edges.size());
        for (const Edge& e : edges) {
            if (e.u >= n || e.v >= n) {
                throw DataError("node id out of range in edge " + describe(e) +
                                " (n = " + std::to_string(n) + ")");
            }
            if (e.u == e.v) {
                throw DataError("self-loop in edge " + describe(e));
            }
            if (!(e.weight > Scalar(0)) || e.weight > Scalar(1)) {
                throw DataError("weight outside (0,1] in edge " + describe(e));
            }
            canon.push_back(e.u < e.v ? e : Edge{e.v, e.u, e.weight});
        }
        std::sort(canon.begin(), canon.end(), [](const Edge& a, const Edge& b) {
            return a.u != b.u ? a.u < b.u : a.v < b.v;
        });
        for (std::size_t i = 1; i < canon.size(); ++i) {
            if (canon[i].u == canon[i - 1].u && canon[i].v == canon[i - 1].v) {
                throw DataError("duplicate edge " + describe(canon[i]));
            }
        }

        std::vector<std::size_t> deg(n, 0);
        for (const Edge& e : canon) {
            ++deg[e.u];
            ++deg[e.v];
        }
        g.offsets_.assign(n + 1, 0);
        for (std::size_t u = 0; u < n; ++u) g.offsets_[u + 1] = g.offsets_[u] + deg[u];
        g.adj_.resize(g.offsets_[n]);
        std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
        // canon is sorted by (u, v), so both insertions below keep every
        // adjacency list sorted by neighbour id.
        for (const Edge& e : canon) g.adj_[fill[e.v]++] = Neighbor{e.u, e.weight};
        for (const Edge& e : canon) g.adj_[fill[e.u]++] = Neighbor{e.v, e.weight};
        for (std::size_t u = 0; u < n; ++u) {
            auto first = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u]);
            auto last = g.adj_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[u + 1]);
            std::sort(first, last, [](const Neighbor& a, const Neighbor& b) { return a.node < b.node; });
        }

        g.strength_.assign(n, Scalar(0));
        for (std::size_t u = 0; u < n; ++u) {
            Scalar s(0);
            for (const Neighbor& nb : g.neighbors(u)) s += nb.weight;
            g.strength_[u] = s;
        }
        g.edge_count_ = canon.size();
        return g;
    }

    static BasicWeightedGraph build(std::size_t n, const std::vector<Edge>& edges) {
        return build(n, std::span<const Edge>(edges));
    }

    static BasicWeightedGraph build(std::size_t n, std::initializer_list<Edge> edges) {
        return build(n, std::span<const Edge>(edges.begin(), edges.size()));
    }

    std::size_t node_count() const noexcept { return n_; }
    std::size_t edge_count() const noexcept { return edge_count_; }

    /// First-order neighbourhood, sorted by node id.
    std::span<const Neighbor> neighbors(NodeId u) const {
        return {adj_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
    }

    std::size_t degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
    const Scalar& strength(NodeId u) const { return strength_[u]; }

    std::optional<Scalar> weight(NodeId u, NodeId v) const {
        if (u >= n_ || v >= n_) return std::nullopt;
        auto nb = neighbors(u);
        auto it = std::lower_bound(nb.begin(), nb.end(), v,
                                   [](const Neighbor& a, NodeId x) { return a.node < x; });
        if (it == nb.end() || it->node != v) return std::nullopt;
        return it->weight;
    }

    bool has_edge(NodeId u, NodeId v) const { return weight(u, v).has_value(); }

    /// d(u,v) = 1/w(u,v) for an existing edge.
    Scalar edge_distance(NodeId u, NodeId v) const {
        auto w = weight(u, v);
        if (!w) {
            throw DataError("no edge between " + std::to_string(u) + " and " + std::to_string(v));
        }
        return Scalar(1) / *w;
    }

    /// All edges with u < v, sorted.
    std::vector<Edge> edges() const {
        std::vector<Edge> out;
        out.reserve(edge_count_);
        for (NodeId u = 0; u < n_; ++u) {
            for (const Neighbor& nb : neighbors(u)) {
                if (u < nb.node) out.push_back(Edge{u, nb.node, nb.weight});
            }
        }
        return out;
    }

    Scalar average_degree() const {
        require_nonempty();
        return Scalar(2 * edge_count_) / Scalar(n_);
    }

    Scalar average_strength() const {
        require_nonempty();
        Scalar total(0);
        for (const Scalar& s : strength_) total += s;
        return total / Scalar(n_);
    }

private:
    static std::string describe(const Edge& e) {
        std::ostringstream os;
        os << '(' << e.u << ", " << e.v << ", " << e.weight << ')';
        return os.str();
    }

    void require_nonempty() const {
        if (n_ == 0) throw UsageError("average over an empty graph");
    }

    std::size_t n_ = 0;
    std::size_t edge_count_ = 0;
    std::vector<std::size_t> offsets_{0};
    std::vector<Neighbor> adj_;
    std::vector<Scalar> strength_;
};

using WeightedGraph = BasicWeightedGraph<double>;
using Edge = BasicEdge<double>;

/// Nodes at hop distance exactly `order` from u, sorted.
template <typename Scalar>
std::vector<NodeId> neighbors(const BasicWeightedGraph<Scalar>& g, NodeId u, std::size_t order) {
    std::vector<std::size_t> hops(g.node_count(), static_cast<std::size_t>(-1));
    std::vector<NodeId> frontier{u};
    hops[u] = 0;
    for (std::size_t depth = 1; depth <= order && !frontier.empty(); ++depth) {
        std::vector<NodeId> next;
        for (NodeId x : frontier) {
            for (const auto& nb : g.neighbors(x)) {
                if (hops[nb.node] == static_cast<std::size_t>(-1)) {
                    hops[nb.node] = depth;
                    next.push_back(nb.node);
                }
            }
        }
        frontier = std::move(next);
    }
    if (order == 0) return {u};
    std::sort(frontier.begin(), frontier.end());
    return frontier;
}

template <typename Scalar>
PathSums<Scalar> path_sums(const BasicWeightedGraph<Scalar>& g, std::span<const NodeId> path) {
    PathSums<Scalar> sums{Scalar(0), Scalar(0)};
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        auto w = g.weight(path[i], path[i + 1]);
        if (!w) {
            throw DataError("path gap: no edge between " + std::to_string(path[i]) + " and " +
                            std::to_string(path[i + 1]));
        }
        sums.distance += Scalar(1) / *w;
        sums.weight += *w;
    }
    return sums;
}

template <typename Scalar>
PathSums<Scalar> path_sums(const BasicWeightedGraph<Scalar>& g, std::initializer_list<NodeId> path) {
    return path_sums(g, std::span<const NodeId>(path.begin(), path.size()));
}

/// Minimum weighted distance D(s, ·) from a set of sources; nullopt marks
/// unreachable nodes.
template <typename Scalar>
std::vector<std::optional<Scalar>> shortest_distances(const BasicWeightedGraph<Scalar>& g,
                                                      std::span<const NodeId> sources) {
    std::vector<std::optional<Scalar>> dist(g.node_count());
    using Item = std::pair<Scalar, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
    for (NodeId s : sources) {
        if (!dist[s]) {
            dist[s] = Scalar(0);
            heap.emplace(Scalar(0), s);
        }
    }
    std::vector<bool> done(g.node_count(), false);
    while (!heap.empty()) {
        auto [d, x] = heap.top();
        heap.pop();
        if (done[x]) continue;
        done[x] = true;
        for (const auto& nb : g.neighbors(x)) {
            Scalar cand = d + Scalar(1) / nb.weight;
            if (!dist[nb.node] || cand < *dist[nb.node]) {
                dist[nb.node] = cand;
                heap.emplace(cand, nb.node);
            }
        }
    }
    return dist;
}

template <typename Scalar>
std::optional<Scalar> shortest_distance(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    if (u == v) return Scalar(0);
    const NodeId src[] = {u};
    return shortest_distances(g, std::span<const NodeId>(src))[v];
}

/// Simple paths (u, i, j, v) of exactly three edges.
template <typename Scalar>
std::vector<std::array<NodeId, 4>> three_edge_paths(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    std::vector<std::array<NodeId, 4>> out;
    if (u == v) return out;
    for (const auto& a : g.neighbors(u)) {
        const NodeId i = a.node;
        if (i == v) continue;
        for (const auto& b : g.neighbors(i)) {
            const NodeId j = b.node;
            if (j == u || j == v) continue;
            if (g.has_edge(j, v)) out.push_back({u, i, j, v});
        }
    }
    return out;
}

/// G(n, p) with every present edge at `weight`.
template <typename Rng>
WeightedGraph erdos_renyi(std::size_t n, double p, Rng& rng, double weight = 1.0) {
    if (n < 1 || !(p >= 0.0 && p <= 1.0)) {
        throw UsageError("erdos_renyi requires n >= 1 and p in [0,1]");
    }
    std::bernoulli_distribution coin(p);
    std::vector<Edge> edges;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v = u + 1; v < n; ++v) {
            if (coin(rng)) edges.push_back(Edge{u, v, weight});
        }
    }
    return WeightedGraph::build(n, edges);
}

/// Keeps round(fraction * |E|) edges drawn uniformly without replacement.
template <typename Scalar, typename Rng>
BasicWeightedGraph<Scalar> sample_training_graph(const BasicWeightedGraph<Scalar>& g, double fraction, Rng& rng) {
    if (!(fraction > 0.0 && fraction <= 1.0)) {
        throw UsageError("training fraction must lie in (0,1]");
    }
    auto all = g.edges();
    const auto keep = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(all.size())));
    // Partial Fisher-Yates: the first `keep` slots become the sample.
    for (std::size_t i = 0; i < keep && i + 1 < all.size(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(i, all.size() - 1);
        std::swap(all[i], all[pick(rng)]);
    }
    all.resize(keep);
    return BasicWeightedGraph<Scalar>::build(g.node_count(), all);
}

/// Component label per node; labels are dense and ordered by smallest member.
template <typename Scalar>
std::vector<std::size_t> connected_components(const BasicWeightedGraph<Scalar>& g) {
    constexpr auto unset = static_cast<std::size_t>(-1);
    std::vector<std::size_t> label(g.node_count(), unset);
    std::size_t next = 0;
    std::vector<NodeId> stack;
    for (NodeId s = 0; s < g.node_count(); ++s) {
        if (label[s] != unset) continue;
        label[s] = next;
        stack.push_back(s);
        while (!stack.empty()) {
            NodeId x = stack.back();
            stack.pop_back();
            for (const auto& nb : g.neighbors(x)) {
                if (label[nb.node] == unset) {
                    label[nb.node] = next;
                    stack.push_back(nb.node);
                }
            }
        }
        ++next;
    }
    return label;
}

/// Subgraph induced by `nodes`; node nodes[i] becomes i.
template <typename Scalar>
BasicWeightedGraph<Scalar> induced_subgraph(const BasicWeightedGraph<Scalar>& g, std::span<const NodeId> nodes) {
    constexpr auto absent = static_cast<std::size_t>(-1);
    std::vector<std::size_t> index(g.node_count(), absent);
    for (std::size_t i = 0; i < nodes.size(); ++i) index[nodes[i]] = i;
    std::vector<BasicEdge<Scalar>> edges;
    for (const auto& e : g.edges()) {
        if (index[e.u] != absent && index[e.v] != absent) {
            edges.push_back({index[e.u], index[e.v], e.weight});
        }
    }
    return BasicWeightedGraph<Scalar>::build(nodes.size(), edges);
}

}  // namespace sphere
