#pragma once

// Path-based similarity scores over non-adjacent node pairs.
//
// Every metric is a "two-path" term summed over common neighbours x of
// (u, v), optionally plus an epsilon-discounted "three-path" term summed over
// simple paths (u, i, j, v). The per-pair functions and the batch scorer
// accumulate both terms in the same order, so they agree bit for bit.

#include <algorithm>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sphere/errors.hpp"
#include "sphere/graph.hpp"

namespace sphere {

enum class SimilarityMetric {
    common_neighbors,
    jaccard,
    local_path,
    resource_allocation,
    quasi_local_ra,
    ra2,
    quasi_local_ra2,
};

inline constexpr std::array kSimilarityMetrics = {
    SimilarityMetric::common_neighbors, SimilarityMetric::jaccard,
    SimilarityMetric::local_path,       SimilarityMetric::resource_allocation,
    SimilarityMetric::quasi_local_ra,   SimilarityMetric::ra2,
    SimilarityMetric::quasi_local_ra2,
};

inline constexpr double kDefaultEpsilon = 1e-3;

/// Registry names: cn, jaccard, local_path, ra, qra, ra2, qr2.
std::string_view to_string(SimilarityMetric metric);
SimilarityMetric parse_similarity_metric(std::string_view name);

/// True for metrics carrying an epsilon-weighted three-path term.
constexpr bool is_quasi_local(SimilarityMetric m) {
    return m == SimilarityMetric::local_path || m == SimilarityMetric::quasi_local_ra ||
           m == SimilarityMetric::quasi_local_ra2;
}

namespace detail {

// Contribution of the two-path u - x - v.
template <typename Scalar>
Scalar two_path_term(const BasicWeightedGraph<Scalar>& g, SimilarityMetric m, bool weighted, NodeId x,
                     const Scalar& w_ux, const Scalar& w_xv) {
    const Scalar k(g.degree(x));
    switch (m) {
        case SimilarityMetric::common_neighbors:
        case SimilarityMetric::local_path:
            return weighted ? (w_ux + w_xv) / Scalar(2) : Scalar(1);
        case SimilarityMetric::jaccard:
            return Scalar(1);
        case SimilarityMetric::resource_allocation:
        case SimilarityMetric::quasi_local_ra:
            return weighted ? (w_ux + w_xv) / g.strength(x) : Scalar(1) / k;
        case SimilarityMetric::ra2:
        case SimilarityMetric::quasi_local_ra2:
            return weighted ? (w_ux + w_xv) / (g.strength(x) * g.strength(x)) : Scalar(2) / (k * k);
    }
    return Scalar(0);
}

// Contribution of the three-path u - i - j - v, before the epsilon factor.
template <typename Scalar>
Scalar three_path_term(const BasicWeightedGraph<Scalar>& g, SimilarityMetric m, bool weighted, NodeId i,
                       NodeId j, const Scalar& w_ui, const Scalar& w_ij, const Scalar& w_jv) {
    const Scalar ki(g.degree(i));
    const Scalar kj(g.degree(j));
    switch (m) {
        case SimilarityMetric::local_path:
            return weighted ? (w_ui + w_ij) * (w_ij + w_jv) / Scalar(4) : Scalar(1);
        case SimilarityMetric::quasi_local_ra:
            return weighted ? (w_ui + w_ij) * (w_ij + w_jv) / (g.strength(i) * g.strength(j))
                            : Scalar(1) / (ki * kj);
        case SimilarityMetric::quasi_local_ra2: {
            if (!weighted) return Scalar(4) / (ki * ki * kj * kj);
            const Scalar si2 = g.strength(i) * g.strength(i);
            const Scalar sj2 = g.strength(j) * g.strength(j);
            return (w_ui + w_ij) * (w_ij + w_jv) / (si2 * sj2);
        }
        default:
            return Scalar(0);
    }
}

template <typename Scalar>
Scalar combine(const BasicWeightedGraph<Scalar>& g, SimilarityMetric m, NodeId u, NodeId v, const Scalar& two,
               std::size_t common, const Scalar& three, const Scalar& epsilon) {
    if (m == SimilarityMetric::jaccard) {
        const std::size_t uni = g.degree(u) + g.degree(v) - common;
        return uni == 0 ? Scalar(0) : Scalar(common) / Scalar(uni);
    }
    if (is_quasi_local(m)) return two + epsilon * three;
    return two;
}

}  // namespace detail

/// s^M(u, v) for any registry metric. Weighted Jaccard is plain Jaccard.
template <typename Scalar>
Scalar similarity(const BasicWeightedGraph<Scalar>& g, SimilarityMetric m, bool weighted, NodeId u, NodeId v,
                  const Scalar& epsilon = Scalar(kDefaultEpsilon)) {
    if (u == v) throw UsageError("similarity requires u != v");
    Scalar two(0);
    std::size_t common = 0;
    auto nu = g.neighbors(u);
    auto nv = g.neighbors(v);
    for (std::size_t a = 0, b = 0; a < nu.size() && b < nv.size();) {
        if (nu[a].node < nv[b].node) {
            ++a;
        } else if (nv[b].node < nu[a].node) {
            ++b;
        } else {
            two += detail::two_path_term(g, m, weighted, nu[a].node, nu[a].weight, nv[b].weight);
            ++common;
            ++a;
            ++b;
        }
    }
    Scalar three(0);
    if (is_quasi_local(m)) {
        for (const auto& p : three_edge_paths(g, u, v)) {
            three += detail::three_path_term(g, m, weighted, p[1], p[2], *g.weight(u, p[1]),
                                             *g.weight(p[1], p[2]), *g.weight(p[2], v));
        }
    }
    return detail::combine(g, m, u, v, two, common, three, epsilon);
}

template <typename Scalar>
Scalar cn(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::common_neighbors, false, u, v);
}
template <typename Scalar>
Scalar wcn(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::common_neighbors, true, u, v);
}
template <typename Scalar>
Scalar jaccard(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::jaccard, false, u, v);
}
template <typename Scalar>
Scalar local_path(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v, const Scalar& eps) {
    return similarity(g, SimilarityMetric::local_path, false, u, v, eps);
}
template <typename Scalar>
Scalar wlp(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v, const Scalar& eps) {
    return similarity(g, SimilarityMetric::local_path, true, u, v, eps);
}
template <typename Scalar>
Scalar ra(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::resource_allocation, false, u, v);
}
template <typename Scalar>
Scalar wra(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::resource_allocation, true, u, v);
}
template <typename Scalar>
Scalar qra(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v, const Scalar& eps) {
    return similarity(g, SimilarityMetric::quasi_local_ra, false, u, v, eps);
}
template <typename Scalar>
Scalar wqra(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v, const Scalar& eps) {
    return similarity(g, SimilarityMetric::quasi_local_ra, true, u, v, eps);
}
template <typename Scalar>
Scalar ra2(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::ra2, false, u, v);
}
template <typename Scalar>
Scalar wra2(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v) {
    return similarity(g, SimilarityMetric::ra2, true, u, v);
}
template <typename Scalar>
Scalar qr2(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v, const Scalar& eps) {
    return similarity(g, SimilarityMetric::quasi_local_ra2, false, u, v, eps);
}
template <typename Scalar>
Scalar wqr2(const BasicWeightedGraph<Scalar>& g, NodeId u, NodeId v, const Scalar& eps) {
    return similarity(g, SimilarityMetric::quasi_local_ra2, true, u, v, eps);
}

template <typename Scalar>
struct ScoredPair {
    NodeId u;  // u < v
    NodeId v;
    Scalar score;
};

/// Sparse scores over non-adjacent pairs; zero scores are absent.
template <typename Scalar>
struct BasicSimilarityTable {
    SimilarityMetric metric = SimilarityMetric::common_neighbors;
    bool weighted = false;
    Scalar epsilon = Scalar(kDefaultEpsilon);
    bool normalized = false;
    std::vector<ScoredPair<Scalar>> entries;  // sorted by (u, v)

    std::size_t size() const { return entries.size(); }
    bool empty() const { return entries.empty(); }

    std::optional<Scalar> find(NodeId u, NodeId v) const {
        if (v < u) std::swap(u, v);
        auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{u, v},
                                   [](const ScoredPair<Scalar>& e, const std::pair<NodeId, NodeId>& key) {
                                       return e.u != key.first ? e.u < key.first : e.v < key.second;
                                   });
        if (it == entries.end() || it->u != u || it->v != v) return std::nullopt;
        return it->score;
    }
};

using SimilarityTable = BasicSimilarityTable<double>;

/// Scores every non-adjacent unordered pair. Walks two- and three-paths out
/// of each u once instead of querying pairs individually.
template <typename Scalar>
BasicSimilarityTable<Scalar> score_all_pairs(const BasicWeightedGraph<Scalar>& g, SimilarityMetric m,
                                             bool weighted, const Scalar& epsilon = Scalar(kDefaultEpsilon)) {
    const std::size_t n = g.node_count();
    BasicSimilarityTable<Scalar> table;
    table.metric = m;
    table.weighted = weighted;
    table.epsilon = epsilon;

    std::vector<Scalar> two(n, Scalar(0));
    std::vector<Scalar> three(n, Scalar(0));
    std::vector<std::size_t> common(n, 0);
    std::vector<char> touched(n, 0);
    std::vector<char> adjacent(n, 0);
    std::vector<NodeId> visited;
    const bool quasi = is_quasi_local(m);

    for (NodeId u = 0; u < n; ++u) {
        for (const auto& a : g.neighbors(u)) adjacent[a.node] = 1;
        auto mark = [&](NodeId v) {
            if (!touched[v]) {
                touched[v] = 1;
                visited.push_back(v);
            }
        };
        // Two-paths u - x - v, x visited in ascending order per v.
        for (const auto& a : g.neighbors(u)) {
            const NodeId x = a.node;
            for (const auto& b : g.neighbors(x)) {
                const NodeId v = b.node;
                if (v <= u || adjacent[v]) continue;
                two[v] += detail::two_path_term(g, m, weighted, x, a.weight, b.weight);
                ++common[v];
                mark(v);
            }
        }
        if (quasi) {
            for (const auto& a : g.neighbors(u)) {
                const NodeId i = a.node;
                for (const auto& b : g.neighbors(i)) {
                    const NodeId j = b.node;
                    if (j == u) continue;
                    for (const auto& c : g.neighbors(j)) {
                        const NodeId v = c.node;
                        if (v <= u || v == i || adjacent[v]) continue;
                        three[v] += detail::three_path_term(g, m, weighted, i, j, a.weight, b.weight, c.weight);
                        mark(v);
                    }
                }
            }
        }
        std::sort(visited.begin(), visited.end());
        for (NodeId v : visited) {
            Scalar s = detail::combine(g, m, u, v, two[v], common[v], three[v], epsilon);
            if (s != Scalar(0)) table.entries.push_back({u, v, s});
            two[v] = Scalar(0);
            three[v] = Scalar(0);
            common[v] = 0;
            touched[v] = 0;
        }
        visited.clear();
        for (const auto& a : g.neighbors(u)) adjacent[a.node] = 0;
    }
    return table;
}

/// Divides every score by the maximum so the table lies in (0, 1].
template <typename Scalar>
BasicSimilarityTable<Scalar> normalize(BasicSimilarityTable<Scalar> table) {
    if (table.normalized) throw UsageError("similarity table is already normalized");
    table.normalized = true;
    if (table.entries.empty()) return table;
    Scalar top = table.entries.front().score;
    for (const auto& e : table.entries) {
        if (top < e.score) top = e.score;
    }
    for (auto& e : table.entries) e.score = e.score == top ? Scalar(1) : e.score / top;
    return table;
}

}  // namespace sphere
