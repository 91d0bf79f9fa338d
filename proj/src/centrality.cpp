#include "sphere/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <set>
#include <string>
#include <utility>

#include <Eigen/SparseCore>

#include "sphere/errors.hpp"

namespace sphere {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Floating sums along different routes to the same node may disagree in the
// last bits; co-minimal paths are detected with a relative tolerance.
bool same_length(double a, double b) {
    return std::abs(a - b) <= 1e-12 * std::max({1.0, std::abs(a), std::abs(b)});
}

double edge_length(const WeightedGraph::Neighbor& nb, bool weighted) {
    return weighted ? 1.0 / nb.weight : 1.0;
}

Eigen::VectorXd zeros(const WeightedGraph& g) {
    return Eigen::VectorXd::Zero(static_cast<Eigen::Index>(g.node_count()));
}

struct ShortestPathTree {
    std::vector<double> dist;
    std::vector<double> sigma;
    std::vector<NodeId> order;  // settled order
    std::vector<std::vector<NodeId>> preds;
};

// Single-source shortest paths with path counting. Edge lengths are >= 1, so
// a node can never gain a co-minimal predecessor after it has been settled.
// Dense graphs use the O(n^2) array scan instead of a heap.
ShortestPathTree shortest_path_tree(const WeightedGraph& g, NodeId s, bool weighted, bool with_preds) {
    const std::size_t n = g.node_count();
    ShortestPathTree t;
    t.dist.assign(n, kInf);
    t.sigma.assign(n, 0.0);
    t.order.reserve(n);
    if (with_preds) t.preds.assign(n, {});
    std::vector<char> settled(n, 0);
    t.dist[s] = 0.0;
    t.sigma[s] = 1.0;

    auto relax = [&](NodeId v, auto&& push) {
        for (const auto& nb : g.neighbors(v)) {
            const NodeId w = nb.node;
            if (settled[w]) continue;
            const double alt = t.dist[v] + edge_length(nb, weighted);
            if (t.dist[w] == kInf || (alt < t.dist[w] && !same_length(alt, t.dist[w]))) {
                t.dist[w] = alt;
                t.sigma[w] = t.sigma[v];
                if (with_preds) t.preds[w].assign(1, v);
                push(w, alt);
            } else if (same_length(alt, t.dist[w])) {
                t.sigma[w] += t.sigma[v];
                if (with_preds) t.preds[w].push_back(v);
            }
        }
    };

    const bool dense = 2 * g.edge_count() * 8 > n * n;
    if (dense) {
        for (;;) {
            NodeId best = n;
            for (NodeId v = 0; v < n; ++v) {
                if (!settled[v] && t.dist[v] < kInf && (best == n || t.dist[v] < t.dist[best])) best = v;
            }
            if (best == n) break;
            settled[best] = 1;
            t.order.push_back(best);
            relax(best, [](NodeId, double) {});
        }
    } else {
        using Item = std::pair<double, NodeId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;
        heap.emplace(0.0, s);
        while (!heap.empty()) {
            auto [d, v] = heap.top();
            heap.pop();
            if (settled[v] || d != t.dist[v]) continue;
            settled[v] = 1;
            t.order.push_back(v);
            relax(v, [&](NodeId w, double alt) { heap.emplace(alt, w); });
        }
    }
    return t;
}

using SparseMatrix = Eigen::SparseMatrix<double>;

// Column-stochastic random-walk operator: entry (u, v) = share of v's mass
// sent to u, i.e. w(u,v)/s_v or 1/k_v.
SparseMatrix walk_operator(const WeightedGraph& g, bool weighted, std::size_t extra_ground_nodes = 0) {
    const std::size_t n = g.node_count();
    const std::size_t total = n + extra_ground_nodes;
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * g.edge_count() + 2 * n * extra_ground_nodes);
    const double ground = extra_ground_nodes ? 1.0 : 0.0;
    for (NodeId v = 0; v < n; ++v) {
        const double out = weighted ? g.strength(v) + ground : static_cast<double>(g.degree(v)) + ground;
        if (out == 0.0) continue;
        for (const auto& nb : g.neighbors(v)) {
            entries.emplace_back(static_cast<int>(nb.node), static_cast<int>(v),
                                 (weighted ? nb.weight : 1.0) / out);
        }
        if (extra_ground_nodes) entries.emplace_back(static_cast<int>(n), static_cast<int>(v), 1.0 / out);
    }
    if (extra_ground_nodes) {
        for (NodeId u = 0; u < n; ++u) {
            entries.emplace_back(static_cast<int>(u), static_cast<int>(n), 1.0 / static_cast<double>(n));
        }
    }
    SparseMatrix m(static_cast<Eigen::Index>(total), static_cast<Eigen::Index>(total));
    m.setFromTriplets(entries.begin(), entries.end());
    return m;
}

// Lazy fixed-point iteration x <- (x + f(x)) / 2. It has the same fixed
// points as x <- f(x) but does not oscillate on bipartite graphs.
template <typename Step>
Eigen::VectorXd lazy_fixed_point(Eigen::VectorXd x, Step&& step, double tol, int max_iter, const char* what) {
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = 0.5 * (x + step(x));
        const double delta = x.size() ? (next - x).cwiseAbs().maxCoeff() : 0.0;
        x = std::move(next);
        if (delta < tol) return x;
    }
    throw ConvergenceError(std::string(what) + " did not converge within " + std::to_string(max_iter) +
                               " iterations",
                           x);
}

std::vector<char> neighbor_marks(const WeightedGraph& g, NodeId i) {
    std::vector<char> mark(g.node_count(), 0);
    for (const auto& nb : g.neighbors(i)) mark[nb.node] = 1;
    return mark;
}

}  // namespace

std::string_view to_string(CentralityMetric metric) {
    switch (metric) {
        case CentralityMetric::degree: return "degree";
        case CentralityMetric::coreness: return "coreness";
        case CentralityMetric::h_index: return "h_index";
        case CentralityMetric::w_lobby: return "w_lobby";
        case CentralityMetric::local_rank: return "local_rank";
        case CentralityMetric::cluster_rank: return "cluster_rank";
        case CentralityMetric::closeness: return "closeness";
        case CentralityMetric::betweenness: return "betweenness";
        case CentralityMetric::eigenvector: return "eigenvector";
        case CentralityMetric::pagerank: return "pagerank";
        case CentralityMetric::leader_rank: return "leader_rank";
        case CentralityMetric::balanced_index: return "balanced_index";
        case CentralityMetric::complex_path: return "complex_path";
    }
    return "?";
}

CentralityMetric parse_centrality_metric(std::string_view name) {
    for (CentralityMetric m : kCentralityMetrics) {
        if (to_string(m) == name) return m;
    }
    throw UsageError("unknown centrality metric '" + std::string(name) + "'");
}

bool supports_weighted(CentralityMetric metric) { return metric != CentralityMetric::local_rank; }

Eigen::VectorXd degree_centrality(const WeightedGraph& g, bool weighted) {
    Eigen::VectorXd out = zeros(g);
    for (NodeId u = 0; u < g.node_count(); ++u) {
        out[static_cast<Eigen::Index>(u)] = weighted ? g.strength(u) : static_cast<double>(g.degree(u));
    }
    return out;
}

Eigen::VectorXd coreness(const WeightedGraph& g, bool weighted) {
    const std::size_t n = g.node_count();
    std::vector<double> residual(n);
    for (NodeId u = 0; u < n; ++u) residual[u] = weighted ? g.strength(u) : static_cast<double>(g.degree(u));
    std::set<std::pair<double, NodeId>> queue;
    for (NodeId u = 0; u < n; ++u) queue.emplace(residual[u], u);
    std::vector<char> removed(n, 0);
    Eigen::VectorXd core = zeros(g);
    while (!queue.empty()) {
        const auto [value, v] = *queue.begin();
        queue.erase(queue.begin());
        removed[v] = 1;
        // Repeated subtraction of weights can leave 0.999... for an exact 1.
        core[static_cast<Eigen::Index>(v)] = weighted ? std::floor(value + 1e-9) : value;
        for (const auto& nb : g.neighbors(v)) {
            const NodeId u = nb.node;
            if (removed[u] || !(residual[u] > value)) continue;
            queue.erase({residual[u], u});
            // Never below the current level: u already belongs to this core.
            residual[u] = std::max(value, residual[u] - (weighted ? nb.weight : 1.0));
            queue.emplace(residual[u], u);
        }
    }
    return core;
}

int h_operator(std::vector<double> values) {
    std::sort(values.begin(), values.end(), std::greater<>());
    int h = 0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] >= static_cast<double>(i + 1)) h = static_cast<int>(i + 1);
        else break;
    }
    return h;
}

Eigen::VectorXd h_index(const WeightedGraph& g, int order, bool weighted) {
    if (order < 0) throw UsageError("H-index order must be >= 0");
    Eigen::VectorXd current = degree_centrality(g, weighted);
    std::vector<double> buffer;
    for (int step = 0; step < order; ++step) {
        Eigen::VectorXd next = zeros(g);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            buffer.clear();
            for (const auto& nb : g.neighbors(u)) buffer.push_back(current[static_cast<Eigen::Index>(nb.node)]);
            next[static_cast<Eigen::Index>(u)] = h_operator(buffer);
        }
        current = std::move(next);
    }
    return current;
}

Eigen::VectorXd w_lobby(const WeightedGraph& g) { return h_index(g, 1, true); }

Eigen::VectorXd local_rank(const WeightedGraph& g) {
    const std::size_t n = g.node_count();
    // reach[w] = |N(w)| + |N_2(w)|
    std::vector<double> reach(n, 0.0);
    std::vector<std::size_t> stamp(n, static_cast<std::size_t>(-1));
    for (NodeId w = 0; w < n; ++w) {
        stamp[w] = w;
        for (const auto& a : g.neighbors(w)) stamp[a.node] = w;
        std::size_t second = 0;
        for (const auto& a : g.neighbors(w)) {
            for (const auto& b : g.neighbors(a.node)) {
                if (stamp[b.node] != w) {
                    stamp[b.node] = w;
                    ++second;
                }
            }
        }
        reach[w] = static_cast<double>(g.degree(w) + second);
    }
    std::vector<double> inner(n, 0.0);
    for (NodeId v = 0; v < n; ++v) {
        for (const auto& a : g.neighbors(v)) inner[v] += reach[a.node];
    }
    Eigen::VectorXd out = zeros(g);
    for (NodeId u = 0; u < n; ++u) {
        double s = 0.0;
        for (const auto& a : g.neighbors(u)) s += inner[a.node];
        out[static_cast<Eigen::Index>(u)] = s;
    }
    return out;
}

double clustering_coefficient(const WeightedGraph& g, NodeId i) {
    const std::size_t k = g.degree(i);
    if (k < 2) return 0.0;
    auto mark = neighbor_marks(g, i);
    std::size_t twice_links = 0;
    for (const auto& a : g.neighbors(i)) {
        for (const auto& b : g.neighbors(a.node)) twice_links += mark[b.node];
    }
    return static_cast<double>(twice_links / 2) / static_cast<double>(k * (k - 1));
}

Eigen::VectorXd cluster_rank(const WeightedGraph& g, double alpha, bool weighted) {
    Eigen::VectorXd out = zeros(g);
    for (NodeId i = 0; i < g.node_count(); ++i) {
        double sum = 0.0;
        for (const auto& a : g.neighbors(i)) {
            sum += (weighted ? g.strength(a.node) : static_cast<double>(g.degree(a.node))) + 1.0;
        }
        out[static_cast<Eigen::Index>(i)] = std::pow(alpha, -clustering_coefficient(g, i)) * sum;
    }
    return out;
}

Eigen::VectorXd closeness(const WeightedGraph& g, bool weighted) {
    const std::size_t n = g.node_count();
    Eigen::VectorXd out = zeros(g);
    if (n < 2) return out;
    for (NodeId i = 0; i < n; ++i) {
        auto tree = shortest_path_tree(g, i, weighted, false);
        double sum = 0.0;
        for (NodeId j = 0; j < n; ++j) {
            if (j != i && tree.dist[j] < kInf) sum += 1.0 / tree.dist[j];
        }
        out[static_cast<Eigen::Index>(i)] = sum / static_cast<double>(n - 1);
    }
    return out;
}

Eigen::VectorXd betweenness(const WeightedGraph& g, bool weighted) {
    const std::size_t n = g.node_count();
    Eigen::VectorXd out = zeros(g);
    std::vector<double> delta(n);
    for (NodeId s = 0; s < n; ++s) {
        auto tree = shortest_path_tree(g, s, weighted, true);
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto it = tree.order.rbegin(); it != tree.order.rend(); ++it) {
            const NodeId w = *it;
            for (NodeId v : tree.preds[w]) delta[v] += tree.sigma[v] / tree.sigma[w] * (1.0 + delta[w]);
            if (w != s) out[static_cast<Eigen::Index>(w)] += delta[w];
        }
    }
    // Every unordered pair was counted from both endpoints.
    return out / 2.0;
}

Eigen::VectorXd eigenvector_centrality(const WeightedGraph& g, bool weighted, double tol, int max_iter) {
    const std::size_t n = g.node_count();
    if (n == 0) throw UsageError("eigenvector centrality of an empty graph");
    std::vector<Eigen::Triplet<double>> entries;
    entries.reserve(2 * g.edge_count());
    for (NodeId u = 0; u < n; ++u) {
        for (const auto& nb : g.neighbors(u)) {
            entries.emplace_back(static_cast<int>(u), static_cast<int>(nb.node), weighted ? nb.weight : 1.0);
        }
    }
    SparseMatrix a(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    a.setFromTriplets(entries.begin(), entries.end());

    // Power iteration on A + I: same eigenvectors, but the shift makes the
    // dominant eigenvalue strictly largest in modulus on bipartite graphs.
    Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    for (int it = 0; it < max_iter; ++it) {
        Eigen::VectorXd next = a * x + x;
        next /= next.maxCoeff();
        const double delta = (next - x).cwiseAbs().maxCoeff();
        x = std::move(next);
        if (delta < tol) return x;
    }
    throw ConvergenceError("eigenvector centrality did not converge within " + std::to_string(max_iter) +
                               " iterations",
                           x);
}

Eigen::VectorXd pagerank(const WeightedGraph& g, double damping, bool weighted, double tol, int max_iter) {
    if (!(damping >= 0.0 && damping <= 1.0)) throw UsageError("PageRank damping must lie in [0,1]");
    const std::size_t n = g.node_count();
    const SparseMatrix walk = walk_operator(g, weighted);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n));
    Eigen::VectorXd teleport = Eigen::VectorXd::Constant(static_cast<Eigen::Index>(n), 1.0 - damping);
    if (damping == 1.0) {
        // No teleportation exists: isolated nodes hold no walk mass.
        for (NodeId u = 0; u < n; ++u) {
            if (g.degree(u) == 0) x[static_cast<Eigen::Index>(u)] = 0.0;
        }
    }
    return lazy_fixed_point(
        std::move(x), [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return teleport + damping * (walk * v); },
        tol, max_iter, "PageRank");
}

Eigen::VectorXd leader_rank(const WeightedGraph& g, bool weighted, double tol, int max_iter) {
    const std::size_t n = g.node_count();
    if (n == 0) return Eigen::VectorXd();
    const SparseMatrix walk = walk_operator(g, weighted, 1);
    Eigen::VectorXd x = Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n + 1));
    x[static_cast<Eigen::Index>(n)] = 0.0;
    x = lazy_fixed_point(
        std::move(x), [&](const Eigen::VectorXd& v) -> Eigen::VectorXd { return walk * v; }, tol, max_iter,
        "LeaderRank");
    const double ground_share = x[static_cast<Eigen::Index>(n)] / static_cast<double>(n);
    return x.head(static_cast<Eigen::Index>(n)).array() + ground_share;
}

Eigen::VectorXd balanced_index(const WeightedGraph& g, const BalancedIndexWeights& weights, double theta,
                               bool weighted) {
    const auto& [a, b, c] = weights;
    if (a < 0 || b < 0 || c < 0 || std::abs(a + b + c - 1.0) > 1e-9) {
        throw UsageError("balanced index weights must be nonnegative and sum to 1");
    }
    if (!(theta >= 0.0 && theta <= 1.0)) throw UsageError("theta must lie in [0,1]");
    const std::size_t n = g.node_count();
    auto size = [&](NodeId u) { return weighted ? g.strength(u) : static_cast<double>(g.degree(u)); };
    Eigen::VectorXd out = zeros(g);
    for (NodeId i = 0; i < n; ++i) {
        double indirect = 0.0;
        for (const auto& nb : g.neighbors(i)) {
            const double r_j = theta * size(nb.node);
            if (weighted) {
                if (r_j <= nb.weight) indirect += g.strength(nb.node) - nb.weight;
            } else if (std::abs(r_j - 1.0) <= 1e-12) {
                indirect += static_cast<double>(g.degree(nb.node)) - 1.0;
            }
        }
        out[static_cast<Eigen::Index>(i)] = a * theta * size(i) + b * size(i) + c * indirect;
    }
    return out;
}

std::size_t bridge_resistance(const WeightedGraph& g, NodeId j, double theta, bool weighted) {
    const double size = weighted ? g.strength(j) : static_cast<double>(g.degree(j));
    const double t = std::ceil(theta * size - 1e-12);
    return std::max<std::size_t>(1, t > 0 ? static_cast<std::size_t>(t) : 0);
}

namespace {

// Nodes in N(i) or adjacent to a member of N(i).
std::vector<char> bridge_reach(const WeightedGraph& g, NodeId i) {
    std::vector<char> reach(g.node_count(), 0);
    for (const auto& a : g.neighbors(i)) {
        reach[a.node] = 1;
        for (const auto& b : g.neighbors(a.node)) reach[b.node] = 1;
    }
    return reach;
}

}  // namespace

BridgeStructure bridge(const WeightedGraph& g, NodeId i, NodeId j, double theta, bool weighted) {
    const auto reach = bridge_reach(g, i);
    BridgeStructure out;
    for (const auto& nb : g.neighbors(j)) {
        if (reach[nb.node]) out.members.push_back(nb.node);
    }
    out.width = out.members.size();
    out.resistance = bridge_resistance(g, j, theta, weighted);
    out.sufficient = out.width >= out.resistance;
    return out;
}

std::size_t locally_sufficient_bridges(const WeightedGraph& g, NodeId i, double theta, bool weighted) {
    const auto reach = bridge_reach(g, i);
    std::size_t count = 0;
    for (NodeId j = 0; j < g.node_count(); ++j) {
        if (j == i) continue;
        std::size_t width = 0;
        for (const auto& nb : g.neighbors(j)) width += reach[nb.node];
        if (width > 0 && width >= bridge_resistance(g, j, theta, weighted)) ++count;
    }
    return count;
}

Eigen::VectorXd complex_path_centrality(const WeightedGraph& g, double theta, bool weighted) {
    if (!(theta >= 0.0 && theta <= 1.0)) throw UsageError("theta must lie in [0,1]");
    const std::size_t n = g.node_count();
    std::vector<std::size_t> resistance(n);
    for (NodeId j = 0; j < n; ++j) resistance[j] = bridge_resistance(g, j, theta, weighted);

    // Directed traversable edges x -> y: the bridge from x to y is sufficient.
    std::vector<std::vector<NodeId>> forward(n);
    for (NodeId x = 0; x < n; ++x) {
        const auto reach = bridge_reach(g, x);
        for (const auto& y : g.neighbors(x)) {
            std::size_t width = 0;
            for (const auto& v : g.neighbors(y.node)) width += reach[v.node];
            if (width >= resistance[y.node]) forward[x].push_back(y.node);
        }
    }

    Eigen::VectorXd out = zeros(g);
    std::vector<std::size_t> hops(n);
    std::vector<NodeId> queue;
    for (NodeId i = 0; i < n; ++i) {
        const std::size_t denom = n - g.degree(i);
        if (denom == 0) continue;
        std::fill(hops.begin(), hops.end(), static_cast<std::size_t>(-1));
        hops[i] = 0;
        queue.assign(1, i);
        std::size_t total_nodes = 0;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const NodeId x = queue[head];
            for (NodeId y : forward[x]) {
                if (hops[y] == static_cast<std::size_t>(-1)) {
                    hops[y] = hops[x] + 1;
                    total_nodes += hops[y] + 1;  // vertices on the geodesic
                    queue.push_back(y);
                }
            }
        }
        out[static_cast<Eigen::Index>(i)] = static_cast<double>(total_nodes) / static_cast<double>(denom);
    }
    return out;
}

CentralityVector compute_centrality(const WeightedGraph& g, CentralityMetric metric, bool weighted,
                                    const CentralityParams& params) {
    CentralityVector cv;
    cv.metric = metric;
    cv.weighted = weighted;
    cv.params = params;
    switch (metric) {
        case CentralityMetric::degree: cv.scores = degree_centrality(g, weighted); break;
        case CentralityMetric::coreness: cv.scores = coreness(g, weighted); break;
        case CentralityMetric::h_index: cv.scores = h_index(g, params.h_index_order, weighted); break;
        case CentralityMetric::w_lobby: cv.scores = weighted ? w_lobby(g) : h_index(g, 1, false); break;
        case CentralityMetric::local_rank:
            if (weighted) throw UsageError("LocalRank has no weighted mode");
            cv.scores = local_rank(g);
            break;
        case CentralityMetric::cluster_rank:
            cv.scores = cluster_rank(g, params.cluster_rank_alpha, weighted);
            break;
        case CentralityMetric::closeness: cv.scores = closeness(g, weighted); break;
        case CentralityMetric::betweenness: cv.scores = betweenness(g, weighted); break;
        case CentralityMetric::eigenvector:
            cv.scores = eigenvector_centrality(g, weighted, params.tolerance, params.max_iterations);
            break;
        case CentralityMetric::pagerank:
            cv.scores = pagerank(g, params.damping, weighted, params.tolerance, params.max_iterations);
            break;
        case CentralityMetric::leader_rank:
            cv.scores = leader_rank(g, weighted, params.tolerance, params.max_iterations);
            break;
        case CentralityMetric::balanced_index:
            cv.scores = balanced_index(g, params.bi_weights, params.theta, weighted);
            break;
        case CentralityMetric::complex_path:
            cv.scores = complex_path_centrality(g, params.theta, weighted);
            break;
    }
    return cv;
}

}  // namespace sphere
