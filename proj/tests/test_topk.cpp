#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include "sphere/errors.hpp"
#include "sphere/topk.hpp"
#include "support.hpp"

using namespace sphere;

namespace {

const WeightedGraph f = testing::fixture_f_double();

WeightedGraph triangle() { return WeightedGraph::build(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

WeightedGraph star(std::size_t leaves) {
    std::vector<Edge> edges;
    for (NodeId v = 1; v <= leaves; ++v) edges.push_back({0, v, 1.0});
    return WeightedGraph::build(leaves + 1, edges);
}

CentralityVector deg(const WeightedGraph& g, bool weighted = false) {
    return compute_centrality(g, CentralityMetric::degree, weighted);
}

bool valid(const SeedSet& s, const WeightedGraph& g, std::size_t k) {
    std::set<NodeId> distinct(s.nodes.begin(), s.nodes.end());
    return s.size() == k && distinct.size() == k &&
           std::all_of(s.nodes.begin(), s.nodes.end(), [&](NodeId u) { return u < g.node_count(); });
}

// Straight transcription of the voting rounds, with voting ability as the increment.
std::vector<NodeId> voterank_reference(const WeightedGraph& g, std::size_t k) {
    const std::size_t n = g.node_count();
    double total = 0.0;
    for (NodeId u = 0; u < n; ++u) total += g.strength(u);
    const double penalty = total > 0 ? static_cast<double>(n) / total : 0.0;
    std::vector<double> va(n, 1.0);
    std::set<NodeId> chosen;
    std::vector<NodeId> out;
    while (out.size() < k) {
        std::map<NodeId, double> score;
        for (NodeId v = 0; v < n; ++v) {
            if (chosen.count(v)) continue;
            score[v] = 0.0;
            for (NodeId u = 0; u < n; ++u) {
                if (u != v && !chosen.count(u) && g.has_edge(u, v)) score[v] += va[u];
            }
        }
        NodeId best = score.begin()->first;
        for (const auto& [v, s] : score) {
            if (s > score[best]) best = v;
        }
        chosen.insert(best);
        out.push_back(best);
        va[best] = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            if (g.has_edge(best, u)) va[u] = std::max(0.0, va[u] - penalty);
        }
    }
    return out;
}

// Exact nominee distribution for nominator u: co-nominators are tried by
// weight without replacement until one shares a neighbour with u.
std::map<NodeId, double> nominee_distribution(const WeightedGraph& g, NodeId u) {
    auto w = [&](NodeId x, NodeId y) { return *g.weight(x, y); };
    std::map<NodeId, double> out;
    std::vector<NodeId> nu;
    for (const auto& nb : g.neighbors(u)) nu.push_back(nb.node);
    std::function<void(std::vector<NodeId>, double)> expand = [&](std::vector<NodeId> cands, double mass) {
        double total = 0.0;
        for (NodeId v : cands) total += w(u, v);
        for (NodeId v : cands) {
            const double p = mass * w(u, v) / total;
            std::vector<NodeId> common;
            double cw = 0.0;
            for (NodeId i : nu) {
                if (g.has_edge(v, i)) {
                    common.push_back(i);
                    cw += w(u, i) * w(v, i);
                }
            }
            if (!common.empty()) {
                for (NodeId i : common) out[i] += p * w(u, i) * w(v, i) / cw;
                continue;
            }
            std::vector<NodeId> rest;
            for (NodeId x : cands) {
                if (x != v) rest.push_back(x);
            }
            if (!rest.empty()) {
                expand(rest, p);
            } else {
                double s = 0.0;
                for (NodeId i : nu) s += w(u, i);
                for (NodeId i : nu) out[i] += p * w(u, i) / s;
            }
        }
    };
    if (!nu.empty()) expand(nu, 1.0);
    return out;
}

}  // namespace

TEST_CASE("k-highest and single influencer") {
    CHECK(k_highest(f, deg(f), 1).nodes == std::vector<NodeId>{1});
    CHECK(k_highest(f, deg(f), 2).nodes == std::vector<NodeId>{1, 2});
    CHECK(k_highest(f, deg(f), 5).nodes.size() == 5);
    CHECK_THROWS_AS(k_highest(f, deg(f), 6), UsageError);
    for (std::size_t k = 1; k < 5; ++k) {
        const auto a = k_highest(f, deg(f, true), k).nodes;
        const auto b = k_highest(f, deg(f, true), k + 1).nodes;
        CHECK(std::equal(a.begin(), a.end(), b.begin()));
    }

    const auto s = single_influencer(f, deg(f, true));
    CHECK(s.nodes == std::vector<NodeId>{1});
    CHECK(s.algorithm == "single_influencer");
    CHECK(s.centrality == "degree");
    CHECK(single_influencer(triangle(), deg(triangle())).nodes == std::vector<NodeId>{0});
    const auto one = WeightedGraph::build(1, std::vector<Edge>{});
    CHECK(single_influencer(one, deg(one)).nodes == std::vector<NodeId>{0});
}

TEST_CASE("random baseline") {
    Rng a(5);
    Rng b(5);
    CHECK(random_seeds(f, 3, a).nodes == random_seeds(f, 3, b).nodes);
    auto all = random_seeds(f, 5, a).nodes;
    std::sort(all.begin(), all.end());
    CHECK(all == std::vector<NodeId>{0, 1, 2, 3, 4});

    std::vector<int> hits(5, 0);
    Rng rng(6);
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) ++hits[random_seeds(f, 1, rng).nodes[0]];
    const double sd = std::sqrt(draws * 0.2 * 0.8);
    for (int h : hits) CHECK(std::abs(h - draws * 0.2) < 4 * sd);
}

TEST_CASE("LIR") {
    CHECK(local_index(f) == std::vector<std::size_t>{1, 0, 0, 1, 1});
    CHECK(lir(f, nullptr, 2).nodes == std::vector<NodeId>{1, 2});
    CHECK(lir(f, nullptr, 3).nodes == std::vector<NodeId>{1, 2, 3});
    CHECK(lir(star(4), nullptr, 1).nodes == std::vector<NodeId>{0});
    const auto isolated = WeightedGraph::build(3, {{0, 1, 1.0}});
    CHECK_THROWS_AS(lir(isolated, nullptr, 3), UsageError);

    // Ordering within the LI=0 stratum follows the supplied centrality.
    const auto pr = compute_centrality(f, CentralityMetric::closeness, true);
    const auto picked = lir(f, &pr, 2).nodes;
    CHECK(std::set<NodeId>(picked.begin(), picked.end()) == std::set<NodeId>{1, 2});
}

TEST_CASE("LIR-2") {
    CHECK(local_index2(f) == std::vector<std::size_t>{3, 0, 1, 1, 1});
    CHECK(local_index2(f, Lir2Scope::first_order_only) == local_index(f));
    CHECK(lir2(f, nullptr, 1).nodes == std::vector<NodeId>{1});
    CHECK(lir2(f, nullptr, 5).nodes == std::vector<NodeId>{1, 2, 3, 4, 0});
    CHECK(lir2(triangle(), nullptr, 3).nodes == std::vector<NodeId>{0, 1, 2});
    CHECK_THROWS_AS(lir2(f, nullptr, 6), UsageError);
}

TEST_CASE("LIR candidates have no strictly larger neighbour") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 30; ++trial) {
        const auto g = testing::build<double>(testing::random_spec(rng, 2, 40));
        const auto li = local_index(g);
        for (NodeId u = 0; u < g.node_count(); ++u) {
            if (li[u] != 0) continue;
            for (const auto& nb : g.neighbors(u)) CHECK(g.degree(nb.node) <= g.degree(u));
        }
    }
}

TEST_CASE("VoteRank") {
    CHECK(voterank(f, nullptr, 1).nodes == std::vector<NodeId>{1});
    // After node 1 wins, 0, 3 and 4 lose all voting ability; only node 2 still votes.
    CHECK(voterank(f, nullptr, 2).nodes == std::vector<NodeId>{1, 3});
    CHECK(voterank(star(4), nullptr, 1).nodes == std::vector<NodeId>{0});
    CHECK_THROWS_AS(voterank(f, nullptr, 6), UsageError);

    const auto dc = deg(f, true);
    const auto cv = voterank(f, &dc, 2);
    CHECK(cv.algorithm == "centrality_voterank");
    CHECK(valid(cv, f, 2));

    std::mt19937_64 rng(52);
    for (int trial = 0; trial < 40; ++trial) {
        const auto g = testing::build<double>(testing::random_spec(rng, 1, 15, trial % 2 == 0));
        const std::size_t k = std::min<std::size_t>(g.node_count(), 4);
        CHECK(voterank(g, nullptr, k).nodes == voterank_reference(g, k));
        if (trial % 2 == 0 && g.edge_count() > 0) {
            const auto first = voterank(g, nullptr, 1).nodes[0];
            std::size_t top = 0;
            for (NodeId u = 0; u < g.node_count(); ++u) top = std::max(top, g.degree(u));
            CHECK(g.degree(first) == top);
        }
    }
}

TEST_CASE("Welsh-Powell colouring") {
    CHECK(welsh_powell(f) == std::vector<std::size_t>{2, 1, 1, 2, 2});
    CHECK(graph_coloring_select(f, deg(f), 2).nodes == std::vector<NodeId>{3, 4});
    try {
        graph_coloring_select(f, deg(f), 4);
        FAIL("expected an error");
    } catch (const UsageError& e) {
        CHECK(std::string(e.what()).find("3 nodes") != std::string::npos);
    }
    const auto edgeless = WeightedGraph::build(4, std::vector<Edge>{});
    CHECK(graph_coloring_select(edgeless, deg(edgeless), 4).size() == 4);

    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 20; ++trial) {
        const auto g = testing::build<double>(testing::random_spec(rng, 2, 200));
        const auto color = welsh_powell(g);
        for (const auto& e : g.edges()) CHECK(color[e.u] != color[e.v]);
        for (auto c : color) CHECK(c >= 1);
    }
}

TEST_CASE("joint nomination") {
    Rng rng(54);
    for (int i = 0; i < 50; ++i) {
        const auto nominee = nominate(triangle(), 0, rng);
        REQUIRE(nominee.has_value());
        CHECK(*nominee != 0);
    }
    CHECK_FALSE(nominate(WeightedGraph::build(2, std::vector<Edge>{}), 0, rng).has_value());

    // Nominee frequencies against the enumerated distribution.
    std::mt19937_64 grng(55);
    std::vector<WeightedGraph> graphs{f, triangle()};
    for (int i = 0; i < 4; ++i) graphs.push_back(testing::build<double>(testing::random_spec(grng, 4, 7)));
    for (const auto& g : graphs) {
        for (NodeId u = 0; u < g.node_count(); ++u) {
            const auto want = nominee_distribution(g, u);
            if (want.empty()) continue;
            const int draws = 4000;
            std::map<NodeId, int> seen;
            for (int i = 0; i < draws; ++i) ++seen[*nominate(g, u, rng)];
            for (const auto& [v, count] : seen) CHECK(want.count(v) == 1);
            for (const auto& [v, p] : want) {
                const double sd = std::sqrt(draws * p * (1 - p)) + 1e-9;
                CHECK(std::abs(seen[v] - draws * p) <= 5 * sd + 1);
            }
        }
    }

    const auto want_f3 = nominee_distribution(f, 3);
    CHECK(want_f3.at(1) == doctest::Approx(0.5));
    CHECK(want_f3.at(2) == doctest::Approx(0.5));

    Rng a(56);
    Rng b(56);
    CHECK(joint_nomination(f, nullptr, 3, a).nodes == joint_nomination(f, nullptr, 3, b).nodes);
    CHECK(valid(joint_nomination(f, nullptr, 5, a), f, 5));
    const auto isolated = WeightedGraph::build(3, std::vector<Edge>{});
    CHECK_THROWS_AS(joint_nomination(isolated, nullptr, 1, a), DataError);
    CHECK_THROWS_AS(joint_nomination(f, nullptr, 0, a), UsageError);
}

TEST_CASE("dispatch and invariants") {
    for (auto a : kTopKAlgorithms) CHECK(parse_topk_algorithm(to_string(a)) == a);
    CHECK_THROWS_AS(parse_topk_algorithm("greedy"), UsageError);
    Rng rng(57);
    CHECK_THROWS_AS(select_seeds(f, TopKAlgorithm::k_highest, nullptr, 1, rng), UsageError);

    std::mt19937_64 grng(58);
    for (int trial = 0; trial < 15; ++trial) {
        const auto g = testing::build<double>(testing::random_spec(grng, 10, 40));
        for (auto metric : {CentralityMetric::degree, CentralityMetric::pagerank}) {
            const auto c = compute_centrality(g, metric, true);
            for (auto algo : kTopKAlgorithms) {
                const std::size_t k = algo == TopKAlgorithm::single_influencer ? 1 : 3;
                try {
                    const auto s = select_seeds(g, algo, &c, k, rng);
                    CHECK(valid(s, g, k));
                    if (algo != TopKAlgorithm::random && algo != TopKAlgorithm::joint_nomination) {
                        CHECK(select_seeds(g, algo, &c, k, rng).nodes == s.nodes);
                    }
                } catch (const Error&) {
                    // Colouring or LIR may legitimately lack k eligible nodes.
                    CHECK((algo == TopKAlgorithm::graph_coloring || algo == TopKAlgorithm::lir ||
                           algo == TopKAlgorithm::joint_nomination));
                }
            }
        }
    }
}
