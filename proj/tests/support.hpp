#pragma once

// Shared fixtures and random-graph generators for the test suite.

#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "sphere/graph.hpp"

namespace testing {

using Rational = boost::multiprecision::cpp_rational;
using RGraph = sphere::BasicWeightedGraph<Rational>;
using REdge = sphere::BasicEdge<Rational>;

// The five-node example graph used throughout: bipartite, weights 1/2 and 1/3.
template <class S>
sphere::BasicWeightedGraph<S> fixture_f() {
    const S half = S(1) / S(2);
    const S third = S(1) / S(3);
    return sphere::BasicWeightedGraph<S>::build(
        5, {{0, 1, half}, {1, 3, third}, {1, 4, half}, {2, 3, third}, {2, 4, third}});
}

inline sphere::WeightedGraph fixture_f_double() { return fixture_f<double>(); }

// An edge list with weights in tenths, shared by the rational and double copies
// of one random graph.
struct RandomSpec {
    std::size_t n = 0;
    std::vector<std::pair<sphere::NodeId, sphere::NodeId>> pairs;
    std::vector<int> tenths;  // weight = tenths / 10
};

inline RandomSpec random_spec(std::mt19937_64& rng, std::size_t min_n, std::size_t max_n, bool unit_weights = false) {
    std::uniform_int_distribution<std::size_t> size(min_n, max_n);
    std::uniform_real_distribution<double> density(0.15, 0.85);
    std::uniform_int_distribution<int> tenth(1, 10);
    RandomSpec spec;
    spec.n = size(rng);
    std::bernoulli_distribution coin(density(rng));
    for (sphere::NodeId u = 0; u < spec.n; ++u) {
        for (sphere::NodeId v = u + 1; v < spec.n; ++v) {
            if (coin(rng)) {
                spec.pairs.emplace_back(u, v);
                spec.tenths.push_back(unit_weights ? 10 : tenth(rng));
            }
        }
    }
    return spec;
}

template <class S>
sphere::BasicWeightedGraph<S> build(const RandomSpec& spec) {
    std::vector<sphere::BasicEdge<S>> edges;
    for (std::size_t i = 0; i < spec.pairs.size(); ++i) {
        edges.push_back({spec.pairs[i].first, spec.pairs[i].second, S(spec.tenths[i]) / S(10)});
    }
    return sphere::BasicWeightedGraph<S>::build(spec.n, edges);
}

}  // namespace testing
