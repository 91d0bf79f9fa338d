#include "sphere/contagion.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sphere/errors.hpp"

namespace sphere {

namespace {

void check_seeds(const WeightedGraph& g, std::span<const NodeId> seeds) {
    if (seeds.empty()) throw UsageError("contagion requires a non-empty seed set");
    for (NodeId s : seeds) {
        if (s >= g.node_count()) throw UsageError("seed " + std::to_string(s) + " is not a node");
    }
}

// Distances are sums of reciprocals; allow for rounding just above an
// integer time step.
bool reached_by(double distance, double t) { return distance <= t + 1e-9 * std::max(1.0, t); }

}  // namespace

std::string_view to_string(ContagionModel model) {
    return model == ContagionModel::simple ? "simple" : "complex";
}

ContagionModel parse_contagion_model(std::string_view name) {
    if (name == "simple") return ContagionModel::simple;
    if (name == "complex") return ContagionModel::complex;
    throw UsageError("unknown contagion model '" + std::string(name) + "'");
}

InfectionTrace simple_contagion(const WeightedGraph& g, std::span<const NodeId> seeds,
                                std::optional<std::size_t> horizon) {
    check_seeds(g, seeds);
    const auto dist = shortest_distances(g, seeds);
    std::vector<double> finite;
    for (const auto& d : dist) {
        if (d) finite.push_back(*d);
    }
    std::sort(finite.begin(), finite.end());
    const std::size_t r =
        horizon ? *horizon : static_cast<std::size_t>(std::ceil(finite.back() - 1e-9 * std::max(1.0, finite.back())));

    InfectionTrace trace;
    trace.model = ContagionModel::simple;
    trace.seeds.assign(seeds.begin(), seeds.end());
    trace.fractions.resize(r + 1);
    const double n = static_cast<double>(g.node_count());
    std::size_t reached = 0;
    for (std::size_t t = 0; t <= r; ++t) {
        while (reached < finite.size() && reached_by(finite[reached], static_cast<double>(t))) ++reached;
        trace.fractions[t] = static_cast<double>(reached) / n;
    }
    return trace;
}

InfectionTrace complex_contagion(const WeightedGraph& g, std::span<const NodeId> seeds, double theta,
                                 std::optional<std::size_t> horizon) {
    check_seeds(g, seeds);
    if (!(theta >= 0.0 && theta <= 1.0)) throw UsageError("theta must lie in [0,1]");
    const std::size_t n = g.node_count();
    std::vector<char> infected(n, 0);
    std::size_t count = 0;
    for (NodeId s : seeds) {
        if (!infected[s]) {
            infected[s] = 1;
            ++count;
        }
    }
    InfectionTrace trace;
    trace.model = ContagionModel::complex;
    trace.theta = theta;
    trace.seeds.assign(seeds.begin(), seeds.end());
    trace.fractions.push_back(static_cast<double>(count) / static_cast<double>(n));

    const std::size_t cap = horizon ? *horizon : n;
    std::vector<NodeId> joining;
    for (std::size_t t = 1; t <= cap; ++t) {
        joining.clear();
        for (NodeId v = 0; v < n; ++v) {
            if (infected[v]) continue;
            double pressure = 0.0;
            bool exposed = false;
            for (const auto& nb : g.neighbors(v)) {
                if (infected[nb.node]) {
                    pressure += nb.weight;
                    exposed = true;
                }
            }
            const double need = theta * g.strength(v);
            if (exposed && pressure >= need - 1e-12 * std::max(1.0, need)) joining.push_back(v);
        }
        if (joining.empty()) {
            if (!horizon) break;
            trace.fractions.resize(cap + 1, trace.fractions.back());
            break;
        }
        for (NodeId v : joining) infected[v] = 1;
        count += joining.size();
        trace.fractions.push_back(static_cast<double>(count) / static_cast<double>(n));
    }
    return trace;
}

InfectionTrace pad_to(InfectionTrace trace, std::size_t horizon) {
    if (trace.fractions.empty()) throw UsageError("cannot pad an empty trace");
    trace.fractions.resize(horizon + 1, trace.fractions.back());
    return trace;
}

}  // namespace sphere
