#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sphere/graph.hpp"

namespace sphere {

enum class ContagionModel { simple, complex };

std::string_view to_string(ContagionModel model);
ContagionModel parse_contagion_model(std::string_view name);

/// Fraction of infected nodes at t = 0..horizon.
struct InfectionTrace {
    ContagionModel model = ContagionModel::simple;
    std::vector<NodeId> seeds;
    std::vector<double> fractions;
    double theta = 0.0;

    std::size_t horizon() const { return fractions.empty() ? 0 : fractions.size() - 1; }
};

/// I(t) = nodes within weighted distance t of some seed. Without an explicit
/// horizon the trace ends at ceil(max finite seed distance).
InfectionTrace simple_contagion(const WeightedGraph& g, std::span<const NodeId> seeds,
                                std::optional<std::size_t> horizon = std::nullopt);

/// Synchronous threshold spread: an uninfected node with at least one
/// infected neighbour joins once the infected neighbour weight reaches
/// theta * s_v. Infection is absorbing. Without an explicit horizon the trace
/// ends at the last step that changes the infected set (capped at |V|).
InfectionTrace complex_contagion(const WeightedGraph& g, std::span<const NodeId> seeds, double theta,
                                 std::optional<std::size_t> horizon = std::nullopt);

/// Extends with the final value (or truncates) to exactly `horizon` steps.
InfectionTrace pad_to(InfectionTrace trace, std::size_t horizon);

}  // namespace sphere
