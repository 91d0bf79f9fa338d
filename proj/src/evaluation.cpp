#include "sphere/evaluation.hpp"

#include <algorithm>
#include <string>

#include "sphere/errors.hpp"

namespace sphere {

double accuracy(const SeedSet& predicted, const SeedSet& truth) {
    if (predicted.size() != truth.size()) {
        throw UsageError("accuracy needs equal seed-set sizes (" + std::to_string(predicted.size()) + " vs " +
                         std::to_string(truth.size()) + ")");
    }
    if (truth.size() == 0) throw UsageError("accuracy of empty seed sets");
    std::vector<NodeId> a = predicted.nodes;
    std::vector<NodeId> b = truth.nodes;
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<NodeId> common;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(common));
    return static_cast<double>(common.size()) / static_cast<double>(truth.size());
}

double mse(const InfectionTrace& p, const InfectionTrace& o, MseDivisor divisor) {
    if (p.fractions.size() != o.fractions.size()) {
        throw UsageError("mse needs equal horizons (" + std::to_string(p.horizon()) + " vs " +
                         std::to_string(o.horizon()) + ")");
    }
    if (p.fractions.empty()) throw UsageError("mse of empty traces");
    double sum = 0.0;
    for (std::size_t t = 0; t < p.fractions.size(); ++t) {
        const double d = o.fractions[t] - p.fractions[t];
        sum += d * d;
    }
    const std::size_t r = p.horizon();
    if (divisor == MseDivisor::horizon) {
        if (r == 0) throw UsageError("mse with divisor r needs a horizon of at least 1");
        return sum / static_cast<double>(r);
    }
    return sum / static_cast<double>(r + 1);
}

}  // namespace sphere
