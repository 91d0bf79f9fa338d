#include "sphere/linkpred.hpp"

#include <string>

namespace sphere {

std::string_view to_string(SimilarityMetric metric) {
    switch (metric) {
        case SimilarityMetric::common_neighbors: return "cn";
        case SimilarityMetric::jaccard: return "jaccard";
        case SimilarityMetric::local_path: return "local_path";
        case SimilarityMetric::resource_allocation: return "ra";
        case SimilarityMetric::quasi_local_ra: return "qra";
        case SimilarityMetric::ra2: return "ra2";
        case SimilarityMetric::quasi_local_ra2: return "qr2";
    }
    return "?";
}

SimilarityMetric parse_similarity_metric(std::string_view name) {
    for (SimilarityMetric m : kSimilarityMetrics) {
        if (to_string(m) == name) return m;
    }
    throw UsageError("unknown similarity metric '" + std::string(name) + "'");
}

}  // namespace sphere
