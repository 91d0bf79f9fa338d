#pragma once

#include "sphere/contagion.hpp"
#include "sphere/topk.hpp"

namespace sphere {

/// |predicted ∩ truth| / k. Both sets must have the same size.
double accuracy(const SeedSet& predicted, const SeedSet& truth);

enum class MseDivisor {
    samples,  // r + 1, the number of time points compared
    horizon,  // r
};

/// Mean squared difference of two traces with equal horizons.
double mse(const InfectionTrace& p, const InfectionTrace& o, MseDivisor divisor = MseDivisor::samples);

}  // namespace sphere
