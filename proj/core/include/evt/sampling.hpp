#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evt/powerset.hpp"

namespace evt {

struct SampleBatch {
  EventSet events;
  std::vector<SubsetMask> draws;
  std::uint64_t seed = 0;
};

// i.i.d. draws by inverse CDF over the cumulative table in mask order, driven
// by std::mt19937_64 seeded with `seed`. Zero-probability masks are never drawn.
SampleBatch sample(const PowersetDistribution& p, std::size_t count, std::uint64_t seed);

// Relative frequencies over all 2^n masks.
PowersetDistribution empirical_distribution(const SampleBatch& batch);

}  // namespace evt
