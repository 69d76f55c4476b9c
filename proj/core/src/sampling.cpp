#include "evt/sampling.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "evt/error.hpp"
#include "evt/summation.hpp"

namespace evt {

SampleBatch sample(const PowersetDistribution& p, std::size_t count, std::uint64_t seed) {
  if (count == 0) throw Error(Errc::kInvalidArgument, "sample count must be >= 1");
  const auto probs = p.probs();
  std::vector<double> cdf(probs.size());
  CompensatedSum running;
  std::uint32_t last_positive = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    running += probs[i];
    cdf[i] = running.value();
    if (probs[i] > 0.0) last_positive = static_cast<std::uint32_t>(i);
  }

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  SampleBatch batch{p.events(), {}, seed};
  batch.draws.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double u = unit(rng);
    // First mask whose cumulative mass exceeds u; mass-less masks share the
    // cdf value of their predecessor and so are skipped by upper_bound.
    const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
    const auto index = it == cdf.end() ? last_positive : static_cast<std::uint32_t>(it - cdf.begin());
    batch.draws.emplace_back(std::min(index, last_positive));
  }
  return batch;
}

PowersetDistribution empirical_distribution(const SampleBatch& batch) {
  if (batch.draws.empty()) throw Error(Errc::kEmptyBatch, "cannot estimate from an empty batch");
  std::vector<std::size_t> counts(batch.events.atom_count(), 0);
  for (auto m : batch.draws) {
    if (!batch.events.contains(m)) {
      throw Error(Errc::kInvalidArgument, "draw " + std::to_string(m.bits()) + " out of range");
    }
    ++counts[m.index()];
  }
  const double total = static_cast<double>(batch.draws.size());
  std::vector<double> freq(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) freq[i] = static_cast<double>(counts[i]) / total;
  return validate_distribution(std::move(freq), batch.events);
}

}  // namespace evt
