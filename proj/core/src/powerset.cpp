#include "evt/powerset.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "evt/error.hpp"
#include "evt/summation.hpp"

namespace evt {

namespace {

void check_length(std::size_t length, const EventSet& events, const char* what) {
  if (length != events.atom_count()) {
    throw Error(Errc::kWrongLength, std::string(what) + " has " + std::to_string(length) +
                                        " entries, expected " +
                                        std::to_string(events.atom_count()));
  }
}

double table_sum(std::span<const double> xs) {
  CompensatedSum sum;
  for (double x : xs) sum += x;
  return sum.value();
}

void check_probabilities(std::span<const double> probs) {
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (!std::isfinite(probs[i])) {
      throw Error(Errc::kNonFinite, "probability at mask " + std::to_string(i) + " is not finite");
    }
    if (probs[i] < 0.0) {
      throw Error(Errc::kNegativeProbability,
                  "probability at mask " + std::to_string(i) + " is negative");
    }
  }
}

}  // namespace

EventSet::EventSet(std::vector<std::string> names) {
  if (names.empty()) throw Error(Errc::kInvalidEventSet, "event set is empty");
  if (names.size() > kMaxEvents) {
    throw Error(Errc::kTooManyEvents, std::to_string(names.size()) + " events, at most " +
                                          std::to_string(kMaxEvents) + " supported");
  }
  std::set<std::string_view> seen;
  for (const auto& name : names) {
    if (name.empty()) throw Error(Errc::kInvalidEventSet, "empty event label");
    if (!seen.insert(name).second) {
      throw Error(Errc::kInvalidEventSet, "duplicate event label '" + name + "'");
    }
  }
  names_ = std::make_shared<const std::vector<std::string>>(std::move(names));
}

std::vector<SubsetMask> enumerate_subsets(const EventSet& events) {
  std::vector<SubsetMask> masks;
  masks.reserve(events.atom_count());
  for (std::uint32_t bits = 0; bits < events.atom_count(); ++bits) masks.emplace_back(bits);
  return masks;
}

ValueFunction::ValueFunction(EventSet events, std::vector<double> values)
    : events_(std::move(events)), values_(std::move(values)) {
  check_length(values_.size(), events_, "value table");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i])) {
      throw Error(Errc::kNonFinite, "value at mask " + std::to_string(i) + " is not finite");
    }
    if (values_[i] < 0.0) {
      throw Error(Errc::kNegativeValue, "value at mask " + std::to_string(i) + " is negative");
    }
  }
}

PowersetDistribution::PowersetDistribution(EventSet events, std::vector<double> probs)
    : events_(std::move(events)), probs_(std::move(probs)) {
  check_length(probs_.size(), events_, "probability table");
  check_probabilities(probs_);
  const double sum = table_sum(probs_);
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    throw Error(Errc::kNotNormalized, "probabilities sum to " + std::to_string(sum));
  }
}

PowersetDistribution validate_distribution(std::vector<double> probs, const EventSet& events) {
  check_length(probs.size(), events, "probability table");
  check_probabilities(probs);
  const double sum = table_sum(probs);
  if (std::abs(sum - 1.0) > kInputNormalizationTolerance) {
    throw Error(Errc::kNotNormalized, "probabilities sum to " + std::to_string(sum));
  }
  if (std::abs(sum - 1.0) > kNormalizationTolerance) {
    for (double& p : probs) p /= sum;
  }
  return PowersetDistribution(events, std::move(probs));
}

double mean_value(const PowersetDistribution& p, const ValueFunction& v) {
  if (!(p.events() == v.events())) {
    throw Error(Errc::kEventSetMismatch, "distribution and value function use different events");
  }
  return mean_value(p, v.values());
}

double mean_value(const PowersetDistribution& p, std::span<const double> values) {
  check_length(values.size(), p.events(), "value table");
  CompensatedSum sum;
  const auto probs = p.probs();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) sum += probs[i] * values[i];
  }
  return sum.value();
}

std::vector<SubsetMask> support(const PowersetDistribution& p) {
  std::vector<SubsetMask> masks;
  const auto probs = p.probs();
  for (std::uint32_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) masks.emplace_back(i);
  }
  return masks;
}

}  // namespace evt
