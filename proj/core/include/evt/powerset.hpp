#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace evt {

inline constexpr std::size_t kMaxEvents = 16;

// Tolerance on |sum - 1| accepted from external input (and then rescaled).
inline constexpr double kInputNormalizationTolerance = 1e-9;
// Tolerance on |sum - 1| every constructed distribution satisfies.
inline constexpr double kNormalizationTolerance = 1e-12;

// A subset X of the event set, encoded with event i <-> bit i.
class SubsetMask {
 public:
  constexpr SubsetMask() = default;
  constexpr explicit SubsetMask(std::uint32_t bits) : bits_(bits) {}

  static constexpr SubsetMask empty() { return SubsetMask{}; }

  constexpr std::uint32_t bits() const { return bits_; }
  constexpr std::size_t index() const { return bits_; }
  constexpr bool is_empty() const { return bits_ == 0; }
  constexpr bool contains(std::size_t event) const { return ((bits_ >> event) & 1U) != 0; }

  constexpr auto operator<=>(const SubsetMask&) const = default;

 private:
  std::uint32_t bits_ = 0;
};

// Ordered, immutable collection of 1..16 distinct, non-empty event labels.
// Copies share the label storage.
class EventSet {
 public:
  explicit EventSet(std::vector<std::string> names);

  std::size_t size() const { return names_->size(); }
  // Number of subsets, 2^n.
  std::size_t atom_count() const { return std::size_t{1} << size(); }
  const std::vector<std::string>& names() const { return *names_; }
  const std::string& name(std::size_t i) const { return (*names_)[i]; }

  bool contains(SubsetMask x) const { return x.index() < atom_count(); }

  friend bool operator==(const EventSet& a, const EventSet& b) {
    return a.names_ == b.names_ || *a.names_ == *b.names_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> names_;
};

// All 2^n subsets in increasing mask order, starting with the empty set.
std::vector<SubsetMask> enumerate_subsets(const EventSet& events);

// Nonnegative finite value set-function tabulated over all subsets.
class ValueFunction {
 public:
  ValueFunction(EventSet events, std::vector<double> values);

  const EventSet& events() const { return events_; }
  std::span<const double> values() const { return values_; }
  double operator[](SubsetMask x) const { return values_[x.index()]; }
  std::size_t size() const { return values_.size(); }

 private:
  EventSet events_;
  std::vector<double> values_;
};

// Probability table over all subsets. Entries are finite and nonnegative and
// sum to 1 within kNormalizationTolerance.
class PowersetDistribution {
 public:
  // Checks the invariants as-is (no rescaling).
  PowersetDistribution(EventSet events, std::vector<double> probs);

  const EventSet& events() const { return events_; }
  std::span<const double> probs() const { return probs_; }
  double operator[](SubsetMask x) const { return probs_[x.index()]; }
  std::size_t size() const { return probs_.size(); }

  friend bool operator==(const PowersetDistribution& a, const PowersetDistribution& b) {
    return a.events_ == b.events_ && a.probs_ == b.probs_;
  }

 private:
  EventSet events_;
  std::vector<double> probs_;
};

// Validates a raw table read from the outside world. A sum within
// kInputNormalizationTolerance of 1 is accepted; if it is further than
// kNormalizationTolerance from 1 the table is rescaled by its sum.
PowersetDistribution validate_distribution(std::vector<double> probs, const EventSet& events);

// Sum over X of p(X) * v(X), with compensated summation.
double mean_value(const PowersetDistribution& p, const ValueFunction& v);

// Same, for an arbitrary (possibly signed) table of the right length.
double mean_value(const PowersetDistribution& p, std::span<const double> values);

// Masks with p(X) > 0, increasing.
std::vector<SubsetMask> support(const PowersetDistribution& p);

}  // namespace evt
