#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "evt/gibbs.hpp"
#include "evt/powerset.hpp"

namespace evt {

// Threshold below which a certification gap counts as a violation.
inline constexpr double kGapTolerance = 1e-10;
// Contract on |gap - sum p_alpha (g ln g - g + 1)|.
inline constexpr double kDecompositionTolerance = 1e-9;
// Contract on the value-identity residuals.
inline constexpr double kIdentityTolerance = 1e-9;
// Mean accuracy of every distribution emitted by FeasibleSampler.
inline constexpr double kFeasibleMeanTolerance = 1e-10;

// H(p || q) = sum p ln(p/q) in nats, with 0 ln(0/.) = 0. Returns +infinity
// when p puts mass outside the support of q.
double relative_entropy(const PowersetDistribution& p, const PowersetDistribution& q);

// g ln g - g + 1, continuous at g = 0 where it equals 1.
double bregman_kernel(double g);

// V(X) - [(1/a) ln(p(X)/p*(X)) + (1/a) ln(p*(empty)/p(empty)) + V(empty)]
// for the tilted distribution p of the model.
double pointwise_value_identity_residual(const GibbsModel& model, SubsetMask x);

struct MeanEntropyRelation {
  double mean = 0.0;
  double relative_entropy = 0.0;
  // ln(p*(empty) / p(empty))
  double empty_set_term = 0.0;
  // (1/a) H + (1/a) ln(p*(empty)/p(empty)) + V(empty)
  double reconstructed_mean = 0.0;
};

MeanEntropyRelation mean_entropy_relation(const GibbsModel& model);

// Draws distributions q with E_q V = target and support(q) within
// support(p*). Draw k is a pure function of (seed, k).
class FeasibleSampler {
 public:
  static constexpr std::size_t kDefaultMaxResamples = 10000;

  // `gibbs_point` is the minimum relative entropy solution at `target`; it is
  // solved for when omitted and the target is strictly attainable.
  FeasibleSampler(PowersetDistribution base, ValueFunction value, double target,
                  std::uint64_t seed, std::size_t max_resamples = kDefaultMaxResamples,
                  std::optional<PowersetDistribution> gibbs_point = std::nullopt);

  const PowersetDistribution& base() const { return base_; }
  const ValueFunction& value() const { return value_; }
  double target() const { return target_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t max_resamples() const { return max_resamples_; }

  // Dimension of the feasible polytope: |support| - rank{1, V} on the support.
  std::size_t dimension() const;

  PowersetDistribution draw(std::uint64_t index) const;

 private:
  PowersetDistribution unique_point() const;
  PowersetDistribution random_on_support(std::mt19937_64& rng) const;
  PowersetDistribution straddle(std::mt19937_64& rng) const;
  PowersetDistribution perturb(std::mt19937_64& rng) const;

  PowersetDistribution base_;
  ValueFunction value_;
  double target_;
  std::uint64_t seed_;
  std::size_t max_resamples_;
  std::vector<std::size_t> atoms_;
  bool degenerate_ = false;
  std::optional<PowersetDistribution> gibbs_point_;
};

PowersetDistribution sample_feasible(const FeasibleSampler& sampler, std::uint64_t index);

// Per-stream seed used by sampler draw `index`.
std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index);

struct DominanceTrial {
  // H(q || p*) - H(p_alpha || p*)
  double gap = 0.0;
  double competitor_entropy = 0.0;
  // |gap - sum p_alpha (g ln g - g + 1)|, g = q / p_alpha
  double decomposition_residual = 0.0;
};

DominanceTrial dominance_trial(const PowersetDistribution& base,
                               const PowersetDistribution& gibbs_point,
                               const PowersetDistribution& competitor);

struct VerificationReport {
  std::size_t trials = 0;
  double alpha = 0.0;
  double gibbs_entropy = 0.0;
  double min_competitor_entropy = 0.0;
  double worst_gap = 0.0;
  double max_decomposition_residual = 0.0;
  bool passed = false;
};

struct VerifyOptions {
  // Mean tolerance handed to the alpha solver.
  double solver_tol = 1e-13;
  std::size_t max_resamples = FeasibleSampler::kDefaultMaxResamples;
  // 0 selects std::thread::hardware_concurrency().
  std::size_t threads = 1;
};

VerificationReport verify_h_theorem(const PowersetDistribution& base, const ValueFunction& value,
                                    double target, std::size_t trials, std::uint64_t seed,
                                    const VerifyOptions& options = {});

}  // namespace evt
