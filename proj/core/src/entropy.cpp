#include "evt/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "evt/error.hpp"
#include "evt/summation.hpp"

namespace evt {

namespace {

void check_shared_events(const EventSet& a, const EventSet& b) {
  if (!(a == b)) throw Error(Errc::kEventSetMismatch, "distributions use different events");
}

void check_identity_preconditions(const GibbsModel& model) {
  if (model.alpha() == 0.0) {
    throw Error(Errc::kZeroAlpha, "identities divide by alpha; alpha = 0");
  }
  if (model.base()[SubsetMask::empty()] <= 0.0) {
    throw Error(Errc::kEmptySetExcluded, "p*(empty) = 0");
  }
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

}  // namespace

double relative_entropy(const PowersetDistribution& p, const PowersetDistribution& q) {
  check_shared_events(p.events(), q.events());
  const auto ps = p.probs();
  const auto qs = q.probs();
  CompensatedSum sum;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps[i] <= 0.0) continue;
    if (qs[i] <= 0.0) return std::numeric_limits<double>::infinity();
    if (ps[i] != qs[i]) sum += ps[i] * std::log(ps[i] / qs[i]);
  }
  return std::max(sum.value(), 0.0);
}

double bregman_kernel(double g) {
  if (g == 0.0) return 1.0;
  return g * std::log(g) - g + 1.0;
}

double pointwise_value_identity_residual(const GibbsModel& model, SubsetMask x) {
  check_identity_preconditions(model);
  const auto& base = model.base();
  if (!base.events().contains(x) || base[x] <= 0.0) {
    throw Error(Errc::kOutOfSupport, "mask " + std::to_string(x.bits()) + " is outside support(p*)");
  }
  if (x.is_empty()) return 0.0;
  const auto empty = SubsetMask::empty();
  const auto& p = model.distribution();
  const auto& v = model.value();
  const double inv_alpha = 1.0 / model.alpha();
  const double rhs = inv_alpha * std::log(p[x] / base[x]) +
                     inv_alpha * std::log(base[empty] / p[empty]) + v[empty];
  return v[x] - rhs;
}

MeanEntropyRelation mean_entropy_relation(const GibbsModel& model) {
  check_identity_preconditions(model);
  const auto empty = SubsetMask::empty();
  const auto& p = model.distribution();
  MeanEntropyRelation rel;
  rel.mean = mean_value(p, model.value());
  rel.relative_entropy = relative_entropy(p, model.base());
  rel.empty_set_term = std::log(model.base()[empty] / p[empty]);
  const double inv_alpha = 1.0 / model.alpha();
  rel.reconstructed_mean = inv_alpha * rel.relative_entropy + inv_alpha * rel.empty_set_term +
                           model.value()[empty];
  return rel;
}

std::uint64_t split_stream(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1));
}

FeasibleSampler::FeasibleSampler(PowersetDistribution base, ValueFunction value, double target,
                                 std::uint64_t seed, std::size_t max_resamples,
                                 std::optional<PowersetDistribution> gibbs_point)
    : base_(std::move(base)),
      value_(std::move(value)),
      target_(target),
      seed_(seed),
      max_resamples_(max_resamples),
      gibbs_point_(std::move(gibbs_point)) {
  const MeanRange range = attainable_mean_range(base_, value_);
  if (!(target_ >= range.lo && target_ <= range.hi)) {
    throw Error(Errc::kTargetOutOfRange, "target " + std::to_string(target_) + " outside [" +
                                             std::to_string(range.lo) + ", " +
                                             std::to_string(range.hi) + "]");
  }
  degenerate_ = range.degenerate;
  for (std::size_t i = 0; i < base_.size(); ++i) {
    if (base_.probs()[i] > 0.0) atoms_.push_back(i);
  }
  if (gibbs_point_) {
    check_shared_events(gibbs_point_->events(), base_.events());
  } else if (!degenerate_ && range.attainable(target_)) {
    gibbs_point_ = solve_alpha_for_mean(base_, value_, target_, 1e-13).distribution();
  }
}

std::size_t FeasibleSampler::dimension() const {
  const std::size_t rank = (degenerate_ || atoms_.size() < 2) ? 1 : 2;
  return atoms_.size() - rank;
}

PowersetDistribution FeasibleSampler::draw(std::uint64_t index) const {
  if (dimension() == 0) return unique_point();
  std::mt19937_64 rng(split_stream(seed_, index));
  if (degenerate_) return random_on_support(rng);
  std::bernoulli_distribution coin(0.5);
  const bool use_perturbation = coin(rng);
  PowersetDistribution q = (use_perturbation && gibbs_point_) ? perturb(rng) : straddle(rng);
  const double mean = mean_value(q, value_);
  if (std::abs(mean - target_) > kFeasibleMeanTolerance) {
    throw Error(Errc::kDidNotConverge, "feasible draw missed the target mean by " +
                                           std::to_string(mean - target_));
  }
  return q;
}

PowersetDistribution FeasibleSampler::unique_point() const {
  std::vector<double> q(base_.size(), 0.0);
  if (atoms_.size() == 1) {
    q[atoms_[0]] = 1.0;
  } else {
    std::size_t lo = atoms_[0];
    std::size_t hi = atoms_[1];
    const auto v = value_.values();
    if (v[lo] > v[hi]) std::swap(lo, hi);
    // Weights of the two-atom mixture with mean target.
    q[lo] = (v[hi] - target_) / (v[hi] - v[lo]);
    q[hi] = (target_ - v[lo]) / (v[hi] - v[lo]);
  }
  return validate_distribution(std::move(q), base_.events());
}

// Normalized exponentials of Gaussian scores on support(p*). The score scale
// is itself random so that the means cover the range rather than clustering
// around the unweighted average of V.
PowersetDistribution FeasibleSampler::random_on_support(std::mt19937_64& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> scale_dist(0.25, 4.0);
  const double scale = scale_dist(rng);
  std::vector<double> scores(atoms_.size());
  double top = -std::numeric_limits<double>::infinity();
  for (double& s : scores) {
    s = scale * normal(rng);
    top = std::max(top, s);
  }
  std::vector<double> q(base_.size(), 0.0);
  CompensatedSum total;
  for (std::size_t k = 0; k < atoms_.size(); ++k) {
    q[atoms_[k]] = std::exp(scores[k] - top);
    total += q[atoms_[k]];
  }
  const double sum = total.value();
  for (double& x : q) x /= sum;
  return validate_distribution(std::move(q), base_.events());
}

PowersetDistribution FeasibleSampler::straddle(std::mt19937_64& rng) const {
  std::optional<PowersetDistribution> below;
  std::optional<PowersetDistribution> above;
  double mean_below = 0.0;
  double mean_above = 0.0;
  for (std::size_t r = 0; r < max_resamples_ && !(below && above); ++r) {
    auto q = random_on_support(rng);
    const double m = mean_value(q, value_);
    if (m == target_) return q;
    if (m < target_ && !below) {
      below = std::move(q);
      mean_below = m;
    } else if (m > target_ && !above) {
      above = std::move(q);
      mean_above = m;
    }
  }
  if (!(below && above)) {
    throw Error(Errc::kResampleBudgetExhausted,
                "no pair of random distributions straddles target " + std::to_string(target_) +
                    " within " + std::to_string(max_resamples_) + " draws");
  }
  const double t = (mean_above - target_) / (mean_above - mean_below);
  std::vector<double> q(base_.size(), 0.0);
  for (std::size_t i : atoms_) q[i] = t * (*below)[SubsetMask(i)] + (1.0 - t) * (*above)[SubsetMask(i)];
  return validate_distribution(std::move(q), base_.events());
}

// Moves the Gibbs point along a random direction orthogonal to both the
// all-ones vector and V (restricted to the support), so that total mass and
// mean are unchanged, by a random fraction of the distance to the boundary.
PowersetDistribution FeasibleSampler::perturb(std::mt19937_64& rng) const {
  const std::size_t k = atoms_.size();
  const auto v = value_.values();
  std::vector<double> ones(k, 1.0 / std::sqrt(static_cast<double>(k)));
  std::vector<double> centered(k);
  double v_avg = 0.0;
  for (std::size_t j = 0; j < k; ++j) v_avg += v[atoms_[j]];
  v_avg /= static_cast<double>(k);
  double norm = 0.0;
  for (std::size_t j = 0; j < k; ++j) {
    centered[j] = v[atoms_[j]] - v_avg;
    norm += centered[j] * centered[j];
  }
  norm = std::sqrt(norm);
  for (double& c : centered) c /= norm;

  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<double> dir(k);
  for (double& d : dir) d = normal(rng);
  for (const auto* basis : {&ones, &centered}) {
    // Two passes of Gram-Schmidt keep the residual component at rounding level.
    for (int pass = 0; pass < 2; ++pass) {
      double dot = 0.0;
      for (std::size_t j = 0; j < k; ++j) dot += dir[j] * (*basis)[j];
      for (std::size_t j = 0; j < k; ++j) dir[j] -= dot * (*basis)[j];
    }
  }

  const auto& g = *gibbs_point_;
  double step_up = std::numeric_limits<double>::infinity();
  double step_down = std::numeric_limits<double>::infinity();
  for (std::size_t j = 0; j < k; ++j) {
    const double pj = g[SubsetMask(atoms_[j])];
    if (dir[j] < 0.0) step_up = std::min(step_up, pj / -dir[j]);
    if (dir[j] > 0.0) step_down = std::min(step_down, pj / dir[j]);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double u = unit(rng);
  const double step = -step_down + u * (step_up + step_down);

  std::vector<double> q(base_.size(), 0.0);
  for (std::size_t j = 0; j < k; ++j) {
    q[atoms_[j]] = std::max(0.0, g[SubsetMask(atoms_[j])] + step * dir[j]);
  }
  return validate_distribution(std::move(q), base_.events());
}

PowersetDistribution sample_feasible(const FeasibleSampler& sampler, std::uint64_t index) {
  return sampler.draw(index);
}

DominanceTrial dominance_trial(const PowersetDistribution& base,
                               const PowersetDistribution& gibbs_point,
                               const PowersetDistribution& competitor) {
  DominanceTrial trial;
  const double gibbs_entropy = relative_entropy(gibbs_point, base);
  trial.competitor_entropy = relative_entropy(competitor, base);
  trial.gap = trial.competitor_entropy - gibbs_entropy;

  CompensatedSum decomposition;
  const auto pg = gibbs_point.probs();
  const auto pq = competitor.probs();
  for (std::size_t i = 0; i < pg.size(); ++i) {
    if (pg[i] > 0.0) {
      decomposition += pg[i] * bregman_kernel(pq[i] / pg[i]);
    } else if (pq[i] > 0.0) {
      decomposition += std::numeric_limits<double>::infinity();
    }
  }
  trial.decomposition_residual = std::abs(trial.gap - decomposition.value());
  if (std::isinf(trial.gap) && std::isinf(decomposition.value())) trial.decomposition_residual = 0.0;
  return trial;
}

VerificationReport verify_h_theorem(const PowersetDistribution& base, const ValueFunction& value,
                                    double target, std::size_t trials, std::uint64_t seed,
                                    const VerifyOptions& options) {
  if (trials == 0) throw Error(Errc::kInvalidArgument, "trials must be >= 1");
  const GibbsModel model = solve_alpha_for_mean(base, value, target, options.solver_tol);
  const auto& gibbs_point = model.distribution();
  const FeasibleSampler sampler(base, value, target, seed, options.max_resamples, gibbs_point);

  std::vector<DominanceTrial> results(trials);
  std::vector<std::exception_ptr> failures(trials);
  auto run_range = [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      try {
        results[i] = dominance_trial(base, gibbs_point, sampler.draw(i));
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };

  std::size_t threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<std::size_t>(threads, 1, trials);
  if (threads == 1) {
    run_range(0, trials);
  } else {
    std::vector<std::jthread> workers;
    const std::size_t chunk = (trials + threads - 1) / threads;
    for (std::size_t begin = 0; begin < trials; begin += chunk) {
      workers.emplace_back(run_range, begin, std::min(trials, begin + chunk));
    }
  }
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  VerificationReport report;
  report.trials = trials;
  report.alpha = model.alpha();
  report.gibbs_entropy = relative_entropy(gibbs_point, base);
  report.min_competitor_entropy = std::numeric_limits<double>::infinity();
  report.worst_gap = std::numeric_limits<double>::infinity();
  for (const auto& r : results) {
    report.min_competitor_entropy = std::min(report.min_competitor_entropy, r.competitor_entropy);
    report.worst_gap = std::min(report.worst_gap, r.gap);
    report.max_decomposition_residual =
        std::max(report.max_decomposition_residual, r.decomposition_residual);
  }
  report.passed = report.worst_gap >= -kGapTolerance;
  return report;
}

}  // namespace evt
