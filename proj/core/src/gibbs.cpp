#include "evt/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "evt/error.hpp"
#include "evt/summation.hpp"

namespace evt {

namespace {

void check_shared_events(const PowersetDistribution& base, const ValueFunction& value) {
  if (!(base.events() == value.events())) {
    throw Error(Errc::kEventSetMismatch, "base distribution and value function use different events");
  }
}

struct Tilt {
  std::vector<double> probs;
  double log_z = 0.0;
};

// Values are measured from the smallest value on the support so that a
// constant shift of V cancels exactly (when representable) before any
// exponential is taken.
Tilt tilt(const PowersetDistribution& base, const ValueFunction& value, double alpha) {
  const auto pstar = base.probs();
  const auto v = value.values();
  Tilt out;
  if (alpha == 0.0) {
    out.probs.assign(pstar.begin(), pstar.end());
    return out;
  }

  double reference = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pstar.size(); ++i) {
    if (pstar[i] > 0.0) reference = std::min(reference, v[i]);
  }

  std::vector<double> exponent(pstar.size(), -std::numeric_limits<double>::infinity());
  double shift = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < pstar.size(); ++i) {
    if (pstar[i] > 0.0) {
      exponent[i] = alpha * (v[i] - reference) + std::log(pstar[i]);
      shift = std::max(shift, exponent[i]);
    }
  }
  if (!std::isfinite(shift)) {
    throw Error(Errc::kDidNotConverge, "tilt exponent overflow at alpha=" + std::to_string(alpha));
  }

  out.probs.assign(pstar.size(), 0.0);
  CompensatedSum total;
  for (std::size_t i = 0; i < pstar.size(); ++i) {
    if (pstar[i] > 0.0) {
      out.probs[i] = std::exp(exponent[i] - shift);
      total += out.probs[i];
    }
  }
  const double sum = total.value();
  for (double& p : out.probs) p /= sum;
  out.log_z = alpha * reference + shift + std::log(sum);
  return out;
}

PowersetDistribution tilted_distribution(const PowersetDistribution& base,
                                         const ValueFunction& value, double alpha,
                                         double* log_z) {
  Tilt t = tilt(base, value, alpha);
  if (log_z != nullptr) *log_z = t.log_z;
  return PowersetDistribution(base.events(), std::move(t.probs));
}

double variance(const PowersetDistribution& p, std::span<const double> v) {
  const double mean = mean_value(p, v);
  CompensatedSum sum;
  const auto probs = p.probs();
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] > 0.0) {
      const double d = v[i] - mean;
      sum += probs[i] * d * d;
    }
  }
  return std::max(sum.value(), 0.0);
}

}  // namespace

double alpha_from_rate(Rate rate) {
  if (!(rate.value >= 0.0) || !std::isfinite(rate.value)) {
    throw Error(Errc::kNegativeRate, "rate must be finite and >= 0, got " + std::to_string(rate.value));
  }
  return rate.direction == Direction::kPerception ? -rate.value : rate.value;
}

Rate rate_from_alpha(double alpha) {
  if (alpha > 0.0) return {Direction::kActivity, alpha};
  return {Direction::kPerception, alpha == 0.0 ? 0.0 : -alpha};
}

GibbsModel::GibbsModel(PowersetDistribution base, ValueFunction value, double alpha)
    : base_(std::move(base)),
      value_(std::move(value)),
      alpha_(alpha),
      distribution_(base_) {
  check_shared_events(base_, value_);
  if (!std::isfinite(alpha_)) {
    throw Error(Errc::kInvalidArgument, "alpha must be finite");
  }
  distribution_ = tilted_distribution(base_, value_, alpha_, &log_z_);
}

GibbsModel::GibbsModel(PowersetDistribution base, ValueFunction value, Rate rate)
    : GibbsModel(std::move(base), std::move(value), alpha_from_rate(rate)) {}

const PowersetDistribution& gibbs_distribution(const GibbsModel& model) {
  return model.distribution();
}

double ratio_form(const GibbsModel& model, SubsetMask x) {
  const auto empty = SubsetMask::empty();
  const double base_empty = model.base()[empty];
  if (base_empty <= 0.0) {
    throw Error(Errc::kEmptySetExcluded, "p*(empty) = 0, ratio form undefined");
  }
  if (x == empty) return 1.0;
  const auto& v = model.value();
  return std::exp(model.alpha() * (v[x] - v[empty])) * model.base()[x] / base_empty;
}

double gibbs_factor(const ValueFunction& value, Rate rate, SubsetMask x) {
  return std::exp(alpha_from_rate(rate) * value[x]);
}

MeanRange attainable_mean_range(const PowersetDistribution& base, const ValueFunction& value) {
  check_shared_events(base, value);
  MeanRange range{std::numeric_limits<double>::infinity(),
                  -std::numeric_limits<double>::infinity(), false};
  const auto pstar = base.probs();
  for (std::size_t i = 0; i < pstar.size(); ++i) {
    if (pstar[i] > 0.0) {
      range.lo = std::min(range.lo, value.values()[i]);
      range.hi = std::max(range.hi, value.values()[i]);
    }
  }
  range.degenerate = range.lo == range.hi;
  return range;
}

GibbsModel solve_alpha_for_mean(const PowersetDistribution& base, const ValueFunction& value,
                                double target, double tol) {
  if (!(tol > 0.0)) throw Error(Errc::kInvalidArgument, "tol must be > 0");
  if (!std::isfinite(target)) throw Error(Errc::kInvalidArgument, "target must be finite");
  const MeanRange range = attainable_mean_range(base, value);
  if (range.degenerate) {
    if (std::abs(target - range.lo) > tol) {
      throw Error(Errc::kDegenerateMismatch, "value is constant " + std::to_string(range.lo) +
                                                 " on the support, target " +
                                                 std::to_string(target));
    }
    return GibbsModel(base, value, 0.0);
  }
  if (!range.attainable(target)) {
    throw Error(Errc::kTargetOutOfRange, "target " + std::to_string(target) +
                                             " outside the open range (" +
                                             std::to_string(range.lo) + ", " +
                                             std::to_string(range.hi) + ")");
  }

  const auto v = value.values();
  auto mean_at = [&](double alpha) {
    return mean_value(tilted_distribution(base, value, alpha, nullptr), v);
  };

  const double mean0 = mean_value(base, v);
  if (std::abs(mean0 - target) <= tol) return GibbsModel(base, value, 0.0);

  // Bracket [below, above] with mean(below) < target < mean(above).
  const double direction = mean0 < target ? 1.0 : -1.0;
  double inner = 0.0;
  double outer = direction;
  constexpr int kMaxDoublings = 1100;
  for (int k = 0;; ++k) {
    const double m = mean_at(outer);
    if (std::abs(m - target) <= tol) return GibbsModel(base, value, outer);
    if ((m - target) * direction > 0.0) break;
    if (k == kMaxDoublings) {
      throw Error(Errc::kDidNotConverge, "could not bracket alpha for target " + std::to_string(target));
    }
    inner = outer;
    outer *= 2.0;
  }
  double below = std::min(inner, outer);
  double above = std::max(inner, outer);

  double alpha = 0.5 * (below + above);
  constexpr int kMaxIterations = 2000;
  for (int it = 0; it < kMaxIterations; ++it) {
    const auto p = tilted_distribution(base, value, alpha, nullptr);
    const double m = mean_value(p, v);
    const double residual = m - target;
    if (std::abs(residual) <= tol) return GibbsModel(base, value, alpha);
    if (residual < 0.0) {
      below = alpha;
    } else {
      above = alpha;
    }
    if (!(below < above) || std::nextafter(below, above) == above) break;

    const double slope = variance(p, v);
    double next = slope > 0.0 ? alpha - residual / slope : std::numeric_limits<double>::quiet_NaN();
    if (!(next > below && next < above)) next = 0.5 * (below + above);
    if (next == alpha) next = 0.5 * (below + above);
    alpha = next;
  }
  throw Error(Errc::kDidNotConverge, "mean tolerance " + std::to_string(tol) +
                                         " not reached for target " + std::to_string(target));
}

double mean_alpha_derivative(const GibbsModel& model) {
  return variance(model.distribution(), model.value().values());
}

}  // namespace evt
