#pragma once

#include "evt/powerset.hpp"

namespace evt {

// Perception tilts towards low value (Gibbs, rate beta); activity tilts
// towards high value (anti-Gibbs, rate gamma).
enum class Direction { kPerception, kActivity };

// A nonnegative rate together with its direction: beta for perception,
// gamma for activity.
struct Rate {
  Direction direction = Direction::kPerception;
  double value = 0.0;
};

// Signed tilt: alpha = -beta for perception, alpha = +gamma for activity.
double alpha_from_rate(Rate rate);
// alpha <= 0 maps to perception, alpha > 0 to activity.
Rate rate_from_alpha(double alpha);

// The exponential tilt p(X) = exp{alpha V(X)} p*(X) / Z of a base
// distribution. The tilted distribution and ln Z are computed once, at
// construction, in the log domain.
class GibbsModel {
 public:
  GibbsModel(PowersetDistribution base, ValueFunction value, double alpha);
  GibbsModel(PowersetDistribution base, ValueFunction value, Rate rate);

  const PowersetDistribution& base() const { return base_; }
  const ValueFunction& value() const { return value_; }
  const PowersetDistribution& distribution() const { return distribution_; }
  double alpha() const { return alpha_; }
  double beta() const { return alpha_ < 0.0 ? -alpha_ : 0.0; }
  double gamma() const { return alpha_ > 0.0 ? alpha_ : 0.0; }
  Rate rate() const { return rate_from_alpha(alpha_); }
  double log_z() const { return log_z_; }

 private:
  PowersetDistribution base_;
  ValueFunction value_;
  double alpha_;
  double log_z_ = 0.0;
  PowersetDistribution distribution_;
};

const PowersetDistribution& gibbs_distribution(const GibbsModel& model);

// p(X) / p(empty) = exp{alpha (V(X) - V(empty))} p*(X) / p*(empty).
// Throws kEmptySetExcluded when p*(empty) = 0.
double ratio_form(const GibbsModel& model, SubsetMask x);

// exp{-beta V(X)} for perception, exp{gamma V(X)} for activity.
double gibbs_factor(const ValueFunction& value, Rate rate, SubsetMask x);

struct MeanRange {
  double lo = 0.0;
  double hi = 0.0;
  // V is constant on the support of the base.
  bool degenerate = false;

  // Reachable by some finite tilt: lo < t < hi, or t == lo when degenerate.
  bool attainable(double target) const {
    return degenerate ? target == lo : (lo < target && target < hi);
  }
};

MeanRange attainable_mean_range(const PowersetDistribution& base, const ValueFunction& value);

// Finds alpha with |E_{p_alpha} V - target| <= tol. The mean is
// nondecreasing in alpha, so alpha is bracketed by doubling away from 0 and
// then refined by Newton steps safeguarded by bisection.
GibbsModel solve_alpha_for_mean(const PowersetDistribution& base, const ValueFunction& value,
                                double target, double tol);

// d/d alpha of E_{p_alpha} V, which is Var_{p_alpha}(V).
double mean_alpha_derivative(const GibbsModel& model);

}  // namespace evt
