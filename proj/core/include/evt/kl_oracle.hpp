#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "evt/powerset.hpp"

namespace evt {

// Independent minimizer of H(p || p*) over
//   { p >= 0, sum p = 1, sum p V = target, support(p) within support(p*) },
// using only the polytope's vertices and the gradient of the objective. It
// never evaluates the exponential-family formula, so its answer can be
// compared against the closed form.

struct OracleConfig {
  std::size_t max_iters = 5000;
  // Stop once the Frank-Wolfe duality gap, an upper bound on the
  // suboptimality of the objective, is at most tol.
  double tol = 1e-8;
  // 0 starts from the uniform average of all vertices; any other seed starts
  // from a random strictly positive convex combination of them.
  std::uint64_t seed = 0;
  // Record per-iterate objective and feasibility in OracleResult::trace.
  bool record_trace = false;
};

struct OracleTrace {
  std::vector<double> objective;
  std::vector<double> sum_error;
  std::vector<double> mean_error;
  std::vector<double> min_entry;
};

struct OracleResult {
  PowersetDistribution distribution;
  double entropy = 0.0;
  std::size_t iterations = 0;
  double duality_gap = 0.0;
  bool converged = false;
  OracleTrace trace;
};

// Vertices of the feasible polytope: single atoms with V(X) = target and
// two-atom mixtures over pairs with V(X) < target < V(Y).
std::vector<PowersetDistribution> polytope_vertices(const std::vector<SubsetMask>& base_support,
                                                    const ValueFunction& value, double target);

// Pairwise Frank-Wolfe with an exact vertex-scan linear minimization oracle
// and exact line search. Non-convergence is reported through
// OracleResult::converged rather than thrown.
OracleResult minimize_kl(const PowersetDistribution& base, const ValueFunction& value,
                         double target, const OracleConfig& config = {});

}  // namespace evt
