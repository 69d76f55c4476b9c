#include "evt/kl_oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "evt/error.hpp"
#include "evt/gibbs.hpp"
#include "evt/summation.hpp"

namespace evt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// At most two atoms; a single-atom vertex has second == first, weight 0.
struct Vertex {
  std::size_t first = 0;
  std::size_t second = 0;
  double first_weight = 1.0;
  double second_weight = 0.0;
};

void check_target(std::span<const double> values, const std::vector<std::size_t>& atoms,
                  double target) {
  double lo = kInf;
  double hi = -kInf;
  for (std::size_t i : atoms) {
    lo = std::min(lo, values[i]);
    hi = std::max(hi, values[i]);
  }
  if (!(target >= lo && target <= hi)) {
    throw Error(Errc::kTargetOutOfRange, "target " + std::to_string(target) + " outside [" +
                                             std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

std::vector<Vertex> enumerate_vertices(std::span<const double> values,
                                       const std::vector<std::size_t>& atoms, double target) {
  check_target(values, atoms, target);
  std::vector<Vertex> vertices;
  for (std::size_t i : atoms) {
    if (values[i] == target) vertices.push_back({i, i, 1.0, 0.0});
  }
  for (std::size_t x : atoms) {
    if (!(values[x] < target)) continue;
    for (std::size_t y : atoms) {
      if (!(values[y] > target)) continue;
      const double span = values[y] - values[x];
      vertices.push_back({x, y, (values[y] - target) / span, (target - values[x]) / span});
    }
  }
  return vertices;
}

std::vector<std::size_t> support_indices(const std::vector<SubsetMask>& masks,
                                         const EventSet& events) {
  std::vector<std::size_t> atoms;
  for (auto m : masks) {
    if (!events.contains(m)) {
      throw Error(Errc::kInvalidArgument, "mask " + std::to_string(m.bits()) + " out of range");
    }
    atoms.push_back(m.index());
  }
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  if (atoms.empty()) throw Error(Errc::kInvalidArgument, "empty support");
  return atoms;
}

double vertex_dot(const Vertex& v, const std::vector<double>& grad) {
  return v.first_weight * grad[v.first] + v.second_weight * grad[v.second];
}

}  // namespace

std::vector<PowersetDistribution> polytope_vertices(const std::vector<SubsetMask>& base_support,
                                                    const ValueFunction& value, double target) {
  const auto atoms = support_indices(base_support, value.events());
  std::vector<PowersetDistribution> out;
  for (const auto& v : enumerate_vertices(value.values(), atoms, target)) {
    std::vector<double> probs(value.size(), 0.0);
    probs[v.first] += v.first_weight;
    probs[v.second] += v.second_weight;
    out.emplace_back(value.events(), std::move(probs));
  }
  return out;
}

OracleResult minimize_kl(const PowersetDistribution& base, const ValueFunction& value,
                         double target, const OracleConfig& config) {
  if (config.max_iters < 1 || !(config.tol > 0.0)) {
    throw Error(Errc::kInvalidArgument, "oracle needs max_iters >= 1 and tol > 0");
  }
  const MeanRange range = attainable_mean_range(base, value);
  if (!range.attainable(target)) {
    throw Error(Errc::kTargetOutOfRange, "target " + std::to_string(target) +
                                             " not strictly inside (" + std::to_string(range.lo) +
                                             ", " + std::to_string(range.hi) + ")");
  }

  const auto pstar = base.probs();
  const auto values = value.values();
  const auto atoms = support_indices(support(base), base.events());
  const auto vertices = enumerate_vertices(values, atoms, target);
  const std::size_t n_atoms = base.size();

  // Active-set weights over all vertices.
  std::vector<double> weight(vertices.size());
  if (config.seed == 0) {
    std::fill(weight.begin(), weight.end(), 1.0 / static_cast<double>(vertices.size()));
  } else {
    std::mt19937_64 rng(config.seed);
    std::exponential_distribution<double> exp1(1.0);
    CompensatedSum total;
    for (double& w : weight) {
      w = exp1(rng) + 1e-3;
      total += w;
    }
    for (double& w : weight) w /= total.value();
  }
  std::vector<double> x(n_atoms, 0.0);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    x[vertices[k].first] += weight[k] * vertices[k].first_weight;
    x[vertices[k].second] += weight[k] * vertices[k].second_weight;
  }

  auto gradient_at = [&](std::size_t i) {
    return x[i] > 0.0 ? 1.0 + std::log(x[i] / pstar[i]) : -kInf;
  };
  std::vector<double> grad(n_atoms, 0.0);
  for (std::size_t i : atoms) grad[i] = gradient_at(i);

  auto objective = [&] {
    CompensatedSum f;
    for (std::size_t i : atoms) {
      if (x[i] > 0.0) f += x[i] * std::log(x[i] / pstar[i]);
    }
    return f.value();
  };
  auto record = [&](OracleTrace& trace) {
    CompensatedSum sum;
    CompensatedSum mean;
    double min_entry = kInf;
    for (std::size_t i : atoms) {
      sum += x[i];
      mean += x[i] * values[i];
      min_entry = std::min(min_entry, x[i]);
    }
    trace.objective.push_back(objective());
    trace.sum_error.push_back(std::abs(sum.value() - 1.0));
    trace.mean_error.push_back(std::abs(mean.value() - target));
    trace.min_entry.push_back(min_entry);
  };

  OracleTrace trace;
  if (config.record_trace) record(trace);

  double gap = kInf;
  std::size_t iterations = 0;
  bool converged = false;
  // Touched atoms of a pairwise direction: toward vertex s, away from vertex a.
  std::array<std::size_t, 4> touched{};
  std::array<double, 4> delta{};

  while (iterations < config.max_iters) {
    ++iterations;

    std::size_t s = 0;
    double s_dot = kInf;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      const double d = vertex_dot(vertices[k], grad);
      if (d < s_dot) {
        s_dot = d;
        s = k;
      }
    }
    std::size_t a = 0;
    double a_dot = -kInf;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
      if (weight[k] <= 0.0) continue;
      const double d = vertex_dot(vertices[k], grad);
      if (d > a_dot) {
        a_dot = d;
        a = k;
      }
    }

    CompensatedSum x_dot;
    for (std::size_t i : atoms) {
      if (x[i] > 0.0) x_dot += x[i] * grad[i];
    }
    gap = x_dot.value() - s_dot;
    if (gap <= config.tol) {
      converged = true;
      break;
    }
    if (s == a) break;

    // d = s - a, merged by atom.
    std::size_t n_touched = 0;
    auto add = [&](std::size_t atom, double amount) {
      if (amount == 0.0) return;
      for (std::size_t j = 0; j < n_touched; ++j) {
        if (touched[j] == atom) {
          delta[j] += amount;
          return;
        }
      }
      touched[n_touched] = atom;
      delta[n_touched] = amount;
      ++n_touched;
    };
    add(vertices[s].first, vertices[s].first_weight);
    add(vertices[s].second, vertices[s].second_weight);
    add(vertices[a].first, -vertices[a].first_weight);
    add(vertices[a].second, -vertices[a].second_weight);

    // phi'(step) for phi(step) = H(x + step d || p*); +inf once an entry
    // with negative direction reaches zero.
    auto slope = [&](double step) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n_touched; ++j) {
        const std::size_t i = touched[j];
        const double xi = x[i] + step * delta[j];
        if (xi <= 0.0) {
          if (delta[j] < 0.0) return kInf;
          if (delta[j] > 0.0) return -kInf;
          continue;
        }
        acc += delta[j] * (1.0 + std::log(xi / pstar[i]));
      }
      return acc;
    };

    const double max_step = weight[a];
    double step;
    if (slope(max_step) <= 0.0) {
      step = max_step;
    } else {
      double lo = 0.0;
      double hi = max_step;
      for (int it = 0; it < 200 && lo < hi && std::nextafter(lo, hi) < hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (slope(mid) <= 0.0) {
          lo = mid;
        } else {
          hi = mid;
        }
      }
      step = lo;
    }
    if (step <= 0.0) break;

    for (std::size_t j = 0; j < n_touched; ++j) {
      const std::size_t i = touched[j];
      x[i] = std::max(0.0, x[i] + step * delta[j]);
      grad[i] = gradient_at(i);
    }
    weight[s] += step;
    weight[a] = step == max_step ? 0.0 : weight[a] - step;

    if (config.record_trace) record(trace);
  }

  // Rounding drift over many steps is far inside the input tolerance.
  OracleResult result{validate_distribution(x, base.events()), 0.0, iterations, gap, converged,
                      std::move(trace)};
  CompensatedSum h;
  for (std::size_t i : atoms) {
    const double p = result.distribution.probs()[i];
    if (p > 0.0) h += p * std::log(p / pstar[i]);
  }
  result.entropy = std::max(h.value(), 0.0);
  return result;
}

}  // namespace evt
