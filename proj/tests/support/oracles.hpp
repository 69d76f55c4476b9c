#pragma once

// Test-only reference computations. These deliberately take the most direct
// route (extended precision, no log-domain shifting, no shared helpers with
// the library) so they can serve as independent checks.

#include <cmath>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "evt/powerset.hpp"

namespace evt::testing {

struct Instance {
  EventSet events;
  ValueFunction value;
  PowersetDistribution base;
};

inline EventSet make_events(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  return EventSet(std::move(names));
}

inline PowersetDistribution random_full_support(const EventSet& events, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::vector<double> p(events.atom_count());
  long double sum = 0.0L;
  for (double& x : p) {
    x = u(rng);
    sum += x;
  }
  for (double& x : p) x = static_cast<double>(x / sum);
  return validate_distribution(std::move(p), events);
}

// V uniform in [0, vmax].
inline Instance random_instance(std::size_t n, std::mt19937_64& rng, double vmax = 5.0) {
  auto events = make_events(n);
  std::uniform_real_distribution<double> u(0.0, vmax);
  std::vector<double> v(events.atom_count());
  for (double& x : v) x = u(rng);
  return {events, ValueFunction(events, std::move(v)), random_full_support(events, rng)};
}

// V on the dyadic grid k/1024 in [0, vmax], so V + c is exact for moderate c.
inline Instance random_dyadic_instance(std::size_t n, std::mt19937_64& rng, double vmax = 5.0) {
  auto events = make_events(n);
  std::uniform_int_distribution<int> k(0, static_cast<int>(vmax * 1024));
  std::vector<double> v(events.atom_count());
  for (double& x : v) x = k(rng) / 1024.0;
  return {events, ValueFunction(events, std::move(v)), random_full_support(events, rng)};
}

// exp{alpha V} p* / Z in long double, no shift.
inline std::vector<long double> naive_gibbs(const ValueFunction& value,
                                            const PowersetDistribution& base, long double alpha) {
  std::vector<long double> p(base.size());
  long double z = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    p[i] = std::exp(alpha * static_cast<long double>(value.values()[i])) *
           static_cast<long double>(base.probs()[i]);
    z += p[i];
  }
  for (auto& x : p) x /= z;
  return p;
}

inline long double naive_log_z(const ValueFunction& value, const PowersetDistribution& base,
                               long double alpha) {
  long double z = 0.0L;
  for (std::size_t i = 0; i < base.size(); ++i) {
    z += std::exp(alpha * static_cast<long double>(value.values()[i])) *
         static_cast<long double>(base.probs()[i]);
  }
  return std::log(z);
}

inline long double naive_kl(std::vector<long double> p, std::vector<long double> q) {
  long double h = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] > 0.0L) h += p[i] * std::log(p[i] / q[i]);
  }
  return h;
}

inline std::vector<long double> widen(const PowersetDistribution& p) {
  return {p.probs().begin(), p.probs().end()};
}

inline long double naive_mean(const std::vector<long double>& p, const ValueFunction& v) {
  long double m = 0.0L;
  for (std::size_t i = 0; i < p.size(); ++i) m += p[i] * static_cast<long double>(v.values()[i]);
  return m;
}

inline double linf(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

}  // namespace evt::testing
