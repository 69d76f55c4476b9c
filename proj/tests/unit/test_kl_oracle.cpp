#include <doctest.h>

#include <cmath>
#include <random>

#include "evt/entropy.hpp"
#include "evt/error.hpp"
#include "evt/kl_oracle.hpp"
#include "support/oracles.hpp"

using namespace evt;
using evt::testing::make_events;

namespace {

Errc error_code(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an evt::Error");
  return Errc::kSyntax;
}

bool has_vertex(const std::vector<PowersetDistribution>& vs, std::vector<double> expected) {
  for (const auto& v : vs) {
    if (evt::testing::linf(v.probs(), expected) <= 1e-15) return true;
  }
  return false;
}

}  // namespace

TEST_SUITE("kl_oracle") {

TEST_CASE("polytope_vertices examples") {
  const auto e1 = make_events(1);
  const ValueFunction v1(e1, {0.0, 1.0});
  const auto single = polytope_vertices({SubsetMask(0), SubsetMask(1)}, v1, 1.0 / 3.0);
  REQUIRE(single.size() == 1);
  CHECK(std::abs(single[0].probs()[0] - 2.0 / 3.0) <= 1e-15);
  CHECK(std::abs(single[0].probs()[1] - 1.0 / 3.0) <= 1e-15);

  const auto e2 = make_events(2);
  const ValueFunction v2(e2, {0, 1, 2, 3});
  const auto all = enumerate_subsets(e2);
  const auto vs = polytope_vertices(all, v2, 1.0);
  CHECK(vs.size() == 3);
  CHECK(has_vertex(vs, {0, 1, 0, 0}));
  CHECK(has_vertex(vs, {0.5, 0, 0.5, 0}));
  CHECK(has_vertex(vs, {2.0 / 3.0, 0, 0, 1.0 / 3.0}));

  CHECK(error_code([&] { polytope_vertices(all, v2, 3.5); }) == Errc::kTargetOutOfRange);
}

TEST_CASE("vertex count bound and feasibility") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const auto inst = evt::testing::random_instance(1 + trial % 6, rng);
    const auto range = attainable_mean_range(inst.base, inst.value);
    const double target = 0.5 * (range.lo + range.hi);
    const auto atoms = support(inst.base);
    const auto vs = polytope_vertices(atoms, inst.value, target);
    const std::size_t k = atoms.size();
    CHECK(vs.size() <= k * (k - 1) / 2 + k);
    for (const auto& v : vs) {
      double sum = 0.0;
      for (double p : v.probs()) sum += p;
      CHECK(std::abs(sum - 1.0) <= 1e-12);
      CHECK(std::abs(mean_value(v, inst.value) - target) <= 1e-12);
    }
  }
}

TEST_CASE("minimize_kl examples") {
  SUBCASE("zero-dimensional polytope") {
    const auto e1 = make_events(1);
    const auto r = minimize_kl(PowersetDistribution(e1, {0.5, 0.5}), ValueFunction(e1, {0, 1}),
                               1.0 / 3.0);
    CHECK(r.converged);
    CHECK(r.iterations == 1);
    CHECK(std::abs(r.distribution.probs()[0] - 2.0 / 3.0) <= 1e-15);
  }

  SUBCASE("doublet matches the beta = 1 closed form") {
    const auto e2 = make_events(2);
    const auto r = minimize_kl(PowersetDistribution(e2, {0.25, 0.25, 0.25, 0.25}),
                               ValueFunction(e2, {0, 1, 2, 3}), 0.507348);
    CHECK(r.converged);
    const std::vector<double> expected{0.643914, 0.236883, 0.087144, 0.032059};
    CHECK(evt::testing::linf(r.distribution.probs(), expected) <= 1e-5);
  }

  SUBCASE("random n = 6 instance agrees with the closed form") {
    std::mt19937_64 rng(59);
    const auto inst = evt::testing::random_instance(6, rng);
    const auto range = attainable_mean_range(inst.base, inst.value);
    const double target = 0.5 * (range.lo + range.hi);
    const auto r = minimize_kl(inst.base, inst.value, target);
    const auto closed = solve_alpha_for_mean(inst.base, inst.value, target, 1e-13);
    const double h_closed = relative_entropy(closed.distribution(), inst.base);
    CHECK(std::abs(r.entropy - h_closed) <= 1e-6);
    CHECK(r.entropy >= h_closed - 1e-10);
    CHECK(r.entropy <= h_closed + 1e-5);
  }

  SUBCASE("out of range") {
    const auto e2 = make_events(2);
    const PowersetDistribution base(e2, {0.25, 0.25, 0.25, 0.25});
    const ValueFunction v(e2, {0, 1, 2, 3});
    CHECK(error_code([&] { minimize_kl(base, v, 3.0); }) == Errc::kTargetOutOfRange);
    CHECK(error_code([&] { minimize_kl(base, v, 1.0, OracleConfig{0, 1e-8, 0, false}); }) ==
          Errc::kInvalidArgument);
  }

  SUBCASE("iteration cap is reported, not thrown") {
    std::mt19937_64 rng(61);
    const auto inst = evt::testing::random_instance(5, rng);
    const auto range = attainable_mean_range(inst.base, inst.value);
    OracleConfig config;
    config.max_iters = 2;
    const auto r = minimize_kl(inst.base, inst.value, 0.5 * (range.lo + range.hi), config);
    CHECK_FALSE(r.converged);
    CHECK(r.iterations == 2);
    CHECK(r.duality_gap > config.tol);
  }
}

TEST_CASE("iterates stay feasible and descend") {
  std::mt19937_64 rng(67);
  for (int trial = 0; trial < 12; ++trial) {
    const auto inst = evt::testing::random_instance(2 + trial % 5, rng);
    const auto range = attainable_mean_range(inst.base, inst.value);
    OracleConfig config;
    config.record_trace = true;
    config.seed = trial % 2 == 0 ? 0 : 1000 + trial;
    const auto r = minimize_kl(inst.base, inst.value, 0.4 * range.lo + 0.6 * range.hi, config);
    const auto& t = r.trace;
    REQUIRE(t.objective.size() >= 1);
    for (std::size_t i = 0; i < t.objective.size(); ++i) {
      CHECK(t.sum_error[i] <= 1e-12);
      CHECK(t.mean_error[i] <= 1e-9);
      CHECK(t.min_entry[i] >= -1e-15);
      if (i > 0) CHECK(t.objective[i] <= t.objective[i - 1] + 1e-12);
    }
  }
}

TEST_CASE("start point does not change the answer") {
  std::mt19937_64 rng(71);
  const auto inst = evt::testing::random_instance(5, rng);
  const auto range = attainable_mean_range(inst.base, inst.value);
  const double target = 0.5 * (range.lo + range.hi);
  OracleConfig seeded;
  seeded.seed = 12345;
  const auto a = minimize_kl(inst.base, inst.value, target);
  const auto b = minimize_kl(inst.base, inst.value, target, seeded);
  CHECK(evt::testing::linf(a.distribution.probs(), b.distribution.probs()) <= 1e-6);
}

TEST_CASE("zeros in p* shrink the atom set") {
  const auto e3 = make_events(3);
  const PowersetDistribution base(e3, {0.2, 0.0, 0.3, 0.1, 0.0, 0.25, 0.15, 0.0});
  const ValueFunction v(e3, {0.5, 4.0, 1.0, 2.0, 0.0, 3.0, 2.5, 5.0});
  const auto r = minimize_kl(base, v, 1.7);
  const auto closed = solve_alpha_for_mean(base, v, 1.7, 1e-13);
  CHECK(r.converged);
  CHECK(support(r.distribution) == support(base));
  CHECK(evt::testing::linf(r.distribution.probs(), closed.distribution().probs()) <= 1e-4);
}

}  // TEST_SUITE
