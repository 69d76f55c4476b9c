#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "evt/error.hpp"
#include "evt/powerset.hpp"
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

}  // namespace

TEST_SUITE("powerset") {

TEST_CASE("event set rejects bad labels and sizes") {
  CHECK(error_code([] { EventSet({}); }) == Errc::kInvalidEventSet);
  CHECK(error_code([] { EventSet({"a", "a"}); }) == Errc::kInvalidEventSet);
  CHECK(error_code([] { EventSet({"a", ""}); }) == Errc::kInvalidEventSet);
  CHECK(error_code([] { make_events(17); }) == Errc::kTooManyEvents);
  CHECK(make_events(16).atom_count() == 65536);
}

TEST_CASE("enumerate_subsets is exhaustive and ordered") {
  const auto one = enumerate_subsets(make_events(1));
  REQUIRE(one.size() == 2);
  CHECK(one[0] == SubsetMask(0));
  CHECK(one[1] == SubsetMask(1));

  const auto two = enumerate_subsets(make_events(2));
  REQUIRE(two.size() == 4);
  for (std::uint32_t i = 0; i < 4; ++i) CHECK(two[i].bits() == i);

  for (std::size_t n = 1; n <= 10; ++n) {
    const auto masks = enumerate_subsets(make_events(n));
    CHECK(masks.size() == (std::size_t{1} << n));
    CHECK(masks.front().is_empty());
    CHECK(std::set<SubsetMask>(masks.begin(), masks.end()).size() == masks.size());
  }
}

TEST_CASE("validate_distribution") {
  const auto e1 = make_events(1);
  const auto e2 = make_events(2);
  CHECK(validate_distribution({0.5, 0.5}, e1).probs()[1] == 0.5);
  CHECK(error_code([&] { validate_distribution({0.7, 0.4}, e1); }) == Errc::kNotNormalized);
  CHECK(error_code([&] { validate_distribution({1.0, -1e-15, 0, 0}, e2); }) ==
        Errc::kNegativeProbability);
  CHECK(error_code([&] { validate_distribution({1.0}, e1); }) == Errc::kWrongLength);
  CHECK(error_code([&] { validate_distribution({NAN, 1.0}, e1); }) == Errc::kNonFinite);

  SUBCASE("small drift is rescaled to the strict invariant") {
    const auto p = validate_distribution({0.5 + 4e-10, 0.5}, e1);
    CHECK(std::abs(p.probs()[0] + p.probs()[1] - 1.0) <= kNormalizationTolerance);
  }
  SUBCASE("already-normalized tables are kept bit for bit") {
    const std::vector<double> raw{0.1, 0.2, 0.3, 0.4};
    const auto p = validate_distribution(raw, e2);
    CHECK(std::equal(raw.begin(), raw.end(), p.probs().begin()));
  }
  SUBCASE("drift beyond 1e-9 is rejected") {
    CHECK(error_code([&] { validate_distribution({0.5 + 2e-9, 0.5}, e1); }) ==
          Errc::kNotNormalized);
  }
}

TEST_CASE("value function requires finite nonnegative entries") {
  const auto e1 = make_events(1);
  CHECK(error_code([&] { ValueFunction(e1, {0.0, -1.0}); }) == Errc::kNegativeValue);
  CHECK(error_code([&] { ValueFunction(e1, {0.0, INFINITY}); }) == Errc::kNonFinite);
  CHECK(error_code([&] { ValueFunction(e1, {0.0}); }) == Errc::kWrongLength);
}

TEST_CASE("mean_value examples") {
  const auto e1 = make_events(1);
  const ValueFunction v01(e1, {0.0, 1.0});
  CHECK(mean_value(validate_distribution({0.5, 0.5}, e1), v01) == 0.5);
  CHECK(mean_value(validate_distribution({2.0 / 3.0, 1.0 / 3.0}, e1), v01) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-15));

  const auto e2 = make_events(2);
  const auto p = validate_distribution({0.643914, 0.236883, 0.087144, 0.032059}, e2);
  CHECK(std::abs(mean_value(p, ValueFunction(e2, {0, 1, 2, 3})) - 0.507348) <= 1e-6);

  CHECK(error_code([&] { mean_value(validate_distribution({0.5, 0.5}, e1), ValueFunction(e2, {0, 1, 2, 3})); }) ==
        Errc::kEventSetMismatch);
}

TEST_CASE("support examples") {
  const auto e1 = make_events(1);
  CHECK(support(validate_distribution({0.5, 0.5}, e1)) ==
        std::vector<SubsetMask>{SubsetMask(0), SubsetMask(1)});
  CHECK(support(validate_distribution({1.0, 0.0}, e1)) == std::vector<SubsetMask>{SubsetMask(0)});
  CHECK(support(validate_distribution({0, 0.25, 0.25, 0.5}, make_events(2))) ==
        std::vector<SubsetMask>{SubsetMask(1), SubsetMask(2), SubsetMask(3)});
}

TEST_CASE("mean_value is linear and bounded by the support values") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coef(-10.0, 10.0);
  std::uniform_int_distribution<int> size(1, 8);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = evt::testing::random_instance(static_cast<std::size_t>(size(rng)), rng);
    std::mt19937_64 rng2(trial);
    const auto v2 = evt::testing::random_instance(a.events.size(), rng2).value;
    const double ca = coef(rng);
    const double cb = coef(rng);
    std::vector<double> combined(a.value.size());
    for (std::size_t i = 0; i < combined.size(); ++i) {
      combined[i] = ca * a.value.values()[i] + cb * v2.values()[i];
    }
    const double lhs = mean_value(a.base, combined);
    const double rhs = ca * mean_value(a.base, a.value.values()) + cb * mean_value(a.base, v2.values());
    CHECK(std::abs(lhs - rhs) <= 1e-12);

    double lo = INFINITY;
    double hi = -INFINITY;
    for (auto x : support(a.base)) {
      lo = std::min(lo, a.value[x]);
      hi = std::max(hi, a.value[x]);
    }
    const double m = mean_value(a.base, a.value);
    CHECK(lo <= m);
    CHECK(m <= hi);
  }
}

}  // TEST_SUITE
