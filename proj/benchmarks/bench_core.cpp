#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "evt/entropy.hpp"
#include "evt/gibbs.hpp"
#include "evt/kl_oracle.hpp"
#include "evt/sampling.hpp"

namespace {

struct Problem {
  evt::PowersetDistribution base;
  evt::ValueFunction value;
  double target;
};

Problem make_problem(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("e" + std::to_string(i));
  const evt::EventSet events(names);
  std::mt19937_64 rng(n);
  std::uniform_real_distribution<double> w(0.05, 1.0);
  std::uniform_real_distribution<double> v(0.0, 5.0);
  std::vector<double> p(events.atom_count());
  std::vector<double> vals(events.atom_count());
  double total = 0.0;
  for (auto& x : p) total += (x = w(rng));
  for (auto& x : p) x /= total;
  for (auto& x : vals) x = v(rng);
  auto base = evt::validate_distribution(p, events);
  evt::ValueFunction value(events, vals);
  const auto range = evt::attainable_mean_range(base, value);
  return {std::move(base), std::move(value), 0.5 * (range.lo + range.hi)};
}

void BM_Gibbs(benchmark::State& state) {
  const auto pr = make_problem(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::GibbsModel(pr.base, pr.value, 1.3).log_z());
  }
}
BENCHMARK(BM_Gibbs)->DenseRange(2, 16, 2);

void BM_SolveAlpha(benchmark::State& state) {
  const auto pr = make_problem(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::solve_alpha_for_mean(pr.base, pr.value, pr.target, 1e-12).alpha());
  }
}
BENCHMARK(BM_SolveAlpha)->DenseRange(2, 16, 2);

void BM_RelativeEntropy(benchmark::State& state) {
  const auto pr = make_problem(state.range(0));
  const evt::GibbsModel m(pr.base, pr.value, -0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::relative_entropy(m.distribution(), pr.base));
  }
}
BENCHMARK(BM_RelativeEntropy)->DenseRange(2, 16, 2);

void BM_MinimizeKl(benchmark::State& state) {
  const auto pr = make_problem(state.range(0));
  evt::OracleConfig config;
  config.max_iters = 20000;
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::minimize_kl(pr.base, pr.value, pr.target, config).entropy);
  }
}
BENCHMARK(BM_MinimizeKl)->DenseRange(2, 8, 2)->Unit(benchmark::kMillisecond);

void BM_VerifyTrial(benchmark::State& state) {
  const auto pr = make_problem(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::verify_h_theorem(pr.base, pr.value, pr.target, 100, 1).worst_gap);
  }
  state.SetItemsProcessed(state.iterations() * 100);
}
BENCHMARK(BM_VerifyTrial)->DenseRange(2, 8, 2)->Unit(benchmark::kMicrosecond);

void BM_Sample(benchmark::State& state) {
  const auto pr = make_problem(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(evt::sample(pr.base, 10000, 3).draws.size());
  }
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_Sample)->DenseRange(2, 12, 5);

}  // namespace

BENCHMARK_MAIN();
