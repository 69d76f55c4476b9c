#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>

#include "evt/entropy.hpp"
#include "evt/error.hpp"
#include "evt/formats.hpp"
#include "evt/gibbs.hpp"
#include "evt/kl_oracle.hpp"
#include "evt/sampling.hpp"

namespace evt::cli {

namespace {

// Thrown for command-line misuse that CLI11 itself does not catch.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <typename Content, typename Reader>
Content load(const std::string& path, Reader reader) {
  try {
    return reader(path);
  } catch (const ParseError& e) {
    throw Error(e.code(), path + ":" + std::to_string(e.line()) + ":" + std::to_string(e.column()) +
                              ": " + e.what());
  }
}

ModelContent load_model(const std::string& path) {
  return load<ModelContent>(path, [](const std::string& p) { return read_model_file(p); });
}

DistContent load_dist(const std::string& path) {
  return load<DistContent>(path, [](const std::string& p) { return read_dist_file(p); });
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file) throw Error(Errc::kInvalidArgument, "cannot write '" + path + "'");
  file << text;
  if (!file) throw Error(Errc::kInvalidArgument, "write to '" + path + "' failed");
}

Rate single_rate(const std::optional<double>& beta, const std::optional<double>& gamma) {
  if (beta.has_value() == gamma.has_value()) {
    throw UsageError("exactly one of --beta and --gamma is required");
  }
  return beta ? Rate{Direction::kPerception, *beta} : Rate{Direction::kActivity, *gamma};
}

void print_rate(std::ostream& out, double alpha) {
  const Rate rate = rate_from_alpha(alpha);
  out << (rate.direction == Direction::kPerception ? "beta=" : "gamma=") << format_real(rate.value)
      << '\n';
}

std::size_t default_verify_threads() {
  if (const char* env = std::getenv("EVT_VERIFY_THREADS")) {
    char* end = nullptr;
    const unsigned long value = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0') return value;
  }
  return 1;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gibbs and anti-Gibbs distributions on event powersets", "evt"};
  app.require_subcommand(1);

  std::string model_path;
  std::string dist_path;
  std::string out_path;
  std::optional<double> beta;
  std::optional<double> gamma;
  double target = 0.0;
  double tol = 1e-10;
  double oracle_tol = 1e-8;
  std::size_t trials = 1000;
  std::uint64_t seed = 0;
  std::size_t threads = default_verify_threads();
  std::size_t iters = 5000;
  std::size_t count = 0;

  auto* gibbs = app.add_subcommand("gibbs", "tilt the base distribution and write it");
  gibbs->add_option("--model", model_path, "model file")->required();
  auto* gibbs_beta = gibbs->add_option("--beta", beta, "Gibbs rate (perception)");
  gibbs->add_option("--gamma", gamma, "anti-Gibbs rate (activity)")->excludes(gibbs_beta);
  gibbs->add_option("--out", out_path, "output distribution file (default: stdout)");

  auto* solve = app.add_subcommand("solve", "find the tilt that meets a target mean");
  solve->add_option("--model", model_path, "model file")->required();
  solve->add_option("--target-mean", target, "target mean of V")->required();
  solve->add_option("--tol", tol, "absolute tolerance on the mean")->capture_default_str();
  solve->add_option("--out", out_path, "optional output distribution file");

  auto* entropy = app.add_subcommand("entropy", "relative entropy H(p || p*) in nats");
  entropy->add_option("--dist", dist_path, "distribution file")->required();
  entropy->add_option("--model", model_path, "model file providing p*")->required();

  auto* verify = app.add_subcommand("verify", "certify that the Gibbs point minimizes H");
  verify->add_option("--model", model_path, "model file")->required();
  verify->add_option("--target-mean", target, "target mean of V")->required();
  verify->add_option("--trials", trials, "number of feasible competitors")->capture_default_str();
  verify->add_option("--seed", seed, "random seed")->capture_default_str();
  verify->add_option("--threads", threads, "worker threads (0 = all cores)")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle", "compare Frank-Wolfe against the closed form");
  oracle->add_option("--model", model_path, "model file")->required();
  oracle->add_option("--target-mean", target, "target mean of V")->required();
  oracle->add_option("--tol", oracle_tol, "Frank-Wolfe duality gap tolerance")->capture_default_str();
  oracle->add_option("--iters", iters, "iteration cap")->capture_default_str();
  oracle->add_option("--seed", seed, "starting point seed (0 = vertex average)");

  auto* sample_cmd = app.add_subcommand("sample", "draw subsets from a distribution");
  sample_cmd->add_option("--dist", dist_path, "distribution file")->required();
  sample_cmd->add_option("-n", count, "number of draws")->required()->check(CLI::PositiveNumber);
  sample_cmd->add_option("--seed", seed, "random seed")->capture_default_str();
  sample_cmd->add_option("--out", out_path, "output batch file (default: stdout)");

  auto* identities = app.add_subcommand("identities", "check the value/entropy identities");
  identities->add_option("--model", model_path, "model file")->required();
  auto* id_beta = identities->add_option("--beta", beta, "Gibbs rate (perception)");
  identities->add_option("--gamma", gamma, "anti-Gibbs rate (activity)")->excludes(id_beta);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInvalid;
  }

  try {
    if (gibbs->parsed()) {
      const auto model = load_model(model_path);
      const GibbsModel tilted(model.base, model.value, single_rate(beta, gamma));
      const auto& p = tilted.distribution();
      const DistMetadata meta{tilted.alpha(), tilted.log_z(), relative_entropy(p, model.base)};
      write_text(out_path, emit_dist(p, meta), out);
      return kExitOk;
    }

    if (solve->parsed()) {
      const auto model = load_model(model_path);
      const GibbsModel solved = solve_alpha_for_mean(model.base, model.value, target, tol);
      const double h = relative_entropy(solved.distribution(), model.base);
      out << "alpha=" << format_real(solved.alpha()) << '\n';
      print_rate(out, solved.alpha());
      out << "logZ=" << format_real(solved.log_z()) << '\n';
      out << "H=" << format_real(h) << '\n';
      if (!out_path.empty()) {
        write_text(out_path, emit_dist(solved.distribution(), {solved.alpha(), solved.log_z(), h}),
                   out);
      }
      return kExitOk;
    }

    if (entropy->parsed()) {
      const auto model = load_model(model_path);
      const auto dist = load_dist(dist_path);
      out << "H=" << format_real(relative_entropy(dist.distribution, model.base)) << '\n';
      return kExitOk;
    }

    if (verify->parsed()) {
      const auto model = load_model(model_path);
      VerifyOptions options;
      options.threads = threads;
      const auto report = verify_h_theorem(model.base, model.value, target, trials, seed, options);
      out << "trials=" << report.trials << '\n'
          << "alpha=" << format_real(report.alpha) << '\n';
      print_rate(out, report.alpha);
      out << "gibbs_entropy=" << format_real(report.gibbs_entropy) << '\n'
          << "min_competitor_entropy=" << format_real(report.min_competitor_entropy) << '\n'
          << "worst_gap=" << format_real(report.worst_gap) << '\n'
          << "max_decomposition_residual=" << format_real(report.max_decomposition_residual)
          << '\n'
          << "passed=" << (report.passed ? "true" : "false") << '\n';
      if (!report.passed) err << "verification failed: worst gap " << report.worst_gap << '\n';
      return report.passed ? kExitOk : kExitNumeric;
    }

    if (oracle->parsed()) {
      const auto model = load_model(model_path);
      OracleConfig config;
      config.max_iters = iters;
      config.tol = oracle_tol;
      config.seed = seed;
      const auto fw = minimize_kl(model.base, model.value, target, config);
      const auto closed = solve_alpha_for_mean(model.base, model.value, target, 1e-13);
      const double closed_h = relative_entropy(closed.distribution(), model.base);
      double linf = 0.0;
      for (std::size_t i = 0; i < fw.distribution.size(); ++i) {
        linf = std::max(linf, std::abs(fw.distribution.probs()[i] - closed.distribution().probs()[i]));
      }
      const double dh = std::abs(fw.entropy - closed_h);
      const bool agree = dh <= kOracleEntropyBound && linf <= kOracleLinfBound;
      out << "oracle_entropy=" << format_real(fw.entropy) << '\n'
          << "gibbs_entropy=" << format_real(closed_h) << '\n'
          << "entropy_difference=" << format_real(dh) << '\n'
          << "linf_distance=" << format_real(linf) << '\n'
          << "iterations=" << fw.iterations << '\n'
          << "duality_gap=" << format_real(fw.duality_gap) << '\n'
          << "converged=" << (fw.converged ? "true" : "false") << '\n'
          << "agree=" << (agree ? "true" : "false") << '\n';
      if (!fw.converged) err << "warning: Frank-Wolfe did not reach tol " << oracle_tol << '\n';
      if (!agree) err << "oracle and closed form disagree\n";
      return agree ? kExitOk : kExitNumeric;
    }

    if (sample_cmd->parsed()) {
      const auto dist = load_dist(dist_path);
      const auto batch = sample(dist.distribution, count, seed);
      std::string text;
      const std::size_t n = batch.events.size();
      text.reserve(batch.draws.size() * (n + 1));
      for (auto x : batch.draws) {
        text += bitstring(x, n);
        text += '\n';
      }
      write_text(out_path, text, out);
      return kExitOk;
    }

    if (identities->parsed()) {
      const auto model = load_model(model_path);
      const GibbsModel tilted(model.base, model.value, single_rate(beta, gamma));
      double worst = 0.0;
      for (auto x : support(model.base)) {
        worst = std::max(worst, std::abs(pointwise_value_identity_residual(tilted, x)));
      }
      const auto rel = mean_entropy_relation(tilted);
      const double mean_residual = std::abs(rel.reconstructed_mean - rel.mean);
      out << "max_pointwise_residual=" << format_real(worst) << '\n'
          << "mean=" << format_real(rel.mean) << '\n'
          << "relative_entropy=" << format_real(rel.relative_entropy) << '\n'
          << "empty_set_term=" << format_real(rel.empty_set_term) << '\n'
          << "reconstructed_mean=" << format_real(rel.reconstructed_mean) << '\n'
          << "mean_relation_residual=" << format_real(mean_residual) << '\n';
      return worst <= kIdentityTolerance && mean_residual <= kIdentityTolerance ? kExitOk
                                                                                 : kExitNumeric;
    }
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return is_numeric_failure(e.code()) ? kExitNumeric : kExitInvalid;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitInvalid;
}

}  // namespace evt::cli
