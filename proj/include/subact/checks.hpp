#ifndef SUBACT_CHECKS_HPP
#define SUBACT_CHECKS_HPP

#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "subact/bounds.hpp"
#include "subact/experiment.hpp"
#include "subact/solver.hpp"

namespace subact {

/// Discrete law with `atoms` invariant-random k-dimensional atoms in ℝ^d and
/// probabilities proportional to uniform draws in (0.1, 1].
inline SubspaceDistribution random_discrete_law(SeededRng& rng, std::size_t d, std::size_t k, std::size_t atoms) {
  std::vector<Subspace> subspaces;
  std::vector<double> weights;
  double total = 0.0;
  for (std::size_t i = 0; i < atoms; ++i) {
    subspaces.push_back(sample_invariant(rng, k, d));
    weights.push_back(0.1 + 0.9 * (1.0 - rng.uniform()));
    total += weights.back();
  }
  for (double& w : weights) w /= total;
  double sum = 0.0;
  for (double w : weights) sum += w;
  for (double& w : weights) w /= sum;
  return SubspaceDistribution::discrete(std::move(subspaces), std::move(weights));
}

namespace detail {

inline void report(std::ostream& os, bool pass, const std::string& what) {
  os << (pass ? "PASS " : "FAIL ") << what << '\n';
}

inline bool check_identities(std::uint64_t seed, std::ostream& os) {
  bool all = true;
  SeededRng meta(seed, 0);
  for (int run_id = 0; run_id < 100; ++run_id) {
    const std::size_t d = 2 + meta.index(5);
    const std::size_t k = 1 + meta.index(d - 1);
    SeededRng rng(seed, 1000 + static_cast<std::uint64_t>(run_id));
    const SubspaceDistribution dist =
        run_id % 4 == 3 ? SubspaceDistribution::invariant(k, d) : random_discrete_law(rng, d, k, 2 + meta.index(6));
    const Vector x = gaussian_matrix(rng, d, 1).column(0);
    const Vector x0 = run_id % 2 ? gaussian_matrix(rng, d, 1).column(0) : Vector(d);
    const SolveTrace trace = run(IidStream{dist}, x, x0, 40, NoNoise{}, rng, {.record = true});
    const IdentityReport r = verify_error_identities(trace, x, x0);
    if (!r.ok) {
      all = false;
      report(os, false, "identities run " + std::to_string(run_id) + ": " + r.diagnostics);
    }
  }
  report(os, all, "error identities on 100 random noiseless runs");
  return all;
}

inline bool check_tightness(std::uint64_t seed, std::ostream& os) {
  bool all = true;
  SeededRng rng(seed, 1);
  const std::pair<std::size_t, std::size_t> kd[] = {{1, 2}, {1, 3}, {2, 5}, {4, 100}};
  for (const auto& [k, d] : kd)
    for (double s : {0.5, 1.0, 2.0, 0.0}) {
      const TightnessResult t = tightness_test(SubspaceDistribution::invariant(k, d), s, 8, rng, 1e-9);
      report(os, t.tight,
             "invariant(" + std::to_string(k) + "," + std::to_string(d) + ") tight at s=" + format_s(s) +
                 " spread=" + format_real(t.spread));
      all = all && t.tight;
    }
  const TightnessResult frame = tightness_test(icosahedral_lines(), 1.0, 64, rng, 1e-12);
  report(os, frame.tight, "icosahedral tight frame tight at s=1, spread=" + format_real(frame.spread));
  const TightnessResult onb = tightness_test(ronb(2), 0.5, 64, rng, 1e-9);
  report(os, !onb.tight, "ronb(2) not tight at s=1/2, spread=" + format_real(onb.spread));
  return all && frame.tight && !onb.tight;
}

inline bool check_noise(std::uint64_t seed, int threads, std::ostream& os) {
  ExperimentConfig cfg;
  cfg.dimension = 10;
  cfg.distribution = "ronb:10";
  cfg.x_true = "ones";
  cfg.trials = 3000;
  cfg.iterations = 200;
  cfg.seed = seed;
  cfg.epsilon = 0.01;
  const SubspaceDistribution dist = ronb(10);
  MonteCarloOptions mc;
  mc.threads = threads;
  bool all = true;
  for (double s : {0.5, 1.0, 2.0}) {
    // ronb(d): α_s = 1 - 1/d for s ≤ 1 and (1 - 1/d)^{1/s} above
    const double alpha = s <= 1.0 ? 0.9 : std::pow(0.9, 1.0 / s);
    const NoiseReport r = noisy_bound_check(cfg, dist, s, alpha, mc);
    long worst = 0;
    for (const NoiseRow& row : r.rows)
      if (row.estimate - row.bound > r.rows[static_cast<std::size_t>(worst)].estimate -
                                         r.rows[static_cast<std::size_t>(worst)].bound)
        worst = row.n;
    report(os, r.ok, "noisy bound ronb(10) eps=0.01 s=" + format_s(s) + " (closest approach at n=" +
                         std::to_string(worst) + ")");
    all = all && r.ok;
  }
  return all;
}

inline bool check_lyapunov(std::uint64_t seed, std::ostream& os) {
  AscentOptions opts;
  opts.seed = seed;
  const std::vector<double> s_list{0.5, 1.0, 2.0};
  const LyapunovReport a = lyapunov_check(ronb(5), s_list, opts);
  report(os, a.monotone, "ronb(5) alpha nonincreasing in s");
  const LyapunovReport b = lyapunov_check(SubspaceDistribution::invariant(1, 3), s_list, opts);
  report(os, b.monotone, "invariant(1,3) alpha nonincreasing in s");
  SeededRng rng(seed, 2);
  bool random_ok = true;
  for (int i = 0; i < 5; ++i) {
    const LyapunovReport r = lyapunov_check(random_discrete_law(rng, 4, 2, 5), s_list, opts);
    random_ok = random_ok && r.monotone;
  }
  report(os, random_ok, "5 random discrete laws alpha nonincreasing in s");
  return a.monotone && b.monotone && random_ok;
}

}  // namespace detail

/// Runs one named self-check suite, printing a PASS/FAIL line per item.
/// Returns true when every item passed.
inline bool run_check_suite(std::string_view suite, std::uint64_t seed, int threads, std::ostream& os) {
  if (suite == "identities") return detail::check_identities(seed, os);
  if (suite == "tightness") return detail::check_tightness(seed, os);
  if (suite == "noise") return detail::check_noise(seed, threads, os);
  if (suite == "lyapunov") return detail::check_lyapunov(seed, os);
  fail(ErrorCode::ConfigError, "unknown suite '" + std::string(suite) + "'");
}

}  // namespace subact

#endif  // SUBACT_CHECKS_HPP
