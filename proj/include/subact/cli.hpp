#ifndef SUBACT_CLI_HPP
#define SUBACT_CLI_HPP

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "subact/bounds.hpp"
#include "subact/checks.hpp"
#include "subact/experiment.hpp"
#include "subact/solver.hpp"

namespace subact {

inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

/// Measurement-stream file: repeated records of a subspace serialization
/// ("d k" and k basis rows) followed by the d entries of the measurement.
inline std::vector<Measurement> read_measurement_stream(std::istream& is) {
  std::vector<Measurement> out;
  while (is >> std::ws, is.peek() != std::char_traits<char>::eof()) {
    Subspace w = read_subspace(is);
    Vector y(w.ambient_dim());
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!(is >> y[i])) fail(ErrorCode::IoError, "truncated measurement vector");
    if (!out.empty() && out.front().subspace.ambient_dim() != w.ambient_dim())
      fail(ErrorCode::DimensionMismatch, "measurements differ in ambient dimension");
    out.push_back({std::move(w), std::move(y)});
  }
  return out;
}

inline void write_measurement_stream(std::ostream& os, const std::vector<Measurement>& stream) {
  for (const Measurement& m : stream) {
    write_subspace(os, m.subspace);
    for (std::size_t i = 0; i < m.y.size(); ++i) os << (i ? " " : "") << format_real(m.y[i]);
    os << '\n';
  }
}

namespace detail {

inline int cmd_solve(const std::string& input, const std::string& x0_spec, int passes, std::ostream& out) {
  std::ifstream in(input);
  if (!in) fail(ErrorCode::ConfigError, "cannot open " + input);
  const std::vector<Measurement> stream = read_measurement_stream(in);
  if (stream.empty()) fail(ErrorCode::ConfigError, "measurement stream is empty");
  const std::size_t d = stream.front().subspace.ambient_dim();
  const Vector estimate = run_from_stream(stream, parse_vector_spec(x0_spec, d, 0), passes);
  for (std::size_t i = 0; i < d; ++i) out << (i ? " " : "") << format_real(estimate[i]);
  out << '\n';
  return kExitOk;
}

inline int cmd_bounds(const std::string& dist_spec, const std::string& s_text, int probes, std::uint64_t seed,
                      std::ostream& out) {
  const SubspaceDistribution dist = parse_distribution(dist_spec);
  AscentOptions opts;
  opts.restarts = probes;
  opts.seed = seed;
  out << "s,value,method,stderr\n";
  for (double s : parse_s_list(s_text)) {
    const BoundEstimate b = kaczmarz_bound(dist, s, opts);
    out << format_s(s) << ',' << format_real(b.value) << ',' << to_string(b.method)
        << (b.lower_bound_only ? "_lower_bound" : "") << ','
        << (b.stderr_value ? format_real(*b.stderr_value) : std::string("nan")) << '\n';
  }
  return kExitOk;
}

inline int cmd_experiment(const std::string& config_path, int threads, std::ostream& out) {
  std::ifstream in(config_path);
  if (!in) fail(ErrorCode::ConfigError, "cannot open " + config_path);
  const ExperimentConfig cfg = parse_config(in);
  const SubspaceDistribution dist = parse_distribution(cfg.distribution, cfg.dimension, cfg.subspace_dim);
  MonteCarloOptions mc;
  mc.threads = threads;
  // overlays only where the bound is exact
  for (double s : cfg.s_list) {
    if (dist.is_invariant() || s == 1.0)
      mc.alphas.push_back(kaczmarz_bound(dist, s).value);
    else
      mc.alphas.push_back(std::nullopt);
  }
  const std::vector<MomentCurve> curves = mc_moment_curves(cfg, dist, mc);
  if (cfg.output.empty()) {
    write_curves_csv(out, curves);
  } else {
    std::ofstream os(cfg.output, std::ios::binary);
    if (!os) fail(ErrorCode::IoError, "cannot write " + cfg.output);
    write_curves_csv(os, curves);
    if (!os) fail(ErrorCode::IoError, "write failed for " + cfg.output);
  }
  return kExitOk;
}

inline int cmd_figure(int which, std::uint64_t seed, const std::string& out_dir, const FigureOptions& opts,
                      std::ostream& out) {
  const FigureResult r = reproduce_figure(which, seed, out_dir, opts);
  for (const auto& f : r.files) out << f.string() << '\n';
  return kExitOk;
}

}  // namespace detail

/// Entry point of the command-line tool. Returns 0 on success, 1 when a
/// check suite fails and 2 on usage or configuration errors.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Subspace action recovery, Kaczmarz bounds and moment experiments"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads for Monte Carlo trials")->check(CLI::PositiveNumber);

  std::string input, x0_spec = "zero";
  int passes = 1;
  CLI::App* solve = app.add_subcommand("solve", "Recover a vector from a measurement-stream file");
  solve->add_option("--input,input", input, "Measurement-stream file")->required();
  solve->add_option("--x0", x0_spec, "Initial estimate: zero, ones or a list of numbers");
  solve->add_option("--passes", passes, "Passes over the stream")->check(CLI::NonNegativeNumber);

  std::string dist_spec, s_text = "1";
  int probes = 64;
  std::uint64_t seed = 0;
  CLI::App* bounds = app.add_subcommand("bounds", "Kaczmarz bounds of a subspace law");
  bounds->add_option("--dist", dist_spec, "Builtin law or distribution file")->required();
  bounds->add_option("--s", s_text, "Comma separated s values; log for the logarithmic bound");
  bounds->add_option("--probes", probes, "Random starts for the sphere ascent")->check(CLI::NonNegativeNumber);
  bounds->add_option("--seed", seed, "Seed for the random starts");

  std::string config_path;
  CLI::App* experiment = app.add_subcommand("experiment", "Monte Carlo moment curves from a config file");
  experiment->add_option("--config", config_path, "key = value config file")->required();

  int which = 1;
  std::string out_dir = ".";
  std::optional<long> trials, iterations;
  CLI::App* figure = app.add_subcommand("figure", "Write the CSV files of one numerical example");
  figure->add_option("--which", which, "Figure number")->required()->check(CLI::Range(1, 4));
  figure->add_option("--seed", seed, "Base seed");
  figure->add_option("--out", out_dir, "Output directory");
  figure->add_option("--trials", trials, "Override the number of trials")->check(CLI::PositiveNumber);
  figure->add_option("--iterations", iterations, "Override the number of iterations")->check(CLI::NonNegativeNumber);

  std::string suite;
  CLI::App* check = app.add_subcommand("check", "Run a self-check suite");
  check->add_option("--suite", suite, "Suite name")
      ->required()
      ->check(CLI::IsMember({"identities", "tightness", "noise", "lyapunov"}));
  check->add_option("--seed", seed, "Seed");

  for (CLI::App* sub : {solve, bounds, experiment, figure, check})
    sub->add_option("--threads", threads, "Worker threads for Monte Carlo trials")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (solve->parsed()) return detail::cmd_solve(input, x0_spec, passes, out);
    if (bounds->parsed()) return detail::cmd_bounds(dist_spec, s_text, probes, seed, out);
    if (experiment->parsed()) return detail::cmd_experiment(config_path, threads, out);
    if (figure->parsed()) {
      FigureOptions opts;
      opts.threads = threads;
      opts.trials = trials;
      opts.iterations = iterations;
      return detail::cmd_figure(which, seed, out_dir, opts, out);
    }
    if (check->parsed()) return run_check_suite(suite, seed, threads, out) ? kExitOk : kExitCheckFailed;
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace subact

#endif  // SUBACT_CLI_HPP
