#ifndef SUBACT_EXPERIMENT_HPP
#define SUBACT_EXPERIMENT_HPP

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "subact/bounds.hpp"
#include "subact/distribution.hpp"
#include "subact/solver.hpp"

namespace subact {

// ---------------------------------------------------------------------------
// Configuration

/// Everything one Monte Carlo experiment needs. s == 0 encodes the log moment.
struct ExperimentConfig {
  std::size_t dimension = 0;
  std::optional<std::size_t> subspace_dim;
  std::string distribution;  // builtin spec or file path
  std::string x_true = "ones";
  std::string x0 = "zero";
  long trials = 1;
  long iterations = 0;
  std::vector<double> s_list{1.0};
  std::uint64_t seed = 0;
  double epsilon = 0.0;
  std::string output;
};

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

namespace detail {

inline double parse_double(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, "cannot parse " + what + " from '" + text + "'");
  }
}

inline long parse_long(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const long v = std::stol(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, "cannot parse " + what + " from '" + text + "'");
  }
}

inline std::uint64_t parse_u64(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    fail(ErrorCode::ConfigError, "cannot parse " + what + " from '" + text + "'");
  }
}

}  // namespace detail

/// "2,1,0.5,log" → {2, 1, 0.5, 0}.
inline std::vector<double> parse_s_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) continue;
    if (item == "log") {
      out.push_back(0.0);
      continue;
    }
    const double s = detail::parse_double(item, "s value");
    if (!(s >= 0.0) || !std::isfinite(s)) fail(ErrorCode::ConfigError, "s values must be >= 0");
    out.push_back(s);
  }
  if (out.empty()) fail(ErrorCode::ConfigError, "empty s list");
  return out;
}

inline std::string format_s(double s) { return s == 0.0 ? "log" : format_real(s); }

/// Flat "key = value" text, one key per line, '#' starts a comment.
inline ExperimentConfig parse_config(std::istream& is) {
  ExperimentConfig cfg;
  bool have_dimension = false, have_distribution = false;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::ConfigError, "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "dimension") {
      const long d = detail::parse_long(value, key);
      if (d < 1) fail(ErrorCode::ConfigError, "dimension must be >= 1");
      cfg.dimension = static_cast<std::size_t>(d);
      have_dimension = true;
    } else if (key == "subspace_dim") {
      const long k = detail::parse_long(value, key);
      if (k < 1) fail(ErrorCode::ConfigError, "subspace_dim must be >= 1");
      cfg.subspace_dim = static_cast<std::size_t>(k);
    } else if (key == "distribution") {
      cfg.distribution = value;
      have_distribution = true;
    } else if (key == "x_true") {
      cfg.x_true = value;
    } else if (key == "x0") {
      cfg.x0 = value;
    } else if (key == "trials") {
      cfg.trials = detail::parse_long(value, key);
    } else if (key == "iterations") {
      cfg.iterations = detail::parse_long(value, key);
    } else if (key == "s_list") {
      cfg.s_list = parse_s_list(value);
    } else if (key == "seed") {
      cfg.seed = detail::parse_u64(value, key);
    } else if (key == "epsilon") {
      cfg.epsilon = detail::parse_double(value, key);
    } else if (key == "output") {
      cfg.output = value;
    } else {
      fail(ErrorCode::ConfigError, "unknown key '" + key + "'");
    }
  }
  if (!have_dimension) fail(ErrorCode::ConfigError, "missing key 'dimension'");
  if (!have_distribution) fail(ErrorCode::ConfigError, "missing key 'distribution'");
  if (cfg.trials < 1) fail(ErrorCode::ConfigError, "trials must be >= 1");
  if (cfg.iterations < 0) fail(ErrorCode::ConfigError, "iterations must be >= 0");
  if (!(cfg.epsilon >= 0.0) || !std::isfinite(cfg.epsilon)) fail(ErrorCode::ConfigError, "epsilon must be >= 0");
  return cfg;
}

/// Builtin laws: invariant:k:d, ronb:d, block_onb:d:k, roots:K (alias
/// roots_of_unity:K), icosahedral. Bare names take d and k from the fallbacks. Anything
/// else is read as a distribution file.
inline SubspaceDistribution parse_distribution(const std::string& spec, std::optional<std::size_t> dimension = {},
                                               std::optional<std::size_t> subspace_dim = {}) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& name = parts.front();
  auto arg = [&](std::size_t i, std::optional<std::size_t> fallback, const char* what) -> std::size_t {
    if (i < parts.size()) {
      const long v = detail::parse_long(parts[i], what);
      if (v < 1) fail(ErrorCode::ConfigError, std::string(what) + " must be >= 1");
      return static_cast<std::size_t>(v);
    }
    if (fallback) return *fallback;
    fail(ErrorCode::ConfigError, "distribution '" + spec + "' is missing " + what);
  };
  try {
    if (name == "invariant") {
      const std::size_t k = arg(1, subspace_dim, "k");
      const std::size_t d = arg(2, dimension, "d");
      return SubspaceDistribution::invariant(k, d);
    }
    if (name == "ronb") return ronb(arg(1, dimension, "d"));
    if (name == "block_onb") return block_onb(arg(1, dimension, "d"), arg(2, subspace_dim, "k"));
    if (name == "roots" || name == "roots_of_unity") return roots_of_unity(arg(1, std::nullopt, "K"));
    if (name == "icosahedral") return icosahedral_lines();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidParameter) fail(ErrorCode::ConfigError, e.what());
    throw;
  }
  const std::string path = (name == "file" && parts.size() > 1) ? spec.substr(5) : spec;
  std::ifstream in(path);
  if (!in) fail(ErrorCode::ConfigError, "unknown distribution '" + spec + "' (not a builtin or readable file)");
  return read_distribution(in);
}

/// "ones", "unit-random" (drawn from the seed), "zero", or a list of numbers
/// separated by commas or spaces.
inline Vector parse_vector_spec(const std::string& spec, std::size_t d, std::uint64_t seed) {
  if (spec == "ones") return Vector(d, 1.0);
  if (spec == "zero" || spec.empty()) return Vector(d, 0.0);
  if (spec == "unit-random") {
    SeededRng rng(seed, 0xA11CEull);
    return random_unit_vector(rng, d);
  }
  std::string text = spec;
  std::replace(text.begin(), text.end(), ',', ' ');
  std::istringstream is(text);
  std::vector<double> values;
  std::string tok;
  while (is >> tok) values.push_back(detail::parse_double(tok, "vector entry"));
  if (values.size() != d)
    fail(ErrorCode::ConfigError, "vector '" + spec + "' has " + std::to_string(values.size()) +
                                     " entries, expected " + std::to_string(d));
  return Vector(std::move(values));
}

// ---------------------------------------------------------------------------
// Trial engine

/// Runs fn(t) for t in [0, trials) on `threads` workers. Each call must touch
/// only its own output slot, so results do not depend on the thread count.
template <class Fn>
void parallel_trials(long trials, int threads, Fn&& fn) {
  threads = std::max(1, std::min<int>(threads, static_cast<int>(std::max(1L, trials))));
  if (threads == 1) {
    for (long t = 0; t < trials; ++t) fn(t);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  for (int w = 0; w < threads; ++w)
    pool.emplace_back([&] {
      for (long t; !failed && (t = next.fetch_add(1)) < trials;) {
        try {
          fn(t);
        } catch (...) {
          if (!failed.exchange(true)) error = std::current_exception();
        }
      }
    });
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Per-trial ‖x - x_n‖² for n = 0..N. Trial t draws from stream
/// stream_base + t; its noise uses a second, disjoint stream.
struct TrialSet {
  std::vector<std::vector<double>> sq_errors;  // [trial][n]
};

struct TrialSpec {
  const SubspaceDistribution* dist = nullptr;
  Vector x_true;
  Vector x0;
  long trials = 1;
  long iterations = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;
  double epsilon = 0.0;
};

inline constexpr std::uint64_t kNoiseStreamFlag = 1ull << 62;

inline TrialSet run_trials(const TrialSpec& spec, int threads) {
  TrialSet set;
  set.sq_errors.resize(static_cast<std::size_t>(spec.trials));
  const ControlStrategy strategy = IidStream{*spec.dist};
  parallel_trials(spec.trials, threads, [&](long t) {
    const std::uint64_t stream = spec.stream_base + static_cast<std::uint64_t>(t);
    SeededRng rng(spec.seed, stream);
    NoiseModel noise = NoNoise{};
    if (spec.epsilon > 0.0) noise = InSubspaceNoise{spec.epsilon, stream | kNoiseStreamFlag};
    set.sq_errors[static_cast<std::size_t>(t)] =
        run(strategy, spec.x_true, spec.x0, spec.iterations, noise, rng).sq_errors;
  });
  return set;
}

// ---------------------------------------------------------------------------
// Moment curves

/// Monte Carlo moment curve for one s.
///
/// For s > 0, values[n] = (mean_t ‖x - x_n‖^{2s})^{1/s}; for s == 0,
/// values[n] = exp(mean_t log ‖x - x_n‖²). raw_mean holds the untransformed
/// mean (of e^s, or of log e) with raw_stderr; stderr is the delta-method
/// error of the transformed value.
struct MomentCurve {
  double s = 1.0;
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<double> raw_mean;
  std::vector<double> raw_stderr;
  std::vector<double> bound;  // α^n ‖x - x0‖², empty without an overlay
};

/// [α^n · initial for n = 0..n_max]
inline std::vector<double> theoretical_curve(double alpha, long n_max, double initial_sq_error) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) fail(ErrorCode::InvalidParameter, "alpha must lie in [0, 1]");
  if (n_max < 0) fail(ErrorCode::InvalidParameter, "n_max must be >= 0");
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_max) + 1);
  double v = initial_sq_error;
  for (long n = 0; n <= n_max; ++n) {
    out.push_back(v);
    v *= alpha;
  }
  return out;
}

inline MomentCurve aggregate_moments(const TrialSet& set, double s, const std::optional<double>& alpha = std::nullopt) {
  if (!(s >= 0.0)) fail(ErrorCode::InvalidParameter, "s must be >= 0");
  const std::size_t trials = set.sq_errors.size();
  if (trials == 0) fail(ErrorCode::InvalidParameter, "no trials");
  const std::size_t len = set.sq_errors.front().size();
  const double tn = static_cast<double>(trials);
  MomentCurve c;
  c.s = s;
  c.values.resize(len);
  c.stderrs.resize(len);
  c.raw_mean.resize(len);
  c.raw_stderr.resize(len);
  bool hit_zero = false;  // a recovered trial sends the log mean to -inf from then on
  for (std::size_t n = 0; n < len; ++n) {
    auto transform = [s](double e) { return s > 0.0 ? std::pow(e, s) : std::log(e); };
    if (s == 0.0 && !hit_zero)
      for (std::size_t t = 0; t < trials; ++t)
        if (set.sq_errors[t][n] <= 0.0) hit_zero = true;
    if (s == 0.0 && hit_zero) {
      c.values[n] = 0.0;
      c.stderrs[n] = 0.0;
      c.raw_mean[n] = -std::numeric_limits<double>::infinity();
      c.raw_stderr[n] = 0.0;
      continue;
    }
    double sum = 0.0;
    for (std::size_t t = 0; t < trials; ++t) sum += transform(set.sq_errors[t][n]);
    const double mean = sum / tn;
    double ss = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
      const double dv = transform(set.sq_errors[t][n]) - mean;
      ss += dv * dv;
    }
    const double se = trials > 1 ? std::sqrt(ss / (tn - 1.0) / tn) : 0.0;
    c.raw_mean[n] = mean;
    c.raw_stderr[n] = se;
    if (s > 0.0) {
      c.values[n] = std::pow(mean, 1.0 / s);
      c.stderrs[n] = mean > 0.0 ? (1.0 / s) * std::pow(mean, 1.0 / s - 1.0) * se : 0.0;
    } else {
      c.values[n] = std::exp(mean);
      c.stderrs[n] = c.values[n] * se;
    }
  }
  if (len > 0) {
    // every trial starts from the same x0
    c.values[0] = set.sq_errors.front()[0];
    c.stderrs[0] = 0.0;
  }
  if (alpha) c.bound = theoretical_curve(*alpha, static_cast<long>(len) - 1, set.sq_errors.front()[0]);
  return c;
}

struct MonteCarloOptions {
  int threads = 1;
  std::uint64_t stream_base = 0;
  /// Overlay α per entry of s_list; nullopt entries get no overlay.
  std::vector<std::optional<double>> alphas;
};

/// Runs cfg.trials seeded trials and returns one curve per s in cfg.s_list.
inline std::vector<MomentCurve> mc_moment_curves(const ExperimentConfig& cfg, const SubspaceDistribution& dist,
                                                 const MonteCarloOptions& opts = {}) {
  if (cfg.trials < 1 || cfg.iterations < 0) fail(ErrorCode::ConfigError, "trials >= 1 and iterations >= 0 required");
  if (dist.ambient_dim() != cfg.dimension)
    fail(ErrorCode::ConfigError, "distribution dimension differs from 'dimension'");
  if (cfg.subspace_dim && dist.subspace_dim() != cfg.subspace_dim)
    fail(ErrorCode::ConfigError, "distribution subspace dimension differs from 'subspace_dim'");
  for (double s : cfg.s_list)
    if (!(s >= 0.0)) fail(ErrorCode::ConfigError, "s values must be >= 0");
  TrialSpec spec;
  spec.dist = &dist;
  spec.x_true = parse_vector_spec(cfg.x_true, cfg.dimension, cfg.seed);
  spec.x0 = parse_vector_spec(cfg.x0, cfg.dimension, cfg.seed);
  spec.trials = cfg.trials;
  spec.iterations = cfg.iterations;
  spec.seed = cfg.seed;
  spec.stream_base = opts.stream_base;
  spec.epsilon = cfg.epsilon;
  const TrialSet set = run_trials(spec, opts.threads);
  std::vector<MomentCurve> out;
  for (std::size_t i = 0; i < cfg.s_list.size(); ++i) {
    const std::optional<double> none;
    const std::optional<double>& alpha = i < opts.alphas.size() ? opts.alphas[i] : none;
    out.push_back(aggregate_moments(set, cfg.s_list[i], alpha));
  }
  return out;
}

inline std::vector<MomentCurve> mc_moment_curves(const ExperimentConfig& cfg, const MonteCarloOptions& opts = {}) {
  const SubspaceDistribution dist = parse_distribution(cfg.distribution, cfg.dimension, cfg.subspace_dim);
  return mc_moment_curves(cfg, dist, opts);
}

/// CSV rows "n,s,estimate,stderr,bound" (17 significant digits). A non-empty
/// `law` adds a leading law column.
inline void write_curve_rows(std::ostream& os, const MomentCurve& c, const std::string& law = {}) {
  for (std::size_t n = 0; n < c.values.size(); ++n) {
    if (!law.empty()) os << law << ',';
    os << n << ',' << format_s(c.s) << ',' << format_real(c.values[n]) << ',' << format_real(c.stderrs[n]) << ','
       << (c.bound.empty() ? std::string("nan") : format_real(c.bound[n])) << '\n';
  }
}

inline void write_curves_csv(std::ostream& os, const std::vector<MomentCurve>& curves) {
  os << "n,s,estimate,stderr,bound\n";
  for (const MomentCurve& c : curves) write_curve_rows(os, c);
}

// ---------------------------------------------------------------------------
// Noise robustness

struct NoiseRow {
  long n = 0;
  double estimate = 0.0;  // E‖x*_n - x‖^{2s} for s ≤ 1, its 1/s power for s > 1
  double stderr_value = 0.0;
  double bound = 0.0;
  bool violated = false;
};

struct NoiseReport {
  bool ok = true;
  double s = 1.0;
  double alpha = 0.0;
  std::vector<NoiseRow> rows;
};

/// Noisy-measurement error moments against
///   0 < s ≤ 1: E‖x*_n - x‖^{2s} ≤ α_s^{ns} ‖x*_0 - x‖^{2s} + ε^{2s} / (1 - α_s^s)
///   s ≥ 1:    (E‖x*_n - x‖^{2s})^{1/s} ≤ α_s^n ‖x*_0 - x‖² + ε² / (1 - α_s)
/// A row is violated when estimate - 4·stderr exceeds the bound.
inline NoiseReport noisy_bound_check(const ExperimentConfig& cfg, const SubspaceDistribution& dist, double s,
                                     double alpha, const MonteCarloOptions& opts = {}) {
  if (!(s > 0.0)) fail(ErrorCode::ConfigError, "noise check needs s > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) fail(ErrorCode::ConfigError, "noise check needs 0 < alpha < 1");
  ExperimentConfig one = cfg;
  one.s_list = {s};
  const MomentCurve c = mc_moment_curves(one, dist, opts).front();
  const double eps = cfg.epsilon;
  const double e0 = c.values.front();
  NoiseReport r;
  r.s = s;
  r.alpha = alpha;
  for (std::size_t n = 0; n < c.values.size(); ++n) {
    NoiseRow row;
    row.n = static_cast<long>(n);
    const double dn = static_cast<double>(n);
    if (s <= 1.0) {
      row.estimate = n == 0 ? std::pow(e0, s) : c.raw_mean[n];
      row.stderr_value = c.raw_stderr[n];
      row.bound = std::pow(alpha, dn * s) * std::pow(e0, s) + std::pow(eps, 2.0 * s) / (1.0 - std::pow(alpha, s));
    } else {
      row.estimate = c.values[n];
      row.stderr_value = c.stderrs[n];
      row.bound = std::pow(alpha, dn) * e0 + eps * eps / (1.0 - alpha);
    }
    row.violated = row.estimate - 4.0 * row.stderr_value > row.bound;
    if (row.violated) r.ok = false;
    r.rows.push_back(row);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Figure reproduction

struct FigureOptions {
  int threads = 1;
  std::optional<long> trials;      // override the figure's trial count
  std::optional<long> iterations;  // override the figure's iteration count
};

struct FigureLaw {
  std::string name;
  SubspaceDistribution dist;
};

struct FigureSetup {
  int which = 1;
  std::size_t d = 2;
  std::size_t k = 1;
  Vector x_true;
  std::vector<FigureLaw> laws;
  std::vector<double> s_list;
  long trials = 3000;
  long iterations = 40;
};

inline constexpr std::uint64_t kFig2Tag5 = 0xF16205ull;
inline constexpr std::uint64_t kFig2Tag8 = 0xF16208ull;

/// Laws and parameters for the four numerical examples. Figure 2's random
/// subspaces are drawn from SeededRng(seed ^ tag, 0) with the tags above.
inline FigureSetup figure_setup(int which, std::uint64_t seed) {
  FigureSetup f;
  f.which = which;
  switch (which) {
    case 1:
      f.d = 2;
      f.k = 1;
      f.x_true = Vector{0.2296, 0.9361};
      f.laws = {{"roots3", roots_of_unity(3)}, {"roots5", roots_of_unity(5)},
                {"invariant", SubspaceDistribution::invariant(1, 2)}};
      f.s_list = {2.0, 1.0, 0.5, 0.0};
      f.trials = 3000;
      f.iterations = 40;
      break;
    case 2: {
      f.d = 5;
      f.k = 2;
      f.x_true = Vector(5, 1.0);
      auto draw = [&](std::uint64_t tag, int count) {
        SeededRng rng(seed ^ tag, 0);
        std::vector<Subspace> atoms;
        for (int i = 0; i < count; ++i) atoms.push_back(sample_invariant(rng, 2, 5));
        return SubspaceDistribution::uniform(std::move(atoms));
      };
      f.laws = {{"random5", draw(kFig2Tag5, 5)}, {"random8", draw(kFig2Tag8, 8)},
                {"invariant", SubspaceDistribution::invariant(2, 5)}};
      f.s_list = {2.0, 1.0, 0.5, 0.0};
      f.trials = 3000;
      f.iterations = 40;
      break;
    }
    case 3:
      f.d = 100;
      f.k = 1;
      f.x_true = Vector(100, 1.0);
      f.laws = {{"ronb", ronb(100)}, {"invariant", SubspaceDistribution::invariant(1, 100)}};
      f.s_list = {2.0, 1.0, 0.5};
      f.trials = 9000;
      f.iterations = 600;
      break;
    case 4:
      f.d = 100;
      f.k = 4;
      f.x_true = Vector(100, 1.0);
      f.laws = {{"block_onb", block_onb(100, 4)}, {"invariant", SubspaceDistribution::invariant(4, 100)}};
      f.s_list = {2.0, 1.0, 0.5};
      f.trials = 9000;
      // past ~200 steps every trial has hit all 25 blocks
      f.iterations = 150;
      break;
    default:
      fail(ErrorCode::InvalidParameter, "figure must be 1, 2, 3 or 4");
  }
  return f;
}

struct FigureResult {
  FigureSetup setup;
  std::vector<std::vector<MomentCurve>> curves;  // [law][s]
  std::vector<std::filesystem::path> files;
};

/// Computes every (law, s) curve of a figure with Γ_{k,d} overlays.
inline FigureResult compute_figure(int which, std::uint64_t seed, const FigureOptions& opts = {}) {
  FigureResult r;
  r.setup = figure_setup(which, seed);
  FigureSetup& f = r.setup;
  if (opts.trials) f.trials = *opts.trials;
  if (opts.iterations) f.iterations = *opts.iterations;
  MonteCarloOptions mc;
  mc.threads = opts.threads;
  for (double s : f.s_list) mc.alphas.push_back(invariant_alpha_closed_form(f.k, f.d, s).value);
  for (std::size_t li = 0; li < f.laws.size(); ++li) {
    ExperimentConfig cfg;
    cfg.dimension = f.d;
    cfg.trials = f.trials;
    cfg.iterations = f.iterations;
    cfg.s_list = f.s_list;
    cfg.seed = seed;
    std::ostringstream xs;
    for (std::size_t i = 0; i < f.d; ++i) xs << (i ? "," : "") << format_real(f.x_true[i]);
    cfg.x_true = xs.str();
    mc.stream_base = static_cast<std::uint64_t>(li) << 32;
    r.curves.push_back(mc_moment_curves(cfg, f.laws[li].dist, mc));
  }
  return r;
}

/// Writes fig<which>_s<s>.csv for each s (columns law,n,s,estimate,stderr,bound)
/// into out_dir; figure 2 also gets its frozen random laws as distribution files.
inline FigureResult reproduce_figure(int which, std::uint64_t seed, const std::filesystem::path& out_dir,
                                     const FigureOptions& opts = {}) {
  FigureResult r = compute_figure(which, seed, opts);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) fail(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  const std::string prefix = "fig" + std::to_string(which);
  for (std::size_t si = 0; si < r.setup.s_list.size(); ++si) {
    const auto path = out_dir / (prefix + "_s" + format_s(r.setup.s_list[si]) + ".csv");
    std::ofstream os(path, std::ios::binary);
    if (!os) fail(ErrorCode::IoError, "cannot write " + path.string());
    os << "law,n,s,estimate,stderr,bound\n";
    for (std::size_t li = 0; li < r.setup.laws.size(); ++li)
      write_curve_rows(os, r.curves[li][si], r.setup.laws[li].name);
    if (!os) fail(ErrorCode::IoError, "write failed for " + path.string());
    r.files.push_back(path);
  }
  if (which == 2) {
    for (std::size_t li = 0; li < 2; ++li) {
      const auto path = out_dir / (prefix + "_" + r.setup.laws[li].name + ".dist");
      std::ofstream os(path, std::ios::binary);
      if (!os) fail(ErrorCode::IoError, "cannot write " + path.string());
      write_distribution(os, r.setup.laws[li].dist);
      r.files.push_back(path);
    }
  }
  return r;
}

}  // namespace subact

#endif  // SUBACT_EXPERIMENT_HPP
