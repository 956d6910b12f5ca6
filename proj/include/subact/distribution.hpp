#ifndef SUBACT_DISTRIBUTION_HPP
#define SUBACT_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "subact/fusion_frame.hpp"
#include "subact/subspace.hpp"

namespace subact {

/// Finitely many atoms with probabilities. Atoms may repeat.
struct DiscreteLaw {
  std::vector<Subspace> atoms;
  std::vector<double> probs;
  std::vector<double> cdf;  // cumulative probs, last entry forced to 1
};

/// The rotation-invariant law Γ_{k,d} on G(k, d).
struct InvariantLaw {
  std::size_t k = 1;
  std::size_t d = 1;
};

/// Probability law of a random subspace of R^d.
class SubspaceDistribution {
 public:
  static SubspaceDistribution invariant(std::size_t k, std::size_t d) {
    if (k < 1 || k > d) fail(ErrorCode::InvalidParameter, "invariant law needs 1 <= k <= d");
    return SubspaceDistribution(InvariantLaw{k, d});
  }

  /// Discrete law over atoms of one common dimension.
  static SubspaceDistribution discrete(std::vector<Subspace> atoms, std::vector<double> probs) {
    if (atoms.empty()) fail(ErrorCode::InvalidParameter, "discrete law needs an atom");
    for (const Subspace& a : atoms)
      if (a.dim() != atoms.front().dim())
        fail(ErrorCode::MixedDimensions, "atoms of different dimension; use uniform_discrete");
    return uniform_discrete(std::move(atoms), std::move(probs));
  }

  /// Discrete law that allows atoms of differing dimension.
  static SubspaceDistribution uniform_discrete(std::vector<Subspace> atoms, std::vector<double> probs) {
    if (atoms.empty()) fail(ErrorCode::InvalidParameter, "discrete law needs an atom");
    if (probs.size() != atoms.size()) fail(ErrorCode::InvalidParameter, "one probability per atom");
    const std::size_t d = atoms.front().ambient_dim();
    double total = 0.0;
    for (std::size_t n = 0; n < atoms.size(); ++n) {
      if (atoms[n].ambient_dim() != d) fail(ErrorCode::DimensionMismatch, "atoms share the ambient dimension");
      if (!(probs[n] >= 0.0)) fail(ErrorCode::InvalidParameter, "probabilities must be >= 0");
      total += probs[n];
    }
    if (std::abs(total - 1.0) > 1e-12) fail(ErrorCode::InvalidParameter, "probabilities must sum to 1");
    DiscreteLaw law{std::move(atoms), std::move(probs), {}};
    law.cdf.resize(law.probs.size());
    double c = 0.0;
    for (std::size_t n = 0; n < law.probs.size(); ++n) law.cdf[n] = (c += law.probs[n]);
    law.cdf.back() = 1.0;
    return SubspaceDistribution(std::move(law));
  }

  /// Equal probability on each atom.
  static SubspaceDistribution uniform(std::vector<Subspace> atoms) {
    const std::size_t n = atoms.size();
    return discrete(std::move(atoms), std::vector<double>(n, 1.0 / static_cast<double>(n)));
  }

  bool is_discrete() const noexcept { return std::holds_alternative<DiscreteLaw>(law_); }
  bool is_invariant() const noexcept { return std::holds_alternative<InvariantLaw>(law_); }
  const DiscreteLaw& as_discrete() const {
    if (!is_discrete()) fail(ErrorCode::UnsupportedVariant, "law is not discrete");
    return std::get<DiscreteLaw>(law_);
  }
  const InvariantLaw& as_invariant() const {
    if (!is_invariant()) fail(ErrorCode::UnsupportedVariant, "law is not invariant");
    return std::get<InvariantLaw>(law_);
  }

  std::size_t ambient_dim() const {
    if (is_invariant()) return std::get<InvariantLaw>(law_).d;
    return std::get<DiscreteLaw>(law_).atoms.front().ambient_dim();
  }

  /// Common subspace dimension, or nullopt for a mixed-dimension discrete law.
  std::optional<std::size_t> subspace_dim() const {
    if (is_invariant()) return std::get<InvariantLaw>(law_).k;
    const auto& atoms = std::get<DiscreteLaw>(law_).atoms;
    for (const Subspace& a : atoms)
      if (a.dim() != atoms.front().dim()) return std::nullopt;
    return atoms.front().dim();
  }

 private:
  explicit SubspaceDistribution(std::variant<DiscreteLaw, InvariantLaw> law) : law_(std::move(law)) {}

  std::variant<DiscreteLaw, InvariantLaw> law_;
};

/// Pr(W = U_n) = v_n² / Σ v_j². All subspaces must share their dimension.
inline SubspaceDistribution from_fusion_frame(const FusionFrame& ff) {
  double total = 0.0;
  for (double v : ff.weights()) total += v * v;
  std::vector<double> probs;
  for (double v : ff.weights()) probs.push_back(v * v / total);
  // Renormalize so the sum check is exact up to the last ulp.
  double s = 0.0;
  for (double p : probs) s += p;
  for (double& p : probs) p /= s;
  return SubspaceDistribution::discrete(ff.subspaces(), std::move(probs));
}

/// Uniform over span(e_1), ..., span(e_d).
inline SubspaceDistribution ronb(std::size_t d) {
  if (d < 1) fail(ErrorCode::InvalidParameter, "ronb needs d >= 1");
  std::vector<Subspace> atoms;
  for (std::size_t i = 0; i < d; ++i) atoms.push_back(coordinate_subspace(d, i, 1));
  return SubspaceDistribution::uniform(std::move(atoms));
}

/// Uniform over the d/k consecutive coordinate blocks.
inline SubspaceDistribution block_onb(std::size_t d, std::size_t k) {
  if (k < 1 || d < k || d % k != 0) fail(ErrorCode::InvalidParameter, "block_onb needs k | d");
  std::vector<Subspace> atoms;
  for (std::size_t b = 0; b < d / k; ++b) atoms.push_back(coordinate_subspace(d, b * k, k));
  return SubspaceDistribution::uniform(std::move(atoms));
}

/// The K lines through (cos 2πj/K, sin 2πj/K), j = 1..K, each with probability 1/K.
inline SubspaceDistribution roots_of_unity(std::size_t count) {
  if (count < 3) fail(ErrorCode::InvalidParameter, "roots_of_unity needs K >= 3");
  std::vector<Subspace> atoms;
  for (std::size_t j = 1; j <= count; ++j) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(count);
    Matrix b(2, 1);
    b(0, 0) = std::cos(angle);
    b(1, 0) = std::sin(angle);
    atoms.emplace_back(std::move(b));
  }
  return SubspaceDistribution::uniform(std::move(atoms));
}

/// Uniform over the six diagonals of the icosahedron, an equiangular unit-norm
/// tight frame of lines in ℝ³.
inline SubspaceDistribution icosahedral_lines() {
  const double g = std::numbers::phi;
  const double rows[6][3] = {{0, 1, g}, {0, 1, -g}, {1, g, 0}, {1, -g, 0}, {g, 0, 1}, {-g, 0, 1}};
  std::vector<Subspace> atoms;
  for (const auto& r : rows) atoms.push_back(from_spanning({Vector{r[0], r[1], r[2]}}));
  return SubspaceDistribution::uniform(std::move(atoms));
}

/// Index of a discrete draw by inverse CDF.
inline std::size_t sample_index(const DiscreteLaw& law, SeededRng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(law.cdf.begin(), law.cdf.end(), u);
  return std::min(static_cast<std::size_t>(it - law.cdf.begin()), law.cdf.size() - 1);
}

inline Subspace sample(const SubspaceDistribution& dist, SeededRng& rng) {
  if (dist.is_invariant()) {
    const InvariantLaw& law = dist.as_invariant();
    return sample_invariant(rng, law.k, law.d);
  }
  const DiscreteLaw& law = dist.as_discrete();
  return law.atoms[sample_index(law, rng)];
}

/// E[P_W]: exact sum for discrete laws, (k/d) I for the invariant law.
inline Matrix expected_projection(const SubspaceDistribution& dist) {
  const std::size_t d = dist.ambient_dim();
  if (dist.is_invariant()) {
    const InvariantLaw& law = dist.as_invariant();
    Matrix m = Matrix::identity(d);
    return m *= static_cast<double>(law.k) / static_cast<double>(law.d);
  }
  const DiscreteLaw& law = dist.as_discrete();
  Matrix m(d, d);
  for (std::size_t n = 0; n < law.atoms.size(); ++n)
    if (law.probs[n] > 0.0) m += law.probs[n] * law.atoms[n].projector();
  return m;
}

namespace detail {
inline void check_unit(const SubspaceDistribution& dist, const Vector& x) {
  if (x.size() != dist.ambient_dim()) fail(ErrorCode::DimensionMismatch, "probe has the wrong length");
  if (std::abs(norm(x) - 1.0) > 1e-10) fail(ErrorCode::NotUnitVector, "probe must be a unit vector");
}
}  // namespace detail

/// Σ p_n (1 - ‖P_{W_n} x‖²)^s over a discrete law, unit x.
inline double potential_s(const SubspaceDistribution& dist, const Vector& x, double s) {
  if (!dist.is_discrete())
    fail(ErrorCode::UnsupportedVariant, "potential of the invariant law is x-independent; use the closed form");
  if (!(s > 0.0)) fail(ErrorCode::InvalidParameter, "s must be > 0");
  detail::check_unit(dist, x);
  const DiscreteLaw& law = dist.as_discrete();
  double total = 0.0;
  for (std::size_t n = 0; n < law.atoms.size(); ++n) {
    if (law.probs[n] == 0.0) continue;
    const double gap = std::max(0.0, 1.0 - proj_norm_sq(law.atoms[n], x));
    total += law.probs[n] * std::pow(gap, s);
  }
  return total;
}

/// Σ p_n log(1 - ‖P_{W_n} x‖²); -infinity when x lies in an atom of positive mass.
inline double potential_log(const SubspaceDistribution& dist, const Vector& x) {
  if (!dist.is_discrete())
    fail(ErrorCode::UnsupportedVariant, "potential of the invariant law is x-independent; use the closed form");
  detail::check_unit(dist, x);
  const DiscreteLaw& law = dist.as_discrete();
  double total = 0.0;
  for (std::size_t n = 0; n < law.atoms.size(); ++n) {
    if (law.probs[n] == 0.0) continue;
    const double gap = std::max(0.0, 1.0 - proj_norm_sq(law.atoms[n], x));
    if (gap <= 0.0) return -std::numeric_limits<double>::infinity();
    total += law.probs[n] * std::log(gap);
  }
  return total;
}

// File form: "discrete d k N" then N records "p" + subspace text, or "invariant d k".

inline void write_distribution(std::ostream& os, const SubspaceDistribution& dist) {
  if (dist.is_invariant()) {
    const InvariantLaw& law = dist.as_invariant();
    os << "invariant " << law.d << ' ' << law.k << '\n';
    return;
  }
  const DiscreteLaw& law = dist.as_discrete();
  const auto k = dist.subspace_dim();
  os << "discrete " << dist.ambient_dim() << ' ' << (k ? *k : 0) << ' ' << law.atoms.size() << '\n';
  for (std::size_t n = 0; n < law.atoms.size(); ++n) {
    os << format_real(law.probs[n]) << '\n';
    write_subspace(os, law.atoms[n]);
  }
}

/// A header k of 0 marks a mixed-dimension law.
inline SubspaceDistribution read_distribution(std::istream& is) {
  std::string kind;
  if (!(is >> kind)) fail(ErrorCode::IoError, "empty distribution file");
  long d = 0, k = 0;
  if (kind == "invariant") {
    if (!(is >> d >> k) || d < 1 || k < 1 || k > d) fail(ErrorCode::IoError, "expected 'invariant d k'");
    return SubspaceDistribution::invariant(static_cast<std::size_t>(k), static_cast<std::size_t>(d));
  }
  if (kind != "discrete") fail(ErrorCode::IoError, "unknown distribution kind '" + kind + "'");
  long count = 0;
  if (!(is >> d >> k >> count) || d < 1 || k < 0 || k > d || count < 1)
    fail(ErrorCode::IoError, "expected 'discrete d k N'");
  std::vector<Subspace> atoms;
  std::vector<double> probs;
  for (long n = 0; n < count; ++n) {
    double p = 0.0;
    if (!(is >> p)) fail(ErrorCode::IoError, "expected atom probability");
    Subspace w = read_subspace(is);
    if (w.ambient_dim() != static_cast<std::size_t>(d) || (k > 0 && w.dim() != static_cast<std::size_t>(k)))
      fail(ErrorCode::IoError, "atom shape disagrees with the header");
    atoms.push_back(std::move(w));
    probs.push_back(p);
  }
  if (k == 0) return SubspaceDistribution::uniform_discrete(std::move(atoms), std::move(probs));
  return SubspaceDistribution::discrete(std::move(atoms), std::move(probs));
}

}  // namespace subact

#endif  // SUBACT_DISTRIBUTION_HPP
