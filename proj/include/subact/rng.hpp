#ifndef SUBACT_RNG_HPP
#define SUBACT_RNG_HPP

#include <cstdint>
#include <random>

#include "subact/linalg.hpp"

namespace subact {

/// Reproducible random stream identified by (seed, stream_id).
///
/// Each instance owns its engine; two instances with the same pair produce
/// the same draws, and different stream ids give independent sequences.
/// Not safe to share between threads; give each worker its own stream.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0) : seed_(seed), stream_(stream_id) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream_id),
                      static_cast<std::uint32_t>(stream_id >> 32), 0x9e3779b9u};
    engine_.seed(seq);
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_; }

  /// A fresh stream sharing this seed.
  SeededRng substream(std::uint64_t stream_id) const { return SeededRng(seed_, stream_id); }

  double normal() { return normal_(engine_); }
  /// Uniform on [0, 1).
  double uniform() { return uniform_(engine_); }
  std::size_t index(std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline Matrix gaussian_matrix(SeededRng& rng, std::size_t d, std::size_t k) {
  if (k < 1 || d < k) fail(ErrorCode::InvalidParameter, "gaussian_matrix needs d >= k >= 1");
  Matrix m(d, k);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < k; ++j) m(i, j) = rng.normal();
  return m;
}

/// Uniform point on the unit sphere in R^d.
inline Vector random_unit_vector(SeededRng& rng, std::size_t d) {
  Vector v(d);
  double n2 = 0.0;
  while (n2 == 0.0) {
    for (std::size_t i = 0; i < d; ++i) v[i] = rng.normal();
    n2 = norm_sq(v);
  }
  return v *= 1.0 / std::sqrt(n2);
}

}  // namespace subact

#endif  // SUBACT_RNG_HPP
