#pragma once

#include <cstdint>
#include <random>

#include "wetsim/types.hpp"

namespace wetsim {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// Deterministic per-(stream, substream) generator derived from one master
/// seed. Trials own disjoint streams, so results do not depend on how trials
/// are scheduled across threads.
inline std::mt19937_64 make_stream(std::uint64_t master_seed, std::uint64_t stream,
                                   std::uint64_t substream = 0) {
  std::uint64_t state = master_seed;
  std::uint64_t a = splitmix64(state);
  state ^= stream * 0xD1B54A32D192ED03ULL;
  std::uint64_t b = splitmix64(state);
  state ^= substream * 0xE7037ED1A0B428DBULL;
  std::uint64_t c = splitmix64(state);
  std::seed_seq seq{a, b, c};
  return std::mt19937_64(seq);
}

/// Circularly symmetric complex Gaussian with zero mean and unit variance.
/// Stateless Box-Muller so that a stream's output depends only on its seed,
/// never on which thread previously used the generator.
inline cplx complex_gaussian(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double u1 = unit(rng);
  while (u1 <= 0.0) u1 = unit(rng);
  const double u2 = unit(rng);
  const double r = std::sqrt(-std::log(u1));  // includes the 1/sqrt(2) variance split
  const double theta = 2.0 * pi * u2;
  return {r * std::cos(theta), r * std::sin(theta)};
}

/// Uniform draw on the complex sphere of squared norm `radius_sq`.
inline cvec random_sphere_point(Eigen::Index dim, double radius_sq, std::mt19937_64& rng) {
  cvec v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) v(i) = complex_gaussian(rng);
  v *= std::sqrt(radius_sq) / v.norm();
  return v;
}

}  // namespace wetsim
