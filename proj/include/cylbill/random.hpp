#pragma once

#include <Eigen/Core>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace cylbill {

/// SplitMix64 finalizer; derives independent stream seeds from (seed, index).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ (index * 0xd1342543de82ef95ULL + 1));
}

/// Uniform double in [0, 1) from the top 53 bits; unlike the standard
/// distributions this is identical across standard libraries.
template <class Rng>
double uniform01(Rng& rng) {
  static_assert(Rng::max() == ~std::uint64_t{0} && Rng::min() == 0);
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <class Rng>
Eigen::Vector3d uniform_sphere(Rng& rng) {
  const double z = 2.0 * uniform01(rng) - 1.0;
  const double phi = 2.0 * std::numbers::pi * uniform01(rng);
  const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
  return {s * std::cos(phi), s * std::sin(phi), z};
}

using Rng = std::mt19937_64;

}  // namespace cylbill
