#pragma once

#include "cylbill/flow.hpp"

#include <cstdint>
#include <span>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace cylbill {

/// Seven-domain partition of the table: D_k^+ where the fractional part of
/// x_k is at most eps0, D_k^- where 1 - frac(x_k) is at most eps0, D0 elsewhere.
enum class PartitionLabel : std::uint8_t { D0, D1Plus, D1Minus, D2Plus, D2Minus, D3Plus, D3Minus };

std::string_view to_string(PartitionLabel label);

/// Overlaps (corner regions, boundaries) resolve to the smallest k, with +
/// before -.
PartitionLabel classify(const Vec3& q, double eps0);

/// Labels sampled at times 0, eps0, 2 eps0, ..., floor(T / eps0) eps0.
struct Itinerary {
  std::vector<PartitionLabel> labels;
  double eps0 = 0.1;
};

/// Requires a record with collisions kept, so positions can be reconstructed.
Itinerary itinerary_of(const OrbitRecord& record, double eps0);

/// Number of separate visits to the union of the six D_k^{+-} domains along
/// the continuous orbit (an initial position inside counts as a visit).
std::size_t count_band_visits(const OrbitRecord& record, double eps0);

/// Continuous-time domain sequence reduced to D0 (false) / D* (true) with
/// repeats merged. Alternates by construction; exposed for checking.
std::vector<bool> band_sequence(const OrbitRecord& record, double eps0);

struct UpperBound {
  double f = 0.0;     // 2 sqrt(3) T / (1 - eps0) + 7
  double rate = 0.0;  // ln(12^f) / T
};
UpperBound upper_bound_f(double T, double eps0);

/// (1/T) ln(count_reduced_words(floor(T / 3))).
double lower_bound_words(double T);

/// Set of label sequences keyed by a 128-bit hash, with exact comparison on
/// hash collisions. Stores views: the caller keeps sequences alive.
class ItinerarySet {
 public:
  /// Returns true when the sequence was not present.
  bool insert(std::span<const PartitionLabel> seq);
  std::size_t size() const { return size_; }

  struct Hash128 {
    std::uint64_t lo = 0, hi = 0;
    friend bool operator==(const Hash128&, const Hash128&) = default;
  };
  static Hash128 hash(std::span<const PartitionLabel> seq);

 private:
  struct HashOfHash {
    std::size_t operator()(const Hash128& h) const { return static_cast<std::size_t>(h.lo ^ (h.hi * 31)); }
  };
  std::unordered_map<Hash128, std::vector<std::span<const PartitionLabel>>, HashOfHash> buckets_;
  std::size_t size_ = 0;
};

struct EntropyRow {
  double T = 0.0;
  std::size_t n_hat = 0;  // distinct itineraries observed: a lower estimate of N(T)
  double log_rate = 0.0;  // (1/T) ln n_hat
  double f = 0.0;
  double upper_rate = 0.0;
  double lower_rate = 0.0;
};

struct EntropyReport {
  double eps0 = 0.1;
  double r0 = 0.1;
  std::size_t n_orbits = 0;
  std::size_t singular_count = 0;
  std::vector<EntropyRow> rows;
};

/// Counts distinct itineraries among n_orbits uniform initial conditions
/// (orbit i uses stream_seed(seed, i)) for each T of an increasing grid.
EntropyReport count_itineraries(std::size_t n_orbits, std::span<const double> T_grid, double eps0, double r0,
                                std::uint64_t seed, unsigned jobs = 1);

}  // namespace cylbill
