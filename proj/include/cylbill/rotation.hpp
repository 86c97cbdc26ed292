#pragma once

#include "cylbill/flow.hpp"
#include "cylbill/freegroup.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace cylbill {

inline constexpr std::size_t kDefaultPrefixLength = 64;

/// Finite-time homotopical rotation vector of one orbit segment.
struct RotationSample {
  RotationVector vector;
  double T = 0.0;
  std::size_t word_length = 0;
  std::array<std::int64_t, 3> crossings{0, 0, 0};
  std::uint64_t seed = 0;  // initial-condition seed; 0 for constructed orbits
  std::string provenance;  // "random" or the constructed word
};

/// Speed |g_T| / T and the first `prefix_len` letters of g_T as direction.
RotationSample rotation_vector(const OrbitRecord& record, std::size_t prefix_len = kDefaultPrefixLength);
RotationSample rotation_vector(const ReducedWord& word, double T, std::size_t prefix_len = kDefaultPrefixLength);

/// Per-prefix speed statistics. Node i aggregates every sample whose
/// direction starts with the node's prefix; the root covers all samples.
class PrefixTree {
 public:
  struct Stats {
    double max_speed = 0.0;
    double min_speed = 0.0;
    std::uint64_t count = 0;
  };

  PrefixTree();

  void insert(const EndPrefix& direction, double speed);
  /// Commutative, associative union of the sample multisets.
  void merge(const PrefixTree& other);

  /// Stats for a prefix, or a zero-count entry if no sample starts with it.
  Stats stats(const ReducedWord& prefix) const;
  std::size_t node_count() const { return nodes_.size(); }

  /// {"max_speed", "min_speed", "count", "children": {"a": {...}, ...}},
  /// children emitted in a, A, b, B, c, C order down to `max_depth`.
  nlohmann::ordered_json to_json(std::size_t max_depth) const;

 private:
  struct Node {
    Stats stats;
    std::array<std::int32_t, 6> child{-1, -1, -1, -1, -1, -1};
  };
  static void absorb(Stats& into, const Stats& from);
  void merge_node(std::int32_t into, const PrefixTree& other, std::int32_t from);
  nlohmann::ordered_json node_json(std::int32_t node, std::size_t depth_left) const;
  std::vector<Node> nodes_;
};

struct RotationSetEstimate {
  std::vector<RotationSample> samples;
  PrefixTree tree;
  std::size_t singular_count = 0;
  double T_min = 0.0;

  void add(RotationSample sample);
  void merge(const RotationSetEstimate& other);
  double max_speed() const;
};

struct SamplingOptions {
  std::size_t prefix_len = kDefaultPrefixLength;
  unsigned jobs = 1;
};

/// Simulates n_orbits uniform initial conditions (orbit i uses
/// stream_seed(seed, i)) and aggregates their rotation samples. Singular
/// orbits are excluded and counted.
RotationSetEstimate sample_rotation_set(std::size_t n_orbits, double T, double r0, std::uint64_t seed,
                                        const SamplingOptions& opts = {});

struct SpeedBoundCheck {
  bool pass = false;
  double slack = 0.0;  // sqrt(3) T + 3 - (n_x + n_y + n_z)
};

/// The crossing-count envelope n_x + n_y + n_z <= sqrt(3) T + 3.
SpeedBoundCheck check_speed_bound(const OrbitRecord& record);

}  // namespace cylbill
