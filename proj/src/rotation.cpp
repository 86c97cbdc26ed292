#include "cylbill/rotation.hpp"

#include "cylbill/parallel.hpp"
#include "cylbill/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace cylbill {

RotationSample rotation_vector(const ReducedWord& word, double T, std::size_t prefix_len) {
  if (!(T > 0.0)) throw std::invalid_argument("rotation_vector: duration must be positive");
  RotationSample s;
  s.T = T;
  s.word_length = word.size();
  s.vector.speed = static_cast<double>(word.size()) / T;
  s.vector.direction = EndPrefix{word.prefix(prefix_len)};
  return s;
}

RotationSample rotation_vector(const OrbitRecord& record, std::size_t prefix_len) {
  RotationSample s = rotation_vector(word_of(record), record.duration(), prefix_len);
  s.crossings = record.crossings;
  return s;
}

PrefixTree::PrefixTree() : nodes_(1) {}

void PrefixTree::absorb(Stats& into, const Stats& from) {
  if (from.count == 0) return;
  if (into.count == 0) {
    into = from;
    return;
  }
  into.max_speed = std::max(into.max_speed, from.max_speed);
  into.min_speed = std::min(into.min_speed, from.min_speed);
  into.count += from.count;
}

void PrefixTree::insert(const EndPrefix& direction, double speed) {
  const Stats one{speed, speed, 1};
  std::int32_t node = 0;
  absorb(nodes_[0].stats, one);
  for (Letter l : direction.word) {
    const int i = l.index();
    if (nodes_[node].child[i] < 0) {
      nodes_[node].child[i] = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    node = nodes_[node].child[i];
    absorb(nodes_[node].stats, one);
  }
}

void PrefixTree::merge_node(std::int32_t into, const PrefixTree& other, std::int32_t from) {
  absorb(nodes_[into].stats, other.nodes_[from].stats);
  for (int i = 0; i < 6; ++i) {
    const std::int32_t src = other.nodes_[from].child[i];
    if (src < 0) continue;
    if (nodes_[into].child[i] < 0) {
      nodes_[into].child[i] = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    merge_node(nodes_[into].child[i], other, src);
  }
}

void PrefixTree::merge(const PrefixTree& other) { merge_node(0, other, 0); }

PrefixTree::Stats PrefixTree::stats(const ReducedWord& prefix) const {
  std::int32_t node = 0;
  for (Letter l : prefix) {
    node = nodes_[node].child[l.index()];
    if (node < 0) return {};
  }
  return nodes_[node].stats;
}

nlohmann::ordered_json PrefixTree::node_json(std::int32_t node, std::size_t depth_left) const {
  const Stats& s = nodes_[node].stats;
  nlohmann::ordered_json j;
  j["max_speed"] = s.max_speed;
  j["min_speed"] = s.min_speed;
  j["count"] = s.count;
  if (depth_left > 0) {
    nlohmann::ordered_json children = nlohmann::ordered_json::object();
    for (int i = 0; i < 6; ++i) {
      const std::int32_t c = nodes_[node].child[i];
      if (c >= 0) children[std::string(1, Letter::from_index(i).to_char())] = node_json(c, depth_left - 1);
    }
    if (!children.empty()) j["children"] = std::move(children);
  }
  return j;
}

nlohmann::ordered_json PrefixTree::to_json(std::size_t max_depth) const { return node_json(0, max_depth); }

void RotationSetEstimate::add(RotationSample sample) {
  tree.insert(sample.vector.direction, sample.vector.speed);
  T_min = samples.empty() ? sample.T : std::min(T_min, sample.T);
  samples.push_back(std::move(sample));
}

void RotationSetEstimate::merge(const RotationSetEstimate& other) {
  if (!other.samples.empty())
    T_min = samples.empty() ? other.T_min : std::min(T_min, other.T_min);
  samples.insert(samples.end(), other.samples.begin(), other.samples.end());
  tree.merge(other.tree);
  singular_count += other.singular_count;
}

double RotationSetEstimate::max_speed() const {
  double m = 0.0;
  for (const auto& s : samples) m = std::max(m, s.vector.speed);
  return m;
}

RotationSetEstimate sample_rotation_set(std::size_t n_orbits, double T, double r0, std::uint64_t seed,
                                        const SamplingOptions& opts) {
  if (n_orbits < 1) throw std::invalid_argument("sample_rotation_set: need at least one orbit");
  std::vector<std::optional<RotationSample>> results(n_orbits);
  SimulateOptions sim;
  sim.keep_collisions = false;
  parallel_for(n_orbits, opts.jobs, [&](std::size_t i) {
    const std::uint64_t s = stream_seed(seed, i);
    Rng rng(s);
    const PhasePoint start = random_phase_point(rng, r0);
    const OrbitRecord rec = simulate(start, T, r0, sim);
    if (rec.singular()) return;
    RotationSample sample = rotation_vector(rec, opts.prefix_len);
    sample.seed = s;
    sample.provenance = "random";
    results[i] = std::move(sample);
  });
  RotationSetEstimate est;
  for (auto& r : results) {
    if (r)
      est.add(std::move(*r));
    else
      ++est.singular_count;
  }
  return est;
}

SpeedBoundCheck check_speed_bound(const OrbitRecord& record) {
  const double bound = std::numbers::sqrt3 * record.duration() + 3.0;
  const double n = static_cast<double>(record.total_crossings());
  return {n <= bound, bound - n};
}

}  // namespace cylbill
