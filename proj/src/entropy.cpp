#include "cylbill/entropy.hpp"

#include "cylbill/parallel.hpp"
#include "cylbill/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cylbill {

namespace {

void check_eps0(double eps0) {
  if (!(eps0 > 0.0 && eps0 < 0.5)) throw std::invalid_argument("eps0 must lie in (0, 1/2)");
}

double frac(double x) { return x - std::floor(x); }

bool in_band(const Vec3& q, double eps0) {
  for (int i = 0; i < 3; ++i) {
    const double f = frac(q[i]);
    if (f <= eps0 || 1.0 - f <= eps0) return true;
  }
  return false;
}

std::size_t sample_count(double T, double eps0) {
  return static_cast<std::size_t>(std::floor(T / eps0 + 1e-9)) + 1;
}

// Straight pieces of the orbit: (start position, velocity, duration).
template <class Fn>
void for_each_piece(const OrbitRecord& rec, Fn&& fn) {
  Vec3 q = rec.initial.q, v = rec.initial.v;
  double t = rec.initial.t;
  for (const auto& e : rec.events) {
    fn(q, v, e.time - t);
    q = e.q;
    v = e.v;
    t = e.time;
  }
  fn(q, v, rec.final.t - t);
}

}  // namespace

std::string_view to_string(PartitionLabel label) {
  switch (label) {
    case PartitionLabel::D0: return "D0";
    case PartitionLabel::D1Plus: return "D1+";
    case PartitionLabel::D1Minus: return "D1-";
    case PartitionLabel::D2Plus: return "D2+";
    case PartitionLabel::D2Minus: return "D2-";
    case PartitionLabel::D3Plus: return "D3+";
    case PartitionLabel::D3Minus: return "D3-";
  }
  return "?";
}

PartitionLabel classify(const Vec3& q, double eps0) {
  check_eps0(eps0);
  for (int k = 0; k < 3; ++k) {
    const double f = frac(q[k]);
    if (f <= eps0) return static_cast<PartitionLabel>(1 + 2 * k);
    if (1.0 - f <= eps0) return static_cast<PartitionLabel>(2 + 2 * k);
  }
  return PartitionLabel::D0;
}

Itinerary itinerary_of(const OrbitRecord& record, double eps0) {
  check_eps0(eps0);
  Itinerary it;
  it.eps0 = eps0;
  const double T = record.duration();
  const std::size_t n = sample_count(T, eps0);
  it.labels.reserve(n);
  const auto& evs = record.events;
  std::size_t next = 0;
  Vec3 q = record.initial.q, v = record.initial.v;
  double t0 = record.initial.t;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = record.initial.t + std::min(static_cast<double>(i) * eps0, T);
    while (next < evs.size() && evs[next].time <= t) {
      q = evs[next].q;
      v = evs[next].v;
      t0 = evs[next].time;
      ++next;
    }
    it.labels.push_back(classify(q + (t - t0) * v, eps0));
  }
  return it;
}

std::vector<bool> band_sequence(const OrbitRecord& record, double eps0) {
  check_eps0(eps0);
  std::vector<bool> seq;
  auto push = [&seq](bool b) {
    if (seq.empty() || seq.back() != b) seq.push_back(b);
  };
  std::vector<double> cuts;
  for_each_piece(record, [&](const Vec3& q, const Vec3& v, double dt) {
    if (dt <= 0.0) return;
    cuts.assign({0.0, dt});
    for (int i = 0; i < 3; ++i) {
      if (v[i] == 0.0) continue;
      const double a = std::min(q[i], q[i] + dt * v[i]);
      const double b = std::max(q[i], q[i] + dt * v[i]);
      for (double m = std::floor(a) - 1; m <= std::ceil(b) + 1; m += 1.0) {
        for (double level : {m + eps0, m + 1.0 - eps0}) {
          const double tc = (level - q[i]) / v[i];
          if (tc > 0.0 && tc < dt) cuts.push_back(tc);
        }
      }
    }
    std::sort(cuts.begin(), cuts.end());
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
      if (cuts[c + 1] <= cuts[c]) continue;
      push(in_band(q + 0.5 * (cuts[c] + cuts[c + 1]) * v, eps0));
    }
  });
  return seq;
}

std::size_t count_band_visits(const OrbitRecord& record, double eps0) {
  const auto seq = band_sequence(record, eps0);
  return static_cast<std::size_t>(std::count(seq.begin(), seq.end(), true));
}

UpperBound upper_bound_f(double T, double eps0) {
  if (!(T > 0.0)) throw std::invalid_argument("upper_bound_f: T must be positive");
  if (!(eps0 > 0.0 && eps0 < 1.0)) throw std::invalid_argument("upper_bound_f: eps0 must lie in (0, 1)");
  UpperBound u;
  u.f = 2.0 * std::numbers::sqrt3 * T / (1.0 - eps0) + 7.0;
  u.rate = u.f * std::log(12.0) / T;
  return u;
}

double lower_bound_words(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("lower_bound_words: T must be positive");
  const auto n = static_cast<unsigned>(std::floor(T / 3.0));
  return log_big(count_reduced_words(n)) / T;
}

ItinerarySet::Hash128 ItinerarySet::hash(std::span<const PartitionLabel> seq) {
  std::uint64_t a = 0xcbf29ce484222325ULL, b = 0x84222325cbf29ce4ULL;
  for (PartitionLabel l : seq) {
    const auto x = static_cast<std::uint64_t>(l) + 1;
    a = (a ^ x) * 0x100000001b3ULL;
    b = (b + x) * 0x9e3779b97f4a7c15ULL;
    b ^= b >> 29;
  }
  return {splitmix64(a ^ seq.size()), splitmix64(b + seq.size())};
}

bool ItinerarySet::insert(std::span<const PartitionLabel> seq) {
  auto& bucket = buckets_[hash(seq)];
  for (const auto& s : bucket)
    if (std::equal(s.begin(), s.end(), seq.begin(), seq.end())) return false;
  bucket.push_back(seq);
  ++size_;
  return true;
}

EntropyReport count_itineraries(std::size_t n_orbits, std::span<const double> T_grid, double eps0, double r0,
                                std::uint64_t seed, unsigned jobs) {
  check_eps0(eps0);
  if (T_grid.empty()) throw std::invalid_argument("count_itineraries: empty T grid");
  for (std::size_t i = 0; i < T_grid.size(); ++i) {
    if (!(T_grid[i] > 0.0) || (i > 0 && !(T_grid[i] > T_grid[i - 1])))
      throw std::invalid_argument("count_itineraries: T grid must be positive and increasing");
  }
  const double T_max = T_grid.back();

  std::vector<std::vector<PartitionLabel>> itineraries(n_orbits);
  std::vector<char> ok(n_orbits, 0);
  parallel_for(n_orbits, jobs, [&](std::size_t i) {
    Rng rng(stream_seed(seed, i));
    const PhasePoint start = random_phase_point(rng, r0);
    const OrbitRecord rec = simulate(start, T_max, r0);
    if (rec.singular()) return;
    itineraries[i] = itinerary_of(rec, eps0).labels;
    ok[i] = 1;
  });

  EntropyReport report;
  report.eps0 = eps0;
  report.r0 = r0;
  report.n_orbits = n_orbits;
  report.singular_count = static_cast<std::size_t>(std::count(ok.begin(), ok.end(), 0));
  for (double T : T_grid) {
    const std::size_t len = sample_count(T, eps0);
    ItinerarySet set;
    for (std::size_t i = 0; i < n_orbits; ++i)
      if (ok[i]) set.insert(std::span(itineraries[i]).first(len));
    EntropyRow row;
    row.T = T;
    row.n_hat = set.size();
    row.log_rate = row.n_hat > 0 ? std::log(static_cast<double>(row.n_hat)) / T : 0.0;
    const UpperBound ub = upper_bound_f(T, eps0);
    row.f = ub.f;
    row.upper_rate = ub.rate;
    row.lower_rate = lower_bound_words(T);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cylbill
