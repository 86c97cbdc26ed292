#pragma once

#include "cylbill/freegroup.hpp"
#include "cylbill/geometry.hpp"
#include "cylbill/random.hpp"

#include <vector>

namespace cylbill::testing {

inline Letter random_letter(Rng& rng) { return Letter::from_index(static_cast<int>(rng() % 6)); }

inline std::vector<Letter> random_letters(Rng& rng, std::size_t n) {
  std::vector<Letter> out(n);
  for (auto& l : out) l = random_letter(rng);
  return out;
}

/// Uniform reduced word of length n: each letter avoids cancelling its predecessor.
inline ReducedWord random_reduced_word(Rng& rng, std::size_t n) {
  std::vector<Letter> out;
  while (out.size() < n) {
    const Letter l = random_letter(rng);
    if (!out.empty() && l.cancels(out.back())) continue;
    out.push_back(l);
  }
  return reduce(out);
}

/// Reduced and cyclically reduced word of length n.
inline ReducedWord random_cyclic_word(Rng& rng, std::size_t n) {
  while (true) {
    ReducedWord w = random_reduced_word(rng, n);
    if (w.cyclically_reduced()) return w;
  }
}

inline Vec3 random_unit(Rng& rng) { return uniform_sphere(rng); }

inline Vec3 random_box(Rng& rng, double lo, double hi) {
  return Vec3(lo + (hi - lo) * uniform01(rng), lo + (hi - lo) * uniform01(rng), lo + (hi - lo) * uniform01(rng));
}

}  // namespace cylbill::testing
