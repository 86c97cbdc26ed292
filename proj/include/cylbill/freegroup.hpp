#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cylbill {

/// One of the six generators a, b, c and their inverses. Axis 1..3 maps to
/// a, b, c; sign -1 is the inverse.
struct Letter {
  std::int8_t axis = 1;
  std::int8_t sign = 1;

  constexpr Letter() = default;
  constexpr Letter(int axis_, int sign_)
      : axis(static_cast<std::int8_t>(axis_)),
        sign(static_cast<std::int8_t>(sign_)) {}

  constexpr Letter inverse() const { return {axis, -sign}; }
  constexpr bool cancels(Letter other) const {
    return axis == other.axis && sign == -other.sign;
  }
  /// Dense index 0..5 in the order a, A, b, B, c, C.
  constexpr int index() const { return 2 * (axis - 1) + (sign < 0 ? 1 : 0); }
  static constexpr Letter from_index(int i) { return {i / 2 + 1, i % 2 ? -1 : 1}; }

  char to_char() const;
  static Letter from_char(char ch);

  friend constexpr auto operator<=>(Letter, Letter) = default;
};

inline constexpr Letter kA{1, 1};
inline constexpr Letter kB{2, 1};
inline constexpr Letter kC{3, 1};

/// A freely reduced word in F3(a, b, c). The only way to obtain one is through
/// reduce(), so the no-adjacent-inverse invariant always holds.
class ReducedWord {
 public:
  ReducedWord() = default;

  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }
  Letter operator[](std::size_t i) const { return letters_[i]; }
  Letter front() const { return letters_.front(); }
  Letter back() const { return letters_.back(); }
  std::span<const Letter> letters() const { return letters_; }
  auto begin() const { return letters_.begin(); }
  auto end() const { return letters_.end(); }

  ReducedWord inverse() const;
  /// First min(n, size()) letters; a prefix of a reduced word is reduced.
  ReducedWord prefix(std::size_t n) const;
  /// True when the first and last letters are not mutually inverse.
  bool cyclically_reduced() const;

  /// Text form: letters `abcABC` (capitals are inverses), `-` for the empty word.
  std::string str() const;
  /// Parses the text form and reduces it.
  static ReducedWord parse(std::string_view text);
  /// Parses the text form and throws if the input is not already reduced.
  static ReducedWord parse_reduced(std::string_view text);

  friend bool operator==(const ReducedWord&, const ReducedWord&) = default;

 private:
  friend ReducedWord reduce(std::span<const Letter> raw);
  friend class WordAccumulator;
  std::vector<Letter> letters_;
};

/// Stack-based free reduction, linear time.
ReducedWord reduce(std::span<const Letter> raw);

/// Incremental reduction for streams of letters (orbit face crossings).
class WordAccumulator {
 public:
  void push(Letter l);
  const ReducedWord& word() const { return word_; }
  ReducedWord take() && { return std::move(word_); }

 private:
  ReducedWord word_;
};

ReducedWord concat(const ReducedWord& u, const ReducedWord& v);

/// Distance in the Cayley tree: |reduce(u^-1 v)|.
std::size_t cayley_distance(const ReducedWord& u, const ReducedWord& v);

ReducedWord common_prefix(const ReducedWord& u, const ReducedWord& v);

/// Number of reduced words of length n: 1 for n = 0, otherwise 6 * 5^(n-1).
boost::multiprecision::cpp_int count_reduced_words(unsigned n);

/// Natural log of a positive big integer, accurate to double precision.
double log_big(const boost::multiprecision::cpp_int& x);

/// Cylinder of ends sharing a finite reduced prefix. The empty prefix stands
/// for the cone vertex.
struct EndPrefix {
  ReducedWord word;
  friend bool operator==(const EndPrefix&, const EndPrefix&) = default;
};

/// Point of the cone [0, inf) x Ends / {0} x Ends.
struct RotationVector {
  double speed = 0.0;
  EndPrefix direction;
};

}  // namespace cylbill
