#include "cylbill/freegroup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cylbill {

namespace mp = boost::multiprecision;

char Letter::to_char() const {
  const char base = static_cast<char>('a' + axis - 1);
  return sign > 0 ? base : static_cast<char>(base - 'a' + 'A');
}

Letter Letter::from_char(char ch) {
  switch (ch) {
    case 'a': return {1, 1};
    case 'b': return {2, 1};
    case 'c': return {3, 1};
    case 'A': return {1, -1};
    case 'B': return {2, -1};
    case 'C': return {3, -1};
    default:
      throw std::invalid_argument(std::string("invalid word letter '") + ch + "'");
  }
}

ReducedWord reduce(std::span<const Letter> raw) {
  ReducedWord out;
  out.letters_.reserve(raw.size());
  for (Letter l : raw) {
    if (!out.letters_.empty() && out.letters_.back().cancels(l))
      out.letters_.pop_back();
    else
      out.letters_.push_back(l);
  }
  return out;
}

void WordAccumulator::push(Letter l) {
  auto& ls = word_.letters_;
  if (!ls.empty() && ls.back().cancels(l))
    ls.pop_back();
  else
    ls.push_back(l);
}

ReducedWord ReducedWord::inverse() const {
  ReducedWord out;
  out.letters_.reserve(letters_.size());
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it)
    out.letters_.push_back(it->inverse());
  return out;
}

ReducedWord ReducedWord::prefix(std::size_t n) const {
  ReducedWord out;
  n = std::min(n, letters_.size());
  out.letters_.assign(letters_.begin(), letters_.begin() + static_cast<std::ptrdiff_t>(n));
  return out;
}

bool ReducedWord::cyclically_reduced() const {
  return letters_.size() < 2 || !letters_.front().cancels(letters_.back());
}

std::string ReducedWord::str() const {
  if (letters_.empty()) return "-";
  std::string s;
  s.reserve(letters_.size());
  for (Letter l : letters_) s.push_back(l.to_char());
  return s;
}

namespace {
std::vector<Letter> parse_letters(std::string_view text) {
  std::vector<Letter> raw;
  if (text == "-") return raw;
  raw.reserve(text.size());
  for (char ch : text) raw.push_back(Letter::from_char(ch));
  return raw;
}
}  // namespace

ReducedWord ReducedWord::parse(std::string_view text) {
  return reduce(parse_letters(text));
}

ReducedWord ReducedWord::parse_reduced(std::string_view text) {
  auto raw = parse_letters(text);
  auto w = reduce(raw);
  if (w.size() != raw.size())
    throw std::invalid_argument("word '" + std::string(text) + "' is not freely reduced");
  return w;
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v) {
  WordAccumulator acc;
  for (Letter l : u) acc.push(l);
  for (Letter l : v) acc.push(l);
  return std::move(acc).take();
}

std::size_t cayley_distance(const ReducedWord& u, const ReducedWord& v) {
  // u^-1 v reduces by cancelling the common prefix exactly once.
  const std::size_t k = common_prefix(u, v).size();
  return (u.size() - k) + (v.size() - k);
}

ReducedWord common_prefix(const ReducedWord& u, const ReducedWord& v) {
  const auto [iu, iv] = std::mismatch(u.begin(), u.end(), v.begin(), v.end());
  return u.prefix(static_cast<std::size_t>(iu - u.begin()));
}

mp::cpp_int count_reduced_words(unsigned n) {
  if (n == 0) return 1;
  return 6 * mp::pow(mp::cpp_int(5), n - 1);
}

double log_big(const mp::cpp_int& x) {
  if (x <= 0) throw std::domain_error("log_big: non-positive argument");
  const std::size_t bits = mp::msb(x) + 1;
  if (bits <= 1000) return std::log(x.convert_to<double>());
  const std::size_t shift = bits - 64;
  double top = 0.0;
  for (std::size_t i = bits; i-- > shift;) top = 2.0 * top + (mp::bit_test(x, static_cast<unsigned>(i)) ? 1.0 : 0.0);
  return std::log(top) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace cylbill
