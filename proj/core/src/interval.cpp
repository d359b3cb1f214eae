#include "ccproof/interval.hpp"

#include <cerrno>
#include <cfenv>
#include <cstdio>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace ccproof {

namespace {

class RoundingModeGuard {
 public:
  explicit RoundingModeGuard(int mode) : saved_(std::fegetround()) { std::fesetround(mode); }
  ~RoundingModeGuard() { std::fesetround(saved_); }
  RoundingModeGuard(const RoundingModeGuard&) = delete;
  RoundingModeGuard& operator=(const RoundingModeGuard&) = delete;

 private:
  int saved_;
};

std::string print_directed(Real v, int mode) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  {
    RoundingModeGuard guard(mode);
    std::snprintf(buf, sizeof buf, "%.20Le", v);
  }
  return buf;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

Real parse_directed(const std::string& s, int mode) {
  if (s.empty()) throw std::invalid_argument("empty number");
  char* end = nullptr;
  Real v;
  {
    RoundingModeGuard guard(mode);
    errno = 0;
    v = std::strtold(s.c_str(), &end);
  }
  if (end == s.c_str() || *end != '\0') throw std::invalid_argument("not a number: " + s);
  if (std::isnan(v)) throw std::invalid_argument("NaN endpoint");
  return v;
}

}  // namespace

Interval operator/(const Interval& a, const Interval& b) {
  using namespace rounding;
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  if (b.contains_zero()) throw DivisionByZeroInterval();
  const Real al = a.lo(), ah = a.hi(), bl = b.lo(), bh = b.hi();
  if (bl > 0) {
    if (al >= 0) return make_unchecked(div_down(al, bh), div_up(ah, bl));
    if (ah <= 0) return make_unchecked(div_down(al, bl), div_up(ah, bh));
    return make_unchecked(div_down(al, bl), div_up(ah, bl));
  }
  if (al >= 0) return make_unchecked(div_down(ah, bh), div_up(al, bl));
  if (ah <= 0) return make_unchecked(div_down(ah, bl), div_up(al, bh));
  return make_unchecked(div_down(ah, bh), div_up(al, bh));
}

Interval sqrt(const Interval& a) {
  if (a.is_empty()) return a;
  if (a.lo() < 0) throw NegativeDomain();
  return make_unchecked(rounding::sqrt_down(a.lo()), rounding::sqrt_up(a.hi()));
}

Interval pow_3_2(const Interval& a) { return sqrt(a) * a; }

Interval intersect(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return Interval::empty();
  const Real lo = std::max(a.lo(), b.lo());
  const Real hi = std::min(a.hi(), b.hi());
  if (lo > hi) return Interval::empty();
  return make_unchecked(lo, hi);
}

Interval hull(const Interval& a, const Interval& b) {
  if (a.is_empty()) return b;
  if (b.is_empty()) return a;
  return make_unchecked(std::min(a.lo(), b.lo()), std::max(a.hi(), b.hi()));
}

Real midpoint(const Interval& a) {
  if (a.is_empty()) throw std::invalid_argument("midpoint of empty interval");
  if (a.lo() == a.hi()) return a.lo();
  Real m = a.lo() / 2 + a.hi() / 2;
  if (!std::isfinite(m)) m = 0;
  return std::clamp(m, a.lo(), a.hi());
}

Real diameter(const Interval& a) {
  if (a.is_empty()) return 0;
  return rounding::sub_up(a.hi(), a.lo());
}

Real radius(const Interval& a) {
  if (a.is_empty()) return 0;
  return rounding::div_up(diameter(a), 2);
}

Real magnitude(const Interval& a) {
  if (a.is_empty()) return 0;
  return std::max(std::fabs(a.lo()), std::fabs(a.hi()));
}

bool subset(const Interval& a, const Interval& b) {
  if (a.is_empty()) return true;
  if (b.is_empty()) return false;
  return b.lo() <= a.lo() && a.hi() <= b.hi();
}

bool interior_subset(const Interval& a, const Interval& b) {
  if (a.is_empty()) return true;
  if (b.is_empty()) return false;
  return b.lo() < a.lo() && a.hi() < b.hi();
}

bool overlaps(const Interval& a, const Interval& b) {
  if (a.is_empty() || b.is_empty()) return false;
  return a.lo() <= b.hi() && b.lo() <= a.hi();
}

std::string to_string(const Interval& a) {
  if (a.is_empty()) return "[empty]";
  return "[" + print_directed(a.lo(), FE_DOWNWARD) + ", " + print_directed(a.hi(), FE_UPWARD) + "]";
}

namespace {

Interval parse_bracket(std::string_view text, int lo_mode, int hi_mode) {
  const std::string s = trim(text);
  if (s == "[empty]") return Interval::empty();
  if (s.empty()) throw std::invalid_argument("empty interval text");
  if (s.front() != '[') return Interval(parse_directed(s, lo_mode), parse_directed(s, hi_mode));
  if (s.back() != ']') throw std::invalid_argument("interval text must end with ']': " + s);
  const auto comma = s.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("interval text needs a comma: " + s);
  const Real lo = parse_directed(trim(std::string_view(s).substr(1, comma - 1)), lo_mode);
  const Real hi = parse_directed(trim(std::string_view(s).substr(comma + 1, s.size() - comma - 2)), hi_mode);
  if (!(lo <= hi)) throw std::invalid_argument("interval lower end exceeds upper end: " + s);
  return Interval(lo, hi);
}

}  // namespace

Interval parse_interval(std::string_view text) { return parse_bracket(text, FE_TONEAREST, FE_TONEAREST); }

Interval enclose_interval(std::string_view text) { return parse_bracket(text, FE_DOWNWARD, FE_UPWARD); }

Interval enclose_decimal(std::string_view text) {
  const std::string s = trim(text);
  return Interval(parse_directed(s, FE_DOWNWARD), parse_directed(s, FE_UPWARD));
}

Real parse_real(std::string_view text) { return parse_directed(trim(text), FE_TONEAREST); }

std::string format_real(Real v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.20Le", v);
  return buf;
}

}  // namespace ccproof
