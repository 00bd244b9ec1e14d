#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace plexus {

// Structural storage supports cells up to this dimension; all decision
// procedures operate on arrows of dimension <= 3.
inline constexpr int kMaxDim = 4;

enum class Sign : std::uint8_t { Minus, Plus };

inline char sign_char(Sign s) { return s == Sign::Minus ? '-' : '+'; }

// Three-valued logic for equality and related predicates. `Unknown` means the
// search was inconclusive, never that the answer is "no".
enum class Verdict : std::uint8_t { False, True, Unknown };

inline Verdict verdict_and(Verdict a, Verdict b) {
  if (a == Verdict::False || b == Verdict::False) return Verdict::False;
  if (a == Verdict::Unknown || b == Verdict::Unknown) return Verdict::Unknown;
  return Verdict::True;
}

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::False: return "false";
    case Verdict::True: return "true";
    default: return "unknown";
  }
}

struct UnsupportedDimension : std::runtime_error {
  explicit UnsupportedDimension(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what), line(line_) {}
};

}  // namespace plexus
