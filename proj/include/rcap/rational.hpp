#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rcap/errors.hpp"

namespace rcap {

using Int = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

// Bit-size measure for rational data. `bits` is exact (no overflow at any
// operand size).
struct SizeReport {
  Int bits;

  friend bool operator==(const SizeReport&, const SizeReport&) = default;
};

// Number of binary digits of n >= 0; zero takes one digit. Equals
// max(1, ceil(log2(1 + n))).
inline Int bit_digits(const Int& n) {
  if (n <= 1) return 1;
  // ceil(log2(n + 1)) = msb(n) + 1 for n >= 2
  return Int(boost::multiprecision::msb(n)) + 1;
}

inline SizeReport size_of_rational(const Rational& x) {
  Int p = boost::multiprecision::abs(numerator(x));
  Int q = denominator(x);
  return SizeReport{1 + bit_digits(p) + bit_digits(q)};
}

inline SizeReport size_of_vector(std::span<const Rational> c) {
  Int bits = Int(c.size());
  for (const Rational& x : c) bits += size_of_rational(x).bits;
  return SizeReport{bits};
}

inline SizeReport size_of_vector(const std::vector<Rational>& c) {
  return size_of_vector(std::span<const Rational>(c));
}

// 1 + size(A) + size(b), with size(A) = mn + sum of entry sizes.
inline SizeReport size_of_system(const std::vector<std::vector<Rational>>& a,
                                 const std::vector<Rational>& b) {
  const size_t m = a.size();
  if (b.size() != m) throw input_error("system dimensions inconsistent");
  const size_t n = m == 0 ? 0 : a.front().size();
  Int bits = 1 + Int(m) * Int(n);
  for (const auto& row : a) {
    if (row.size() != n) throw input_error("ragged matrix");
    for (const Rational& x : row) bits += size_of_rational(x).bits;
  }
  bits += size_of_vector(b).bits;
  return SizeReport{bits};
}

// Text form "p/q" or bare "p", optional leading '-'.
inline Rational parse_rational(std::string_view text) {
  auto bad = [&] {
    return input_error("malformed rational: '" + std::string(text) + "'");
  };
  std::string_view s = text;
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  if (s.empty()) throw bad();
  bool neg = false;
  if (s.front() == '-') {
    neg = true;
    s.remove_prefix(1);
  }
  auto digits = [&](std::string_view d) {
    if (d.empty()) throw bad();
    for (char ch : d)
      if (ch < '0' || ch > '9') throw bad();
    return Int(std::string(d));
  };
  Int num, den = 1;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num = digits(s.substr(0, slash));
    den = digits(s.substr(slash + 1));
    if (den == 0) throw input_error("zero denominator: '" + std::string(text) + "'");
  } else {
    num = digits(s);
  }
  if (neg) num = -num;
  return Rational(num, den);
}

inline std::string format_rational(const Rational& x) {
  std::string out = numerator(x).str();
  if (denominator(x) != 1) out += "/" + denominator(x).str();
  return out;
}

inline std::string format_int(const Int& x) { return x.str(); }

}  // namespace rcap
