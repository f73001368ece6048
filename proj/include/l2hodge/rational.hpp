#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>

#include "l2hodge/common.hpp"

namespace l2hodge {

// Exact scalar for all cohomology computations. Arbitrary-precision
// numerator/denominator: spectral-sequence pages must be exact or the
// truncation logic silently corrupts dimensions.
using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

inline Int rat_num(const Rat& r) { return boost::multiprecision::numerator(r); }
inline Int rat_den(const Rat& r) { return boost::multiprecision::denominator(r); }

inline int sign_of(const Rat& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

// Parses "p", "p/q", or a plain integer string. Used by the manifest
// format, where rationals are serialized as strings for bit-exact files.
inline Rat parse_rat(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rat(Int(s));
    Int num(s.substr(0, slash));
    Int den(s.substr(slash + 1));
    require(den != 0, "rational with zero denominator: " + s);
    return Rat(num, den);
  } catch (const std::runtime_error&) {
    throw ValidationError("unparseable rational: '" + s + "'");
  }
}

inline std::string rat_to_string(const Rat& r) {
  if (rat_den(r) == 1) return rat_num(r).str();
  return rat_num(r).str() + "/" + rat_den(r).str();
}

inline Int int_sqrt_floor(const Int& n) {
  if (n < 0) throw ValidationError("int_sqrt_floor of negative");
  return boost::multiprecision::sqrt(n);
}

// Exact square root of a nonnegative rational, if it is a perfect square.
inline std::optional<Rat> rat_sqrt_exact(const Rat& r) {
  if (r < 0) return std::nullopt;
  Int n = rat_num(r), d = rat_den(r);
  Int sn = int_sqrt_floor(n), sd = int_sqrt_floor(d);
  if (sn * sn == n && sd * sd == d) return Rat(sn, sd);
  return std::nullopt;
}

// floor(r) as an exact integer count.
inline Count rat_floor(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  Int q = n / d;
  if (n % d != 0 && ((n < 0) != (d < 0))) q -= 1;
  return static_cast<Count>(q);
}

}  // namespace l2hodge
