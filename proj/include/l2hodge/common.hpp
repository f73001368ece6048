#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace l2hodge {

// Dimension counts (Betti numbers, ranks, degrees). Small by nature; the
// exactness requirements live in the rational scalar type, not here.
using Count = long long;
using Dims = std::vector<Count>;

// Error categories used across the library. Everything user-facing is a
// subclass of Error so the CLI can map engine failures to exit code 1.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or mutually inconsistent input data (shape mismatches,
// violated type invariants, unparseable manifests).
class ValidationError : public Error {
public:
  explicit ValidationError(const std::string& what) : Error(what) {}
};

// A computation that would need data the caller did not supply
// (rank-only profiles in Engine B, missing pairing matrices, ...).
class InsufficientDataError : public Error {
public:
  explicit InsufficientDataError(const std::string& what) : Error(what) {}
};

// Internal cross-checks that must hold for consistent geometric input
// (pinned low-degree law, abutment sums). Reaching this means the input
// lies about being a fibred-boundary geometry.
class InconsistencyError : public Error {
public:
  explicit InconsistencyError(const std::string& what) : Error(what) {}
};

inline void require(bool cond, const std::string& what) {
  if (!cond) throw ValidationError(what);
}

inline Count checked_index(Count k, Count len, const std::string& what) {
  if (k < 0 || k >= len) throw ValidationError(what + ": index out of range");
  return k;
}

// dims[k] access that treats out-of-range degrees as zero; cohomology
// vectors are zero outside their natural range.
inline Count at_or_zero(const Dims& v, Count k) {
  if (k < 0 || k >= static_cast<Count>(v.size())) return 0;
  return v[static_cast<std::size_t>(k)];
}

}  // namespace l2hodge
