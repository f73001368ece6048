#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l2hodge/common.hpp"
#include "l2hodge/linalg.hpp"

namespace l2hodge {

/// The four metric classes at infinity. B and Scattering are the trivial-fibre
/// members of the FibredCusp / FibredBoundary families respectively.
enum class MetricKind { B, Scattering, FibredCusp, FibredBoundary };

inline std::string metric_name(MetricKind m) {
  switch (m) {
    case MetricKind::B: return "b";
    case MetricKind::Scattering: return "scattering";
    case MetricKind::FibredCusp: return "fibred_cusp";
    case MetricKind::FibredBoundary: return "fibred_boundary";
  }
  throw ValidationError("unknown metric kind");
}

/// Integer perversity value at the single singular stratum of codimension
/// ell = f+1. Any integer is allowed; values <= -1 select absolute cohomology
/// and values >= ell-1 select relative cohomology.
struct Perversity {
  Count j = 0;
  bool operator==(const Perversity&) const = default;
};

/// Topological input for one end: the boundary fibration F -> dM -> B, Betti
/// data of the two compactifications' pieces, and the restriction maps
/// r_k : H^k(Mbar) -> H^k(dM) (as matrices, or as ranks only).
struct StratumProfile {
  Count n = 0;  // dim M
  Count b = 0;  // dim B
  Count f = 0;  // dim F
  Dims betti_M;   // indexed 0..n, dims of H^k(Mbar; Q)
  Dims betti_dM;  // indexed 0..n-1
  Dims betti_B;   // indexed 0..b
  Dims betti_F;   // indexed 0..f
  // Exactly one of these should normally be present; matrices are indexed by
  // degree 0..n-1 with shape betti_dM[k] x betti_M[k].
  std::optional<std::vector<RatMatrix>> restriction;
  std::optional<Dims> restriction_ranks;

  Count ell() const { return f + 1; }  // codimension of the stratum B in X

  void validate() const {
    require(n >= 1 && b >= 0 && f >= 0, "profile: dimensions must be >= 0");
    require(n == b + f + 1,
            "profile: n = b + f + 1 violated (boundary fibration with collar)");
    auto check_len = [](const Dims& v, Count len, const char* name) {
      require(static_cast<Count>(v.size()) == len,
              std::string("profile: ") + name + " has wrong length");
      for (Count x : v)
        require(x >= 0, std::string("profile: ") + name + " entry negative");
    };
    check_len(betti_M, n + 1, "betti_M");
    check_len(betti_dM, n, "betti_dM");
    check_len(betti_B, b + 1, "betti_B");
    check_len(betti_F, f + 1, "betti_F");
    require(betti_M[0] >= 1, "profile: betti_M[0] must be >= 1");
    require(betti_F[0] >= 1 && betti_F.front() == betti_F.back(),
            "profile: F closed oriented requires betti_F[0] = betti_F[f] >= 1");
    for (Count k = 0; k < n; ++k)
      require(betti_dM[k] == betti_dM[n - 1 - k],
              "profile: betti_dM violates Poincare symmetry");
    if (restriction) {
      require(static_cast<Count>(restriction->size()) == n,
              "profile: restriction must have one matrix per degree 0..n-1");
      for (Count k = 0; k < n; ++k) {
        const RatMatrix& r = (*restriction)[static_cast<std::size_t>(k)];
        require(r.rows() == betti_dM[k] && r.cols() == betti_M[k],
                "profile: restriction matrix in degree " + std::to_string(k) +
                    " has shape " + std::to_string(r.rows()) + "x" +
                    std::to_string(r.cols()) + ", expected " +
                    std::to_string(betti_dM[k]) + "x" +
                    std::to_string(betti_M[k]));
      }
    }
    if (restriction_ranks) {
      require(static_cast<Count>(restriction_ranks->size()) == n,
              "profile: restriction_ranks must have length n");
      for (Count k = 0; k < n; ++k) {
        Count rk = (*restriction_ranks)[static_cast<std::size_t>(k)];
        require(rk >= 0 && rk <= std::min(betti_M[k], betti_dM[k]),
                "profile: restriction_ranks[k] exceeds min(betti_M, betti_dM)");
      }
    }
  }

  bool has_restriction_data() const {
    return restriction.has_value() || restriction_ranks.has_value();
  }
  bool has_restriction_matrices() const { return restriction.has_value(); }

  /// rank of r_k; degrees outside 0..n-1 have zero target or source.
  Count restriction_rank(Count k) const {
    if (k < 0 || k >= n) return 0;
    if (restriction) return rank((*restriction)[static_cast<std::size_t>(k)]);
    if (restriction_ranks) return (*restriction_ranks)[static_cast<std::size_t>(k)];
    throw InsufficientDataError("profile carries no restriction data");
  }
};

/// Derived long-exact-sequence quantities for the pair (Mbar, dM).
struct PairCohomology {
  Dims betti_rel;    // dims of H^k(M, dM), indexed 0..n
  Dims image_ranks;  // rank of H^k(M,dM) -> H^k(M), indexed 0..n
};

/// Long exact sequence of the pair: H^k(M,dM) has dimension
/// coker(r_{k-1}) + ker(r_k), and the image of H^k(M,dM) -> H^k(M)
/// is ker(r_k).
inline PairCohomology pair_cohomology(const StratumProfile& p) {
  p.validate();
  if (!p.has_restriction_data())
    throw InsufficientDataError(
        "pair_cohomology requires restriction matrices or ranks");
  PairCohomology out;
  out.betti_rel.assign(static_cast<std::size_t>(p.n + 1), 0);
  out.image_ranks.assign(static_cast<std::size_t>(p.n + 1), 0);
  for (Count k = 0; k <= p.n; ++k) {
    Count rk = p.restriction_rank(k);
    Count rk1 = p.restriction_rank(k - 1);
    Count ker = at_or_zero(p.betti_M, k) - rk;
    Count coker = at_or_zero(p.betti_dM, k - 1) - rk1;
    out.betti_rel[static_cast<std::size_t>(k)] = coker + ker;
    out.image_ranks[static_cast<std::size_t>(k)] = ker;
  }
  return out;
}

/// Lower and upper middle perversity values at codimension f+1.
/// For f = 0 this degenerates to (relative, absolute) = (0, -1).
inline std::pair<Perversity, Perversity> middle_perversities(Count f) {
  require(f >= 0, "middle_perversities: f must be >= 0");
  if (f % 2 == 1) return {Perversity{(f - 1) / 2}, Perversity{(f - 1) / 2}};
  return {Perversity{f / 2}, Perversity{f / 2 - 1}};
}

/// Witt condition H^{f/2}(F) = 0, applied literally. f = 0 evaluates to
/// false (H^0 of a point is nonzero); callers route f = 0 to the degenerate
/// theorems before consulting this.
inline bool is_witt(const StratumProfile& p) {
  if (p.f % 2 == 1) return true;
  return at_or_zero(p.betti_F, p.f / 2) == 0;
}

}  // namespace l2hodge
