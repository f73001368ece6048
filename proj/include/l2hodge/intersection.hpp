#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l2hodge/common.hpp"
#include "l2hodge/leray.hpp"
#include "l2hodge/linalg.hpp"
#include "l2hodge/topology.hpp"

namespace l2hodge {

enum class EngineTag { ClosedForm, SpectralSequence };

/// Extended intersection cohomology table of the two-strata compactification.
struct IHTable {
  Perversity j;
  Dims dims;  // indexed 0..n
  EngineTag engine = EngineTag::SpectralSequence;
};

/// Shared machinery for the two intersection-cohomology engines.
///
/// Boundary coordinates convention: H^k(dM) coordinates are the E-infinity
/// grid cells at total degree k, enumerated by ascending fibre degree q; the
/// restriction matrices r_k of the profile are written against these
/// coordinates (optionally recoordinatized by an invertible `grid_ident`
/// matrix per degree). The abutment sums are checked against betti_dM, so a
/// profile cannot silently disagree with its Leray data.
class IHEngine {
public:
  IHEngine(StratumProfile profile, std::optional<LerayData> leray,
           std::optional<std::vector<RatMatrix>> grid_ident = std::nullopt)
      : p_(std::move(profile)), grid_ident_(std::move(grid_ident)) {
    p_.validate();
    if (leray) {
      leray_ = std::move(*leray);
    } else {
      // Product fallback; legitimate only when the abutment check passes
      // (always true for f = 0, where the grid is the single row betti_B).
      leray_ = LerayData::product(p_.betti_B, p_.betti_F);
    }
    leray_.validate();
    require(leray_.b() == p_.b && leray_.f() == p_.f,
            "Leray grid shape disagrees with the profile's (b, f)");
    full_ = run_spectral(leray_, std::nullopt);
    check_abutment_against_profile();
    if (grid_ident_) {
      require(static_cast<Count>(grid_ident_->size()) == p_.n,
              "grid_ident needs one matrix per boundary degree 0..n-1");
      for (Count k = 0; k < p_.n; ++k) {
        const RatMatrix& e = (*grid_ident_)[static_cast<std::size_t>(k)];
        require(e.rows() == at_or_zero(p_.betti_dM, k) &&
                    e.cols() == at_or_zero(p_.betti_dM, k),
                "grid_ident matrix in degree " + std::to_string(k) +
                    " must be square of size betti_dM[k]");
        require(rank(e) == e.rows(),
                "grid_ident matrix in degree " + std::to_string(k) +
                    " must be invertible");
      }
    }
  }

  const StratumProfile& profile() const { return p_; }
  const LerayData& leray() const { return leray_; }

  /// Engine B: Mayer-Vietoris splice through the truncated Leray-Serre limit.
  /// `mv_override`, when given, supplies the per-degree matrices
  /// H^k(Mbar) + IH^k_j(N(B),B) -> H^k(dM) directly instead of the
  /// canonical assembly.
  IHTable engine_b(Perversity j,
                   const std::vector<RatMatrix>* mv_override = nullptr) const {
    if (!mv_override && !p_.has_restriction_matrices())
      throw InsufficientDataError(
          "insufficient data for Engine B: restriction matrices absent "
          "(rank-only profile)");

    const Count n = p_.n, ell = p_.ell();
    SpectralResult trunc = run_spectral_truncated(j);

    IHTable out;
    out.j = j;
    out.engine = EngineTag::SpectralSequence;
    out.dims.assign(static_cast<std::size_t>(n + 1), 0);

    Dims ker(static_cast<std::size_t>(n + 1), 0);
    Dims coker(static_cast<std::size_t>(n + 1), 0);
    for (Count k = 0; k <= n; ++k) {
      RatMatrix mv = mv_override ? fetch_override(*mv_override, j, trunc, k)
                                 : assemble_mv(trunc, k);
      Count rk = rank(mv);
      ker[static_cast<std::size_t>(k)] = mv.cols() - rk;
      coker[static_cast<std::size_t>(k)] = mv.rows() - rk;
    }
    for (Count k = 0; k <= n; ++k) {
      out.dims[static_cast<std::size_t>(k)] =
          ker[static_cast<std::size_t>(k)] +
          (k > 0 ? coker[static_cast<std::size_t>(k - 1)] : 0);
    }

    // Pinned low-degree law: below the truncation window the intersection
    // groups restrict isomorphically to H^k(M).
    for (Count k = 0; k < std::min(n + 1, ell - 1 - j.j); ++k)
      if (out.dims[static_cast<std::size_t>(k)] != at_or_zero(p_.betti_M, k))
        throw InconsistencyError(
            "Engine B pinned low-degree check failed at k=" +
            std::to_string(k) + ": got " +
            std::to_string(out.dims[static_cast<std::size_t>(k)]) +
            ", expected betti_M[k]=" +
            std::to_string(at_or_zero(p_.betti_M, k)));
    return out;
  }

  bool engine_a_applicable(Perversity j) const {
    if (j.j <= -1 || j.j >= p_.ell() - 1) return p_.has_restriction_data();
    return sphere_fibre() && p_.has_restriction_matrices();
  }

  /// Engine A: closed forms. Absolute for j <= -1, relative for j >= ell-1,
  /// ordinary cohomology of the smooth compactification for sphere fibres.
  IHTable engine_a(Perversity j) const {
    const Count n = p_.n, ell = p_.ell();
    IHTable out;
    out.j = j;
    out.engine = EngineTag::ClosedForm;
    out.dims.assign(static_cast<std::size_t>(n + 1), 0);
    if (j.j <= -1) {
      out.dims = p_.betti_M;
      return out;
    }
    if (j.j >= ell - 1) {
      out.dims = pair().betti_rel;
      return out;
    }
    if (!sphere_fibre() || !p_.has_restriction_matrices())
      throw InsufficientDataError(
          "Engine A inapplicable: middle perversity needs a rational-homology"
          "-sphere fibre and restriction matrices");
    // X is a closed manifold; traditional perversities give H^*(X),
    // independent of j in 0..ell-2.
    for (Count k = 0; k <= n; ++k)
      out.dims[static_cast<std::size_t>(k)] =
          ker_u(k) + (k > 0 ? coker_u(k - 1) : 0);
    return out;
  }

  /// Sum over degrees of |dim IH^k_j - dim IH^{n-k}_{ell-2-j}|; zero for
  /// consistent geometric input (generalized Poincare duality).
  Count duality_defect(Perversity j) const {
    IHTable lhs = engine_b(j);
    IHTable rhs = engine_b(Perversity{p_.ell() - 2 - j.j});
    Count defect = 0;
    for (Count k = 0; k <= p_.n; ++k) {
      Count d = lhs.dims[static_cast<std::size_t>(k)] -
                rhs.dims[static_cast<std::size_t>(p_.n - k)];
      defect += d < 0 ? -d : d;
    }
    return defect;
  }

  /// Rank of the natural map IH^k_{j_hi} -> IH^k_{j_lo} (j_hi >= j_lo, deeper
  /// truncation mapping to shallower). Computable exactly in the cases the
  /// theorems need; `middle_map`, when given, supplies the map matrix per
  /// degree and settles every other case.
  Count natural_rank(Perversity jhi, Perversity jlo, Count k,
                     const std::vector<RatMatrix>* middle_map = nullptr) const {
    require(jhi.j >= jlo.j, "natural_rank: j_hi must be >= j_lo");
    const Count ell = p_.ell();
    if (jhi.j == jlo.j) return ih_dim(jhi, k);
    if (jhi.j <= -1) return at_or_zero(p_.betti_M, k);        // both absolute
    if (jlo.j >= ell - 1) return pair().betti_rel[static_cast<std::size_t>(k)];
    if (jhi.j >= ell - 1 && jlo.j <= -1)
      return pair().image_ranks[static_cast<std::size_t>(k)];  // rel -> abs

    Count hi = ih_dim(jhi, k), lo = ih_dim(jlo, k);
    if (hi == 0 || lo == 0) return 0;
    if (middle_map) {
      const RatMatrix& m = fetch_degree(*middle_map, k, hi, lo, "middle_map");
      return rank(m);
    }
    if (k < ell - 1 - jhi.j) return at_or_zero(p_.betti_M, k);  // pinned range

    // When every E2 row strictly between the two truncation cuts vanishes,
    // the two truncated complexes are literally equal and the natural map is
    // an isomorphism.
    if (rows_vanish_between(jhi, jlo)) {
      require(hi == lo, "vanishing middle rows but unequal IH dimensions");
      return hi;
    }
    if (sphere_fibre() && p_.has_restriction_matrices()) {
      bool hi_middle = jhi.j <= ell - 2, lo_middle = jlo.j >= 0;
      if (hi_middle && lo_middle) return ih_dim(jhi, k);  // H^k(X) -> H^k(X)
      if (!hi_middle && lo_middle) return image_rel_to_x(k);
      if (hi_middle && !lo_middle) return image_x_to_m(k);
    }
    throw InsufficientDataError(
        "natural_rank: no exact rule applies for j_hi=" +
        std::to_string(jhi.j) + " -> j_lo=" + std::to_string(jlo.j) +
        " at degree " + std::to_string(k) +
        "; supply the map matrices (middle_map)");
  }

  Count ih_dim(Perversity j, Count k) const {
    if (j.j <= -1) return at_or_zero(p_.betti_M, k);
    if (j.j >= p_.ell() - 1) return pair().betti_rel[static_cast<std::size_t>(k)];
    if (engine_a_applicable(j)) return engine_a(j).dims[static_cast<std::size_t>(k)];
    return engine_b(j).dims[static_cast<std::size_t>(k)];
  }

  const PairCohomology& pair() const {
    if (!pair_) pair_ = pair_cohomology(p_);
    return *pair_;
  }

  bool sphere_fibre() const {
    if (p_.f < 1) return false;
    if (p_.betti_F.front() != 1 || p_.betti_F.back() != 1) return false;
    for (Count q = 1; q < p_.f; ++q)
      if (p_.betti_F[static_cast<std::size_t>(q)] != 0) return false;
    return true;
  }

  /// dim Im(H^k(X,B) -> H^k(X)) for sphere fibres, from the long exact
  /// sequence of (X, B) spliced through the disk-bundle Mayer-Vietoris:
  /// the kernel is delta(H^{k-1}(B)) and rk delta = rk phi* - dim(im phi*
  /// cap im r) in degree k-1.
  Count image_rel_to_x(Count k) const {
    return pair().betti_rel[static_cast<std::size_t>(k)] +
           ((k >= 1) ? (rank_r(k - 1) - rank_u(k - 1)) : 0);
  }

  /// dim Im(H^k(X) -> H^k(X - B)): the Mayer-Vietoris kernel projected onto
  /// the H^k(Mbar) factor.
  Count image_x_to_m(Count k) const {
    return ker_u(k) - kernel_dim(phi_pullback(k));
  }

private:
  void check_abutment_against_profile() const {
    Dims sums = full_.degree_dims(p_.n + 1);
    for (Count k = 0; k <= p_.n; ++k) {
      Count want = at_or_zero(p_.betti_dM, k);
      require(sums[static_cast<std::size_t>(k)] == want,
              "Leray E-infinity sums disagree with betti_dM in degree " +
                  std::to_string(k) + " (" +
                  std::to_string(sums[static_cast<std::size_t>(k)]) + " vs " +
                  std::to_string(want) + ")");
    }
    check_abutment(leray_, full_);
  }

  SpectralResult run_spectral_truncated(Perversity j) const {
    Count qmax = p_.ell() - 2 - j.j;
    if (qmax < 0) {
      LerayData empty = leray_;
      return run_spectral(empty, -1);
    }
    return run_spectral(leray_, std::min(qmax, p_.f));
  }

  Count full_cell_offset(Count k, Count q) const {
    Count off = 0;
    for (Count qq = 0; qq < q; ++qq)
      off += full_.cell_dim(k - qq, qq);
    return off;
  }

  /// Canonical surjection truncated cell -> full cell, in the engine bases.
  /// Truncation removes only incoming differentials, so truncated
  /// representatives stay inside (full cycles) = span[rep_f | bnd_f].
  RatMatrix cell_surjection(const CellState& full_cell,
                            const CellState& trunc_cell) const {
    RatMatrix space = full_cell.rep.hcat(full_cell.bnd);
    auto x = detail::solve_columns(space, trunc_cell.rep);
    if (!x)
      throw InsufficientDataError(
          "truncated page basis diverged from the full page (higher-page "
          "differentials); supply explicit Mayer-Vietoris matrices");
    RatMatrix block(full_cell.dim(), trunc_cell.dim());
    for (Count i = 0; i < block.rows(); ++i)
      for (Count jcol = 0; jcol < block.cols(); ++jcol)
        block.at(i, jcol) = x->at(i, jcol);
    return block;
  }

  /// [ r_k | e_k ] where e_k is the canonical edge map of the truncated page
  /// into the abutment coordinates (optionally recoordinatized).
  RatMatrix assemble_mv(const SpectralResult& trunc, Count k) const {
    Count rows = at_or_zero(p_.betti_dM, k);
    RatMatrix rk_fixed(rows, at_or_zero(p_.betti_M, k));
    if (k < p_.n) rk_fixed = (*p_.restriction)[static_cast<std::size_t>(k)];

    Count trunc_total = 0;
    for (Count q = 0; q <= p_.f; ++q) trunc_total += trunc.cell_dim(k - q, q);
    RatMatrix edge(rows, trunc_total);
    Count col_off = 0;
    for (Count q = 0; q <= p_.f; ++q) {
      Count tdim = trunc.cell_dim(k - q, q);
      if (tdim == 0) continue;
      const CellState& fc =
          full_.cells[static_cast<std::size_t>(q)][static_cast<std::size_t>(k - q)];
      const CellState& tc =
          trunc.cells[static_cast<std::size_t>(q)][static_cast<std::size_t>(k - q)];
      RatMatrix block = cell_surjection(fc, tc);
      Count row_off = full_cell_offset(k, q);
      for (Count i = 0; i < block.rows(); ++i)
        for (Count jcol = 0; jcol < block.cols(); ++jcol)
          edge.at(row_off + i, col_off + jcol) = block.at(i, jcol);
      col_off += tdim;
    }
    if (grid_ident_ && k < p_.n)
      edge = (*grid_ident_)[static_cast<std::size_t>(k)] * edge;
    return rk_fixed.hcat(edge);
  }

  RatMatrix fetch_override(const std::vector<RatMatrix>& mv, Perversity j,
                           const SpectralResult& trunc, Count k) const {
    require(static_cast<Count>(mv.size()) == p_.n + 1,
            "Mayer-Vietoris override needs one matrix per degree 0..n");
    const RatMatrix& m = mv[static_cast<std::size_t>(k)];
    Count trunc_total = 0;
    for (Count q = 0; q <= p_.f; ++q) trunc_total += trunc.cell_dim(k - q, q);
    Count want_cols = at_or_zero(p_.betti_M, k) + trunc_total;
    require(m.rows() == at_or_zero(p_.betti_dM, k) && m.cols() == want_cols,
            "Mayer-Vietoris override in degree " + std::to_string(k) +
                " has shape " + std::to_string(m.rows()) + "x" +
                std::to_string(m.cols()) + ", expected " +
                std::to_string(at_or_zero(p_.betti_dM, k)) + "x" +
                std::to_string(want_cols) + " for j=" + std::to_string(j.j));
    return m;
  }

  static const RatMatrix& fetch_degree(const std::vector<RatMatrix>& v,
                                       Count k, Count src, Count dst,
                                       const std::string& what) {
    require(k >= 0 && k < static_cast<Count>(v.size()),
            what + ": no matrix for degree " + std::to_string(k));
    const RatMatrix& m = v[static_cast<std::size_t>(k)];
    require(m.cols() == src && m.rows() == dst,
            what + " in degree " + std::to_string(k) + " must be " +
                std::to_string(dst) + "x" + std::to_string(src));
    return m;
  }

  bool rows_vanish_between(Perversity jhi, Perversity jlo) const {
    Count qhi = p_.ell() - 2 - jhi.j;  // kept rows for the deeper truncation
    Count qlo = p_.ell() - 2 - jlo.j;
    for (Count q = std::max<Count>(qhi + 1, 0); q <= std::min(qlo, p_.f); ++q)
      for (Count pp = 0; pp <= p_.b; ++pp)
        if (leray_.cell_dim(pp, q) != 0) return false;
    return true;
  }

  // --- sphere-fibre closed forms -------------------------------------------

  /// Edge composite H^k(B) = E2^{k,0} -> E-infinity^{k,0} -> H^k(dM).
  RatMatrix phi_pullback(Count k) const {
    Count bk = at_or_zero(p_.betti_B, k);
    Count rows = at_or_zero(p_.betti_dM, k);
    RatMatrix phi(rows, bk);
    if (bk == 0 || k > p_.b) return phi;
    const CellState& fc = full_.cells[0][static_cast<std::size_t>(k)];
    if (fc.dim() > 0) {
      // Bottom-row classes are permanent cycles; express each E2 basis
      // vector in the quotient basis.
      RatMatrix space = fc.rep.hcat(fc.bnd);
      auto x = detail::solve_columns(space, RatMatrix::identity(bk));
      require(x.has_value(), "bottom-row edge map failed to solve");
      Count row_off = full_cell_offset(k, 0);
      for (Count i = 0; i < fc.dim(); ++i)
        for (Count j = 0; j < bk; ++j) phi.at(row_off + i, j) = x->at(i, j);
    }
    if (grid_ident_ && k < p_.n)
      phi = (*grid_ident_)[static_cast<std::size_t>(k)] * phi;
    return phi;
  }

  /// u_k = [ r_k | -phi*_k ] : H^k(Mbar) + H^k(B) -> H^k(dM).
  const RatMatrix& u_matrix(Count k) const {
    if (u_cache_.empty())
      u_cache_.resize(static_cast<std::size_t>(p_.n + 1));
    auto& slot = u_cache_[static_cast<std::size_t>(k)];
    if (!slot) {
      RatMatrix r = (k < p_.n)
                        ? (*p_.restriction)[static_cast<std::size_t>(k)]
                        : RatMatrix(0, at_or_zero(p_.betti_M, k));
      RatMatrix phi = (k < p_.n)
                          ? phi_pullback(k)
                          : RatMatrix(0, at_or_zero(p_.betti_B, k));
      RatMatrix neg(phi.rows(), phi.cols());
      for (Count i = 0; i < phi.rows(); ++i)
        for (Count j = 0; j < phi.cols(); ++j) neg.at(i, j) = -phi.at(i, j);
      slot = r.hcat(neg);
    }
    return *slot;
  }

  Count rank_u(Count k) const {
    if (k < 0 || k > p_.n) return 0;
    return rank(u_matrix(k));
  }
  Count ker_u(Count k) const {
    if (k < 0 || k > p_.n) return 0;
    return u_matrix(k).cols() - rank_u(k);
  }
  Count coker_u(Count k) const {
    if (k < 0 || k > p_.n) return 0;
    return u_matrix(k).rows() - rank_u(k);
  }
  Count rank_r(Count k) const { return p_.restriction_rank(k); }

  StratumProfile p_;
  LerayData leray_;
  SpectralResult full_;
  std::optional<std::vector<RatMatrix>> grid_ident_;
  mutable std::optional<PairCohomology> pair_;
  mutable std::vector<std::optional<RatMatrix>> u_cache_;
};

// --- free functions mirroring the operation surface -------------------------

inline IHTable ih_extended(const StratumProfile& p, const LerayData& l,
                           Perversity j,
                           const std::vector<RatMatrix>* boundary_maps = nullptr,
                           std::optional<std::vector<RatMatrix>> grid_ident =
                               std::nullopt) {
  IHEngine eng(p, l, std::move(grid_ident));
  return eng.engine_b(j, boundary_maps);
}

inline Count ih_closed_form(const StratumProfile& p, Perversity j, Count k,
                            const LerayData* l = nullptr) {
  IHEngine eng(p, l ? std::optional<LerayData>(*l) : std::nullopt);
  IHTable t = eng.engine_a(j);
  if (k < 0 || k > p.n) return 0;
  return t.dims[static_cast<std::size_t>(k)];
}

inline Count duality_defect(const StratumProfile& p, const LerayData& l,
                            Perversity j,
                            std::optional<std::vector<RatMatrix>> grid_ident =
                                std::nullopt) {
  IHEngine eng(p, l, std::move(grid_ident));
  return eng.duality_defect(j);
}

}  // namespace l2hodge
