#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l2hodge/common.hpp"
#include "l2hodge/linalg.hpp"
#include "l2hodge/topology.hpp"

namespace l2hodge {

/// One differential d_r : E_r^{p,q} -> E_r^{p+r, q-r+1}, as a matrix in the
/// page bases (for r = 2 these are the caller's own E2 cell coordinates;
/// higher pages use the engine's deterministic subquotient bases).
struct LerayDifferential {
  Count r = 2;
  Count p = 0;
  Count q = 0;
  RatMatrix matrix;
};

/// E2 page of the Leray-Serre spectral sequence of the boundary fibration,
/// as a bigraded grid of dimensions plus explicit differential matrices.
/// Local systems enter only through the supplied grid; absent differentials
/// are zero.
struct LerayData {
  std::vector<Dims> e2;  // e2[q][p] = dim E_2^{p,q}, 0 <= q <= f, 0 <= p <= b
  std::vector<LerayDifferential> differentials;
  std::optional<Dims> abutment_check;  // betti_dM, when supplied

  Count f() const { return static_cast<Count>(e2.size()) - 1; }
  Count b() const {
    return e2.empty() ? -1 : static_cast<Count>(e2.front().size()) - 1;
  }
  Count cell_dim(Count p, Count q) const {
    if (q < 0 || q > f() || p < 0 || p > b()) return 0;
    return e2[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
  }

  void validate() const {
    require(!e2.empty() && !e2.front().empty(), "leray: empty E2 grid");
    for (const Dims& row : e2) {
      require(row.size() == e2.front().size(),
              "leray: ragged E2 grid rows");
      for (Count d : row) require(d >= 0, "leray: negative E2 dimension");
    }
    for (const LerayDifferential& d : differentials) {
      require(d.r >= 2, "leray: differential page must be >= 2");
      require(d.p >= 0 && d.p <= b() && d.q >= 0 && d.q <= f(),
              "leray: differential source outside grid");
      require(d.p + d.r <= b() && d.q - d.r + 1 >= 0,
              "leray: differential target outside grid");
    }
  }

  /// Product fibration E2 grid (Kunneth), zero differentials.
  static LerayData product(const Dims& betti_B, const Dims& betti_F) {
    LerayData l;
    for (Count q = 0; q < static_cast<Count>(betti_F.size()); ++q) {
      Dims row;
      for (Count p = 0; p < static_cast<Count>(betti_B.size()); ++p)
        row.push_back(betti_B[static_cast<std::size_t>(p)] *
                      betti_F[static_cast<std::size_t>(q)]);
      l.e2.push_back(row);
    }
    return l;
  }
};

/// State of one cell through the pages: `rep` columns represent a basis of
/// the current page cell modulo `bnd` (both in E2 cell coordinates).
struct CellState {
  RatMatrix rep;
  RatMatrix bnd;
  Count dim() const { return rep.cols(); }
};

/// Result of running the (possibly truncated) spectral sequence to E-infinity.
struct SpectralResult {
  std::vector<std::vector<CellState>> cells;  // [q][p]
  Count b = 0, f = 0;

  Count cell_dim(Count p, Count q) const {
    if (q < 0 || q > f || p < 0 || p > b) return 0;
    return cells[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)].dim();
  }

  /// Dimensions summed along anti-diagonals p+q = k, for k = 0..len-1.
  Dims degree_dims(Count len) const {
    Dims out(static_cast<std::size_t>(len), 0);
    for (Count q = 0; q <= f; ++q)
      for (Count p = 0; p <= b; ++p)
        if (p + q < len) out[static_cast<std::size_t>(p + q)] += cell_dim(p, q);
    return out;
  }
};

namespace detail {

/// Exact solve A X = B; nullopt if inconsistent. Free variables are zero.
inline std::optional<RatMatrix> solve_columns(const RatMatrix& a,
                                              const RatMatrix& b) {
  RatMatrix aug = a.hcat(b);
  std::vector<Count> pivots = echelonize(aug);
  for (Count p : pivots)
    if (p >= a.cols()) return std::nullopt;
  RatMatrix x(a.cols(), b.cols());
  for (Count i = 0; i < static_cast<Count>(pivots.size()); ++i)
    for (Count j = 0; j < b.cols(); ++j)
      x.at(pivots[static_cast<std::size_t>(i)], j) = aug.at(i, a.cols() + j);
  return x;
}

}  // namespace detail

/// Runs the spectral sequence to E-infinity over Q. When `kept_rows_max` is
/// given, all rows q > kept_rows_max are zeroed at E2 and every differential
/// out of a zeroed row is dropped (truncation; differentials always lower q,
/// so nothing maps into a zeroed row from a kept one).
inline SpectralResult run_spectral(const LerayData& data,
                                   std::optional<Count> kept_rows_max) {
  data.validate();
  const Count b = data.b(), f = data.f();
  SpectralResult res;
  res.b = b;
  res.f = f;
  res.cells.assign(static_cast<std::size_t>(f + 1),
                   std::vector<CellState>(static_cast<std::size_t>(b + 1)));
  auto kept = [&](Count q) { return !kept_rows_max || q <= *kept_rows_max; };
  for (Count q = 0; q <= f; ++q)
    for (Count p = 0; p <= b; ++p) {
      Count d = kept(q) ? data.cell_dim(p, q) : 0;
      auto& cell = res.cells[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
      cell.rep = RatMatrix::identity(d);
      cell.bnd = RatMatrix(d, 0);
    }

  std::map<Count, std::vector<const LerayDifferential*>> diffs;
  for (const LerayDifferential& d : data.differentials) {
    if (!kept(d.q)) continue;  // source truncated away
    diffs[d.r].push_back(&d);
  }

  const Count rmax = std::max<Count>(b, f + 1) + 1;
  for (Count r = 2; r <= rmax; ++r) {
    auto it = diffs.find(r);
    if (it == diffs.end()) continue;  // zero differentials: page unchanged

    // Validate shapes against the recomputed page and check d o d = 0.
    auto cell = [&](Count p, Count q) -> CellState& {
      return res.cells[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)];
    };
    std::map<std::pair<Count, Count>, RatMatrix> out_maps, in_maps;
    for (const LerayDifferential* d : it->second) {
      Count tp = d->p + r, tq = d->q - r + 1;
      Count src_dim = cell(d->p, d->q).dim();
      Count tgt_dim = kept(tq) ? cell(tp, tq).dim() : 0;
      require(d->matrix.rows() == tgt_dim && d->matrix.cols() == src_dim,
              "differential d_" + std::to_string(d->r) + " at (p,q)=(" +
                  std::to_string(d->p) + "," + std::to_string(d->q) +
                  ") has shape " + std::to_string(d->matrix.rows()) + "x" +
                  std::to_string(d->matrix.cols()) + " but the page has " +
                  std::to_string(tgt_dim) + "x" + std::to_string(src_dim));
      require(out_maps.emplace(std::pair{d->p, d->q}, d->matrix).second,
              "duplicate differential on one cell and page");
      in_maps.insert_or_assign(std::pair{tp, tq}, d->matrix);
    }
    for (const auto& [src, m] : out_maps) {
      auto in_it = in_maps.find(src);
      if (in_it != in_maps.end())
        require((m * in_it->second).is_zero(),
                "d_r o d_r != 0 at cell (" + std::to_string(src.first) + "," +
                    std::to_string(src.second) + ")");
    }

    // Advance every cell: new page = ker(out) / im(in), in page coordinates,
    // then rewrite in E2 coordinates.
    std::vector<std::vector<CellState>> next = res.cells;
    for (Count q = 0; q <= f; ++q)
      for (Count p = 0; p <= b; ++p) {
        CellState& cur = cell(p, q);
        if (cur.dim() == 0 && cur.bnd.cols() == 0) continue;
        auto oit = out_maps.find({p, q});
        auto iit = in_maps.find({p, q});
        if (oit == out_maps.end() && iit == in_maps.end()) continue;

        RatMatrix cyc = (oit != out_maps.end())
                            ? kernel_basis(oit->second)           // page coords
                            : RatMatrix::identity(cur.dim());
        RatMatrix incoming = (iit != in_maps.end())
                                 ? iit->second
                                 : RatMatrix(cur.dim(), 0);
        // im(incoming) must lie inside ker(outgoing) (d o d = 0 checked
        // pairwise above, but the composite through this cell is what counts).
        if (oit != out_maps.end() && iit != in_maps.end())
          require((oit->second * incoming).is_zero(),
                  "differentials do not compose to zero through (" +
                      std::to_string(p) + "," + std::to_string(q) + ")");

        // Page basis of the subquotient: columns of cyc that extend im(incoming).
        RatMatrix probe = incoming.hcat(cyc);
        std::vector<Count> basis_cols = column_space_basis(probe);
        std::vector<Count> new_cols;
        for (Count c : basis_cols)
          if (c >= incoming.cols()) new_cols.push_back(c);
        RatMatrix rep_page = probe.select_columns(new_cols);

        CellState nx;
        nx.rep = cur.rep * rep_page;
        nx.bnd = cur.bnd.hcat(cur.rep * incoming);
        next[static_cast<std::size_t>(q)][static_cast<std::size_t>(p)] = nx;
      }
    res.cells = std::move(next);
  }
  return res;
}

/// Dimensions of the extended intersection cohomology of the cone-bundle
/// neighbourhood, IH^k_j(N(B), B), for k = 0..len-1: zero every row
/// q >= ell-1-j of the E2 page, run the truncated sequence, and sum along
/// anti-diagonals. ell must equal f+1.
inline Dims truncated_leray(const LerayData& data, Count ell, Perversity j,
                            Count len = -1) {
  data.validate();
  require(ell == data.f() + 1,
          "truncated_leray: ell must be the stratum codimension f+1");
  if (len < 0) len = data.b() + data.f() + 2;
  Count qmax = ell - 2 - j.j;  // rows q >= ell-1-j are set to zero
  if (qmax < 0) return Dims(static_cast<std::size_t>(len), 0);
  SpectralResult r = run_spectral(data, std::min(qmax, data.f()));
  return r.degree_dims(len);
}

/// Full-page abutment consistency: the E-infinity anti-diagonal sums must
/// reproduce betti_dM when the caller supplied it.
inline void check_abutment(const LerayData& data, const SpectralResult& full) {
  if (!data.abutment_check) return;
  const Dims& target = *data.abutment_check;
  Dims sums = full.degree_dims(static_cast<Count>(target.size()));
  for (Count k = 0; k < static_cast<Count>(target.size()); ++k)
    require(sums[static_cast<std::size_t>(k)] ==
                target[static_cast<std::size_t>(k)],
            "abutment check failed in degree " + std::to_string(k) +
                ": E-infinity sums give " +
                std::to_string(sums[static_cast<std::size_t>(k)]) +
                ", expected " +
                std::to_string(target[static_cast<std::size_t>(k)]));
  // Degrees beyond the supplied vector must vanish.
  Dims all = full.degree_dims(full.b + full.f + 2);
  for (Count k = static_cast<Count>(target.size());
       k < static_cast<Count>(all.size()); ++k)
    require(all[static_cast<std::size_t>(k)] == 0,
            "abutment check failed: E-infinity nonzero beyond top degree");
}

}  // namespace l2hodge
