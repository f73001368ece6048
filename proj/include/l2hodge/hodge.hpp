#pragma once

#include <optional>
#include <string>
#include <vector>

#include "l2hodge/common.hpp"
#include "l2hodge/intersection.hpp"
#include "l2hodge/linalg.hpp"
#include "l2hodge/rational.hpp"
#include "l2hodge/topology.hpp"

namespace l2hodge {

/// Weight exponent a in x^a L^2.
struct Weight {
  Rat a;
};

/// Non-Fredholm weight: the dictionary between weights and perversities is
/// undefined exactly when the weight hits an indicial value.
class NonFredholmWeightError : public Error {
public:
  explicit NonFredholmWeightError(const std::string& what) : Error(what) {}
};

/// Per-degree L^2 harmonic dimensions with the theorem branch that produced
/// each entry.
struct HodgeTable {
  Dims dims;  // indexed 0..n
  std::vector<std::string> case_tags;
  MetricKind metric = MetricKind::FibredBoundary;

  Count middle_dim() const {
    Count n = static_cast<Count>(dims.size()) - 1;
    if (n % 2 != 0) return 0;
    return dims[static_cast<std::size_t>(n / 2)];
  }
};

/// Intersection forms supplied externally (cup products are extra structure,
/// never derived from Betti numbers): `matrix` lives on the middle-degree
/// image Im(IH_ml -> IH_mu) and `rel_matrix` on Im(H^{n/2}(M,dM) -> H^{n/2}(M)).
struct PairingInput {
  RatMatrix matrix;
  RatMatrix rel_matrix;

  void validate() const {
    require(matrix.is_symmetric(), "pairing matrix must be symmetric");
    require(rel_matrix.is_symmetric(), "relative pairing matrix must be symmetric");
  }
};

/// Weight -> perversity dictionary. Fibred cusp: j = floor(a + f/2); fibred
/// boundary metrics are conformally related, shifting the weight by n/2 - k
/// first. The trivial-fibre classes use their parent family's formula.
inline Perversity weight_to_perversity(Weight w, Count k,
                                       const StratumProfile& p, MetricKind m) {
  p.validate();
  bool cusp_like = (m == MetricKind::FibredCusp || m == MetricKind::B);
  if (m == MetricKind::B || m == MetricKind::Scattering)
    require(p.f == 0, "b and scattering metrics require a trivial fibre");
  Rat a_eff = cusp_like ? w.a : Rat(p.n) / 2 - k + w.a;
  Rat half_f = Rat(p.f) / 2;
  for (Count kf = 0; kf <= p.f; ++kf)
    if (Rat(kf) - 1 + a_eff - half_f == 0)
      throw NonFredholmWeightError(
          "non-Fredholm weight: k-1+a-f/2 = 0 at fibre degree " +
          std::to_string(kf) + " (effective weight " + rat_to_string(a_eff) +
          ")");
  return Perversity{rat_floor(a_eff + half_f)};
}

namespace detail {

inline std::string jtag(Count j) { return "j=" + std::to_string(j); }

}  // namespace detail

/// Dispatch of the Hodge theorems: dim L^2-harmonic forms per degree for the
/// given metric class, against the intersection engines behind `eng`.
/// `middle_map`, when present, supplies explicit natural-map matrices for
/// non-Witt middle-perversity ranks.
inline HodgeTable hodge_dims(const IHEngine& eng, MetricKind m,
                             const std::vector<RatMatrix>* middle_map = nullptr) {
  const StratumProfile& p = eng.profile();
  const Count n = p.n;
  HodgeTable out;
  out.metric = m;
  out.dims.assign(static_cast<std::size_t>(n + 1), 0);
  out.case_tags.assign(static_cast<std::size_t>(n + 1), "");

  auto set = [&](Count k, Count v, std::string tag) {
    out.dims[static_cast<std::size_t>(k)] = v;
    out.case_tags[static_cast<std::size_t>(k)] = std::move(tag);
  };

  switch (m) {
    case MetricKind::B: {
      require(p.f == 0, "b metric requires trivial fibre (f = 0)");
      const PairCohomology& pc = eng.pair();
      for (Count k = 0; k <= n; ++k)
        set(k, pc.image_ranks[static_cast<std::size_t>(k)], "Thm2A/image");
      return out;
    }
    case MetricKind::Scattering: {
      require(p.f == 0, "scattering metric requires trivial fibre (f = 0)");
      const PairCohomology& pc = eng.pair();
      for (Count k = 0; k <= n; ++k) {
        if (2 * k < n)
          set(k, pc.betti_rel[static_cast<std::size_t>(k)], "Thm1A/rel");
        else if (2 * k == n)
          set(k, pc.image_ranks[static_cast<std::size_t>(k)], "Thm1A/image");
        else
          set(k, at_or_zero(p.betti_M, k), "Thm1A/abs");
      }
      return out;
    }
    case MetricKind::FibredCusp: {
      auto [ml, mu] = middle_perversities(p.f);
      bool witt = p.f > 0 && is_witt(p);
      for (Count k = 0; k <= n; ++k) {
        Count v = eng.natural_rank(ml, mu, k, middle_map);
        std::string tag = witt ? ("Thm2/witt/" + detail::jtag(ml.j))
                               : ("Thm2/rk(IH_" + std::to_string(ml.j) +
                                  "->IH_" + std::to_string(mu.j) + ")");
        if (p.f == 0) tag = "Thm2/f=0/image";
        set(k, v, tag);
      }
      return out;
    }
    case MetricKind::FibredBoundary: {
      if (p.b % 2 == 0) {
        for (Count k = 0; k <= n; ++k) {
          Count j = p.f + p.b / 2 - k;
          set(k, eng.ih_dim(Perversity{j}, k),
              "Thm1/b-even/" + detail::jtag(j));
        }
      } else {
        for (Count k = 0; k <= n; ++k) {
          Count jhi = p.f + (p.b + 1) / 2 - k;
          Count v = eng.natural_rank(Perversity{jhi}, Perversity{jhi - 1}, k,
                                     middle_map);
          set(k, v,
              "Thm1/b-odd/rk(IH_" + std::to_string(jhi) + "->IH_" +
                  std::to_string(jhi - 1) + ")");
        }
      }
      return out;
    }
  }
  throw ValidationError("unknown metric kind");
}

/// Signature of the middle intersection pairing, computed exactly.
/// `expected_size`, when given, must match the matrix (the caller pins it to
/// the middle entry of its Hodge table).
inline Count l2_signature(const PairingInput& pair,
                          std::optional<Count> expected_size = std::nullopt) {
  pair.validate();
  if (expected_size && pair.matrix.rows() != *expected_size)
    throw ValidationError(
        "pairing matrix has size " + std::to_string(pair.matrix.rows()) +
        " but the computed middle dimension is " +
        std::to_string(*expected_size));
  return inertia(pair.matrix).signature();
}

/// tau = sgn(middle IH image pairing) - sgn(relative-image pairing).
inline Count tau_invariant(const PairingInput& pair) {
  pair.validate();
  return inertia(pair.matrix).signature() - inertia(pair.rel_matrix).signature();
}

/// Property checks for hyperkahler entries of real dimension 4k with one
/// Kahler potential of linear growth: harmonic forms concentrate in degree
/// 2k, count |signature|, carry the parity-determined sign, and force the
/// relative intersection form to be semidefinite.
struct HyperkahlerReport {
  bool applicable = false;
  bool concentrated = false;
  bool total_matches_signature = false;
  bool parity_ok = false;
  bool rel_semidefinite = false;
  std::vector<std::string> failures;

  bool passed() const {
    return applicable && concentrated && total_matches_signature && parity_ok &&
           rel_semidefinite;
  }
};

inline HyperkahlerReport hyperkahler_checks(const HodgeTable& t, Count sig,
                                            bool is_hyperkahler,
                                            Count quaternionic_k,
                                            const PairingInput& pair) {
  HyperkahlerReport rep;
  rep.applicable = is_hyperkahler;
  if (!is_hyperkahler) {
    rep.failures.push_back("entry not flagged hyperkahler");
    return rep;
  }
  Count n = static_cast<Count>(t.dims.size()) - 1;
  require(n == 4 * quaternionic_k,
          "hyperkahler checks: real dimension must be 4k");

  Count total = 0;
  bool conc = true;
  for (Count k = 0; k <= n; ++k) {
    total += t.dims[static_cast<std::size_t>(k)];
    if (k != 2 * quaternionic_k && t.dims[static_cast<std::size_t>(k)] != 0)
      conc = false;
  }
  rep.concentrated = conc;
  if (!conc) rep.failures.push_back("harmonic forms not concentrated in degree 2k");

  rep.total_matches_signature = (total == (sig < 0 ? -sig : sig));
  if (!rep.total_matches_signature)
    rep.failures.push_back("total dimension differs from |signature|");

  rep.parity_ok = (quaternionic_k % 2 == 0) ? (sig >= 0) : (sig <= 0);
  if (!rep.parity_ok)
    rep.failures.push_back("signature sign disagrees with the parity of k");

  InertiaTriple rel = inertia(pair.rel_matrix);
  rep.rel_semidefinite = (rel.n_plus == 0 || rel.n_minus == 0);
  if (!rep.rel_semidefinite)
    rep.failures.push_back("relative intersection form is indefinite");
  return rep;
}

/// Cartan matrix of type A_k (k x k); the ALE intersection forms are its
/// negatives.
inline RatMatrix cartan_A(Count k) {
  RatMatrix m(k, k);
  for (Count i = 0; i < k; ++i) {
    m.at(i, i) = 2;
    if (i + 1 < k) {
      m.at(i, i + 1) = -1;
      m.at(i + 1, i) = -1;
    }
  }
  return m;
}

/// Cartan matrix of type D_k (k >= 3): a chain with a fork at the end.
inline RatMatrix cartan_D(Count k) {
  require(k >= 3, "cartan_D needs rank >= 3");
  RatMatrix m(k, k);
  for (Count i = 0; i < k; ++i) m.at(i, i) = 2;
  for (Count i = 0; i + 1 < k - 1; ++i) {
    m.at(i, i + 1) = -1;
    m.at(i + 1, i) = -1;
  }
  m.at(k - 3, k - 1) = -1;
  m.at(k - 1, k - 3) = -1;
  return m;
}

inline RatMatrix negated(const RatMatrix& m) {
  RatMatrix out(m.rows(), m.cols());
  for (Count i = 0; i < m.rows(); ++i)
    for (Count j = 0; j < m.cols(); ++j) out.at(i, j) = -m.at(i, j);
  return out;
}

}  // namespace l2hodge
