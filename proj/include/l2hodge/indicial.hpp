#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "l2hodge/common.hpp"
#include "l2hodge/rational.hpp"
#include "l2hodge/topology.hpp"

namespace l2hodge {

/// Exact number of the form a + c*sqrt(d) with rational a, c and rational
/// d >= 0. Perfect-square radicands fold into the rational part on
/// construction, so `is_rational` is canonical. Fredholm tests are
/// equality-sensitive; floating point would misclassify borderline weights.
class QuadraticValue {
public:
  QuadraticValue() = default;

  static QuadraticValue rational(Rat a) {
    QuadraticValue v;
    v.a_ = std::move(a);
    return v;
  }

  static QuadraticValue make(Rat a, Rat c, Rat d) {
    require(d >= 0, "QuadraticValue: negative radicand");
    if (c == 0 || d == 0) return rational(std::move(a));
    if (auto s = rat_sqrt_exact(d)) return rational(a + c * *s);
    QuadraticValue v;
    v.a_ = std::move(a);
    v.c_ = std::move(c);
    v.d_ = std::move(d);
    return v;
  }

  bool is_rational() const { return c_ == 0; }
  const Rat& rational_part() const { return a_; }

  bool equals(const QuadraticValue& o) const {
    if (is_rational() != o.is_rational()) return false;
    if (is_rational()) return a_ == o.a_;
    // a + c sqrt(d) = a' + c' sqrt(d') with both radical parts irrational
    // forces a = a' (otherwise a rational equals an irrational) and then the
    // radical parts must agree in sign and square.
    if (a_ != o.a_) return false;
    return sign_of(c_) == sign_of(o.c_) && c_ * c_ * d_ == o.c_ * o.c_ * o.d_;
  }

  bool less(const QuadraticValue& o) const {
    if (equals(o)) return false;
    for (int steps = 8;; steps *= 2) {
      auto [lo1, hi1] = bounds(steps);
      auto [lo2, hi2] = bounds_of(o, steps);
      if (hi1 < lo2) return true;
      if (hi2 < lo1) return false;
      require(steps < (1 << 20), "QuadraticValue::less failed to separate");
    }
  }

  /// Whether this minus `o` is an integer (log-term detection).
  bool integer_difference(const QuadraticValue& o) const {
    if (is_rational() != o.is_rational()) return false;
    Rat diff;
    if (is_rational()) {
      diff = a_ - o.a_;
    } else {
      // Radical parts must cancel exactly.
      if (sign_of(c_) != sign_of(o.c_) || c_ * c_ * d_ != o.c_ * o.c_ * o.d_)
        return false;
      diff = a_ - o.a_;
    }
    return rat_den(diff) == 1;
  }

  double to_double() const {
    auto [lo, hi] = bounds(64);
    Rat mid = (lo + hi) / 2;
    return static_cast<double>(rat_num(mid)) / static_cast<double>(rat_den(mid));
  }

  std::string str() const {
    if (is_rational()) return rat_to_string(a_);
    std::string s;
    if (a_ != 0) s += rat_to_string(a_);
    if (c_ == 1) {
      if (!s.empty()) s += "+";
    } else if (c_ == -1) {
      s += "-";
    } else {
      if (!s.empty() && c_ > 0) s += "+";
      s += rat_to_string(c_) + "*";
    }
    s += "sqrt(" + rat_to_string(d_) + ")";
    return s;
  }

private:
  std::pair<Rat, Rat> bounds(int steps) const { return bounds_of(*this, steps); }

  static std::pair<Rat, Rat> bounds_of(const QuadraticValue& v, int steps) {
    if (v.is_rational()) return {v.a_, v.a_};
    Rat lo(0), hi = std::max(Rat(1), v.d_);
    for (int i = 0; i < steps; ++i) {
      Rat mid = (lo + hi) / 2;
      (mid * mid <= v.d_ ? lo : hi) = mid;
    }
    Rat x1 = v.a_ + v.c_ * lo, x2 = v.a_ + v.c_ * hi;
    if (x1 > x2) std::swap(x1, x2);
    return {x1, x2};
  }

  Rat a_{0}, c_{0}, d_{0};
};

/// Spectrum of the boundary Laplacian on forms: (lambda^2, form degree,
/// multiplicity) triples. Spectra are inputs; nothing here computes them
/// from a metric.
struct SpectrumEntry {
  Rat lambda_sq;
  Count degree = 0;
  Count multiplicity = 1;
};

struct BaseSpectrum {
  std::vector<SpectrumEntry> eigenvalues;

  void validate(std::optional<Count> max_degree = std::nullopt) const {
    for (const SpectrumEntry& e : eigenvalues) {
      require(e.lambda_sq >= 0, "spectrum: lambda^2 must be nonnegative");
      require(e.degree >= 0, "spectrum: negative form degree");
      require(e.multiplicity >= 1, "spectrum: multiplicity must be >= 1");
      if (max_degree)
        require(e.degree <= *max_degree,
                "spectrum: form degree exceeds the base dimension");
    }
  }

  /// Connected oriented base: harmonic forms in degrees 0 and b.
  void validate_harmonic_corners(Count b) const {
    bool deg0 = false, degb = false;
    for (const SpectrumEntry& e : eigenvalues)
      if (e.lambda_sq == 0) {
        if (e.degree == 0) deg0 = true;
        if (e.degree == b) degb = true;
      }
    require(deg0 && degb,
            "spectrum: lambda^2 = 0 must appear in degrees 0 and b for a "
            "connected oriented base");
  }
};

struct IndicialRoot {
  QuadraticValue value;  // the root, or the shared real part of a complex pair
  bool complex_pair = false;
  Count multiplicity = 1;
  std::string source;
};

/// Open interval free of indicial-root real parts; absent endpoints are
/// unbounded.
struct FredholmGap {
  std::optional<QuadraticValue> lo, hi;
};

struct IndicialReport {
  std::vector<IndicialRoot> roots;  // sorted by real part
  std::vector<FredholmGap> fredholm_gaps;
  std::optional<Rat> critical;
  std::vector<std::string> notes;
};

namespace detail {

inline void sort_merge_roots(std::vector<IndicialRoot>& roots) {
  std::sort(roots.begin(), roots.end(),
            [](const IndicialRoot& x, const IndicialRoot& y) {
              if (x.value.less(y.value)) return true;
              if (y.value.less(x.value)) return false;
              return x.complex_pair < y.complex_pair;
            });
  std::vector<IndicialRoot> merged;
  for (IndicialRoot& r : roots) {
    if (!merged.empty() && merged.back().value.equals(r.value) &&
        merged.back().complex_pair == r.complex_pair) {
      merged.back().multiplicity += r.multiplicity;
      if (merged.back().source.find(r.source) == std::string::npos)
        merged.back().source += "; " + r.source;
    } else {
      merged.push_back(std::move(r));
    }
  }
  roots = std::move(merged);
}

inline void build_gaps(IndicialReport& rep) {
  rep.fredholm_gaps.clear();
  std::vector<QuadraticValue> parts;
  for (const IndicialRoot& r : rep.roots) {
    if (parts.empty() || !parts.back().equals(r.value))
      parts.push_back(r.value);
  }
  if (parts.empty()) {
    rep.fredholm_gaps.push_back({std::nullopt, std::nullopt});
    return;
  }
  rep.fredholm_gaps.push_back({std::nullopt, parts.front()});
  for (std::size_t i = 0; i + 1 < parts.size(); ++i)
    rep.fredholm_gaps.push_back({parts[i], parts[i + 1]});
  rep.fredholm_gaps.push_back({parts.back(), std::nullopt});
}

inline void warn_log_terms(IndicialReport& rep) {
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < rep.roots.size(); ++i)
    for (std::size_t j = i + 1; j < rep.roots.size(); ++j)
      if (rep.roots[i].value.integer_difference(rep.roots[j].value) &&
          !rep.roots[i].value.equals(rep.roots[j].value)) {
        ++pairs;
        if (pairs <= 3)
          rep.notes.push_back("log terms possible: roots " +
                              rep.roots[i].value.str() + " and " +
                              rep.roots[j].value.str() +
                              " differ by an integer");
      }
  if (pairs > 3)
    rep.notes.push_back("log terms possible for " + std::to_string(pairs - 3) +
                        " further integer-spaced root pairs");
}

}  // namespace detail

/// Indicial roots for the Hodge-de Rham operator of a b-metric: {+-lambda}
/// over the boundary spectrum. The apparent double root at 0 is spurious and
/// reported with multiplicity one.
inline IndicialReport b_indicial(const BaseSpectrum& spec) {
  spec.validate();
  IndicialReport rep;
  for (const SpectrumEntry& e : spec.eigenvalues) {
    std::string src = "lambda^2=" + rat_to_string(e.lambda_sq) + " deg " +
                      std::to_string(e.degree);
    if (e.lambda_sq == 0) {
      IndicialRoot r;
      r.value = QuadraticValue::rational(0);
      r.multiplicity = e.multiplicity;
      r.source = src;
      rep.roots.push_back(r);
      continue;
    }
    for (int s : {-1, 1}) {
      IndicialRoot r;
      r.value = QuadraticValue::make(0, Rat(s), e.lambda_sq);
      r.multiplicity = e.multiplicity;
      r.source = src;
      rep.roots.push_back(r);
    }
  }
  detail::sort_merge_roots(rep.roots);
  detail::build_gaps(rep);
  detail::warn_log_terms(rep);
  bool has_zero = std::any_of(rep.roots.begin(), rep.roots.end(),
                              [](const IndicialRoot& r) {
                                return r.value.equals(QuadraticValue::rational(0));
                              });
  if (has_zero)
    rep.notes.push_back(
        "root 0 reported with multiplicity one per eigenvalue: the apparent "
        "double root of the squared equation is spurious");
  return rep;
}

/// Indicial roots gamma of the rescaled scattering operator: roots of
/// gamma^2 - n*gamma + k(n-k) - lambda^2 = 0 over the boundary spectrum.
/// Negative discriminants give complex pairs recorded at real part n/2.
/// These are the closed-and-coclosed solutions; the full indicial set of the
/// coupled system may be larger, see the report notes.
inline IndicialReport scattering_indicial(const BaseSpectrum& spec, Count n) {
  require(n >= 2, "scattering_indicial: n must be >= 2");
  spec.validate(n);
  IndicialReport rep;
  rep.critical = Rat(n) / 2 - 1;
  for (const SpectrumEntry& e : spec.eigenvalues) {
    Count k = e.degree;
    Rat half_n(n, 2);
    // disc = (k - n/2)^2 + lambda^2, so admissible spectra always give real
    // roots; the complex branch handles hypothetical extensions only.
    Rat disc = half_n * half_n - Rat(k * (n - k)) + e.lambda_sq;
    std::string src = "lambda^2=" + rat_to_string(e.lambda_sq) + " deg " +
                      std::to_string(k) + " (closed-coclosed)";
    if (disc < 0) {
      IndicialRoot r;
      r.value = QuadraticValue::rational(half_n);
      r.complex_pair = true;
      r.multiplicity = e.multiplicity;
      r.source = src + ", complex pair";
      rep.roots.push_back(r);
      continue;
    }
    if (disc == 0) {
      IndicialRoot r;
      r.value = QuadraticValue::rational(half_n);
      r.multiplicity = 2 * e.multiplicity;  // double root of the quadratic
      r.source = src + ", double root";
      rep.roots.push_back(r);
      continue;
    }
    for (int s : {-1, 1}) {
      IndicialRoot r;
      r.value = QuadraticValue::make(half_n, Rat(s), disc);
      r.multiplicity = e.multiplicity;
      r.source = src;
      rep.roots.push_back(r);
    }
  }
  detail::sort_merge_roots(rep.roots);
  detail::build_gaps(rep);
  detail::warn_log_terms(rep);
  rep.notes.push_back(
      "roots cover the closed-and-coclosed subset only; the coupled system's "
      "full indicial set is not asserted complete");
  for (const SpectrumEntry& e : spec.eigenvalues) {
    if (e.lambda_sq == 1 && 2 * e.degree == n)
      rep.notes.push_back(
          "excluded candidate at gamma = n/2-1 from lambda^2 = 1, degree n/2: "
          "solves the squared equation only, not the first-order system");
    if (e.lambda_sq == Rat(3, 4) &&
        (2 * e.degree == n - 1 || 2 * e.degree == n + 1))
      rep.notes.push_back(
          "excluded candidate at gamma = n/2-1 from lambda^2 = 3/4, degree "
          "(n+-1)/2: solves the squared equation only");
  }
  return rep;
}

/// The weight at which surjectivity is analyzed: (b-1)/2 for fibred boundary,
/// -f/2 for fibred cusp; the trivial-fibre classes defer to the scattering
/// value n/2 - 1 and the b-metric value 0.
inline Rat critical_weight(MetricKind m, Count b, Count f) {
  switch (m) {
    case MetricKind::FibredBoundary: return Rat(b - 1, 2);
    case MetricKind::FibredCusp: return Rat(-f, 2);
    case MetricKind::Scattering: {
      Count n = b + f + 1;
      return Rat(n, 2) - 1;
    }
    case MetricKind::B: return Rat(0);
  }
  throw ValidationError("unknown metric kind");
}

/// Fredholm iff the weight avoids every indicial real part.
inline bool is_fredholm(const IndicialReport& rep, const Rat& weight) {
  QuadraticValue w = QuadraticValue::rational(weight);
  return std::none_of(rep.roots.begin(), rep.roots.end(),
                      [&](const IndicialRoot& r) { return r.value.equals(w); });
}

}  // namespace l2hodge
