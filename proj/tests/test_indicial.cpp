#include <catch2/catch_amalgamated.hpp>

#include "l2hodge/indicial.hpp"

using namespace l2hodge;

namespace {

BaseSpectrum circle_functions(Count mmax) {
  BaseSpectrum s;
  for (Count m = 0; m <= mmax; ++m)
    s.eigenvalues.push_back({Rat(m * m), 0, m == 0 ? 1 : 2});
  return s;
}

std::vector<double> root_values(const IndicialReport& r) {
  std::vector<double> out;
  for (const IndicialRoot& root : r.roots) out.push_back(root.value.to_double());
  return out;
}

}  // namespace

TEST_CASE("QuadraticValue exact comparisons") {
  auto r2 = QuadraticValue::make(0, 1, 2);
  auto r2b = QuadraticValue::make(0, 2, Rat(1, 2));  // 2*sqrt(1/2) = sqrt(2)
  CHECK(r2.equals(r2b));
  CHECK_FALSE(r2.equals(QuadraticValue::make(0, 1, 3)));
  CHECK(QuadraticValue::make(1, 1, 4).equals(QuadraticValue::rational(3)));
  CHECK(QuadraticValue::rational(Rat(1, 2)).less(r2));
  CHECK(QuadraticValue::make(0, -1, 2).less(QuadraticValue::rational(0)));
  CHECK_FALSE(r2.less(r2b));
  // sqrt(2)+1 vs sqrt(3)+1: integer difference must be rejected.
  CHECK_FALSE(QuadraticValue::make(1, 1, 2).integer_difference(
      QuadraticValue::make(0, 1, 3)));
  CHECK(QuadraticValue::make(1, 1, 2).integer_difference(
      QuadraticValue::make(-2, 1, 2)));
}

TEST_CASE("b-metric indicial roots are +-lambda") {
  BaseSpectrum s;
  s.eigenvalues.push_back({Rat(0), 0, 1});
  s.eigenvalues.push_back({Rat(1), 0, 1});
  IndicialReport rep = b_indicial(s);
  REQUIRE(rep.roots.size() == 3);
  CHECK(rep.roots[0].value.equals(QuadraticValue::rational(-1)));
  CHECK(rep.roots[1].value.equals(QuadraticValue::rational(0)));
  CHECK(rep.roots[2].value.equals(QuadraticValue::rational(1)));
  CHECK(rep.roots[1].multiplicity == 1);  // spurious double root collapsed

  IndicialReport circle = b_indicial(circle_functions(2));
  CHECK(root_values(circle) == std::vector<double>{-2, -1, 0, 1, 2});
}

TEST_CASE("empty spectrum yields a single unbounded gap") {
  IndicialReport rep = b_indicial(BaseSpectrum{});
  CHECK(rep.roots.empty());
  REQUIRE(rep.fredholm_gaps.size() == 1);
  CHECK_FALSE(rep.fredholm_gaps[0].lo.has_value());
  CHECK_FALSE(rep.fredholm_gaps[0].hi.has_value());
}

TEST_CASE("b-indicial roots are closed under negation") {
  BaseSpectrum s;
  s.eigenvalues.push_back({Rat(2), 1, 1});   // irrational roots +-sqrt(2)
  s.eigenvalues.push_back({Rat(9, 4), 0, 2});
  IndicialReport rep = b_indicial(s);
  for (const IndicialRoot& r : rep.roots) {
    bool found = false;
    for (const IndicialRoot& o : rep.roots) {
      QuadraticValue sum_zero = QuadraticValue::rational(0);
      // negation-closure: some root equals the negative; test via doubles
      // plus exact zero-sum through integer_difference on the rational case.
      if (std::abs(r.value.to_double() + o.value.to_double()) < 1e-12)
        found = true;
      (void)sum_zero;
    }
    CHECK(found);
  }
}

TEST_CASE("scattering roots for harmonic forms are k and n-k") {
  for (Count n = 2; n <= 10; ++n)
    for (Count k = 0; k <= n; ++k) {
      BaseSpectrum s;
      s.eigenvalues.push_back({Rat(0), k, 1});
      IndicialReport rep = scattering_indicial(s, n);
      if (2 * k == n) {
        REQUIRE(rep.roots.size() == 1);
        CHECK(rep.roots[0].value.equals(QuadraticValue::rational(k)));
        CHECK(rep.roots[0].multiplicity == 2);
      } else {
        REQUIRE(rep.roots.size() == 2);
        CHECK(rep.roots[0].value.equals(
            QuadraticValue::rational(std::min(k, n - k))));
        CHECK(rep.roots[1].value.equals(
            QuadraticValue::rational(std::max(k, n - k))));
      }
    }
}

TEST_CASE("scattering roots are closed under gamma -> n - gamma") {
  BaseSpectrum s;
  s.eigenvalues.push_back({Rat(3), 1, 1});
  s.eigenvalues.push_back({Rat(1, 3), 2, 1});
  Count n = 5;
  IndicialReport rep = scattering_indicial(s, n);
  for (const IndicialRoot& r : rep.roots) {
    bool found = false;
    for (const IndicialRoot& o : rep.roots)
      if (std::abs((n - r.value.to_double()) - o.value.to_double()) < 1e-12)
        found = true;
    CHECK(found);
  }
  CHECK(rep.critical == Rat(n) / 2 - 1);
}

TEST_CASE("scattering discriminant (k - n/2)^2 + lambda^2 keeps roots real") {
  // Negative spectra are rejected at the type boundary...
  BaseSpectrum neg;
  neg.eigenvalues.push_back({Rat(-1), 2, 1});
  CHECK_THROWS_AS(scattering_indicial(neg, 6), ValidationError);

  // ...and for every admissible entry the roots come out real.
  for (Count n = 2; n <= 7; ++n)
    for (Count k = 0; k <= n; ++k)
      for (long long num : {0, 1, 3}) {
        BaseSpectrum s;
        s.eigenvalues.push_back({Rat(num, 4), k, 1});
        IndicialReport rep = scattering_indicial(s, n);
        for (const IndicialRoot& r : rep.roots) CHECK_FALSE(r.complex_pair);
      }
}

TEST_CASE("critical weights per metric class") {
  CHECK(critical_weight(MetricKind::FibredBoundary, 2, 1) == Rat(1, 2));
  CHECK(critical_weight(MetricKind::FibredCusp, 2, 1) == Rat(-1, 2));
  CHECK(critical_weight(MetricKind::FibredCusp, 1, 0) == Rat(0));
  CHECK(critical_weight(MetricKind::Scattering, 3, 0) == Rat(1));
  CHECK(critical_weight(MetricKind::B, 3, 0) == Rat(0));
}

TEST_CASE("Fredholm weights avoid all root real parts") {
  IndicialReport circle = b_indicial(circle_functions(2));
  CHECK(is_fredholm(circle, Rat(1, 2)));
  CHECK_FALSE(is_fredholm(circle, Rat(0)));
  CHECK_FALSE(is_fredholm(circle, Rat(2)));

  BaseSpectrum s;
  s.eigenvalues.push_back({Rat(0), 2, 1});
  IndicialReport sc = scattering_indicial(s, 4);
  CHECK_FALSE(is_fredholm(sc, Rat(2)));  // double root at n/2
  CHECK(is_fredholm(sc, Rat(3, 2)));
}

TEST_CASE("gap construction is sound") {
  IndicialReport circle = b_indicial(circle_functions(3));
  for (const FredholmGap& g : circle.fredholm_gaps) {
    // Probe strictly inside each gap (or beyond the unbounded ends).
    double lo = g.lo ? g.lo->to_double() : -4.5;
    double hi = g.hi ? g.hi->to_double() : 4.5;
    Rat probe = Rat(static_cast<long long>((lo + hi) * 512), 1024);
    if (!g.lo) probe = Rat(-9, 2);
    if (!g.hi) probe = Rat(9, 2);
    CHECK(is_fredholm(circle, probe));
  }
}

TEST_CASE("integer-spaced roots trigger a log-term warning") {
  BaseSpectrum s;
  s.eigenvalues.push_back({Rat(0), 0, 1});
  s.eigenvalues.push_back({Rat(1), 0, 1});
  IndicialReport rep = b_indicial(s);
  bool warned = false;
  for (const std::string& n : rep.notes)
    if (n.find("log terms possible") != std::string::npos) warned = true;
  CHECK(warned);
}
