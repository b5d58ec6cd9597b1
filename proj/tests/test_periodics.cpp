#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "fixtures.hpp"
#include "kneadlab/markov_shift.hpp"
#include "kneadlab/periodics.hpp"

using namespace kneadlab;

namespace {

MarkovDiagram diagram_of(const IntervalMap& m, size_t cap = 64) {
  KneadingData kd = kneading(m);
  return build_diagram_pmm(kd, cap);
}

}  // namespace

TEST_CASE("golden diagram closed walks are the lucas numbers") {
  MarkovDiagram d = diagram_of(make_beta(Number::generator(golden_field())));
  auto fix = fix_counts_diagram(d, 12);
  const long lucas[] = {1, 3, 4, 7, 11, 18, 29, 47, 76, 123, 199, 322};
  for (size_t n = 0; n < 12; ++n) CHECK(fix[n] == lucas[n]);
}

TEST_CASE("symbolic and diagram censuses agree on the beta fixtures") {
  auto compare = [](const IntervalMap& m, size_t nmax, long slack) {
    KneadingData kd = kneading(m);
    MarkovDiagram d = build_diagram_pmm(kd, 64);
    REQUIRE(d.complete);
    auto walks = fix_counts_diagram(d, nmax);
    PeriodicCensus census = fix_counts_symbolic(kd, nmax);
    for (size_t n = 0; n < nmax; ++n) {
      CHECK(census.undecided[n] == 0);
      Integer gap = walks[n] - census.counts[n];
      INFO("period " << n + 1 << ": walks " << walks[n].get_str() << " census "
                     << census.counts[n].get_str());
      CHECK(abs(gap) <= slack);
    }
  };
  compare(make_beta(Number(2)), 12, 2);
  compare(make_beta(Number::generator(golden_field())), 12, 2);
}

TEST_CASE("full shift census is exactly 2^n") {
  KneadingData kd = kneading(make_beta(Number(2)));
  PeriodicCensus census = fix_counts_symbolic(kd, 12);
  Integer pw = 2;
  for (size_t n = 0; n < 12; ++n) {
    CHECK(census.counts[n] == pw);
    pw *= 2;
  }
}

TEST_CASE("orbit counts come out as nonnegative integers") {
  MarkovDiagram d = diagram_of(make_beta(Number::generator(golden_field())));
  auto orbits = orbit_counts(fix_counts_diagram(d, 12));
  const long expect[] = {1, 1, 1, 1, 2, 2, 4, 5, 8, 11, 18, 25};
  for (size_t n = 0; n < 12; ++n) CHECK(orbits[n] == expect[n]);

  std::vector<Integer> bogus{Integer(2), Integer(3)};  // 3 - 2 is odd
  CHECK_THROWS_AS(orbit_counts(bogus), Error);
}

TEST_CASE("zeta series from counts matches the rational function route") {
  MarkovDiagram d = diagram_of(make_beta(Number::generator(golden_field())));
  QPoly from_counts = zeta_series_from_counts(fix_counts_diagram(d, 16), 16);
  QPoly from_fn = zeta_diagram(d).series(17);
  for (size_t n = 0; n <= 16; ++n) CHECK(from_counts[n] == from_fn[n]);

  // the golden zeta is 1/(1 - z - z^2): fibonacci coefficients 1 1 2 3 5 ...
  Integer prev = 1, cur = 1;
  CHECK(from_counts[0] == 1);
  for (size_t n = 1; n <= 16; ++n) {
    CHECK(from_counts[n] == Rational(cur));
    Integer nxt = prev + cur;
    prev = cur;
    cur = nxt;
  }
}

TEST_CASE("full shift zeta coefficients are 2^n") {
  MarkovDiagram d = diagram_of(make_beta(Number(2)));
  QPoly z = zeta_series_from_counts(fix_counts_diagram(d, 16), 16);
  Integer pw = 1;
  for (size_t n = 0; n <= 16; ++n) {
    CHECK(z[n] == Rational(pw));
    pw *= 2;
  }
}

TEST_CASE("periodic points equidistribute toward the maximal measure") {
  MarkovDiagram full = diagram_of(make_beta(Number(2)));
  MaxMeasure mu_full = max_measure(full);
  EquidistributionReport r = periodic_equidistribution(full, mu_full, 2, 16, 4);
  CHECK(r.worst <= 0.02);

  MarkovDiagram golden = diagram_of(make_beta(Number::generator(golden_field())));
  MaxMeasure mu_g = max_measure(golden);
  EquidistributionReport rg = periodic_equidistribution(golden, mu_g, 2, 20, 3);
  CHECK(rg.worst <= 0.05);
  CHECK(rg.total == 15127);  // lucas number L_20
}

TEST_CASE("longer periods tighten the equidistribution bound") {
  MarkovDiagram golden = diagram_of(make_beta(Number::generator(golden_field())));
  MaxMeasure mu = max_measure(golden);
  double w8 = periodic_equidistribution(golden, mu, 2, 8, 2).worst;
  double w20 = periodic_equidistribution(golden, mu, 2, 20, 2).worst;
  CHECK(w20 < w8);
}
