#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "kneadlab/diagram.hpp"
#include "kneadlab/markov_shift.hpp"
#include "kneadlab/periodics.hpp"
#include "kneadlab/shift_graph.hpp"

using namespace kneadlab;

namespace {

const std::vector<std::vector<int>> golden_sft{{1, 1}, {1, 0}};

double dense_spectral_radius(const std::vector<std::vector<int>>& m) {
  size_t n = m.size();
  Eigen::MatrixXd a(n, n);
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j) a(long(i), long(j)) = m[i][j];
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  double rho = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    rho = std::max(rho, std::abs(es.eigenvalues()[i]));
  return rho;
}

MarkovDiagram diagram_of(const IntervalMap& m, size_t cap = 64) {
  KneadingData kd = kneading(m);
  return build_diagram_pmm(kd, cap);
}

}  // namespace

TEST_CASE("characteristic polynomial of small matrices") {
  IMatrix fib{{Integer(1), Integer(1)}, {Integer(1), Integer(0)}};
  ZPoly p = charpoly(fib);  // x^2 - x - 1
  REQUIRE(p.size() == 3);
  CHECK(p[0] == -1);
  CHECK(p[1] == -1);
  CHECK(p[2] == 1);
  ZPoly r = det_izA(fib);  // 1 - z - z^2
  REQUIRE(r.size() == 3);
  CHECK(r[0] == 1);
  CHECK(r[1] == -1);
  CHECK(r[2] == -1);

  // trace identities agree with the determinant route on a fixed 4x4
  IMatrix a{{Integer(0), Integer(1), Integer(1), Integer(0)},
            {Integer(1), Integer(0), Integer(1), Integer(1)},
            {Integer(0), Integer(1), Integer(0), Integer(1)},
            {Integer(1), Integer(1), Integer(0), Integer(0)}};
  QPoly via_traces = [&] {
    auto tr = trace_powers(a, 10);
    QPoly c(11, Rational(0));
    for (size_t n = 1; n <= 10; ++n) c[n] = -Rational(tr[n - 1]) / Rational(long(n));
    return series_exp(c, 11);  // det(I - zA) as a series
  }();
  QPoly via_fl = series_trunc(to_qpoly(det_izA(a)), 11);
  CHECK(via_traces == via_fl);
}

TEST_CASE("series inverse and exp round trips") {
  QPoly a{Rational(1), Rational(-2)};  // 1 - 2z
  QPoly inv = series_inverse(a, 17);
  Integer pw = 1;
  for (size_t n = 0; n < 17; ++n) {
    CHECK(inv[n] == Rational(pw));
    pw *= 2;
  }
  CHECK(series_mul(a, inv, 17) == series_trunc({Rational(1)}, 17));

  // exp(sum 2^n z^n / n) = 1/(1 - 2z)
  QPoly c(17, Rational(0));
  Integer p2 = 1;
  for (size_t n = 1; n < 17; ++n) {
    p2 *= 2;
    c[n] = Rational(p2) / Rational(long(n));
  }
  CHECK(series_exp(c, 17) == inv);
}

TEST_CASE("sturm bracket finds the smallest positive root") {
  Rational w = Rational(1) / Rational(Integer("10000000000000"));

  QPoly golden{Rational(1), Rational(-1), Rational(-1)};  // 1 - z - z^2
  auto b = smallest_positive_root(golden, w);
  REQUIRE(b.has_value());
  double phi_inv = (std::sqrt(5.0) - 1) / 2;
  CHECK(to_double(b->lo) <= phi_inv);
  CHECK(phi_inv <= to_double(b->hi) + 1e-15);
  CHECK(to_double(b->hi - b->lo) <= 1.1e-13);

  QPoly half{Rational(1), Rational(-2)};  // exact rational root 1/2
  auto h = smallest_positive_root(half, w);
  REQUIRE(h.has_value());
  CHECK(to_double(h->lo) <= 0.5);
  CHECK(0.5 <= to_double(h->hi) + 1e-18);

  QPoly none{Rational(1), Rational(0), Rational(1)};  // z^2 + 1
  CHECK(!smallest_positive_root(none, w).has_value());

  // repeated roots are counted once via the squarefree part
  QPoly sq = detail::poly_mul(half, half);
  auto s = smallest_positive_root(sq, w);
  REQUIRE(s.has_value());
  CHECK(to_double(s->hi) <= 0.5 + 1e-12);
}

TEST_CASE("entropy of finite shifts matches the known spectra") {
  GraphEntropy full2 = markov_entropy(from_matrix({{1, 1}, {1, 1}}));
  CHECK(full2.exact);
  CHECK(std::abs(full2.value - std::log(2.0)) < 1e-12);

  GraphEntropy golden = markov_entropy(from_matrix(golden_sft));
  double log_phi = std::log((1 + std::sqrt(5.0)) / 2);
  CHECK(golden.exact);
  CHECK(std::abs(golden.value - log_phi) < 1e-12);
  CHECK(golden.lo <= log_phi);
  CHECK(log_phi <= golden.hi);

  GraphEntropy acyclic = markov_entropy(from_matrix({{0, 1}, {0, 0}}));
  CHECK(acyclic.value == 0.0);

  GraphEntropy ladder = markov_entropy(make_ladder(40));
  CHECK(ladder.value < std::log(2.0));
  CHECK(ladder.value > std::log(2.0) - 0.01);
}

TEST_CASE("entropy agrees with a dense eigensolver on random strong matrices") {
  std::mt19937 rng(431);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = fixtures::random_strong_matrix(rng);
    GraphEntropy h = markov_entropy(from_matrix(m));
    REQUIRE(h.exact);
    double rho = dense_spectral_radius(m);
    INFO("trial " << trial << " size " << m.size());
    CHECK(std::abs(h.value - std::log(rho)) < 1e-9);
  }
}

TEST_CASE("semilocal zeta: determinant and trace routes agree") {
  std::mt19937 rng(7577);
  for (int trial = 0; trial < 10; ++trial) {
    auto m = fixtures::random_strong_matrix(rng);
    ShiftGraph g = from_matrix(m);
    QPoly via_fn = semilocal_zeta(g).series(13);
    QPoly via_traces = semilocal_zeta_series(g, 12);
    INFO("trial " << trial);
    CHECK(via_fn == via_traces);
  }
}

TEST_CASE("full beta diagram carries the fair Bernoulli measure") {
  MarkovDiagram d = diagram_of(make_beta(Number(2)));
  REQUIRE(d.complete);
  REQUIRE(d.nvertices() == 2);

  auto all = max_measures(d);
  REQUIRE(all.size() == 1);
  const MaxMeasure& mu = all[0];
  CHECK(std::abs(mu.lambda - 2.0) < 1e-12);

  // every cylinder of every depth up to 6 has mass 2^-n
  for (size_t len = 1; len <= 6; ++len) {
    for (size_t bits = 0; bits < (size_t(1) << len); ++bits) {
      Word w;
      for (size_t i = 0; i < len; ++i) w.push_back(int((bits >> i) & 1));
      CHECK(std::abs(measure_word(d, mu, w) - std::pow(2.0, -double(len))) < 1e-10);
    }
  }
  for (size_t u = 0; u < d.nvertices(); ++u)
    for (const auto& [sym, v] : d.arrows[u]) {
      (void)sym;
      CHECK(std::abs(transition_probability(mu, u, v) - 0.5) < 1e-12);
    }
}

TEST_CASE("golden diagram: unique measure and the fibonacci local zeta") {
  MarkovDiagram d = diagram_of(make_beta(Number::generator(golden_field())));
  REQUIRE(d.complete);
  REQUIRE(d.nvertices() == 2);
  IMatrix A = counts_matrix(from_diagram(d));
  CHECK(A[0][0] == 1);
  CHECK(A[0][1] == 1);
  CHECK(A[1][0] == 1);
  CHECK(A[1][1] == 0);

  auto all = max_measures(d);
  REQUIRE(all.size() == 1);
  double log_phi = std::log((1 + std::sqrt(5.0)) / 2);
  CHECK(std::abs(all[0].entropy - log_phi) < 1e-11);

  size_t v = *d.vertex_of(Word{0});
  ShiftGraph g = from_diagram(d);
  RationalFunction zeta = local_zeta(g, v);
  REQUIRE(zeta.den.size() == 3);  // reduced to 1 - z - z^2
  CHECK(zeta.den[0] == 1);
  CHECK(zeta.den[1] == -1);
  CHECK(zeta.den[2] == -1);
  REQUIRE(zeta.num.size() == 1);
  CHECK(zeta.num[0] == 1);

  // series coefficients are the loop counts at the base vertex
  QPoly zs = zeta.series(17);
  auto loops = loop_counts(g, v, 16);
  CHECK(zs[0] == 1);
  for (size_t n = 1; n <= 16; ++n) CHECK(zs[n] == Rational(loops[n - 1]));
}

TEST_CASE("renewal identity ties loops to first returns") {
  auto check_renewal = [](const ShiftGraph& g, size_t v, size_t depth) {
    auto ell = loop_counts(g, v, depth);
    auto f = first_return_counts(g, v, depth);
    for (size_t n = 1; n <= depth; ++n) {
      Integer s = f[n - 1];  // k = n term pairs with ell_0 = 1
      for (size_t k = 1; k < n; ++k) s += f[k - 1] * ell[n - k - 1];
      REQUIRE(s == ell[n - 1]);
    }
  };
  check_renewal(from_matrix(golden_sft), 0, 30);
  check_renewal(make_ladder(24), 0, 30);
  std::mt19937 rng(99);
  check_renewal(from_matrix(fixtures::random_strong_matrix(rng)), 0, 20);
}

TEST_CASE("finite strongly connected graphs classify as strongly positive recurrent") {
  for (const auto& m : {std::vector<std::vector<int>>{{1, 1}, {1, 1}}, golden_sft}) {
    ShiftGraph g = from_matrix(m);
    Classification c = classify(g, 0);
    CHECK(c.mode == Recurrence::positive_recurrent);
    CHECK(c.spr);
    CHECK(c.confidence == Confidence::certified);
    CHECK(c.exact);
    GraphEntropy h = markov_entropy(g);
    CHECK(std::abs(c.entropy - h.value) < 1e-9);
    CHECK(std::abs(c.F_value - 1.0) < 1e-6);  // renewal at the radius
  }
}

TEST_CASE("ladder truncation: transient verdict with catalan partial sums") {
  ShiftGraph g = make_ladder(40);
  REQUIRE(!g.complete());
  Rational half = fixtures::frac(1, 2);
  Classification c = classify(g, 0, 60, half);

  CHECK(c.mode == Recurrence::transient);
  CHECK(c.confidence == Confidence::depth_limited);
  CHECK(c.exact);

  // partial sums of f_n (1/2)^n are exactly sum C_{k-1} 4^-k
  auto cat = fixtures::catalan(30);
  Rational expect(0), quarter = fixtures::frac(1, 4), p(1);
  for (size_t k = 1; k <= 30; ++k) {
    p *= quarter;
    expect += Rational(cat[k - 1]) * p;
  }
  CHECK(c.F_partial == expect);
  // the catalan tail is heavy, order n^{-1/2}: thirty terms reach about 0.449
  CHECK(to_double(c.F_partial) > 0.44);
  CHECK(to_double(c.F_partial) < 0.5);

  // deeper partial sums keep climbing toward 1/2 without crossing it
  Classification deeper = classify(make_ladder(64), 0, 120, half);
  CHECK(deeper.F_partial > c.F_partial);
  CHECK(to_double(deeper.F_partial) < 0.5);

  // without the supplied radius the truncation still reads transient
  Classification raw = classify(g, 0, 60);
  CHECK(raw.mode == Recurrence::transient);
  CHECK(raw.confidence == Confidence::depth_limited);
}

TEST_CASE("deleting any arrow strictly lowers finite entropy") {
  auto check_deletions = [](const ShiftGraph& g) {
    GraphEntropy before = markov_entropy(g);
    REQUIRE(before.exact);
    size_t arrows = 0;
    for (size_t u = 0; u < g.nvertices(); ++u) {
      for (size_t v : g.adj[u]) {
        GraphEntropy after = markov_entropy(delete_arrow(g, u, v));
        REQUIRE(after.exact);
        INFO("arrow " << u << " -> " << v);
        CHECK(after.hi < before.lo);
        ++arrows;
      }
    }
    REQUIRE(arrows <= 12);
  };
  check_deletions(from_matrix(golden_sft));
  check_deletions(from_diagram(diagram_of(make_beta(Number(2)))));
  check_deletions(from_diagram(diagram_of(make_full(3))));
}

TEST_CASE("entropy at infinity vanishes on the deep tail") {
  MarkovDiagram full3 = diagram_of(make_full(3));
  CHECK(std::abs(entropy_at_infinity(full3, 0) - std::log(3.0)) < 1e-12);
  CHECK(entropy_at_infinity(full3, 1) == 0.0);

  MarkovDiagram golden = diagram_of(make_beta(Number::generator(golden_field())));
  CHECK(entropy_at_infinity(golden, 4) == 0.0);

  KneadingData kd = kneading(make_beta(Number(Rational(3, 2))), 40);
  MarkovDiagram ray = build_diagram_pmm(kd, 48);
  REQUIRE(!ray.complete);
  double deep = entropy_at_infinity(ray, 40);
  CHECK(deep < 0.05);
  CHECK(deep <= entropy_at_infinity(ray, 8) + 1e-9);
}

TEST_CASE("rokhlin integral reproduces constant slope entropy") {
  auto check_map = [](const IntervalMap& m, double expect) {
    MarkovDiagram d = diagram_of(m);
    REQUIRE(d.complete);
    MaxMeasure mu = max_measure(d);
    RokhlinEstimate r = rokhlin_entropy(m, d, mu, 8);
    CHECK(r.error == 0.0);  // single-branch pieces never straddle
    CHECK(std::abs(r.value - expect) < 1e-8);
    CHECK(std::abs(mu.entropy - expect) < 1e-8);
  };
  check_map(make_beta(Number(2)), std::log(2.0));
  check_map(make_full(3), std::log(3.0));
  check_map(make_beta(Number::generator(golden_field())), std::log((1 + std::sqrt(5.0)) / 2));
}
