#pragma once

#include <cstdlib>
#include <map>
#include <vector>

#include "kneadlab/diagram.hpp"
#include "kneadlab/kneading.hpp"
#include "kneadlab/markov_shift.hpp"
#include "kneadlab/poly.hpp"
#include "kneadlab/shift_graph.hpp"

namespace kneadlab {

/* closed-walk counts tr(A^n) of the diagram, n = 1..nmax */
inline std::vector<Integer> fix_counts_diagram(const MarkovDiagram& d, size_t nmax) {
  return trace_powers(counts_matrix(from_diagram(d)), nmax);
}

/*
 * Number of admissible n-periodic symbol sequences for n = 1..nmax, by
 * exhaustion over all period words.  Sequences whose admissibility stays
 * undecided at the kneading depth are counted separately.
 */
struct PeriodicCensus {
  std::vector<Integer> counts;     // [n-1] = admissible sequences of period n
  std::vector<size_t> undecided;   // same indexing
};

inline PeriodicCensus fix_counts_symbolic(const KneadingData& kd, size_t nmax) {
  PeriodicCensus out;
  out.counts.assign(nmax, 0);
  out.undecided.assign(nmax, 0);
  for (size_t n = 1; n <= nmax; ++n) {
    Word w(n, 0);
    for (;;) {
      Tri t = is_admissible(kd, SymbolSeq::periodic({}, w));
      if (t == Tri::yes)
        out.counts[n - 1] += 1;
      else if (t == Tri::undecidable)
        out.undecided[n - 1] += 1;
      size_t i = n;
      while (i > 0 && w[i - 1] == int(kd.npieces) - 1) w[--i] = 0;
      if (i == 0) break;
      w[i - 1] += 1;
    }
  }
  return out;
}

/*
 * Orbit counts from fix counts by Mobius inversion.  A genuine census gives
 * a nonnegative integer for every n; anything else means the counts are not
 * the fixed-point numbers of a map.
 */
inline std::vector<Integer> orbit_counts(const std::vector<Integer>& fix) {
  size_t nmax = fix.size();
  std::vector<int> mu(nmax + 1, 1);
  std::vector<char> composite(nmax + 1, 0);
  std::vector<size_t> primes;
  for (size_t i = 2; i <= nmax; ++i) {  // linear sieve for the Mobius function
    if (!composite[i]) {
      primes.push_back(i);
      mu[i] = -1;
    }
    for (size_t p : primes) {
      if (i * p > nmax) break;
      composite[i * p] = 1;
      if (i % p == 0) {
        mu[i * p] = 0;
        break;
      }
      mu[i * p] = -mu[i];
    }
  }
  std::vector<Integer> orbits(nmax);
  for (size_t n = 1; n <= nmax; ++n) {
    Integer s = 0;
    for (size_t d = 1; d <= n; ++d)
      if (n % d == 0 && mu[n / d] != 0)
        s += Integer(long(mu[n / d])) * fix[d - 1];
    if (sgn(s) < 0 || sgn(s % Integer(long(n))) != 0)
      throw Error(errk::BadSpec, "fix counts fail orbit consistency at n=" +
                                     std::to_string(n));
    orbits[n - 1] = s / Integer(long(n));
  }
  return orbits;
}

/* zeta series exp(sum fix_n z^n / n), exact coefficients, terms+1 long */
inline QPoly zeta_series_from_counts(const std::vector<Integer>& fix, size_t terms) {
  QPoly c(terms + 1, Rational(0));
  for (size_t n = 1; n <= terms && n <= fix.size(); ++n)
    c[n] = Rational(fix[n - 1]) / Rational(long(n));
  return series_exp(c, terms + 1);
}

/* zeta of a complete diagram as a reduced rational function, 1/det(I - zA) */
inline RationalFunction zeta_diagram(const MarkovDiagram& d) {
  if (!d.complete)
    throw Error(errk::NotSupported, "zeta of a truncation is only a series");
  return semilocal_zeta(from_diagram(d));
}

/* ---- equidistribution of periodic points over cylinders ---- */

namespace detail {

/* arrow counts split by symbol: one matrix per letter */
inline std::vector<IMatrix> labelled_counts(const MarkovDiagram& d, size_t nsymbols) {
  size_t n = d.nvertices();
  std::vector<IMatrix> by(nsymbols, IMatrix(n, std::vector<Integer>(n, 0)));
  for (size_t u = 0; u < n; ++u)
    for (const auto& [sym, v] : d.arrows[u]) by[size_t(sym)][u][v] += 1;
  return by;
}

}  // namespace detail

struct EquidistributionReport {
  size_t period = 0;
  size_t depth = 0;
  double worst = 0;  // max over cylinders of |periodic fraction - measure|
  Word worst_word;
  Integer total;     // closed walks of the period
};

/*
 * Among the closed walks of the given period, the fraction whose first
 * symbols spell a word u is tr(A_{u_1}...A_{u_k} A^{n-k}) / tr(A^n).  For a
 * mixing diagram this converges to the maximal measure of the cylinder; the
 * report records the worst deviation over all cylinders up to the depth.
 */
inline EquidistributionReport periodic_equidistribution(const MarkovDiagram& d,
                                                        const MaxMeasure& mu,
                                                        size_t nsymbols,
                                                        size_t period, size_t depth) {
  EquidistributionReport rep;
  rep.period = period;
  rep.depth = depth;
  auto by = detail::labelled_counts(d, nsymbols);
  IMatrix A = counts_matrix(from_diagram(d));

  std::vector<IMatrix> pow(period + 1);  // A^j for j = 0..period
  pow[0] = imat_identity(d.nvertices());
  for (size_t j = 1; j <= period; ++j) pow[j] = imat_mul(pow[j - 1], A);
  rep.total = imat_trace(pow[period]);
  if (sgn(rep.total) == 0)
    throw Error(errk::EmptyGraph, "no closed walks of that period");

  std::function<void(Word&, const IMatrix&)> walk = [&](Word& w, const IMatrix& prod) {
    if (!w.empty()) {
      Integer cnt = imat_trace(imat_mul(prod, pow[period - w.size()]));
      double frac = Rational(cnt).get_d() / Rational(rep.total).get_d();
      double dev = std::abs(frac - measure_word(d, mu, w));
      if (dev > rep.worst) {
        rep.worst = dev;
        rep.worst_word = w;
      }
    }
    if (w.size() == depth) return;
    for (size_t b = 0; b < nsymbols; ++b) {
      w.push_back(int(b));
      walk(w, imat_mul(prod, by[b]));
      w.pop_back();
    }
  };
  Word w;
  walk(w, pow[0]);
  return rep;
}

}  // namespace kneadlab
