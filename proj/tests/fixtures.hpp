#pragma once

// Deterministic fixture generators shared by the unit tests and the
// acceptance suite.  Everything is seeded by the caller, so a fixed seed
// reproduces the exact same maps and matrices everywhere.

#include <algorithm>
#include <random>
#include <vector>

#include "kneadlab/interval_map.hpp"
#include "kneadlab/laps.hpp"
#include "kneadlab/numbers.hpp"

namespace fixtures {

using kneadlab::Integer;
using kneadlab::IntervalMap;
using kneadlab::Number;
using kneadlab::Rational;

/* the two-argument mpq constructor skips canonicalization */
inline Rational frac(long n, long d) {
  Rational r(n, d);
  r.canonicalize();
  return r;
}

/* 0/1 matrix with a random spanning cycle, so it is strongly connected */
inline std::vector<std::vector<int>> random_strong_matrix(std::mt19937& rng,
                                                          size_t nmax = 6) {
  size_t n = 2 + rng() % (nmax - 1);
  std::vector<std::vector<int>> m(n, std::vector<int>(n, 0));
  std::vector<size_t> order(n);
  for (size_t i = 0; i < n; ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  for (size_t i = 0; i < n; ++i) m[order[i]][order[(i + 1) % n]] = 1;
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (!m[i][j] && rng() % 3 == 0) m[i][j] = 1;
  return m;
}

/*
 * Random exact Markov map on the grid of denominator 8: three or four affine
 * branches whose domains and images have grid endpoints, every image at
 * least 0.6 wide (so every slope is expanding).  Grid images keep the lap
 * state space finite, which makes deep lap counts cheap.  Draws are filtered
 * so no two branches merge into one monotone piece and the length growth is
 * clearly positive.
 */
inline IntervalMap random_markov_map(std::mt19937& rng) {
  const long q = 8;
  const long min_width = 5;  // 5/8 > 0.6
  for (;;) {
    size_t k = 3 + rng() % 2;
    std::vector<long> cuts{0, q};
    while (cuts.size() < k + 1) {
      long c = 1 + long(rng() % size_t(q - 1));
      bool dup = false;
      for (long x : cuts) dup |= (x == c);
      if (!dup) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());

    IntervalMap m;
    m.a = Number(0);
    m.b = Number(1);
    m.exact = true;
    m.label = "random-markov";
    for (size_t i = 0; i < k; ++i) {
      long glo = cuts[i], ghi = cuts[i + 1];
      long alo = long(rng() % size_t(q - min_width + 1));
      long ahi = alo + min_width + long(rng() % size_t(q - min_width - alo + 1));
      bool inc = rng() % 2 == 0;
      Rational dom_lo = frac(glo, q), img_lo = frac(alo, q), img_hi = frac(ahi, q);
      Rational s = frac(ahi - alo, ghi - glo);
      Number slope = inc ? Number(s) : Number(-s);
      Number intercept = inc ? Number(img_lo - s * dom_lo) : Number(img_hi + s * dom_lo);
      m.branches.push_back({Number(frac(glo, q)), Number(frac(ghi, q)),
                            kneadlab::AffineRule{slope, intercept}, inc});
    }
    try {
      kneadlab::validate(m);
    } catch (const kneadlab::Error&) {
      continue;
    }
    if (m.npieces() != k) continue;  // a join would merge branches
    auto lg = kneadlab::length_growth(m, 10);
    if (lg.estimate < 0.3) continue;
    return m;
  }
}

/* Catalan numbers C_0..C_nmax */
inline std::vector<Integer> catalan(size_t nmax) {
  std::vector<Integer> c{1};
  for (size_t k = 1; k <= nmax; ++k)
    c.push_back(c.back() * Integer(long(2 * (2 * k - 1))) / Integer(long(k + 1)));
  return c;
}

}  // namespace fixtures
