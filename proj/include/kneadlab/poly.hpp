#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "kneadlab/errors.hpp"
#include "kneadlab/numbers.hpp"

namespace kneadlab {

using ZPoly = std::vector<Integer>;    // ascending coefficients
using QPoly = std::vector<Rational>;   // ascending coefficients
using IMatrix = std::vector<std::vector<Integer>>;

inline IMatrix imat_identity(size_t n) {
  IMatrix m(n, std::vector<Integer>(n, 0));
  for (size_t i = 0; i < n; ++i) m[i][i] = 1;
  return m;
}

inline IMatrix imat_mul(const IMatrix& a, const IMatrix& b) {
  size_t n = a.size();
  IMatrix r(n, std::vector<Integer>(n, 0));
  for (size_t i = 0; i < n; ++i)
    for (size_t k = 0; k < n; ++k) {
      if (sgn(a[i][k]) == 0) continue;
      for (size_t j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    }
  return r;
}

inline Integer imat_trace(const IMatrix& a) {
  Integer t = 0;
  for (size_t i = 0; i < a.size(); ++i) t += a[i][i];
  return t;
}

/* tr A^n for n = 1..nmax */
inline std::vector<Integer> trace_powers(const IMatrix& a, size_t nmax) {
  std::vector<Integer> out;
  IMatrix p = a;
  for (size_t n = 1; n <= nmax; ++n) {
    out.push_back(imat_trace(p));
    if (n < nmax) p = imat_mul(p, a);
  }
  return out;
}

/*
 * Characteristic polynomial det(xI - A), monic, ascending coefficients.
 * Faddeev-LeVerrier; the trace divisions are exact over the integers.
 */
inline ZPoly charpoly(const IMatrix& A) {
  size_t n = A.size();
  ZPoly c(n + 1, 0);
  c[n] = 1;
  if (n == 0) return c;
  IMatrix M = imat_identity(n);
  for (size_t k = 1; k <= n; ++k) {
    IMatrix AM = imat_mul(A, M);
    Integer t = imat_trace(AM);
    c[n - k] = -t / Integer(long(k));
    if (k < n) {
      M = std::move(AM);
      for (size_t i = 0; i < n; ++i) M[i][i] += c[n - k];
    }
  }
  return c;
}

/* det(I - zA): the reversal of the monic characteristic polynomial */
inline ZPoly det_izA(const IMatrix& A) {
  ZPoly c = charpoly(A);
  ZPoly r(c.size());
  for (size_t j = 0; j < c.size(); ++j) r[j] = c[c.size() - 1 - j];
  while (r.size() > 1 && sgn(r.back()) == 0) r.pop_back();
  return r;
}

inline QPoly to_qpoly(const ZPoly& p) {
  QPoly q;
  q.reserve(p.size());
  for (const auto& c : p) q.push_back(Rational(c));
  return q;
}

/* ---- truncated power series over Q, n coefficients [z^0 .. z^(n-1)] ---- */

inline QPoly series_trunc(QPoly a, size_t n) {
  a.resize(n, Rational(0));
  return a;
}

inline QPoly series_mul(const QPoly& a, const QPoly& b, size_t n) {
  QPoly r(n, Rational(0));
  for (size_t i = 0; i < a.size() && i < n; ++i) {
    if (sgn(a[i]) == 0) continue;
    for (size_t j = 0; j < b.size() && i + j < n; ++j) r[i + j] += a[i] * b[j];
  }
  return r;
}

inline QPoly series_inverse(const QPoly& a, size_t n) {
  if (a.empty() || sgn(a[0]) == 0)
    throw Error(errk::BadSpec, "series has no inverse: constant term vanishes");
  QPoly r(n, Rational(0));
  r[0] = 1 / a[0];
  for (size_t m = 1; m < n; ++m) {
    Rational s = 0;
    for (size_t k = 1; k <= m && k < a.size(); ++k) s += a[k] * r[m - k];
    r[m] = -s / a[0];
  }
  return r;
}

/* exp of a series with zero constant term: a' = c' a coefficientwise */
inline QPoly series_exp(const QPoly& c, size_t n) {
  if (!c.empty() && sgn(c[0]) != 0)
    throw Error(errk::BadSpec, "series exp needs a vanishing constant term");
  QPoly a(n, Rational(0));
  if (n == 0) return a;
  a[0] = 1;
  for (size_t m = 1; m < n; ++m) {
    Rational s = 0;
    for (size_t k = 1; k <= m && k < c.size(); ++k)
      s += Rational(long(k)) * c[k] * a[m - k];
    a[m] = s / Rational(long(m));
  }
  return a;
}

/* ---- polynomial arithmetic over Q (reuses the kernel in numbers.hpp) ---- */

inline QPoly poly_derivative(const QPoly& p) {
  QPoly d;
  for (size_t i = 1; i < p.size(); ++i) d.push_back(Rational(long(i)) * p[i]);
  detail::trim_poly(d);
  return d;
}

/* monic gcd by the Euclidean algorithm */
inline QPoly poly_gcd(QPoly a, QPoly b) {
  detail::trim_poly(a);
  detail::trim_poly(b);
  while (!b.empty()) {
    QPoly q, r;
    detail::poly_divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  if (!a.empty()) {
    Rational lead = a.back();
    for (auto& c : a) c /= lead;
  }
  return a;
}

/* quotient of an exact division; throws if a remainder survives */
inline QPoly poly_divide_exact(const QPoly& a, const QPoly& b) {
  QPoly q, r;
  detail::poly_divmod(a, b, q, r);
  if (!r.empty()) throw Error(errk::BadSpec, "polynomial division left a remainder");
  return q;
}

inline QPoly squarefree_part(const QPoly& p) {
  QPoly d = poly_derivative(p);
  if (d.empty()) return p;
  QPoly g = poly_gcd(p, d);
  if (g.size() <= 1) return p;
  return poly_divide_exact(p, g);
}

/*
 * A rational function num/den, reduced.  Normalized so den(0) = 1 whenever
 * the denominator has a nonzero constant term, which is the shape all the
 * zeta functions here come in.
 */
struct RationalFunction {
  QPoly num, den;

  QPoly series(size_t n) const {
    return series_mul(series_trunc(num, n), series_inverse(series_trunc(den, n), n), n);
  }
};

inline RationalFunction reduce_fraction(QPoly num, QPoly den) {
  detail::trim_poly(num);
  detail::trim_poly(den);
  if (den.empty()) throw Error(errk::BadSpec, "zero denominator");
  QPoly g = poly_gcd(num, den);
  if (g.size() > 1) {
    num = poly_divide_exact(num, g);
    den = poly_divide_exact(den, g);
  }
  if (!den.empty() && sgn(den[0]) != 0) {
    Rational c = den[0];
    for (auto& v : num) v /= c;
    for (auto& v : den) v /= c;
  }
  return {std::move(num), std::move(den)};
}

/* ---- real root isolation via Sturm chains ---- */

namespace detail {

inline std::vector<QPoly> sturm_chain(QPoly p) {
  trim_poly(p);
  std::vector<QPoly> ch;
  if (p.empty()) return ch;
  ch.push_back(p);
  QPoly d = poly_derivative(p);
  if (d.empty()) return ch;
  ch.push_back(d);
  for (;;) {
    QPoly q, r;
    poly_divmod(ch[ch.size() - 2], ch.back(), q, r);
    if (r.empty()) break;
    for (auto& c : r) c = -c;
    ch.push_back(std::move(r));
    if (ch.back().size() == 1) break;
  }
  return ch;
}

inline int sign_variations(const std::vector<QPoly>& ch, const Rational& x) {
  int var = 0, last = 0;
  for (const auto& p : ch) {
    int s = sgn(eval_poly_at(p, x));
    if (s == 0) continue;
    if (last != 0 && s != last) ++var;
    last = s;
  }
  return var;
}

}  // namespace detail

/*
 * Bracket around the smallest positive root of p, or nothing if p has no
 * positive root.  The root lies in (lo, hi] with hi - lo <= width.  Roots
 * at exactly representable rationals collapse the bracket onto the root.
 */
struct RootBracket {
  Rational lo, hi;
  double mid() const { return to_double((lo + hi) / 2); }
};

inline std::optional<RootBracket> smallest_positive_root(QPoly p,
                                                         const Rational& width) {
  detail::trim_poly(p);
  if (p.empty()) throw Error(errk::BadSpec, "zero polynomial has no isolated roots");
  size_t k = 0;
  while (k < p.size() && sgn(p[k]) == 0) ++k;  // roots at 0 are not positive
  p.erase(p.begin(), p.begin() + long(k));
  if (p.size() <= 1) return std::nullopt;
  p = squarefree_part(p);
  auto ch = detail::sturm_chain(p);

  Rational bound = 1;  // Cauchy bound
  for (size_t i = 0; i + 1 < p.size(); ++i) {
    Rational c = abs(p[i] / p.back());
    if (c > bound) bound = c;
  }
  bound += 1;

  Rational lo = 0, hi = bound;
  int vlo = detail::sign_variations(ch, lo);
  if (vlo - detail::sign_variations(ch, hi) == 0) return std::nullopt;
  while (hi - lo > width) {
    Rational mid = (lo + hi) / 2;
    int vmid = detail::sign_variations(ch, mid);
    if (vlo - vmid >= 1) {
      hi = mid;
    } else {
      lo = mid;
      vlo = vmid;
    }
  }
  return RootBracket{lo, hi};
}

}  // namespace kneadlab
