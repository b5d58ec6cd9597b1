#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kneadlab/diagram.hpp"
#include "kneadlab/errors.hpp"
#include "kneadlab/interval_map.hpp"
#include "kneadlab/poly.hpp"
#include "kneadlab/shift_graph.hpp"

namespace kneadlab {

namespace detail {

inline Rational root_width_default() {
  return Rational(1) / Rational(Integer("10000000000000"));  // 1e-13
}

inline std::vector<std::vector<double>> to_dmatrix(const IMatrix& a) {
  std::vector<std::vector<double>> d(a.size(), std::vector<double>(a.size()));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < a.size(); ++j) d[i][j] = a[i][j].get_d();
  return d;
}

/*
 * Dominant eigenvalue of a nonnegative matrix by power iteration on A + I.
 * The shift makes an irreducible matrix primitive, so the iteration cannot
 * stall on a periodic spectrum.
 */
inline double power_radius(const IMatrix& A, size_t iters = 100000, double tol = 1e-15) {
  size_t n = A.size();
  if (n == 0) return 0;
  auto a = to_dmatrix(A);
  std::vector<double> x(n, 1.0), y(n);
  double est = 0;
  for (size_t it = 0; it < iters; ++it) {
    double norm = 0;
    for (size_t i = 0; i < n; ++i) {
      double s = x[i];
      for (size_t j = 0; j < n; ++j) s += a[i][j] * x[j];
      y[i] = s;
      if (s > norm) norm = s;
    }
    if (norm == 0) return 0;
    for (size_t i = 0; i < n; ++i) y[i] /= norm;
    double prev = est;
    est = norm;
    std::swap(x, y);
    if (it > 4 && std::abs(est - prev) <= tol * est) break;
  }
  return est >= 1.0 ? est - 1.0 : 0.0;
}

}  // namespace detail

/* certified bracket on the spectral radius; nullopt when the graph is acyclic */
inline std::optional<RootBracket> spectral_radius_bracket(const IMatrix& A,
                                                          Rational width = Rational(0)) {
  if (sgn(width) == 0) width = detail::root_width_default();
  auto root = smallest_positive_root(to_qpoly(det_izA(A)), width);
  if (!root) return std::nullopt;
  if (sgn(root->lo) == 0) throw Error(errk::NonConvergence, "spectral radius bracket hit zero");
  return RootBracket{1 / root->hi, 1 / root->lo};
}

/*
 * Gurevic entropy of the shift: log of the largest spectral radius over the
 * strongly connected components.  Small components get a certified algebraic
 * bracket, large ones fall back to power iteration.
 */
struct GraphEntropy {
  double value = 0;       // log spectral radius; 0 for an acyclic graph
  double lo = 0, hi = 0;  // certified bounds when exact
  bool exact = false;
  int component = -1;     // attaining component in scc_split numbering
  size_t component_size = 0;
};

inline GraphEntropy markov_entropy(const ShiftGraph& g, size_t exact_cap = 48) {
  GraphEntropy best;
  best.exact = true;
  SccSplit s = scc_split(g);
  for (int c = 0; c < s.count; ++c) {
    std::vector<char> keep(g.nvertices(), 0);
    for (size_t v : s.members[size_t(c)]) keep[v] = 1;
    ShiftGraph comp = restrict_graph(g, keep);
    size_t internal = comp.narrows();
    if (internal == 0) continue;  // no cycle through a lone vertex
    IMatrix A = counts_matrix(comp);
    double rho, lo = 0, hi = 0;
    bool exact = false;
    if (A.size() <= exact_cap) {
      auto br = spectral_radius_bracket(A);
      if (!br) continue;
      rho = br->mid();
      lo = to_double(br->lo);
      hi = to_double(br->hi);
      exact = true;
    } else {
      rho = detail::power_radius(A);
      if (rho <= 0) continue;
    }
    if (best.component < 0 || std::log(rho) > best.value) {
      best.value = std::max(0.0, std::log(rho));
      best.exact = exact;
      best.lo = exact ? std::max(0.0, std::log(lo)) : best.value;
      best.hi = exact ? std::log(hi) : best.value;
      best.component = c;
      best.component_size = s.members[size_t(c)].size();
    }
  }
  if (best.component < 0) best.exact = true;  // acyclic: entropy 0 exactly
  return best;
}

/* left and right Perron vectors of an irreducible counts matrix, sum l_i r_i = 1 */
struct PerronData {
  double lambda = 0;
  std::vector<double> left, right;
};

inline PerronData perron_vectors(const IMatrix& A, size_t iters = 100000,
                                 double tol = 1e-16) {
  size_t n = A.size();
  if (n == 0) throw Error(errk::EmptyGraph, "no vertices");
  auto a = detail::to_dmatrix(A);
  PerronData p;
  p.right.assign(n, 1.0);
  p.left.assign(n, 1.0);
  std::vector<double> y(n);
  auto sweep = [&](std::vector<double>& x, bool transpose) {
    for (size_t it = 0; it < iters; ++it) {
      double norm = 0;
      for (size_t i = 0; i < n; ++i) {
        double s = x[i];
        for (size_t j = 0; j < n; ++j) s += (transpose ? a[j][i] : a[i][j]) * x[j];
        y[i] = s;
        norm = std::max(norm, s);
      }
      if (norm == 0) throw Error(errk::NonConvergence, "power iteration collapsed");
      double delta = 0;
      for (size_t i = 0; i < n; ++i) {
        y[i] /= norm;
        delta = std::max(delta, std::abs(y[i] - x[i]));
      }
      std::swap(x, y);
      if (delta <= tol) break;
    }
  };
  sweep(p.right, false);
  sweep(p.left, true);
  // lambda from the bilinear form; exact on exact eigenvectors
  double num = 0, den = 0;
  for (size_t i = 0; i < n; ++i) {
    double s = 0;
    for (size_t j = 0; j < n; ++j) s += a[i][j] * p.right[j];
    num += p.left[i] * s;
    den += p.left[i] * p.right[i];
  }
  p.lambda = num / den;
  for (size_t i = 0; i < n; ++i) p.left[i] /= den;
  return p;
}

/*
 * Measure of maximal entropy supported on one spectral-radius-attaining
 * component of a complete diagram.  Vectors are indexed by diagram vertex
 * and vanish off the component.  Cylinder masses come out of the Perron
 * data: mu[w] = lambda^{-|w|} [sum over core u of l_u r_{end(u,w)}].
 */
struct MaxMeasure {
  double lambda = 0;
  double entropy = 0;
  std::vector<char> core;
  std::vector<double> left, right, pi;
};

inline std::vector<MaxMeasure> max_measures(const MarkovDiagram& d,
                                            double tie_tol = 1e-9,
                                            size_t exact_cap = 48) {
  if (!d.complete)
    throw Error(errk::NotSupported, "incomplete diagram has no certified measure");
  ShiftGraph g = from_diagram(d);
  SccSplit s = scc_split(g);
  std::vector<double> rho(size_t(s.count), 0.0);
  double best = 0;
  for (int c = 0; c < s.count; ++c) {
    std::vector<char> keep(g.nvertices(), 0);
    for (size_t v : s.members[size_t(c)]) keep[v] = 1;
    ShiftGraph comp = restrict_graph(g, keep);
    if (comp.narrows() == 0) continue;
    IMatrix A = counts_matrix(comp);
    if (A.size() <= exact_cap) {
      auto br = spectral_radius_bracket(A);
      rho[size_t(c)] = br ? br->mid() : 0.0;
    } else {
      rho[size_t(c)] = detail::power_radius(A);
    }
    best = std::max(best, rho[size_t(c)]);
  }
  if (best <= 0) throw Error(errk::EmptyGraph, "no cycles, entropy zero");
  std::vector<MaxMeasure> out;
  for (int c = 0; c < s.count; ++c) {
    if (rho[size_t(c)] < best * (1.0 - tie_tol)) continue;
    std::vector<char> keep(g.nvertices(), 0);
    for (size_t v : s.members[size_t(c)]) keep[v] = 1;
    std::vector<size_t> index;
    ShiftGraph comp = restrict_graph(g, keep, &index);
    PerronData p = perron_vectors(counts_matrix(comp));
    MaxMeasure mu;
    mu.lambda = rho[size_t(c)];
    mu.entropy = std::log(mu.lambda);
    mu.core = keep;
    mu.left.assign(g.nvertices(), 0.0);
    mu.right.assign(g.nvertices(), 0.0);
    mu.pi.assign(g.nvertices(), 0.0);
    for (size_t v = 0; v < g.nvertices(); ++v)
      if (keep[v]) {
        mu.left[v] = p.left[index[v]];
        mu.right[v] = p.right[index[v]];
        mu.pi[v] = mu.left[v] * mu.right[v];
      }
    out.push_back(std::move(mu));
  }
  return out;
}

inline MaxMeasure max_measure(const MarkovDiagram& d) {
  auto all = max_measures(d);
  if (all.size() != 1)
    throw Error(errk::NotSupported, "measure of maximal entropy is not unique");
  return all[0];
}

/* arrow from u reading symbol b, if the diagram has one */
inline std::optional<size_t> follow_symbol(const MarkovDiagram& d, size_t u, int b) {
  for (const auto& [sym, v] : d.arrows[u])
    if (sym == b) return v;
  return std::nullopt;
}

inline double measure_word(const MarkovDiagram& d, const MaxMeasure& mu, const Word& w) {
  if (w.empty()) return 1.0;
  double total = 0;
  for (size_t u = 0; u < d.nvertices(); ++u) {
    if (!mu.core[u]) continue;
    size_t at = u;
    bool alive = true;
    for (int b : w) {
      auto nxt = follow_symbol(d, at, b);
      if (!nxt || !mu.core[*nxt]) {
        alive = false;
        break;
      }
      at = *nxt;
    }
    if (alive) total += mu.left[u] * mu.right[at];
  }
  return total * std::pow(mu.lambda, -double(w.size()));
}

/* stationary transition probability along an arrow u -> v */
inline double transition_probability(const MaxMeasure& mu, size_t u, size_t v) {
  if (!mu.core[u] || !mu.core[v] || mu.right[u] == 0) return 0;
  return mu.right[v] / (mu.lambda * mu.right[u]);
}

/* ---- Vere-Jones classification at the base vertex ---- */

enum class Recurrence { transient, null_recurrent, positive_recurrent };
enum class Confidence { certified, depth_limited };

inline const char* recurrence_str(Recurrence r) {
  switch (r) {
    case Recurrence::transient: return "transient";
    case Recurrence::null_recurrent: return "null recurrent";
    default: return "positive recurrent";
  }
}

inline const char* confidence_str(Confidence c) {
  return c == Confidence::certified ? "certified" : "depth limited";
}

struct Classification {
  Recurrence mode = Recurrence::transient;
  bool spr = false;  // first-return series converges past the radius
  Confidence confidence = Confidence::depth_limited;
  double radius = std::numeric_limits<double>::infinity();
  double entropy = 0;
  bool exact = false;
  Rational F_partial{0};  // partial sum of f_n R^n, exact when R is rational
  double F_value = 0;
  double mean_partial = 0;  // partial sum of n f_n R^n
  size_t terms = 0;
  std::string note;
};

/*
 * Classify the loop structure at vertex v.  A complete graph gets the exact
 * algebraic treatment and a certified verdict.  A truncation (nonempty
 * boundary) or an externally supplied radius gets partial sums of the
 * first-return series and a depth-limited verdict; transience claimed from a
 * truncation can always be overturned by deeper data.
 */
inline Classification classify(const ShiftGraph& g, size_t v, size_t depth = 64,
                               std::optional<Rational> radius = std::nullopt) {
  Classification c;
  std::vector<Integer> f = first_return_counts(g, v, depth);
  c.terms = depth;

  bool has_loop = false;
  for (const auto& x : f)
    if (sgn(x) != 0) has_loop = true;
  if (!has_loop && g.complete() && !radius) {
    c.mode = Recurrence::transient;
    c.confidence = Confidence::certified;
    c.spr = true;
    c.exact = true;
    c.note = "no loops through the base vertex";
    return c;
  }

  if (g.complete() && !radius) {
    // exact route on the strongly connected component of v
    std::vector<size_t> index;
    ShiftGraph comp = component_of(g, v, &index);
    IMatrix A = counts_matrix(comp);
    QPoly denA = to_qpoly(det_izA(A));
    auto R = smallest_positive_root(denA, detail::root_width_default());
    if (!R) {
      c.mode = Recurrence::transient;
      c.confidence = Confidence::certified;
      c.spr = true;
      c.exact = true;
      c.note = "component is acyclic";
      return c;
    }
    std::vector<size_t> sub;
    ShiftGraph pruned = delete_vertex(comp, index[v], &sub);
    QPoly denB = to_qpoly(det_izA(counts_matrix(pruned)));
    // F = 1 - denA/denB; its reduced denominator carries the true poles
    QPoly numF(std::max(denA.size(), denB.size()), Rational(0));
    for (size_t i = 0; i < denB.size(); ++i) numF[i] += denB[i];
    for (size_t i = 0; i < denA.size(); ++i) numF[i] -= denA[i];
    RationalFunction F = reduce_fraction(numF, denB);
    auto pole = F.den.size() > 1
                    ? smallest_positive_root(F.den, detail::root_width_default())
                    : std::nullopt;

    c.mode = Recurrence::positive_recurrent;
    c.confidence = Confidence::certified;
    c.exact = true;
    if (!pole) {
      c.spr = true;
      c.note = "return series is entire";
    } else {
      // refine both brackets until they separate; they cannot coincide
      Rational w = detail::root_width_default();
      auto rb = *R;
      auto pb = *pole;
      while (!(rb.hi < pb.lo) && !(pb.hi < rb.lo)) {
        w /= 16;
        rb = *smallest_positive_root(denA, w);
        pb = *smallest_positive_root(F.den, w);
      }
      c.spr = rb.hi < pb.lo;
      c.note = c.spr ? "return series converges past the radius"
                     : "return series radius matches the loop radius";
    }
    c.radius = (to_double(R->lo) + to_double(R->hi)) / 2;
    c.entropy = -std::log(c.radius);
    double Rd = c.radius, p = 1;
    for (size_t n = 1; n <= depth; ++n) {
      p *= Rd;
      double fn = f[n - 1].get_d();
      c.F_value += fn * p;
      c.mean_partial += double(n) * fn * p;
    }
    return c;
  }

  // truncation or supplied radius: partial sums only
  Rational R;
  if (radius) {
    R = *radius;
    c.exact = true;
    c.note = "radius supplied externally";
  } else {
    std::vector<size_t> index;
    ShiftGraph comp = component_of(g, v, &index);
    GraphEntropy h = markov_entropy(comp);
    if (h.component < 0) {
      c.note = "truncation shows no cycles at the base vertex";
      return c;
    }
    // rational stand-in for 1/lambda, good to twelve digits
    Rational lam = Rational(std::round(std::exp(h.value) * 1e12)) /
                   Rational(Integer("1000000000000"));
    R = 1 / lam;
    c.exact = false;
    c.note = "radius taken from the truncation spectral radius";
  }
  c.radius = to_double(R);
  c.entropy = c.radius > 0 ? -std::log(c.radius) : 0;

  Rational p(1), Fsum(0), Msum(0);
  double last = 0, prev = 0;
  for (size_t n = 1; n <= depth; ++n) {
    p *= R;
    if (sgn(f[n - 1]) == 0) continue;
    Rational term = Rational(f[n - 1]) * p;
    Fsum += term;
    Msum += Rational(long(n)) * term;
    prev = last;
    last = to_double(term);
  }
  c.F_partial = Fsum;
  c.F_value = to_double(Fsum);
  c.mean_partial = to_double(Msum);
  c.confidence = Confidence::depth_limited;

  double tail = double(depth) * std::max(last, prev);
  if (c.F_value + tail < 1) {
    c.mode = Recurrence::transient;
  } else if (c.F_value <= 1 + tail) {
    double mean_tail = double(depth) * tail;
    bool mean_converged = mean_tail < 1e-3 * std::max(1.0, c.mean_partial);
    c.mode = mean_converged ? Recurrence::positive_recurrent : Recurrence::null_recurrent;
  } else {
    c.mode = Recurrence::positive_recurrent;
    c.note += "; partial sums exceed one at this radius";
  }
  return c;
}

/* ---- zeta functions of the shift ---- */

/* 1/det(I - zA) over the whole graph, reduced */
inline RationalFunction semilocal_zeta(const ShiftGraph& g) {
  return reduce_fraction(QPoly{Rational(1)}, to_qpoly(det_izA(counts_matrix(g))));
}

/* independent series route: exp of the trace sums; cross-checks the determinant */
inline QPoly semilocal_zeta_series(const ShiftGraph& g, size_t terms) {
  std::vector<Integer> tr = trace_powers(counts_matrix(g), terms);
  QPoly c(terms + 1, Rational(0));
  for (size_t n = 1; n <= terms; ++n) c[n] = Rational(tr[n - 1]) / Rational(long(n));
  return series_exp(c, terms + 1);
}

/* loop generating function at v: det(I - zA')/det(I - zA) on the component */
inline RationalFunction local_zeta(const ShiftGraph& g, size_t v) {
  std::vector<size_t> index;
  ShiftGraph comp = component_of(g, v, &index);
  IMatrix A = counts_matrix(comp);
  ShiftGraph pruned = delete_vertex(comp, index[v]);
  return reduce_fraction(to_qpoly(det_izA(counts_matrix(pruned))),
                         to_qpoly(det_izA(A)));
}

/* ---- entropy carried by the deep part of the diagram ---- */

/*
 * Entropy of the subdiagram on vertices of word depth above the cut.  For a
 * diagram with summable structure this decays to zero as the cut grows; the
 * limit is the entropy at infinity of the underlying shift.
 */
inline double entropy_at_infinity(const MarkovDiagram& d, size_t cut,
                                  size_t exact_cap = 48) {
  ShiftGraph g = from_diagram(d);
  std::vector<char> keep(g.nvertices(), 0);
  bool any = false;
  for (size_t v = 0; v < d.nvertices(); ++v)
    if (d.words[v].size() > cut) {
      keep[v] = 1;
      any = true;
    }
  if (!any) return 0;
  return markov_entropy(restrict_graph(g, keep), exact_cap).value;
}

struct TailEntropy {
  size_t cut;
  double value;
};

inline std::vector<TailEntropy> tail_entropy_profile(const MarkovDiagram& d,
                                                     size_t max_cut, size_t step = 4) {
  std::vector<TailEntropy> out;
  for (size_t cut = 0; cut <= max_cut; cut += step)
    out.push_back({cut, entropy_at_infinity(d, cut)});
  return out;
}

/* ---- Rokhlin formula against the geometric map ---- */

struct RokhlinEstimate {
  double value = 0;
  double error = 0;  // half-width from cylinders straddling branch joins
  size_t depth = 0;
};

/*
 * Integral of log|T'| against the measure, evaluated over cylinders of the
 * given depth.  Cylinders inside one affine branch contribute exactly; a
 * cylinder straddling a branch join contributes an interval between the
 * extreme slopes, which shows up as the error bar.  For a measure of maximal
 * entropy on a constant-slope map this reproduces the entropy.
 */
inline RokhlinEstimate rokhlin_entropy(const IntervalMap& m, const MarkovDiagram& d,
                                       const MaxMeasure& mu, size_t depth = 8) {
  detail::require_validated(m);
  if (!m.exact) throw Error(errk::NotSupported, "exact maps only");
  double lo = 0, hi = 0;
  Word w;
  auto log_slope = [&](size_t bi) {
    const auto* aff = std::get_if<AffineRule>(&m.branches[bi].rule);
    if (!aff) throw Error(errk::NotSupported, "affine branches only");
    return std::log(std::abs(aff->slope.to_double()));
  };
  std::function<void(size_t)> walk = [&](size_t left) {
    if (left == 0) {
      double mass = measure_word(d, mu, w);
      if (mass <= 0) return;
      ExactInterval cyl = cylinder(m, w);
      if (cyl.empty()) return;
      const auto& pc = m.pieces[size_t(w[0])];
      double smin = 0, smax = 0;
      bool first = true;
      for (size_t bi = pc.first_branch; bi <= pc.last_branch; ++bi) {
        const Branch& br = m.branches[bi];
        if (!(cyl.lo < br.hi) || !(br.lo < cyl.hi)) continue;  // no overlap
        double ls = log_slope(bi);
        smin = first ? ls : std::min(smin, ls);
        smax = first ? ls : std::max(smax, ls);
        first = false;
      }
      if (first) return;
      lo += mass * smin;
      hi += mass * smax;
      return;
    }
    for (size_t b = 0; b < m.npieces(); ++b) {
      w.push_back(int(b));
      walk(left - 1);
      w.pop_back();
    }
  };
  walk(depth);
  return {(lo + hi) / 2, (hi - lo) / 2, depth};
}

}  // namespace kneadlab
