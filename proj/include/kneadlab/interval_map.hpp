#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "numbers.hpp"
#include "symbols.hpp"

namespace kneadlab {

enum class Side { left, right };

inline Side flip(Side s) { return s == Side::left ? Side::right : Side::left; }
inline const char* side_str(Side s) { return s == Side::left ? "-" : "+"; }

/* a one-sided germ: the point x approached from below (left) or above (right) */
struct SidedPoint {
  Number x;
  Side side;
};

struct AffineRule {
  Number slope, intercept;  // x -> slope*x + intercept
};

/* numeric-mode family x -> 4 t x (1 - x) restricted to a half interval */
struct QuadraticRule {
  double t;
};

using BranchRule = std::variant<AffineRule, QuadraticRule>;

struct Branch {
  Number lo, hi;  // open domain (lo, hi)
  BranchRule rule;
  bool increasing;
};

/*
 * Piecewise monotone self-map of [a, b].  Branches are the supplied strictly
 * monotone pieces; validate() derives the natural partition by merging
 * adjacent branches that continue one another monotonically and continuously.
 * Symbols used in itineraries index the natural partition pieces.
 */
struct IntervalMap {
  Number a, b;
  std::vector<Branch> branches;
  bool exact = true;
  double tol = 1e-12;
  std::string label;

  struct Piece {
    size_t first_branch, last_branch;  // inclusive run of branches
    Number lo, hi;
    bool increasing;
  };
  std::vector<Piece> pieces;
  bool validated = false;

  size_t npieces() const { return pieces.size(); }
};

namespace detail {

inline Number affine_apply(const AffineRule& r, const Number& x) {
  return r.slope * x + r.intercept;
}

inline double rule_apply_d(const BranchRule& r, double x) {
  if (std::holds_alternative<AffineRule>(r)) {
    const auto& a = std::get<AffineRule>(r);
    return a.slope.to_double() * x + a.intercept.to_double();
  }
  const auto& q = std::get<QuadraticRule>(r);
  return 4.0 * q.t * x * (1.0 - x);
}

/* limit value of a branch at a domain endpoint (continuous extension) */
inline Number branch_limit_exact(const Branch& br, const Number& x) {
  if (!std::holds_alternative<AffineRule>(br.rule))
    throw Error(errk::NotSupported, "exact evaluation needs affine branches");
  return affine_apply(std::get<AffineRule>(br.rule), x);
}

}  // namespace detail

/*
 * Checks branch geometry (disjoint open domains whose closures cover [a,b]),
 * strict monotonicity, and that the image stays inside [a,b]; then computes
 * the natural partition.  Throws on violations, marks the map validated.
 */
inline void validate(IntervalMap& m) {
  if (m.branches.empty()) throw Error(errk::PiecesDontCover, "no branches");
  if (!(m.a < m.b)) throw Error(errk::BadSpec, "empty ambient interval");
  auto& br = m.branches;
  for (size_t i = 0; i < br.size(); ++i)
    if (!(br[i].lo < br[i].hi))
      throw Error(errk::BadSpec, "branch " + std::to_string(i) + " has empty domain");
  for (size_t i = 0; i + 1 < br.size(); ++i) {
    if (br[i + 1].lo < br[i].hi)
      throw Error(errk::OverlappingDomains,
                  "branches " + std::to_string(i) + "," + std::to_string(i + 1));
    if (br[i].hi < br[i + 1].lo)
      throw Error(errk::PiecesDontCover, "gap after branch " + std::to_string(i));
  }
  if (br.front().lo != m.a || br.back().hi != m.b)
    throw Error(errk::PiecesDontCover, "branch domains do not reach the endpoints");

  for (size_t i = 0; i < br.size(); ++i) {
    if (std::holds_alternative<AffineRule>(br[i].rule)) {
      const auto& r = std::get<AffineRule>(br[i].rule);
      int s = r.slope.sign();
      if (s == 0 || (s > 0) != br[i].increasing)
        throw Error(errk::NonMonotoneBranch, "branch " + std::to_string(i));
      Number va = detail::affine_apply(r, br[i].lo);
      Number vb = detail::affine_apply(r, br[i].hi);
      Number lo = br[i].increasing ? va : vb, hi = br[i].increasing ? vb : va;
      if (lo < m.a || hi > m.b)
        throw Error(errk::ImageEscapes, "branch " + std::to_string(i));
    } else {
      // sampled strict monotonicity at resolution 2^-20 of the domain
      double lo = br[i].lo.to_double(), hi = br[i].hi.to_double();
      double span = (m.b.to_double() - m.a.to_double());
      double step = span / 1048576.0;
      int dir = br[i].increasing ? 1 : -1;
      double prev = detail::rule_apply_d(br[i].rule, lo);
      for (double x = lo + step; x < hi; x += step) {
        double v = detail::rule_apply_d(br[i].rule, x);
        if (dir * (v - prev) <= 0)
          throw Error(errk::NonMonotoneBranch, "branch " + std::to_string(i));
        if (v < m.a.to_double() - m.tol || v > m.b.to_double() + m.tol)
          throw Error(errk::ImageEscapes, "branch " + std::to_string(i));
        prev = v;
      }
    }
  }

  // natural partition: merge branches joined continuously in one direction
  m.pieces.clear();
  size_t start = 0;
  auto joins = [&](size_t i) {  // branch i continues into branch i+1
    if (br[i].increasing != br[i + 1].increasing) return false;
    if (!m.exact) return false;  // numeric pieces are kept as given
    if (!std::holds_alternative<AffineRule>(br[i].rule) ||
        !std::holds_alternative<AffineRule>(br[i + 1].rule))
      return false;
    return detail::branch_limit_exact(br[i], br[i].hi) ==
           detail::branch_limit_exact(br[i + 1], br[i + 1].lo);
  };
  for (size_t i = 0; i < br.size(); ++i) {
    if (i + 1 < br.size() && joins(i)) continue;
    m.pieces.push_back(
        {start, i, br[start].lo, br[i].hi, br[start].increasing});
    start = i + 1;
  }
  m.validated = true;
}

namespace detail {

inline void require_validated(const IntervalMap& m) {
  if (!m.validated) throw Error(errk::BadSpec, "map not validated");
}

}  // namespace detail

/* index of the natural-partition piece containing the germ */
inline size_t piece_for(const IntervalMap& m, const SidedPoint& p) {
  detail::require_validated(m);
  if (p.x < m.a || p.x > m.b)
    throw Error(errk::InvalidSidedPoint, "point outside the interval");
  if (p.side == Side::left && p.x == m.a)
    throw Error(errk::InvalidSidedPoint, "no points below the left endpoint");
  if (p.side == Side::right && p.x == m.b)
    throw Error(errk::InvalidSidedPoint, "no points above the right endpoint");
  for (size_t j = 0; j < m.pieces.size(); ++j) {
    const auto& pc = m.pieces[j];
    if (p.side == Side::left ? (pc.lo < p.x && p.x <= pc.hi)
                             : (pc.lo <= p.x && p.x < pc.hi))
      return j;
  }
  throw Error(errk::InvalidSidedPoint, "no piece contains the germ");
}

inline size_t branch_for(const IntervalMap& m, const SidedPoint& p) {
  size_t j = piece_for(m, p);
  const auto& pc = m.pieces[j];
  for (size_t i = pc.first_branch; i <= pc.last_branch; ++i) {
    const auto& b = m.branches[i];
    if (p.side == Side::left ? (b.lo < p.x && p.x <= b.hi)
                             : (b.lo <= p.x && p.x < b.hi))
      return i;
  }
  throw Error(errk::InvalidSidedPoint, "no branch contains the germ");
}

/* exact one-sided image: the germ of T(x) on the matching side */
inline SidedPoint evaluate(const IntervalMap& m, const SidedPoint& p) {
  detail::require_validated(m);
  if (!m.exact) throw Error(errk::NotSupported, "sided evaluation is exact-mode");
  size_t i = branch_for(m, p);
  const auto& b = m.branches[i];
  Number y = detail::branch_limit_exact(b, p.x);
  return {y, b.increasing ? p.side : flip(p.side)};
}

/* numeric-mode orbit step on plain points; errs near partition endpoints */
inline double evaluate_numeric(const IntervalMap& m, double x) {
  detail::require_validated(m);
  double a = m.a.to_double(), b = m.b.to_double();
  if (x < a - m.tol || x > b + m.tol)
    throw Error(errk::InvalidSidedPoint, "point outside the interval");
  for (size_t i = 0; i < m.branches.size(); ++i) {
    double lo = m.branches[i].lo.to_double(), hi = m.branches[i].hi.to_double();
    if (x <= lo + m.tol || x >= hi - m.tol) continue;
    return detail::rule_apply_d(m.branches[i].rule, x);
  }
  throw Error(errk::TolExceeded, "orbit point too close to a partition endpoint");
}

namespace detail {

struct SidedLess {
  bool operator()(const SidedPoint& a, const SidedPoint& b) const {
    if (a.x < b.x) return true;
    if (b.x < a.x) return false;
    return int(a.side) < int(b.side);
  }
};

}  // namespace detail

/*
 * Itinerary of a germ.  In exact mode the orbit is hashed so an eventually
 * periodic germ closes into an exact head+cycle; the cycle search budget is
 * the requested length.  Numeric orbits are always truncated.  The _partial
 * variant records a numeric ambiguity instead of throwing and returns the
 * symbols collected so far.
 */
inline SymbolSeq itinerary(const IntervalMap& m, SidedPoint p, size_t n);

inline SymbolSeq itinerary_partial(const IntervalMap& m, const SidedPoint& p, size_t n,
                                   std::string* incident) {
  try {
    return itinerary(m, p, n);
  } catch (const Error& e) {
    if (e.kind() != errk::TolExceeded) throw;
    // retry with shrinking depth to keep the unambiguous prefix
    size_t lo = 0, hi = n;
    while (lo < hi) {  // largest depth that succeeds
      size_t mid = (lo + hi + 1) / 2;
      try {
        itinerary(m, p, mid);
        lo = mid;
      } catch (const Error&) {
        hi = mid - 1;
      }
    }
    if (incident) *incident = e.what();
    return itinerary(m, p, lo);
  }
}

inline SymbolSeq itinerary(const IntervalMap& m, SidedPoint p, size_t n) {
  detail::require_validated(m);
  if (!m.exact) {
    Word w;
    double x = p.x.to_double();
    Side side = p.side;
    for (size_t k = 0; k < n; ++k) {
      // interior by a tol margin decides the symbol outright; an exact hit on
      // a piece endpoint is resolved by the germ side; anything else is
      // numerically ambiguous
      int sym = -1;
      for (size_t j = 0; j < m.pieces.size() && sym < 0; ++j) {
        double lo = m.pieces[j].lo.to_double(), hi = m.pieces[j].hi.to_double();
        if (x > lo + m.tol && x < hi - m.tol) sym = int(j);
        else if (x == hi && side == Side::left) sym = int(j);
        else if (x == lo && side == Side::right) sym = int(j);
      }
      if (sym < 0)
        throw Error(errk::TolExceeded, "symbol ambiguous at step " + std::to_string(k));
      w.push_back(sym);
      const auto& pc = m.pieces[size_t(sym)];
      size_t bi = pc.first_branch;
      for (size_t i = pc.first_branch; i <= pc.last_branch; ++i) {
        double lo = m.branches[i].lo.to_double(), hi = m.branches[i].hi.to_double();
        if ((x > lo && x < hi) || (x == hi && side == Side::left) ||
            (x == lo && side == Side::right))
          bi = i;
      }
      x = detail::rule_apply_d(m.branches[bi].rule, x);
      if (!m.branches[bi].increasing) side = flip(side);
      double a = m.a.to_double(), b = m.b.to_double();
      x = std::min(std::max(x, a), b);
    }
    return SymbolSeq::finite(std::move(w));
  }
  std::map<SidedPoint, size_t, detail::SidedLess> seen;
  Word w;
  for (size_t k = 0; k < n; ++k) {
    auto it = seen.find(p);
    if (it != seen.end()) {
      size_t j = it->second;
      return SymbolSeq::periodic(Word(w.begin(), w.begin() + j),
                                 Word(w.begin() + j, w.end()));
    }
    seen.emplace(p, k);
    w.push_back(int(piece_for(m, p)));
    p = evaluate(m, p);
  }
  return SymbolSeq::finite(std::move(w));
}

/* open rational interval; empty once lo >= hi */
struct ExactInterval {
  Number lo, hi;
  bool empty() const { return !(lo < hi); }
  bool operator==(const ExactInterval& o) const { return lo == o.lo && hi == o.hi; }
};

namespace detail {

/* value of T at a point of a piece (by the sub-branch containing it) */
inline Number piece_value(const IntervalMap& m, const IntervalMap::Piece& pc,
                          const Number& x) {
  for (size_t i = pc.first_branch; i <= pc.last_branch; ++i)
    if (!(x < m.branches[i].lo) && !(m.branches[i].hi < x))
      return branch_limit_exact(m.branches[i], x);
  throw Error(errk::BadSpec, "point not in piece");
}

/* image of an open subinterval of a piece */
inline ExactInterval piece_image(const IntervalMap& m, size_t j,
                                 const ExactInterval& d) {
  const auto& pc = m.pieces[j];
  Number u = piece_value(m, pc, d.lo), v = piece_value(m, pc, d.hi);
  return pc.increasing ? ExactInterval{u, v} : ExactInterval{v, u};
}

/* x in the piece with T(x) = y; y must lie in the closed image */
inline Number piece_invert(const IntervalMap& m, const IntervalMap::Piece& pc,
                           const Number& y) {
  for (size_t i = pc.first_branch; i <= pc.last_branch; ++i) {
    const auto& b = m.branches[i];
    const auto& r = std::get<AffineRule>(b.rule);
    Number va = affine_apply(r, b.lo), vb = affine_apply(r, b.hi);
    Number lo = b.increasing ? va : vb, hi = b.increasing ? vb : va;
    if (!(y < lo) && !(hi < y)) return (y - r.intercept) / r.slope;
  }
  throw Error(errk::BadSpec, "value not in piece image");
}

/* preimage of an open interval inside piece j */
inline ExactInterval piece_preimage(const IntervalMap& m, size_t j,
                                    const ExactInterval& target) {
  const auto& pc = m.pieces[j];
  ExactInterval img = piece_image(m, j, {pc.lo, pc.hi});
  Number u = std::max(target.lo, img.lo, Number::Less{});
  Number v = std::min(target.hi, img.hi, Number::Less{});
  if (!(u < v)) return {Number(0), Number(0)};  // empty
  Number x1 = piece_invert(m, pc, u), x2 = piece_invert(m, pc, v);
  return pc.increasing ? ExactInterval{x1, x2} : ExactInterval{x2, x1};
}

}  // namespace detail

/*
 * The set of points whose itinerary starts with the given word, as an open
 * interval (piecewise monotone maps: cylinders are intervals).  Exact mode.
 */
inline ExactInterval cylinder(const IntervalMap& m, const Word& w) {
  detail::require_validated(m);
  if (!m.exact) throw Error(errk::NotSupported, "cylinders are exact-mode");
  if (w.empty()) return {m.a, m.b};
  for (int s : w)
    if (s < 0 || size_t(s) >= m.pieces.size())
      throw Error(errk::BadSpec, "symbol out of range");
  ExactInterval s{m.pieces[w.back()].lo, m.pieces[w.back()].hi};
  for (size_t k = w.size() - 1; k-- > 0;) {
    s = detail::piece_preimage(m, size_t(w[k]), s);
    if (s.empty()) return s;
  }
  return s;
}

/* ---- builtin families ---- */

inline IntervalMap make_tent(const Number& s, double tol = 1e-12) {
  IntervalMap m;
  m.a = Number(0);
  m.b = Number(1);
  Rational half(1, 2);
  m.branches.push_back({Number(0), Number(half), AffineRule{s, Number(0)}, true});
  m.branches.push_back({Number(half), Number(1), AffineRule{-s, s}, false});
  m.exact = true;
  m.tol = tol;
  m.label = "tent";
  validate(m);
  return m;
}

inline IntervalMap make_beta(const Number& beta, double tol = 1e-12) {
  IntervalMap m;
  m.a = Number(0);
  m.b = Number(1);
  m.exact = true;
  m.tol = tol;
  m.label = "beta";
  if (!(beta > Number(1))) throw Error(errk::BadSpec, "beta must exceed 1");
  Number cut(0);
  for (long k = 0;; ++k) {
    Number lo = cut;
    Number hi = (Number(k + 1)) / beta;
    bool last = !(hi < Number(1));
    if (last) hi = Number(1);
    m.branches.push_back({lo, hi, AffineRule{beta, Number(-k)}, true});
    if (last) break;
    cut = hi;
    if (k > 64) throw Error(errk::BadSpec, "beta too large");
  }
  validate(m);
  return m;
}

inline IntervalMap make_quadratic(double t, double tol = 1e-12) {
  if (t <= 0.0 || t > 1.0) throw Error(errk::BadSpec, "quadratic parameter in (0,1]");
  IntervalMap m;
  m.a = Number(0);
  m.b = Number(1);
  m.exact = false;
  m.tol = tol;
  m.label = "quadratic";
  Rational half(1, 2);
  m.branches.push_back({Number(0), Number(half), QuadraticRule{t}, true});
  m.branches.push_back({Number(half), Number(1), QuadraticRule{t}, false});
  validate(m);
  return m;
}

/* N affine branches alternating orientation, each fully onto (0,1) */
inline IntervalMap make_full(int n, double tol = 1e-12) {
  if (n < 2) throw Error(errk::BadSpec, "need at least 2 branches");
  IntervalMap m;
  m.a = Number(0);
  m.b = Number(1);
  m.exact = true;
  m.tol = tol;
  m.label = "full";
  for (int i = 0; i < n; ++i) {
    Number lo = Number(Rational(i, n)), hi = Number(Rational(i + 1, n));
    bool inc = (i % 2 == 0);
    Number slope = inc ? Number(n) : Number(-n);
    Number intercept = inc ? Number(-i) : Number(i + 1);
    m.branches.push_back({lo, hi, AffineRule{slope, intercept}, inc});
  }
  validate(m);
  return m;
}

}  // namespace kneadlab
