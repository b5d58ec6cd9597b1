#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "kneadlab/errors.hpp"
#include "kneadlab/interval_map.hpp"

namespace kneadlab {

/*
 * Entropy certificate: disjoint closed intervals whose images under the T-th
 * iterate each strictly cover a neighbourhood of their union.  Certifies
 * topological entropy at least log(#intervals)/T.
 */
struct Horseshoe {
  size_t T = 0;
  std::vector<ExactInterval> intervals;  // closed, pairwise disjoint
  double entropy() const {
    return intervals.size() < 2 ? 0.0 : std::log(double(intervals.size())) / double(T);
  }
};

namespace detail {

/* exact image of a closed interval under f^T along the lap given by a word */
inline ExactInterval word_image(const IntervalMap& m, const Word& w, ExactInterval x) {
  for (int s : w) x = piece_image(m, size_t(s), x);
  return x;
}

}  // namespace detail

/*
 * Exact check of the covering property.  Each interval must sit inside a
 * single lap of f^T (so the image is an interval) and the images must
 * strictly cover the hull of the family.
 */
inline bool verify_horseshoe(const IntervalMap& m, const Horseshoe& hs) {
  detail::require_validated(m);
  if (!m.exact) throw Error(errk::NotSupported, "horseshoe checks are exact-mode");
  if (hs.intervals.size() < 2 || hs.T == 0) return false;
  for (size_t i = 0; i < hs.intervals.size(); ++i) {
    if (!(hs.intervals[i].lo < hs.intervals[i].hi)) return false;
    for (size_t j = i + 1; j < hs.intervals.size(); ++j) {
      bool disjoint = hs.intervals[i].hi < hs.intervals[j].lo ||
                      hs.intervals[j].hi < hs.intervals[i].lo;
      if (!disjoint) return false;
    }
  }
  Number hull_lo = hs.intervals[0].lo, hull_hi = hs.intervals[0].hi;
  for (const auto& iv : hs.intervals) {
    if (iv.lo < hull_lo) hull_lo = iv.lo;
    if (hull_hi < iv.hi) hull_hi = iv.hi;
  }
  for (const auto& iv : hs.intervals) {
    // walk the interval through the pieces; it must never straddle a cut
    ExactInterval x = iv;
    for (size_t t = 0; t < hs.T; ++t) {
      size_t piece = m.pieces.size();
      for (size_t q = 0; q < m.pieces.size(); ++q)
        if (!(x.lo < m.pieces[q].lo) && !(m.pieces[q].hi < x.hi)) {
          piece = q;
          break;
        }
      if (piece == m.pieces.size()) return false;
      x = detail::piece_image(m, piece, x);
    }
    if (!(x.lo < hull_lo) || !(hull_hi < x.hi)) return false;
  }
  return true;
}

/*
 * Search for the best horseshoe among the laps of f^T, T <= Tmax.  Each
 * nonempty T-cylinder, shrunk by a rational margin of its width, is a
 * candidate; candidates whose image fails to strictly cover the current hull
 * are discarded until the family is self-covering.  The returned certificate
 * has been re-verified exactly.
 */
inline std::optional<Horseshoe> find_horseshoe(const IntervalMap& m, size_t Tmax,
                                               long margin_den = 64) {
  detail::require_validated(m);
  if (!m.exact) throw Error(errk::NotSupported, "horseshoe search is exact-mode");
  if (margin_den < 2) throw Error(errk::BadSpec, "margin denominator too small");
  std::optional<Horseshoe> best;
  std::vector<Word> level{{}};
  for (size_t T = 1; T <= Tmax; ++T) {
    std::vector<Word> next;
    for (const auto& w : level)
      for (size_t j = 0; j < m.pieces.size(); ++j) {
        Word v = w;
        v.push_back(int(j));
        if (!cylinder(m, v).empty()) next.push_back(std::move(v));
      }
    level = std::move(next);

    struct Cand {
      ExactInterval dom, img;
    };
    std::vector<Cand> cands;
    for (const auto& w : level) {
      ExactInterval c = cylinder(m, w);
      Number margin = (c.hi - c.lo) / Number(margin_den);
      ExactInterval dom{c.lo + margin, c.hi - margin};
      ExactInterval img = detail::word_image(m, w, dom);
      // a member's image must cover the family hull, hence its own domain
      if (img.lo < dom.lo && dom.hi < img.hi) cands.push_back({std::move(dom), std::move(img)});
    }
    std::sort(cands.begin(), cands.end(),
              [](const Cand& x, const Cand& y) { return x.dom.lo < y.dom.lo; });
    // peel extreme candidates until every image strictly covers the hull;
    // dropping an end candidate is the only move that shrinks the hull there
    while (cands.size() >= 2) {
      const Number& hull_lo = cands.front().dom.lo;
      const Number& hull_hi = cands.back().dom.hi;
      bool left_bad = false, right_bad = false;
      for (const auto& c : cands) {
        if (!(c.img.lo < hull_lo)) left_bad = true;
        if (!(hull_hi < c.img.hi)) right_bad = true;
      }
      if (!left_bad && !right_bad) break;
      if (left_bad) cands.erase(cands.begin());
      if (right_bad && !cands.empty()) cands.pop_back();
    }
    if (cands.size() >= 2) {
      Horseshoe hs;
      hs.T = T;
      for (auto& c : cands) hs.intervals.push_back(std::move(c.dom));
      if (verify_horseshoe(m, hs) && (!best || hs.entropy() > best->entropy()))
        best = std::move(hs);
    }
  }
  return best;
}

}  // namespace kneadlab
