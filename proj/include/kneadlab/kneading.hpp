#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "kneadlab/errors.hpp"
#include "kneadlab/interval_map.hpp"
#include "kneadlab/symbols.hpp"

namespace kneadlab {

/*
 * A boundary germ orbit can land exactly on another boundary germ (beta maps
 * send the interior endpoint germs onto the endpoint ones, for instance).
 * From that step on the itinerary is the target germ's itinerary, so a
 * shifted reference into the source names the same germ as the target; the
 * alias records the first such landing.
 */
struct GermAlias {
  size_t steps = 0;   // orbit step of the landing, always >= 1
  size_t target = 0;  // seq index of the germ landed on
};

/*
 * Kneading data of a piecewise monotone map: for every piece of the natural
 * partition the itineraries of its two boundary germs, plus the orientation
 * sign of the piece.  lower(j) is the itinerary of the right-hand germ at the
 * left endpoint of piece j, upper(j) the left-hand germ at its right
 * endpoint.  exact is false whenever any sequence had to be truncated.
 */
struct KneadingData {
  size_t npieces = 0;
  std::vector<int> sign;       // +1 increasing, -1 decreasing, per piece
  std::vector<SymbolSeq> seq;  // 2*npieces entries: [2j] lower, [2j+1] upper
  std::vector<std::optional<GermAlias>> alias;  // per seq entry; empty in numeric mode
  bool exact = true;
  std::vector<std::string> notes;

  const SymbolSeq& lower(size_t j) const { return seq.at(2 * j); }
  const SymbolSeq& upper(size_t j) const { return seq.at(2 * j + 1); }
};

inline KneadingData kneading(const IntervalMap& m, size_t depth = 64) {
  KneadingData kd;
  kd.npieces = m.pieces.size();
  for (const auto& pc : m.pieces) kd.sign.push_back(pc.increasing ? 1 : -1);
  for (size_t j = 0; j < kd.npieces; ++j) {
    const auto& pc = m.pieces[j];
    SidedPoint lo{pc.lo, Side::right};
    SidedPoint hi{pc.hi, Side::left};
    for (SidedPoint g : {lo, hi}) {
      std::string note;
      SymbolSeq s = itinerary_partial(m, g, depth, &note);
      if (!note.empty())
        kd.notes.push_back("piece " + std::to_string(j) + ": " + note);
      if (s.truncated) kd.exact = false;
      kd.seq.push_back(std::move(s));
    }
  }
  if (m.exact) {
    std::vector<SidedPoint> germ;
    for (const auto& pc : m.pieces) {
      germ.push_back({pc.lo, Side::right});
      germ.push_back({pc.hi, Side::left});
    }
    kd.alias.assign(kd.seq.size(), std::nullopt);
    for (size_t i = 0; i < germ.size(); ++i) {
      SidedPoint g = germ[i];
      for (size_t t = 1; t <= depth && !kd.alias[i]; ++t) {
        try {
          g = evaluate(m, g);
        } catch (const Error&) {
          break;
        }
        for (size_t j = 0; j < germ.size(); ++j)
          if (j != i && g.x == germ[j].x && g.side == germ[j].side) {
            kd.alias[i] = GermAlias{t, j};
            break;
          }
      }
    }
  }
  return kd;
}

enum class Cmp { less, equal, greater, undecidable };

inline const char* cmp_str(Cmp c) {
  switch (c) {
    case Cmp::less: return "less";
    case Cmp::equal: return "equal";
    case Cmp::greater: return "greater";
    default: return "undecidable";
  }
}

/*
 * Signed lexicographic order on itineraries: walk the common prefix and keep
 * the running product of piece orientations; at the first disagreement the
 * plain symbol comparison is used when the product is positive and reversed
 * when it is negative.  Sequences agreeing on every known index compare equal
 * only when both are fully known (eventually periodic) and the walk has
 * passed the algebraic bound beyond which two such sequences cannot first
 * disagree.
 */
inline Cmp compare(const std::vector<int>& sign, const SymbolSeq& A, const SymbolSeq& B) {
  size_t limit;
  bool closed = !A.truncated && !B.truncated;
  if (closed) {
    limit = SymbolSeq::equality_bound(A, B);
  } else {
    limit = std::min(A.known_length(), B.known_length());
  }
  int flip = 1;
  for (size_t k = 0; k < limit; ++k) {
    int a = A.at(k), b = B.at(k);
    if (a != b) {
      bool lt = a < b;
      if (flip < 0) lt = !lt;
      return lt ? Cmp::less : Cmp::greater;
    }
    flip *= sign.at(static_cast<size_t>(a));
  }
  return closed ? Cmp::equal : Cmp::undecidable;
}

inline Cmp compare(const KneadingData& kd, const SymbolSeq& A, const SymbolSeq& B) {
  return compare(kd.sign, A, B);
}

/*
 * A germ reference names a shifted kneading sequence without copying it:
 * sequence index into KneadingData::seq plus a shift.  Shifts past the head
 * of an eventually periodic sequence are normalised into the cycle, and
 * shifts reaching a germ alias are folded onto the target sequence, so two
 * references to the same germ become structurally equal.  The fold matters
 * for truncated data: it turns comparisons that a symbol walk could never
 * settle into identities.
 */
struct GermRef {
  size_t seq = 0;
  size_t shift = 0;
  friend bool operator==(const GermRef&, const GermRef&) = default;
};

inline GermRef normalize(const KneadingData& kd, GermRef r) {
  for (;;) {
    const SymbolSeq& s = kd.seq.at(r.seq);
    if (!s.truncated && !s.cycle.empty() && r.shift > s.head.size())
      r.shift = s.head.size() + (r.shift - s.head.size()) % s.cycle.size();
    if (r.seq < kd.alias.size() && kd.alias[r.seq] && r.shift >= kd.alias[r.seq]->steps) {
      // aliases shorten the shift by at least one, so the loop ends
      r = GermRef{kd.alias[r.seq]->target, r.shift - kd.alias[r.seq]->steps};
      continue;
    }
    return r;
  }
}

inline SymbolSeq resolve(const KneadingData& kd, GermRef r) {
  return kd.seq.at(r.seq).shifted(r.shift);
}

inline Cmp compare(const KneadingData& kd, GermRef a, GermRef b) {
  a = normalize(kd, a);
  b = normalize(kd, b);
  if (a == b) return Cmp::equal;
  return compare(kd.sign, resolve(kd, a), resolve(kd, b));
}

/*
 * Symbolic interval: the set of itineraries gamma with lo <= gamma <= hi in
 * the signed order.  Both bounds are themselves itineraries of boundary
 * germs, so they belong to the set; lo > hi means empty, lo == hi a single
 * sequence.
 */
struct SymInterval {
  GermRef lo, hi;
  friend bool operator==(const SymInterval&, const SymInterval&) = default;
};

inline SymInterval piece_interval(size_t j) {
  return SymInterval{GermRef{2 * j, 0}, GermRef{2 * j + 1, 0}};
}

struct ExtendResult {
  Tri ok = Tri::undecidable;  // nonempty after the step?
  SymInterval next{};
  bool clamped_lo = false;  // piece germ strictly replaced the shifted bound
  bool clamped_hi = false;
};

/*
 * One admissibility step: given the interval of continuations after a word
 * ending in the piece cur.lo's first symbol, shift both bounds (swapping on a
 * decreasing piece) and clamp into the target piece b.  Any comparison that
 * cannot be decided from truncated data poisons the step.
 */
inline ExtendResult extend(const KneadingData& kd, const SymInterval& cur, size_t b) {
  const SymbolSeq& losec = kd.seq.at(cur.lo.seq);
  size_t sym0 = losec.at(cur.lo.shift);
  GermRef slo = normalize(kd, GermRef{cur.lo.seq, cur.lo.shift + 1});
  GermRef shi = normalize(kd, GermRef{cur.hi.seq, cur.hi.shift + 1});
  if (kd.sign.at(sym0) < 0) std::swap(slo, shi);

  GermRef plo{2 * b, 0}, phi{2 * b + 1, 0};
  Cmp c1 = compare(kd, slo, plo);
  if (c1 == Cmp::undecidable) return {Tri::undecidable, {}};
  GermRef nlo = (c1 == Cmp::less) ? plo : slo;
  Cmp c2 = compare(kd, shi, phi);
  if (c2 == Cmp::undecidable) return {Tri::undecidable, {}};
  GermRef nhi = (c2 == Cmp::greater) ? phi : shi;

  Cmp e = compare(kd, nlo, nhi);
  if (e == Cmp::undecidable) return {Tri::undecidable, {}};
  if (e == Cmp::greater) return {Tri::no, {}};
  return {Tri::yes, SymInterval{nlo, nhi}, c1 == Cmp::less, c2 == Cmp::greater};
}

/*
 * Finite-word admissibility by running the interval chain.  Exact kneading
 * data decides every word; truncated data may return undecidable.
 */
inline Tri word_admissible(const KneadingData& kd, const Word& w) {
  if (w.empty()) return Tri::yes;
  for (int s : w)
    if (s < 0 || static_cast<size_t>(s) >= kd.npieces) return Tri::no;
  SymInterval iv = piece_interval(static_cast<size_t>(w[0]));
  for (size_t k = 1; k < w.size(); ++k) {
    ExtendResult r = extend(kd, iv, static_cast<size_t>(w[k]));
    if (r.ok != Tri::yes) return r.ok;
    iv = r.next;
  }
  return Tri::yes;
}

/*
 * Admissibility of an eventually periodic sequence A: for every shift of A,
 * the shifted sequence must lie between the kneading bounds of the piece it
 * starts in.  Head length plus one full cycle covers all distinct shifts.
 */
inline Tri is_admissible(const KneadingData& kd, const SymbolSeq& A) {
  if (A.truncated) return word_admissible(kd, A.head);
  size_t nshifts = A.head.size() + A.cycle.size();
  bool und = false;
  for (size_t n = 0; n < nshifts; ++n) {
    SymbolSeq s = A.shifted(n);
    int j = s.at(0);
    if (j < 0 || static_cast<size_t>(j) >= kd.npieces) return Tri::no;
    Cmp clo = compare(kd, kd.lower(static_cast<size_t>(j)), s);
    Cmp chi = compare(kd, s, kd.upper(static_cast<size_t>(j)));
    if (clo == Cmp::greater || chi == Cmp::greater) return Tri::no;
    if (clo == Cmp::undecidable || chi == Cmp::undecidable) und = true;
  }
  return und ? Tri::undecidable : Tri::yes;
}

/*
 * Cross-check that the signed symbolic order matches the geometric order of
 * cylinders: for each length up to maxlen, sort the nonempty cylinders by
 * left endpoint and verify the words compare in the same direction.  Returns
 * the first offending pair, if any.  Exact maps only.
 */
inline std::optional<std::pair<Word, Word>>
order_agrees_with_geometry(const IntervalMap& m, const KneadingData& kd, size_t maxlen) {
  if (!m.exact) throw Error(errk::NotSupported, "geometric order check needs an exact map");
  struct Cyl {
    Word w;
    ExactInterval iv;
  };
  std::vector<Cyl> level;
  for (size_t j = 0; j < m.pieces.size(); ++j)
    level.push_back({Word{static_cast<int>(j)}, ExactInterval{m.pieces[j].lo, m.pieces[j].hi}});
  for (size_t len = 1; len <= maxlen; ++len) {
    std::sort(level.begin(), level.end(),
              [](const Cyl& a, const Cyl& b) { return a.iv.lo < b.iv.lo; });
    for (size_t i = 0; i + 1 < level.size(); ++i) {
      Cmp c = compare(kd.sign, SymbolSeq::finite(level[i].w),
                      SymbolSeq::finite(level[i + 1].w));
      if (c == Cmp::greater)
        return std::make_pair(level[i].w, level[i + 1].w);
    }
    if (len == maxlen) break;
    std::vector<Cyl> next;
    for (const auto& c : level)
      for (size_t j = 0; j < m.pieces.size(); ++j) {
        Word w = c.w;
        w.push_back(static_cast<int>(j));
        ExactInterval iv = cylinder(m, w);
        if (!iv.empty()) next.push_back({std::move(w), iv});
      }
    level = std::move(next);
  }
  return std::nullopt;
}

}  // namespace kneadlab
