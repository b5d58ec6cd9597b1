#pragma once

#include <algorithm>
#include <vector>

#include "kneadlab/diagram.hpp"
#include "kneadlab/errors.hpp"
#include "kneadlab/kneading.hpp"

namespace kneadlab {

/*
 * Cutting data of the kneading sequences.  Running the interval chain along
 * a kneading sequence A, a step is a cutting time when the clamp strictly
 * replaced a bound by a piece germ.  The block of A between consecutive cuts
 * is a prefix of some kneading sequence B, and the block length is one of
 * B's own cutting times; Q records that index, so the cut steps satisfy
 * S[i][k+1] = S[i][k] + S[B][Q[i][k+1]].
 */
struct CuttingData {
  std::vector<std::vector<size_t>> S;   // per kneading sequence, cut steps, starting at 1
  std::vector<std::vector<long>> Q;     // per cut k >= 1: index into S[Qseq[i][k]]; -1 unmatched
  std::vector<std::vector<long>> Qseq;  // the matched kneading sequence; -1 unmatched
  bool recursion_ok = true;             // every gap matched
  bool degenerate_full = false;         // every chain cut at every step (full-shift-like)
};

inline CuttingData cutting_data(const KneadingData& kd, size_t depth = 64) {
  CuttingData cd;
  size_t nseq = kd.seq.size();
  cd.S.resize(nseq);
  // a chain stuck at an endpoint fixed germ cuts trivially at every step, so
  // the full-shift flag needs every sequence to cut everywhere, not just one
  bool any_deep = false, all_cut = true;
  for (size_t i = 0; i < nseq; ++i) {
    const SymbolSeq& A = kd.seq[i];
    size_t len = std::min(depth, A.known_length());
    if (len == 0) continue;
    cd.S[i].push_back(1);
    SymInterval iv = piece_interval(size_t(A.at(0)));
    for (size_t k = 1; k < len; ++k) {
      ExtendResult r = extend(kd, iv, size_t(A.at(k)));
      if (r.ok != Tri::yes) break;  // shallow data; the realized sequence cannot die
      if (r.clamped_lo || r.clamped_hi) cd.S[i].push_back(k + 1);
      iv = r.next;
    }
    if (len >= 4) {
      any_deep = true;
      if (cd.S[i].size() != len) all_cut = false;
    }
  }
  cd.degenerate_full = any_deep && all_cut;

  cd.Q.resize(nseq);
  cd.Qseq.resize(nseq);
  for (size_t i = 0; i < nseq; ++i) {
    cd.Q[i].assign(cd.S[i].size(), -1);
    cd.Qseq[i].assign(cd.S[i].size(), -1);
    for (size_t k = 1; k < cd.S[i].size(); ++k) {
      size_t gap = cd.S[i][k] - cd.S[i][k - 1];
      // block of A covering (S[k-1], S[k]], compared against prefixes of B
      auto block_at = [&](size_t off) { return kd.seq[i].at(cd.S[i][k - 1] + off); };
      for (size_t b = 0; b < nseq && cd.Q[i][k] < 0; ++b) {
        auto it = std::find(cd.S[b].begin(), cd.S[b].end(), gap);
        if (it == cd.S[b].end()) continue;
        bool match = true;
        for (size_t off = 0; off < gap && match; ++off)
          match = kd.seq[b].known(off) && block_at(off) == kd.seq[b].at(off);
        if (match) {
          cd.Q[i][k] = long(it - cd.S[b].begin());
          cd.Qseq[i][k] = long(b);
        }
      }
      if (cd.Q[i][k] < 0) cd.recursion_ok = false;
    }
  }
  return cd;
}

/*
 * Structural certificate for normalized unimodal maps (increasing piece then
 * decreasing piece): beyond the two length-1 vertices the diagram is a
 * doubled ray.  The words at depth n are the two sided prefixes of the
 * turning itinerary, which differ in their first symbol only; the map folds
 * the flanking cylinders onto each other, so the two vertices at a depth
 * carry the same follower interval.  Forward arrows climb the ray and back
 * arrows appear at cut depths.  Degenerate full-shift kneading (every step
 * cuts) is flagged and skips the ray check.
 */
struct UnimodalStructure {
  CuttingData cuts;
  bool degenerate_full = false;
  bool ray_ok = true;  // at most two follower-equal vertices per depth >= 2
  bool recursion_ok = true;
  std::vector<std::pair<size_t, size_t>> back_arrows;  // (from depth, to depth)
  size_t checked_depth = 0;
};

inline UnimodalStructure unimodal_structure(const KneadingData& kd, size_t depth = 48) {
  if (kd.npieces != 2 || kd.sign != std::vector<int>{1, -1})
    throw Error(errk::NotUnimodal, "need an increasing piece followed by a decreasing one");
  UnimodalStructure us;
  us.cuts = cutting_data(kd, depth);
  us.recursion_ok = us.cuts.recursion_ok;
  us.degenerate_full = us.cuts.degenerate_full;

  MarkovDiagram d = build_diagram_pmm(kd, depth);
  us.checked_depth = depth;
  if (us.degenerate_full) return us;  // complete graph on the pieces, no ray to check

  std::vector<std::vector<size_t>> at_depth(depth + 2);
  for (size_t u = 0; u < d.nvertices(); ++u) {
    size_t dep = d.words[u].size();
    if (dep >= 2) at_depth[dep].push_back(u);
  }
  KneadingOracle orc(kd);
  for (const auto& level : at_depth) {
    if (level.size() > 2) us.ray_ok = false;
    if (level.size() == 2) {
      auto c = orc.follower_exact(d.words[level[0]], d.words[level[1]]);
      if (!c || c->kind != FollowerCmp::equal) us.ray_ok = false;
    }
  }
  for (size_t u = 0; u < d.nvertices(); ++u) {
    size_t dep = d.words[u].size();
    for (const auto& [sym, v] : d.arrows[u]) {
      size_t dv = d.words[v].size();
      if (dv == dep + 1) continue;  // ray successor
      if (dv > dep + 1) us.ray_ok = false;
      if (dv <= dep) us.back_arrows.push_back({dep, dv});
    }
  }
  std::sort(us.back_arrows.begin(), us.back_arrows.end());
  return us;
}

}  // namespace kneadlab
