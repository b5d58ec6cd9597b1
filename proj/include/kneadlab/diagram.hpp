#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kneadlab/errors.hpp"
#include "kneadlab/oracle.hpp"

namespace kneadlab {

/*
 * Markov diagram of a subshift: vertices are minimal words, the arrow from u
 * on symbol b points to min(u + b).  complete means the closure stabilized
 * below the depth cap with every extension decided; otherwise the frontier
 * lists vertices whose out-neighbourhood is censored (truncated data or the
 * cap).
 */
struct MarkovDiagram {
  std::vector<Word> words;  // vertex id -> minimal word, in creation order
  std::vector<std::vector<std::pair<int, size_t>>> arrows;  // (symbol, target)
  size_t depth_cap = 0;
  bool complete = false;
  std::vector<char> frontier;  // vertex censored?

  // strongly connected structure, filled by scc_decompose
  std::vector<int> scc_id;          // component of each vertex, reverse topological
  std::vector<size_t> scc_period;   // gcd of cycle lengths, 0 for acyclic singletons
  std::vector<std::vector<int>> scc_dag;

  size_t nvertices() const { return words.size(); }
  size_t narrows() const {
    size_t n = 0;
    for (const auto& a : arrows) n += a.size();
    return n;
  }
  std::optional<size_t> vertex_of(const Word& w) const {
    for (size_t i = 0; i < words.size(); ++i)
      if (words[i] == w) return i;
    return std::nullopt;
  }
};

namespace detail {

/* iterative Tarjan; component ids come out in reverse topological order */
inline void tarjan_scc(const std::vector<std::vector<size_t>>& adj, std::vector<int>& comp,
                       int& ncomp) {
  size_t n = adj.size();
  comp.assign(n, -1);
  ncomp = 0;
  std::vector<int> index(n, -1), low(n, 0);
  std::vector<char> onstack(n, 0);
  std::vector<size_t> stack;
  int next = 0;
  struct Frame {
    size_t v;
    size_t child;
  };
  for (size_t root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next++;
    stack.push_back(root);
    onstack[root] = 1;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.child < adj[f.v].size()) {
        size_t w = adj[f.v][f.child++];
        if (index[w] == -1) {
          index[w] = low[w] = next++;
          stack.push_back(w);
          onstack[w] = 1;
          call.push_back({w, 0});
        } else if (onstack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        if (low[f.v] == index[f.v]) {
          for (;;) {
            size_t w = stack.back();
            stack.pop_back();
            onstack[w] = 0;
            comp[w] = ncomp;
            if (w == f.v) break;
          }
          ++ncomp;
        }
        size_t v = f.v;
        call.pop_back();
        if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      }
    }
  }
}

}  // namespace detail

/* fill scc_id, scc_period, scc_dag of a built diagram */
inline void scc_decompose(MarkovDiagram& d) {
  size_t n = d.nvertices();
  std::vector<std::vector<size_t>> adj(n);
  for (size_t u = 0; u < n; ++u)
    for (const auto& [sym, v] : d.arrows[u]) adj[u].push_back(v);
  int ncomp = 0;
  detail::tarjan_scc(adj, d.scc_id, ncomp);
  d.scc_period.assign(size_t(ncomp), 0);
  d.scc_dag.assign(size_t(ncomp), {});

  // per-component period: gcd over internal arrows of level[u]+1-level[v]
  std::vector<long> level(n, -1);
  std::vector<char> done(size_t(ncomp), 0);
  for (size_t u = 0; u < n; ++u) {
    int c = d.scc_id[u];
    if (done[size_t(c)]) continue;
    done[size_t(c)] = 1;
    // BFS inside the component from its first-seen vertex
    std::deque<size_t> bfs{u};
    level[u] = 0;
    size_t internal_arrows = 0;
    size_t g = 0;
    while (!bfs.empty()) {
      size_t x = bfs.front();
      bfs.pop_front();
      for (size_t y : adj[x]) {
        if (d.scc_id[y] != c) continue;
        ++internal_arrows;
        if (level[y] == -1) {
          level[y] = level[x] + 1;
          bfs.push_back(y);
        }
      }
    }
    // second pass now that levels are final
    for (size_t x = 0; x < n; ++x) {
      if (d.scc_id[x] != c || level[x] == -1) continue;
      for (size_t y : adj[x]) {
        if (d.scc_id[y] != c) continue;
        long diff = level[x] + 1 - level[y];
        g = std::gcd(g, size_t(diff < 0 ? -diff : diff));
      }
    }
    d.scc_period[size_t(c)] = internal_arrows ? g : 0;
  }
  for (size_t u = 0; u < n; ++u)
    for (size_t v : adj[u])
      if (d.scc_id[u] != d.scc_id[v]) {
        auto& row = d.scc_dag[size_t(d.scc_id[u])];
        if (std::find(row.begin(), row.end(), d.scc_id[v]) == row.end())
          row.push_back(d.scc_id[v]);
      }
}

/*
 * Generic construction: breadth-first closure from the length-1 words under
 * the arrow rule target = minimal_form(source + symbol).  Oracle admits()
 * failures of the undecidable kind abort with the offending word.
 */
inline MarkovDiagram build_diagram_generic(const SubshiftOracle& orc, size_t depth_cap = 64,
                                           size_t probe_depth = 128) {
  MarkovDiagram d;
  d.depth_cap = depth_cap;
  d.complete = true;
  std::map<Word, size_t> intern;
  std::deque<size_t> queue;
  auto add_vertex = [&](const Word& w) {
    auto [it, fresh] = intern.insert({w, d.words.size()});
    if (fresh) {
      d.words.push_back(w);
      d.arrows.emplace_back();
      d.frontier.push_back(0);
      queue.push_back(it->second);
    }
    return it->second;
  };
  for (size_t b = 0; b < orc.alphabet_size(); ++b) {
    Word w{int(b)};
    Tri t = orc.admits(w);
    if (t == Tri::undecidable)
      throw Error(errk::UndecidableAtDepth, "admissibility of '" + word_str(w) + "' undecided");
    if (t == Tri::yes) add_vertex(w);
  }
  while (!queue.empty()) {
    size_t u = queue.front();
    queue.pop_front();
    Word base = d.words[u];
    for (size_t b = 0; b < orc.alphabet_size(); ++b) {
      Word ext = base;
      ext.push_back(int(b));
      Tri t = orc.admits(ext);
      if (t == Tri::undecidable)
        throw Error(errk::UndecidableAtDepth,
                    "admissibility of '" + word_str(ext) + "' undecided");
      if (t == Tri::no) continue;
      Word target = minimal_form(orc, ext, probe_depth);
      if (target.size() > depth_cap) {
        d.frontier[u] = 1;
        d.complete = false;
        continue;
      }
      size_t tv = add_vertex(target);  // may grow d.arrows, so index afterwards
      d.arrows[u].push_back({int(b), tv});
    }
  }
  scc_decompose(d);
  return d;
}

/*
 * Construction from kneading data.  Every vertex carries the bounding
 * itineraries of its word interval; one-symbol extension is a shift plus a
 * clamp, and minimality of an extension is decided by comparing the clamped
 * bounds against those of the suffix-link vertex.  Equivalent to the generic
 * construction but with incremental exact follower bookkeeping.
 */
inline MarkovDiagram build_diagram_pmm(const KneadingData& kd, size_t depth_cap = 64) {
  MarkovDiagram d;
  d.depth_cap = depth_cap;
  d.complete = true;

  constexpr size_t ROOT = size_t(-1);
  std::vector<SymInterval> iv;       // per vertex
  std::vector<size_t> suffix;        // per vertex: vertex of min(word minus first symbol)
  std::map<Word, size_t> intern;
  std::deque<size_t> queue;

  auto add_vertex = [&](const Word& w, const SymInterval& bounds, size_t suf) {
    auto [it, fresh] = intern.insert({w, d.words.size()});
    if (fresh) {
      d.words.push_back(w);
      d.arrows.emplace_back();
      d.frontier.push_back(0);
      iv.push_back(bounds);
      suffix.push_back(suf);
      queue.push_back(it->second);
    }
    return it->second;
  };

  // equal follower sets iff equal bound pairs; undecidable poisons
  auto bounds_equal = [&](const SymInterval& a, const SymInterval& b) -> Tri {
    Cmp lo = compare(kd, a.lo, b.lo);
    if (lo == Cmp::undecidable) return Tri::undecidable;
    if (lo != Cmp::equal) return Tri::no;
    Cmp hi = compare(kd, a.hi, b.hi);
    if (hi == Cmp::undecidable) return Tri::undecidable;
    return hi == Cmp::equal ? Tri::yes : Tri::no;
  };

  // resolve(u, b) = vertex of min(word(u) + b), assuming the extension of
  // u's interval by b is nonempty; SIZE_MAX-1 = censored
  constexpr size_t CENSORED = size_t(-2);
  std::function<size_t(size_t, size_t, const SymInterval&)> resolve =
      [&](size_t u, size_t b, const SymInterval& ext_u) -> size_t {
    if (u == ROOT) {
      // min of a length-1 word is itself
      return add_vertex(Word{int(b)}, piece_interval(b), ROOT);
    }
    ExtendResult rs = (suffix[u] == ROOT)
                          ? ExtendResult{Tri::yes, piece_interval(b)}
                          : extend(kd, iv[suffix[u]], b);
    if (rs.ok == Tri::undecidable) return CENSORED;
    // fol(suffix+b) contains fol(u+b), so it is nonempty here
    Tri eq = bounds_equal(ext_u, rs.next);
    if (eq == Tri::undecidable) return CENSORED;
    if (eq == Tri::yes) return resolve(suffix[u], b, rs.next);
    Word w = d.words[u];
    w.push_back(int(b));
    if (w.size() > depth_cap) return CENSORED;
    size_t suf = resolve(suffix[u], b, rs.next);
    if (suf == CENSORED) return CENSORED;
    return add_vertex(w, ext_u, suf);
  };

  for (size_t j = 0; j < kd.npieces; ++j)
    add_vertex(Word{int(j)}, piece_interval(j), ROOT);

  while (!queue.empty()) {
    size_t u = queue.front();
    queue.pop_front();
    for (size_t b = 0; b < kd.npieces; ++b) {
      ExtendResult r = extend(kd, iv[u], b);
      if (r.ok == Tri::no) continue;
      if (r.ok == Tri::undecidable) {
        d.frontier[u] = 1;
        d.complete = false;
        continue;
      }
      size_t v = resolve(u, b, r.next);
      if (v == CENSORED) {
        d.frontier[u] = 1;
        d.complete = false;
        continue;
      }
      d.arrows[u].push_back({int(b), v});
    }
  }
  scc_decompose(d);
  return d;
}

/* read the word along a diagram path: last symbols of the visited vertices */
inline Word project(const MarkovDiagram& d, const std::vector<size_t>& path) {
  Word out;
  for (size_t i = 0; i < path.size(); ++i) {
    if (path[i] >= d.nvertices()) throw Error(errk::BadSpec, "vertex out of range");
    if (i) {
      bool linked = false;
      for (const auto& [sym, v] : d.arrows[path[i - 1]])
        if (v == path[i]) linked = true;
      if (!linked) throw Error(errk::NotAPath, "consecutive vertices not connected");
    }
    out.push_back(d.words[path[i]].back());
  }
  return out;
}

/* eventually periodic projection of a cycle (path whose end connects back to
   its start) */
inline SymbolSeq project_cycle(const MarkovDiagram& d, const std::vector<size_t>& cycle) {
  if (cycle.empty()) throw Error(errk::NotAPath, "empty cycle");
  Word w = project(d, cycle);
  bool linked = false;
  for (const auto& [sym, v] : d.arrows[cycle.back()])
    if (v == cycle.front()) linked = true;
  if (!linked) throw Error(errk::NotAPath, "cycle does not close");
  return SymbolSeq::periodic({}, w);
}

inline std::string diagram_dot(const MarkovDiagram& d) {
  std::ostringstream os;
  os << "digraph markov {\n  rankdir=LR;\n";
  int ncomp = 0;
  for (int c : d.scc_id) ncomp = std::max(ncomp, c + 1);
  for (int c = 0; c < ncomp; ++c) {
    bool nontrivial = false;
    size_t members = 0;
    for (size_t u = 0; u < d.nvertices(); ++u)
      if (d.scc_id[u] == c) ++members;
    nontrivial = members > 1 || (c < int(d.scc_period.size()) && d.scc_period[size_t(c)] > 0);
    if (nontrivial) os << "  subgraph cluster_" << c << " {\n    label=\"scc " << c << "\";\n";
    for (size_t u = 0; u < d.nvertices(); ++u) {
      if (d.scc_id[u] != c) continue;
      os << (nontrivial ? "    " : "  ") << "v" << u << " [label=\"" << word_str(d.words[u])
         << "\\nd" << d.words[u].size() << (d.frontier[u] ? " ~" : "") << "\"];\n";
    }
    if (nontrivial) os << "  }\n";
  }
  for (size_t u = 0; u < d.nvertices(); ++u)
    for (const auto& [sym, v] : d.arrows[u])
      os << "  v" << u << " -> v" << v << " [label=\"" << sym << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace kneadlab
