#pragma once

#include <algorithm>
#include <vector>

#include "kneadlab/diagram.hpp"
#include "kneadlab/errors.hpp"
#include "kneadlab/poly.hpp"

namespace kneadlab {

/*
 * A Markov shift presented by a finite directed graph.  Parallel arrows are
 * allowed and count with multiplicity.  When the graph is a truncation of a
 * countable diagram, boundary marks the vertices whose outgoing arrows may
 * have been censored; everything proved about a truncation with a nonempty
 * boundary is provisional.
 */
struct ShiftGraph {
  std::vector<std::vector<size_t>> adj;
  std::vector<char> boundary;

  size_t nvertices() const { return adj.size(); }
  size_t narrows() const {
    size_t n = 0;
    for (const auto& a : adj) n += a.size();
    return n;
  }
  bool complete() const {
    for (char b : boundary)
      if (b) return false;
    return true;
  }
};

inline ShiftGraph from_diagram(const MarkovDiagram& d) {
  ShiftGraph g;
  g.adj.resize(d.nvertices());
  g.boundary.assign(d.nvertices(), 0);
  for (size_t u = 0; u < d.nvertices(); ++u) {
    for (const auto& [sym, v] : d.arrows[u]) {
      (void)sym;
      g.adj[u].push_back(v);
    }
    if (u < d.frontier.size() && d.frontier[u]) g.boundary[u] = 1;
  }
  return g;
}

/* entries are arrow multiplicities */
inline ShiftGraph from_matrix(const std::vector<std::vector<int>>& m) {
  ShiftGraph g;
  g.adj.resize(m.size());
  g.boundary.assign(m.size(), 0);
  for (size_t i = 0; i < m.size(); ++i) {
    if (m[i].size() != m.size()) throw Error(errk::BadSpec, "matrix is not square");
    for (size_t j = 0; j < m.size(); ++j) {
      if (m[i][j] < 0) throw Error(errk::BadSpec, "negative arrow multiplicity");
      for (int k = 0; k < m[i][j]; ++k) g.adj[i].push_back(j);
    }
  }
  return g;
}

inline IMatrix counts_matrix(const ShiftGraph& g) {
  IMatrix m(g.nvertices(), std::vector<Integer>(g.nvertices(), 0));
  for (size_t u = 0; u < g.nvertices(); ++u)
    for (size_t v : g.adj[u]) m[u][v] += 1;
  return m;
}

struct SccSplit {
  std::vector<int> id;                       // per vertex, reverse topological
  int count = 0;
  std::vector<std::vector<size_t>> members;  // per component
};

inline SccSplit scc_split(const ShiftGraph& g) {
  SccSplit s;
  detail::tarjan_scc(g.adj, s.id, s.count);
  s.members.resize(size_t(s.count));
  for (size_t v = 0; v < g.nvertices(); ++v) s.members[size_t(s.id[v])].push_back(v);
  return s;
}

/* subgraph induced on the kept vertices; boundary marks survive */
inline ShiftGraph restrict_graph(const ShiftGraph& g, const std::vector<char>& keep,
                                 std::vector<size_t>* index_out = nullptr) {
  std::vector<size_t> index(g.nvertices(), size_t(-1));
  ShiftGraph h;
  for (size_t v = 0; v < g.nvertices(); ++v)
    if (keep[v]) {
      index[v] = h.adj.size();
      h.adj.emplace_back();
      h.boundary.push_back(g.boundary[v]);
    }
  for (size_t u = 0; u < g.nvertices(); ++u) {
    if (!keep[u]) continue;
    for (size_t v : g.adj[u])
      if (keep[v]) h.adj[index[u]].push_back(index[v]);
  }
  if (index_out) *index_out = std::move(index);
  return h;
}

inline ShiftGraph component_of(const ShiftGraph& g, size_t v,
                               std::vector<size_t>* index_out = nullptr) {
  SccSplit s = scc_split(g);
  std::vector<char> keep(g.nvertices(), 0);
  for (size_t u = 0; u < g.nvertices(); ++u) keep[u] = (s.id[u] == s.id[v]);
  return restrict_graph(g, keep, index_out);
}

/* drops one copy of the arrow u -> v */
inline ShiftGraph delete_arrow(const ShiftGraph& g, size_t u, size_t v) {
  ShiftGraph h = g;
  auto& out = h.adj.at(u);
  auto it = std::find(out.begin(), out.end(), v);
  if (it == out.end()) throw Error(errk::BadSpec, "no such arrow");
  out.erase(it);
  return h;
}

inline ShiftGraph delete_vertex(const ShiftGraph& g, size_t v,
                                std::vector<size_t>* index_out = nullptr) {
  std::vector<char> keep(g.nvertices(), 1);
  keep.at(v) = 0;
  return restrict_graph(g, keep, index_out);
}

/*
 * Truncation of the walk graph on the naturals: vertices 0..n-1, arrows
 * i -> i+1 and i+1 -> i.  The top vertex loses its upward arrow to the cut,
 * so it is marked as boundary.
 */
inline ShiftGraph make_ladder(size_t n) {
  if (n < 2) throw Error(errk::BadSpec, "ladder needs at least two rungs");
  ShiftGraph g;
  g.adj.resize(n);
  g.boundary.assign(n, 0);
  for (size_t i = 0; i + 1 < n; ++i) {
    g.adj[i].push_back(i + 1);
    g.adj[i + 1].push_back(i);
  }
  g.boundary[n - 1] = 1;
  return g;
}

/* loop counts (A^n)_vv for n = 1..nmax */
inline std::vector<Integer> loop_counts(const ShiftGraph& g, size_t v, size_t nmax) {
  std::vector<Integer> cur(g.nvertices(), 0), nxt(g.nvertices());
  cur.at(v) = 1;
  std::vector<Integer> out;
  for (size_t n = 1; n <= nmax; ++n) {
    std::fill(nxt.begin(), nxt.end(), Integer(0));
    for (size_t u = 0; u < g.nvertices(); ++u) {
      if (sgn(cur[u]) == 0) continue;
      for (size_t w : g.adj[u]) nxt[w] += cur[u];
    }
    out.push_back(nxt[v]);
    std::swap(cur, nxt);
  }
  return out;
}

/* first-return counts at v: loops of length n avoiding v in between */
inline std::vector<Integer> first_return_counts(const ShiftGraph& g, size_t v,
                                                size_t nmax) {
  std::vector<Integer> cur(g.nvertices(), 0), nxt(g.nvertices());
  cur.at(v) = 1;
  std::vector<Integer> out;
  for (size_t n = 1; n <= nmax; ++n) {
    std::fill(nxt.begin(), nxt.end(), Integer(0));
    for (size_t u = 0; u < g.nvertices(); ++u) {
      if (sgn(cur[u]) == 0) continue;
      for (size_t w : g.adj[u]) nxt[w] += cur[u];
    }
    out.push_back(nxt[v]);
    nxt[v] = 0;  // paths that returned stop here
    std::swap(cur, nxt);
  }
  return out;
}

}  // namespace kneadlab
