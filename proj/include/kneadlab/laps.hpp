#pragma once

#include <cmath>
#include <cstdlib>
#include <future>
#include <limits>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "kneadlab/errors.hpp"
#include "kneadlab/interval_map.hpp"

namespace kneadlab {

namespace detail {

inline unsigned worker_count() {
  if (const char* env = std::getenv("KNEADLAB_THREADS")) {
    long v = std::atol(env);
    if (v >= 1) return static_cast<unsigned>(v);
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw ? hw : 1;
}

/* significant interval of a cylinder: its image under the word length power
   of the map, intersected into one piece; cylinders sharing it subdivide
   identically, so they are tracked once with a multiplicity */
struct LapKey {
  size_t piece;
  Number lo, hi;
  bool operator<(const LapKey& o) const {
    if (piece != o.piece) return piece < o.piece;
    if (lo != o.lo) return lo < o.lo;
    return hi < o.hi;
  }
};

using LapState = std::map<LapKey, Integer>;

inline std::vector<std::pair<LapKey, Integer>>
lap_step_range(const IntervalMap& m, const LapState& state, size_t begin, size_t end) {
  std::vector<std::pair<LapKey, Integer>> out;
  auto it = state.begin();
  std::advance(it, begin);
  for (size_t i = begin; i < end; ++i, ++it) {
    const auto& [key, cnt] = *it;
    ExactInterval img = piece_image(m, key.piece, {key.lo, key.hi});
    for (size_t q = 0; q < m.pieces.size(); ++q) {
      Number lo = img.lo < m.pieces[q].lo ? m.pieces[q].lo : img.lo;
      Number hi = img.hi < m.pieces[q].hi ? img.hi : m.pieces[q].hi;
      if (lo < hi) out.push_back({LapKey{q, std::move(lo), std::move(hi)}, cnt});
    }
  }
  return out;
}

inline void lap_step(const IntervalMap& m, LapState& state, size_t budget_states) {
  LapState next;
  size_t n = state.size();
  unsigned nw = worker_count();
  if (nw > 1 && n >= 512) {
    size_t chunk = (n + nw - 1) / nw;
    std::vector<std::future<std::vector<std::pair<LapKey, Integer>>>> futs;
    for (size_t b = 0; b < n; b += chunk)
      futs.push_back(std::async(std::launch::async, lap_step_range, std::cref(m),
                                std::cref(state), b, std::min(b + chunk, n)));
    for (auto& f : futs)
      for (auto& [k, c] : f.get()) next[std::move(k)] += c;
  } else {
    for (auto& [k, c] : lap_step_range(m, state, 0, n)) next[std::move(k)] += c;
  }
  if (next.size() > budget_states)
    throw Error(errk::BudgetExceeded, "cylinder state budget exceeded");
  state = std::move(next);
}

/* numeric twin of the subdivision: double intervals, no merging, cylinders
   narrower than tol dropped.  numeric pieces are single branches. */
struct DCyl {
  size_t piece;
  double lo, hi;
};

inline std::vector<DCyl> numeric_initial(const IntervalMap& m) {
  std::vector<DCyl> state;
  for (size_t j = 0; j < m.pieces.size(); ++j)
    state.push_back({j, m.pieces[j].lo.to_double(), m.pieces[j].hi.to_double()});
  return state;
}

inline void numeric_step(const IntervalMap& m, std::vector<DCyl>& state,
                         size_t budget_states) {
  std::vector<DCyl> next;
  for (const auto& c : state) {
    const auto& br = m.branches[m.pieces[c.piece].first_branch];
    double v0 = rule_apply_d(br.rule, c.lo), v1 = rule_apply_d(br.rule, c.hi);
    double ilo = std::min(v0, v1), ihi = std::max(v0, v1);
    for (size_t q = 0; q < m.pieces.size(); ++q) {
      double lo = std::max(ilo, m.pieces[q].lo.to_double());
      double hi = std::min(ihi, m.pieces[q].hi.to_double());
      if (hi - lo > m.tol) next.push_back({q, lo, hi});
    }
  }
  if (next.size() > budget_states)
    throw Error(errk::BudgetExceeded, "cylinder state budget exceeded");
  state = std::move(next);
}

}  // namespace detail

/* floating-point lap counting for numeric-mode maps; each surviving cylinder
   is tracked individually, so keep nmax moderate */
inline std::vector<Integer> lap_numbers_numeric(const IntervalMap& m, size_t nmax,
                                                size_t budget = 10'000'000) {
  detail::require_validated(m);
  auto state = detail::numeric_initial(m);
  std::vector<Integer> counts;
  size_t used = 0;
  for (size_t n = 1; n <= nmax; ++n) {
    counts.push_back(Integer(static_cast<unsigned long>(state.size())));
    used += state.size();
    if (used > budget) throw Error(errk::BudgetExceeded, "cylinder state budget exceeded");
    if (n < nmax) detail::numeric_step(m, state, budget - used);
  }
  return counts;
}

/*
 * Lap numbers: counts[k] is the number of nonempty (k+1)-cylinders, which
 * equals the number of monotone laps of the (k+1)-th iterate.  Cylinders are
 * subdivided breadth-first; cylinders with equal significant interval are
 * merged with exact big-integer multiplicities, so full-shift fixtures stay
 * cheap at depth well past 2^60 cylinders.  The budget caps the total number
 * of tracked interval states.
 */
inline std::vector<Integer> lap_numbers(const IntervalMap& m, size_t nmax,
                                        size_t budget = 10'000'000) {
  detail::require_validated(m);
  if (!m.exact) throw Error(errk::NotSupported, "lap counts are exact-mode");
  detail::LapState state;
  for (size_t j = 0; j < m.pieces.size(); ++j)
    state[detail::LapKey{j, m.pieces[j].lo, m.pieces[j].hi}] = 1;
  std::vector<Integer> counts;
  size_t used = 0;
  for (size_t n = 1; n <= nmax; ++n) {
    Integer total = 0;
    for (const auto& [k, c] : state) total += c;
    counts.push_back(total);
    used += state.size();
    if (used > budget) throw Error(errk::BudgetExceeded, "cylinder state budget exceeded");
    if (n < nmax) detail::lap_step(m, state, budget - used);
  }
  return counts;
}

struct EntropyEstimate {
  double estimate = 0;            // (1/n) log count at the deepest level
  double upper = 0;               // min over n, valid by submultiplicativity
  double rate = 0;                // log of the last count quotient; the quotient
                                  // forgets the multiplicative constant in front
                                  // of the growth, so it settles much earlier
  std::vector<double> sequence;   // (1/n) log count for n = 1..nmax
};

inline EntropyEstimate entropy_lap(const IntervalMap& m, size_t nmax,
                                   size_t budget = 10'000'000) {
  auto counts = m.exact ? lap_numbers(m, nmax, budget)
                        : lap_numbers_numeric(m, nmax, budget);
  EntropyEstimate e;
  e.upper = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < counts.size(); ++k) {
    double v = log_integer(counts[k]) / double(k + 1);
    e.sequence.push_back(v);
    if (v < e.upper) e.upper = v;
  }
  e.estimate = e.sequence.back();
  e.rate = counts.size() < 2 ? e.estimate
                             : log_integer(counts.back()) - log_integer(counts[counts.size() - 2]);
  return e;
}

/*
 * Growth rate of the total length of the iterate images: (1/n) log of
 * sum over nonempty n-cylinders A of |f^n(A)|, computed exactly from the
 * significant intervals.  Converges to the same limit as entropy_lap.
 */
struct LengthGrowth {
  double estimate = 0;
  double rate = 0;                // log of the last sum quotient, see EntropyEstimate
  std::vector<double> sequence;
};

inline LengthGrowth length_growth_numeric(const IntervalMap& m, size_t nmax,
                                          size_t budget = 10'000'000) {
  detail::require_validated(m);
  auto state = detail::numeric_initial(m);
  LengthGrowth g;
  size_t used = 0;
  double prev_log = 0, last_log = 0;
  for (size_t n = 1; n <= nmax; ++n) {
    double total = 0;
    for (const auto& c : state) {
      const auto& br = m.branches[m.pieces[c.piece].first_branch];
      total += std::abs(detail::rule_apply_d(br.rule, c.hi) -
                        detail::rule_apply_d(br.rule, c.lo));
    }
    prev_log = last_log;
    last_log = std::log(total);
    g.sequence.push_back(last_log / double(n));
    used += state.size();
    if (used > budget) throw Error(errk::BudgetExceeded, "cylinder state budget exceeded");
    if (n < nmax) detail::numeric_step(m, state, budget - used);
  }
  g.estimate = g.sequence.back();
  g.rate = nmax < 2 ? g.estimate : last_log - prev_log;
  return g;
}

inline LengthGrowth length_growth(const IntervalMap& m, size_t nmax,
                                  size_t budget = 10'000'000) {
  detail::require_validated(m);
  if (!m.exact) return length_growth_numeric(m, nmax, budget);
  detail::LapState state;
  for (size_t j = 0; j < m.pieces.size(); ++j)
    state[detail::LapKey{j, m.pieces[j].lo, m.pieces[j].hi}] = 1;
  LengthGrowth g;
  size_t used = 0;
  double prev_log = 0, last_log = 0;
  for (size_t n = 1; n <= nmax; ++n) {
    Number total(0);
    for (const auto& [k, c] : state) {
      ExactInterval img = detail::piece_image(m, k.piece, {k.lo, k.hi});
      total = total + Number(Rational(c)) * (img.hi - img.lo);
    }
    prev_log = last_log;
    last_log = std::log(total.to_double());
    g.sequence.push_back(last_log / double(n));
    used += state.size();
    if (used > budget) throw Error(errk::BudgetExceeded, "cylinder state budget exceeded");
    if (n < nmax) detail::lap_step(m, state, budget - used);
  }
  g.estimate = g.sequence.back();
  g.rate = nmax < 2 ? g.estimate : last_log - prev_log;
  return g;
}

}  // namespace kneadlab
