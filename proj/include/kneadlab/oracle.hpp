#pragma once

#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "kneadlab/errors.hpp"
#include "kneadlab/kneading.hpp"
#include "kneadlab/symbols.hpp"

namespace kneadlab {

struct FollowerCmp {
  enum Kind { equal, distinct, undecidable } kind = undecidable;
  Word witness;  // admissible after exactly one of the two words (distinct only)
};

/*
 * A subshift presented by its admissibility predicate.  admits() must be
 * factorial: subwords of admissible words are admissible.  Sources that know
 * their follower sets exactly override follower_exact; everyone else gets
 * the probe-based comparison in follower_equal below.
 */
class SubshiftOracle {
 public:
  virtual ~SubshiftOracle() = default;
  virtual size_t alphabet_size() const = 0;
  virtual Tri admits(const Word& w) const = 0;
  virtual std::optional<FollowerCmp> follower_exact(const Word&, const Word&) const {
    return std::nullopt;
  }
};

/* subshift of a piecewise monotone map, via its kneading data; follower sets
   are decided exactly from the bounding itineraries of the word interval */
class KneadingOracle : public SubshiftOracle {
 public:
  explicit KneadingOracle(KneadingData kd) : kd_(std::move(kd)) {}

  size_t alphabet_size() const override { return kd_.npieces; }
  Tri admits(const Word& w) const override { return word_admissible(kd_, w); }

  /* the word interval after reading w: both bounds, or nothing if the word
     dies or the data is too shallow */
  std::optional<SymInterval> word_interval(const Word& w, Tri* status = nullptr) const {
    if (status) *status = Tri::yes;
    if (w.empty()) {
      if (status) *status = Tri::no;
      return std::nullopt;
    }
    SymInterval iv = piece_interval(size_t(w[0]));
    for (size_t k = 1; k < w.size(); ++k) {
      ExtendResult r = extend(kd_, iv, size_t(w[k]));
      if (r.ok != Tri::yes) {
        if (status) *status = r.ok;
        return std::nullopt;
      }
      iv = r.next;
    }
    return iv;
  }

  std::optional<FollowerCmp> follower_exact(const Word& a, const Word& b) const override {
    Tri sa, sb;
    auto ia = word_interval(a, &sa);
    auto ib = word_interval(b, &sb);
    if (sa == Tri::undecidable || sb == Tri::undecidable) return FollowerCmp{FollowerCmp::undecidable, {}};
    if (!ia || !ib) return FollowerCmp{(!ia && !ib) ? FollowerCmp::equal : FollowerCmp::distinct, {}};
    Cmp lo = compare(kd_, ia->lo, ib->lo);
    Cmp hi = compare(kd_, ia->hi, ib->hi);
    if (lo == Cmp::undecidable || hi == Cmp::undecidable)
      return FollowerCmp{FollowerCmp::undecidable, {}};
    if (lo == Cmp::equal && hi == Cmp::equal) return FollowerCmp{FollowerCmp::equal, {}};
    return FollowerCmp{FollowerCmp::distinct, {}};
  }

  const KneadingData& data() const { return kd_; }

 private:
  KneadingData kd_;
};

/* subshift of finite type from a 0/1 transition matrix; followers are a
   function of the last symbol's row */
class SftOracle : public SubshiftOracle {
 public:
  explicit SftOracle(std::vector<std::vector<int>> mat) : mat_(std::move(mat)) {
    for (const auto& row : mat_)
      if (row.size() != mat_.size()) throw Error(errk::BadSpec, "matrix not square");
  }

  size_t alphabet_size() const override { return mat_.size(); }

  Tri admits(const Word& w) const override {
    for (int s : w)
      if (s < 0 || size_t(s) >= mat_.size()) return Tri::no;
    for (size_t k = 0; k + 1 < w.size(); ++k)
      if (!mat_[size_t(w[k])][size_t(w[k + 1])]) return Tri::no;
    return Tri::yes;
  }

  std::optional<FollowerCmp> follower_exact(const Word& a, const Word& b) const override {
    if (a.empty() || b.empty()) return std::nullopt;
    size_t ra = size_t(a.back()), rb = size_t(b.back());
    if (mat_[ra] == mat_[rb]) return FollowerCmp{FollowerCmp::equal, {}};
    for (size_t j = 0; j < mat_.size(); ++j)
      if (mat_[ra][j] != mat_[rb][j])
        return FollowerCmp{FollowerCmp::distinct, {int(j)}};
    return FollowerCmp{FollowerCmp::equal, {}};
  }

  const std::vector<std::vector<int>>& matrix() const { return mat_; }

 private:
  std::vector<std::vector<int>> mat_;
};

/* language avoiding a finite list of forbidden factors */
class ForbiddenWordsOracle : public SubshiftOracle {
 public:
  ForbiddenWordsOracle(size_t nsym, std::vector<Word> forbidden)
      : nsym_(nsym), forbidden_(std::move(forbidden)) {}

  size_t alphabet_size() const override { return nsym_; }

  Tri admits(const Word& w) const override {
    for (int s : w)
      if (s < 0 || size_t(s) >= nsym_) return Tri::no;
    for (const auto& f : forbidden_) {
      if (f.size() > w.size()) continue;
      for (size_t i = 0; i + f.size() <= w.size(); ++i)
        if (std::equal(f.begin(), f.end(), w.begin() + i)) return Tri::no;
    }
    return Tri::yes;
  }

 private:
  size_t nsym_;
  std::vector<Word> forbidden_;
};

/* arbitrary predicate, mostly for tests and hand-built languages */
class LambdaOracle : public SubshiftOracle {
 public:
  LambdaOracle(size_t nsym, std::function<Tri(const Word&)> fn)
      : nsym_(nsym), fn_(std::move(fn)) {}
  size_t alphabet_size() const override { return nsym_; }
  Tri admits(const Word& w) const override { return fn_(w); }

 private:
  size_t nsym_;
  std::function<Tri(const Word&)> fn_;
};

/*
 * Follower-set comparison.  Exact when the oracle provides a decision
 * procedure; otherwise breadth-first probing of common extensions up to
 * probe_depth (and a node budget), returning a witness on the first
 * disagreement.  "equal" from the probe path means equal at this depth.
 */
inline FollowerCmp follower_equal(const SubshiftOracle& orc, const Word& w1, const Word& w2,
                                  size_t probe_depth, size_t node_budget = 1 << 16) {
  if (auto ex = orc.follower_exact(w1, w2)) return *ex;
  bool saw_undecided = false;
  std::deque<Word> queue{{}};
  size_t nodes = 0;
  while (!queue.empty()) {
    Word e = std::move(queue.front());
    queue.pop_front();
    if (e.size() >= probe_depth) continue;
    for (size_t b = 0; b < orc.alphabet_size(); ++b) {
      Word ext = e;
      ext.push_back(int(b));
      Word a = w1, c = w2;
      a.insert(a.end(), ext.begin(), ext.end());
      c.insert(c.end(), ext.begin(), ext.end());
      Tri t1 = orc.admits(a), t2 = orc.admits(c);
      if (t1 == Tri::undecidable || t2 == Tri::undecidable) {
        saw_undecided = true;
        continue;
      }
      if (t1 != t2) return FollowerCmp{FollowerCmp::distinct, ext};
      if (t1 == Tri::yes) {
        if (++nodes > node_budget) return FollowerCmp{FollowerCmp::undecidable, {}};
        queue.push_back(std::move(ext));
      }
    }
  }
  return saw_undecided ? FollowerCmp{FollowerCmp::undecidable, {}}
                       : FollowerCmp{FollowerCmp::equal, {}};
}

/*
 * Minimal form of an admissible word: its shortest suffix with the same
 * follower set.  Removing one more leading symbol from the result strictly
 * enlarges the follower set.
 */
inline Word minimal_form(const SubshiftOracle& orc, const Word& w, size_t probe_depth) {
  if (w.empty()) return w;
  for (size_t k = 1; k < w.size(); ++k) {
    Word suf(w.end() - long(k), w.end());
    FollowerCmp c = follower_equal(orc, suf, w, probe_depth);
    if (c.kind == FollowerCmp::undecidable)
      throw Error(errk::UndecidableAtDepth,
                  "minimal form of '" + word_str(w) + "' undecided at probe depth");
    if (c.kind == FollowerCmp::equal) return suf;
  }
  return w;
}

}  // namespace kneadlab
