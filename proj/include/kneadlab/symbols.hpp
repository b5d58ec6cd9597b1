#pragma once

#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace kneadlab {

using Word = std::vector<int>;

/*
 * One-sided symbol sequence over the pieces of a partition.  Either
 * eventually periodic (head followed by a repeating cycle, known in full)
 * or truncated (only head is known; the tail is undetermined).
 */
struct SymbolSeq {
  Word head;
  Word cycle;       // empty iff truncated
  bool truncated = true;

  static SymbolSeq finite(Word w) { return {std::move(w), {}, true}; }
  static SymbolSeq periodic(Word pre, Word per) {
    if (per.empty()) throw std::invalid_argument("empty cycle");
    return {std::move(pre), std::move(per), false};
  }

  bool known(size_t k) const { return !truncated || k < head.size(); }
  size_t known_length() const { return truncated ? head.size() : size_t(-1); }

  int at(size_t k) const {
    if (k < head.size()) return head[k];
    if (truncated) throw std::out_of_range("symbol index beyond known prefix");
    return cycle[(k - head.size()) % cycle.size()];
  }

  SymbolSeq shifted(size_t k) const {
    SymbolSeq r = *this;
    if (k <= head.size()) {
      r.head.erase(r.head.begin(), r.head.begin() + k);
      return r;
    }
    if (truncated) throw std::out_of_range("shift beyond known prefix");
    size_t j = (k - head.size()) % cycle.size();
    r.head.clear();
    r.cycle = Word(cycle.begin() + j, cycle.end());
    r.cycle.insert(r.cycle.end(), cycle.begin(), cycle.begin() + j);
    return r;
  }

  /* number of positions that must agree before two eventually periodic
     sequences are provably identical */
  static size_t equality_bound(const SymbolSeq& a, const SymbolSeq& b) {
    size_t h = std::max(a.head.size(), b.head.size());
    size_t l = std::lcm(a.cycle.size(), b.cycle.size());
    return h + l;
  }

  std::string str(size_t show = 0) const {
    std::string s;
    auto put = [&](int v) {
      if (!s.empty()) s += ' ';
      s += std::to_string(v);
    };
    for (int v : head) put(v);
    if (truncated) {
      s += s.empty() ? "..." : " ...";
    } else {
      s += s.empty() ? "(" : " (";
      bool first = true;
      for (int v : cycle) {
        if (!first) s += ' ';
        first = false;
        s += std::to_string(v);
      }
      s += ")*";
    }
    (void)show;
    return s;
  }
};

/* exact equality for fully known sequences; truncated ones compare by the
   caller via KneadingData::compare to get three-valued answers */
inline bool seq_equal(const SymbolSeq& a, const SymbolSeq& b) {
  if (a.truncated || b.truncated)
    throw std::domain_error("seq_equal needs fully known sequences");
  size_t n = SymbolSeq::equality_bound(a, b);
  for (size_t k = 0; k < n; ++k)
    if (a.at(k) != b.at(k)) return false;
  return true;
}

inline std::string word_str(const Word& w) {
  std::string s;
  for (int v : w) {
    if (!s.empty()) s += '.';
    s += std::to_string(v);
  }
  return s;
}

}  // namespace kneadlab
