#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "kneadlab/diagram.hpp"
#include "kneadlab/horseshoe.hpp"
#include "kneadlab/kneading.hpp"
#include "kneadlab/laps.hpp"
#include "kneadlab/map_io.hpp"
#include "kneadlab/markov_shift.hpp"
#include "kneadlab/periodics.hpp"
#include "kneadlab/poly.hpp"

namespace kneadlab {

inline constexpr const char* kneadlab_version = "0.1.0";
inline constexpr const char* report_schema = "kneadlab/report-v1";
inline constexpr const char* diagram_schema = "kneadlab/diagram-v1";

inline Json seq_to_json(const SymbolSeq& s) {
  Json o;
  o["head"] = s.head;
  if (s.truncated) {
    o["truncated"] = true;
    o["known"] = s.head.size();
  } else {
    o["cycle"] = s.cycle;
  }
  o["text"] = s.str();
  return o;
}

/* germ names follow the natural partition: piece j is bounded by the sided
   endpoints c{j}+ and c{j+1}- */
inline Json kneading_to_json(const KneadingData& kd) {
  Json o;
  o["npieces"] = kd.npieces;
  o["signs"] = kd.sign;
  o["exact"] = kd.exact;
  Json gs = Json::array();
  for (size_t j = 0; j < kd.npieces; ++j) {
    Json lo = seq_to_json(kd.lower(j));
    lo["germ"] = "c" + std::to_string(j) + "+";
    gs.push_back(std::move(lo));
    Json hi = seq_to_json(kd.upper(j));
    hi["germ"] = "c" + std::to_string(j + 1) + "-";
    gs.push_back(std::move(hi));
  }
  o["sequences"] = std::move(gs);
  if (!kd.notes.empty()) o["notes"] = kd.notes;
  return o;
}

inline Json diagram_to_json(const MarkovDiagram& d) {
  Json o;
  o["schema"] = diagram_schema;
  o["depth_cap"] = d.depth_cap;
  o["complete"] = d.complete;
  Json vs = Json::array();
  for (size_t u = 0; u < d.nvertices(); ++u) {
    Json v;
    v["id"] = u;
    v["word"] = d.words[u];
    v["depth"] = d.words[u].size();
    v["frontier"] = bool(d.frontier[u]);
    if (u < d.scc_id.size()) v["scc"] = d.scc_id[u];
    vs.push_back(std::move(v));
  }
  o["vertices"] = std::move(vs);
  Json as = Json::array();
  for (size_t u = 0; u < d.nvertices(); ++u)
    for (const auto& [sym, v] : d.arrows[u])
      as.push_back(Json{{"from", u}, {"symbol", sym}, {"to", v}});
  o["arrows"] = std::move(as);
  return o;
}

inline Json diagram_summary_json(const MarkovDiagram& d) {
  Json o;
  o["nvertices"] = d.nvertices();
  o["narrows"] = d.narrows();
  o["complete"] = d.complete;
  o["depth_cap"] = d.depth_cap;
  size_t fr = 0;
  for (char f : d.frontier) fr += f ? 1 : 0;
  o["frontier"] = fr;
  int ncomp = 0;
  for (int c : d.scc_id) ncomp = std::max(ncomp, c + 1);
  o["scc_count"] = ncomp;
  return o;
}

inline Json qpoly_to_json(const QPoly& p) {
  Json a = Json::array();
  for (const auto& c : p) a.push_back(rational_str(c));
  return a;
}

inline Json zeta_to_json(const RationalFunction& z, size_t terms) {
  Json o;
  o["numerator"] = qpoly_to_json(z.num);
  o["denominator"] = qpoly_to_json(z.den);
  o["series"] = qpoly_to_json(z.series(terms + 1));
  return o;
}

/* CLI-facing class names; the library enum keeps lower-case prose */
inline std::string class_name(const Classification& c) {
  if (c.spr) return "SPR";
  switch (c.mode) {
    case Recurrence::transient: return "Transient";
    case Recurrence::null_recurrent: return "NullRecurrent";
    default: return "PositiveRecurrent";
  }
}

inline Json classification_to_json(const Classification& c) {
  Json o;
  o["class"] = class_name(c);
  o["mode"] = recurrence_str(c.mode);
  o["spr"] = c.spr;
  o["certainty"] = c.confidence == Confidence::certified ? "Certified" : "DepthLimited";
  if (std::isfinite(c.radius)) o["radius"] = c.radius;
  o["entropy"] = c.entropy;
  o["exact"] = c.exact;
  o["first_return_sum"] = rational_str(c.F_partial);
  o["first_return_value"] = c.F_value;
  o["mean_return_partial"] = c.mean_partial;
  o["terms"] = c.terms;
  if (!c.note.empty()) o["note"] = c.note;
  return o;
}

inline Json measure_to_json(const MarkovDiagram& d, const MaxMeasure& mu) {
  Json o;
  o["lambda"] = mu.lambda;
  o["entropy"] = mu.entropy;
  Json core = Json::array();
  for (size_t u = 0; u < mu.core.size(); ++u)
    if (mu.core[u]) core.push_back(word_str(d.words[u]));
  o["core"] = std::move(core);
  Json cyl;
  int nsym = 0;
  for (const auto& w : d.words)
    for (int s : w) nsym = std::max(nsym, s + 1);
  for (int s = 0; s < nsym; ++s)
    cyl[std::to_string(s)] = measure_word(d, mu, Word{s});
  o["cylinder_mass"] = std::move(cyl);
  return o;
}

/* the headline h is the last count quotient, which sheds the constant in
   front of the growth; the depth-n average and the certified upper bound
   ride along as separate fields */
inline Json entropy_estimate_json(const EntropyEstimate& e, size_t n) {
  Json o;
  o["method"] = "lap";
  o["h"] = e.rate;
  o["average"] = e.estimate;
  o["upper"] = e.upper;
  o["n"] = n;
  return o;
}

inline Json length_growth_json(const LengthGrowth& g, size_t n) {
  Json o;
  o["method"] = "length";
  o["h"] = g.rate;
  o["average"] = g.estimate;
  o["n"] = n;
  return o;
}

inline Json graph_entropy_json(const GraphEntropy& h) {
  Json o;
  o["method"] = "diagram";
  o["h"] = h.value;
  o["exact"] = h.exact;
  if (h.exact) {
    o["lower"] = h.lo;
    o["upper"] = h.hi;
  }
  o["component_size"] = h.component_size;
  return o;
}

namespace detail {

template <typename F>
void report_section(Json& r, const std::string& name, F&& body) {
  try {
    r["sections"][name] = body();
  } catch (const Error& e) {
    r["errors"][name] = Json{{"kind", e.kind()}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r["errors"][name] = Json{{"kind", "Internal"}, {"message", e.what()}};
  }
}

/* vertex inside the component attaining the graph entropy */
inline size_t entropy_vertex(const ShiftGraph& g, const GraphEntropy& h) {
  if (h.component < 0) return 0;
  SccSplit s = scc_split(g);
  const auto& mem = s.members[size_t(h.component)];
  return *std::min_element(mem.begin(), mem.end());
}

}  // namespace detail

/*
 * One self-contained analysis document: kneading data, entropy by the three
 * methods with mutual deviations, diagram summary, classification, maximum
 * entropy measures, and zeta heads.  Sections that cannot run on the given
 * map land in "errors" with a kind tag instead of aborting the bundle.
 */
inline Json report_bundle(const IntervalMap& m, size_t depth = 30) {
  Json r;
  r["schema"] = report_schema;
  r["tool"] = "kneadlab";
  r["version"] = kneadlab_version;
  r["map"] = map_to_json(m);
  r["map_hash"] = map_hash_hex(m);
  r["depth"] = depth;
  r["sections"] = Json::object();
  r["errors"] = Json::object();

  KneadingData kd;
  bool have_kd = false;
  detail::report_section(r, "kneading", [&]() {
    kd = kneading(m, depth);
    have_kd = true;
    return kneading_to_json(kd);
  });

  size_t nlap = std::min<size_t>(depth, 30);
  double h_lap = std::nan(""), h_len = std::nan(""), h_dia = std::nan("");
  detail::report_section(r, "entropy.lap", [&]() {
    size_t n = m.exact ? nlap : std::min<size_t>(nlap, 18);
    EntropyEstimate e = entropy_lap(m, n);
    h_lap = e.rate;
    return entropy_estimate_json(e, n);
  });
  detail::report_section(r, "entropy.length", [&]() {
    size_t n = m.exact ? nlap : std::min<size_t>(nlap, 18);
    LengthGrowth g = length_growth(m, n);
    h_len = g.rate;
    return length_growth_json(g, n);
  });

  MarkovDiagram d;
  bool have_d = false;
  if (have_kd && kd.exact) {
    detail::report_section(r, "diagram", [&]() {
      d = build_diagram_pmm(kd, depth > 30 ? depth : 64);
      have_d = true;
      return diagram_summary_json(d);
    });
  } else {
    r["errors"]["diagram"] =
        Json{{"kind", "TruncatedKneading"},
             {"message", "kneading data is truncated; no exact diagram"}};
  }

  if (have_d) {
    ShiftGraph g = from_diagram(d);
    detail::report_section(r, "entropy.diagram", [&]() {
      GraphEntropy h = markov_entropy(g);
      h_dia = h.value;
      return graph_entropy_json(h);
    });
    detail::report_section(r, "classification", [&]() {
      GraphEntropy h = markov_entropy(g);
      return classification_to_json(classify(g, detail::entropy_vertex(g, h), depth));
    });
    detail::report_section(r, "max_measures", [&]() {
      auto ms = max_measures(d);
      Json a = Json::array();
      for (const auto& mu : ms) a.push_back(measure_to_json(d, mu));
      return Json{{"count", ms.size()}, {"measures", a}};
    });
    detail::report_section(r, "zeta", [&]() {
      Json o;
      o["complete"] = d.complete;
      if (d.complete) o["semilocal"] = zeta_to_json(semilocal_zeta(g), 12);
      o["series"] = qpoly_to_json(zeta_series_from_counts(fix_counts_diagram(d, 12), 12));
      if (!d.complete) o["note"] = "series counts paths of the truncated diagram";
      return o;
    });
  } else {
    Json gap{{"kind", "TruncatedKneading"},
             {"message", "diagram unavailable for this map"}};
    if (r["errors"].contains("diagram")) gap = r["errors"]["diagram"];
    for (const char* s : {"entropy.diagram", "classification", "max_measures", "zeta"})
      r["errors"][s] = gap;
  }

  Json dev = Json::object();
  if (!std::isnan(h_lap) && !std::isnan(h_len)) dev["lap_length"] = std::fabs(h_lap - h_len);
  if (!std::isnan(h_lap) && !std::isnan(h_dia)) dev["lap_diagram"] = std::fabs(h_lap - h_dia);
  if (!std::isnan(h_len) && !std::isnan(h_dia)) dev["length_diagram"] = std::fabs(h_len - h_dia);
  r["sections"]["entropy.deviations"] = std::move(dev);
  return r;
}

}  // namespace kneadlab
