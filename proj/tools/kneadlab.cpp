#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "kneadlab/report.hpp"

using namespace kneadlab;

namespace {

void emit(const Json& o) { std::cout << o.dump(2) << "\n"; }

/* "0110", "0 1 1 0", and "0,1,1,0" all denote the same word */
Word parse_word(const std::string& s) {
  Word w;
  if (s.find_first_of(", ") != std::string::npos) {
    std::string tok;
    auto flush = [&]() {
      if (tok.empty()) return;
      w.push_back(std::stoi(tok));
      tok.clear();
    };
    for (char c : s) {
      if (c == ',' || c == ' ')
        flush();
      else
        tok += c;
    }
    flush();
  } else {
    for (char c : s) {
      if (c < '0' || c > '9') throw Error(errk::BadSpec, "word symbols are digits");
      w.push_back(c - '0');
    }
  }
  if (w.empty()) throw Error(errk::BadSpec, "empty word");
  return w;
}

std::vector<Integer> lap_counts_any(const IntervalMap& m, size_t n, size_t budget) {
  return m.exact ? lap_numbers(m, n, budget) : lap_numbers_numeric(m, n, budget);
}

MarkovDiagram diagram_of(const IntervalMap& m, size_t cap) {
  KneadingData kd = kneading(m, 2 * cap);
  return build_diagram_pmm(kd, cap);
}

std::ostream& sink(std::ofstream& file, const std::string& path) {
  if (path == "-") return std::cout;
  file.open(path);
  if (!file) throw Error(errk::BadSpec, "cannot write '" + path + "'");
  return file;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"kneadlab: kneading theory and entropy of piecewise monotone interval maps"};
  app.set_version_flag("--version", kneadlab_version);
  app.require_subcommand(1);
  app.footer("Maps are JSON files, '-' for standard input, or builtin:family:param\n"
             "(families tent, beta, quadratic, full; e.g. builtin:tent:3/2,\n"
             "builtin:beta:golden).  KNEADLAB_THREADS caps the worker count.");

  int rc = 0;
  std::string map_spec, word_text, dot_path, method = "lap", vertex_word;
  size_t depth = 64, cap = 64, nsteps = 25, terms = 12, tmax = 6, eq_depth = 3;
  size_t budget = 10'000'000;
  long margin = 64;
  std::optional<long long> vertex;
  std::string radius_text;
  bool csv = false, want_dot = false, json_flag = false;

  auto add_map = [&](CLI::App* sub) {
    sub->add_option("--map", map_spec, "map source")->required();
  };

  auto* c_validate = app.add_subcommand("validate", "parse a map spec and list its pieces");
  add_map(c_validate);
  c_validate->callback([&]() {
    IntervalMap m = load_map(map_spec);
    Json o;
    o["ok"] = true;
    o["mode"] = m.exact ? "exact" : "numeric";
    o["label"] = m.label;
    o["npieces"] = m.npieces();
    o["nbranches"] = m.branches.size();
    Json ps = Json::array();
    for (const auto& p : m.pieces)
      ps.push_back(Json{{"lo", number_to_json(p.lo, m.exact)},
                        {"hi", number_to_json(p.hi, m.exact)},
                        {"increasing", p.increasing}});
    o["pieces"] = std::move(ps);
    o["map_hash"] = map_hash_hex(m);
    emit(o);
  });

  auto* c_knead = app.add_subcommand("kneading", "boundary germ itineraries and signs");
  add_map(c_knead);
  c_knead->add_option("--depth", depth, "orbit depth before truncation");
  c_knead->callback([&]() {
    IntervalMap m = load_map(map_spec);
    KneadingData kd = kneading(m, depth);
    Json o = kneading_to_json(kd);
    o["map_hash"] = map_hash_hex(m);
    o["depth"] = depth;
    emit(o);
    if (!kd.exact) rc = 2;
  });

  auto* c_adm = app.add_subcommand("admissible", "test a word against the kneading order");
  add_map(c_adm);
  c_adm->add_option("word", word_text, "symbol word, e.g. 0110 or '0 1 1 0'")->required();
  c_adm->add_option("--depth", depth, "kneading depth");
  c_adm->callback([&]() {
    IntervalMap m = load_map(map_spec);
    Word w = parse_word(word_text);
    KneadingData kd = kneading(m, depth);
    Tri t = word_admissible(kd, w);
    Json o;
    o["word"] = w;
    o["admissible"] = tri_str(t);
    o["map_hash"] = map_hash_hex(m);
    o["depth"] = depth;
    emit(o);
    if (t == Tri::undecidable) rc = 2;
  });

  auto* c_ent = app.add_subcommand("entropy", "topological entropy estimates");
  add_map(c_ent);
  c_ent->add_option("--method", method, "lap, length, or diagram")
      ->check(CLI::IsMember({"lap", "length", "diagram"}));
  c_ent->add_option("--n", nsteps, "subdivision depth for lap and length");
  c_ent->add_option("--depth", cap, "diagram depth cap");
  c_ent->add_option("--budget", budget, "cylinder state budget");
  c_ent->add_flag("--csv", csv, "lap numbers as CSV (n, count)");
  c_ent->callback([&]() {
    IntervalMap m = load_map(map_spec);
    if (csv) {
      if (method != "lap") throw Error(errk::BadSpec, "CSV output is for lap numbers");
      auto counts = lap_counts_any(m, nsteps, budget);
      std::cout << "n,count\n";
      for (size_t k = 0; k < counts.size(); ++k)
        std::cout << k + 1 << "," << counts[k].get_str() << "\n";
      return;
    }
    Json o;
    if (method == "lap") {
      o = entropy_estimate_json(entropy_lap(m, nsteps, budget), nsteps);
    } else if (method == "length") {
      o = length_growth_json(length_growth(m, nsteps, budget), nsteps);
    } else {
      MarkovDiagram d = diagram_of(m, cap);
      o = graph_entropy_json(markov_entropy(from_diagram(d)));
      o["complete"] = d.complete;
      if (!d.complete) rc = 2;
    }
    o["map_hash"] = map_hash_hex(m);
    emit(o);
  });

  auto* c_dia = app.add_subcommand("diagram", "Markov diagram construction and export");
  add_map(c_dia);
  c_dia->add_option("--depth", cap, "depth cap");
  c_dia->add_option("--dot", dot_path, "write DOT here ('-' for stdout)");
  c_dia->add_flag("--json", json_flag, "full JSON export (default)");
  c_dia->callback([&]() {
    want_dot = c_dia->count("--dot") > 0;
    IntervalMap m = load_map(map_spec);
    MarkovDiagram d = diagram_of(m, cap);
    if (want_dot) {
      std::ofstream file;
      sink(file, dot_path) << diagram_dot(d);
    } else {
      Json o = diagram_to_json(d);
      o["map_hash"] = map_hash_hex(m);
      emit(o);
    }
    if (!d.complete) rc = 2;
  });

  auto* c_cls = app.add_subcommand("classify", "recurrence mode and SPR certificate");
  add_map(c_cls);
  c_cls->add_option("--vertex", vertex, "diagram vertex id (default: entropy carrier)");
  c_cls->add_option("--depth", depth, "first-return series depth");
  c_cls->add_option("--cap", cap, "diagram depth cap");
  c_cls->add_option("--radius", radius_text, "exact convergence radius override, p/q");
  c_cls->callback([&]() {
    IntervalMap m = load_map(map_spec);
    MarkovDiagram d = diagram_of(m, cap);
    ShiftGraph g = from_diagram(d);
    size_t v = vertex ? size_t(*vertex)
                      : detail::entropy_vertex(g, markov_entropy(g));
    if (v >= g.nvertices()) throw Error(errk::BadSpec, "vertex out of range");
    std::optional<Rational> radius;
    if (!radius_text.empty()) radius = parse_number_text(radius_text);
    Classification c = classify(g, v, depth, radius);
    Json o = classification_to_json(c);
    o["vertex"] = v;
    o["vertex_word"] = word_str(d.words[v]);
    o["diagram_complete"] = d.complete;
    o["map_hash"] = map_hash_hex(m);
    o["depth"] = depth;
    emit(o);
    if (c.confidence != Confidence::certified) rc = 2;
  });

  auto* c_max = app.add_subcommand("maxmeasure", "measures of maximal entropy");
  add_map(c_max);
  c_max->add_option("--cap", cap, "diagram depth cap");
  c_max->add_flag("--json", json_flag, "JSON output (default)");
  c_max->callback([&]() {
    IntervalMap m = load_map(map_spec);
    MarkovDiagram d = diagram_of(m, cap);
    if (!d.complete) {
      std::cerr << "diagram truncated at depth " << cap
                << "; no certified measure\n";
      rc = 2;
      return;
    }
    auto ms = max_measures(d);
    Json o;
    o["count"] = ms.size();
    Json a = Json::array();
    for (const auto& mu : ms) a.push_back(measure_to_json(d, mu));
    o["measures"] = std::move(a);
    o["map_hash"] = map_hash_hex(m);
    emit(o);
  });

  auto* c_zeta = app.add_subcommand("zeta", "zeta functions of the diagram shift");
  add_map(c_zeta);
  c_zeta->add_option("--cap", cap, "diagram depth cap");
  c_zeta->add_option("--vertex", vertex, "also report the local zeta at this vertex");
  c_zeta->add_option("--terms", terms, "series head length");
  c_zeta->callback([&]() {
    IntervalMap m = load_map(map_spec);
    MarkovDiagram d = diagram_of(m, cap);
    if (!d.complete) {
      std::cerr << "diagram truncated at depth " << cap
                << "; determinant formula needs the whole diagram\n";
      rc = 2;
      return;
    }
    ShiftGraph g = from_diagram(d);
    Json o;
    o["semilocal"] = zeta_to_json(semilocal_zeta(g), terms);
    if (vertex) {
      if (size_t(*vertex) >= g.nvertices())
        throw Error(errk::BadSpec, "vertex out of range");
      o["local"] = zeta_to_json(local_zeta(g, size_t(*vertex)), terms);
      o["vertex"] = *vertex;
    }
    o["terms"] = terms;
    o["map_hash"] = map_hash_hex(m);
    emit(o);
  });

  auto* c_zmap = app.add_subcommand("zeta-map", "Artin-Mazur zeta from periodic counts");
  add_map(c_zmap);
  c_zmap->add_option("--terms", terms, "series head length");
  c_zmap->add_option("--method", method, "direct or diagram")
      ->check(CLI::IsMember({"direct", "diagram", "lap"}));
  c_zmap->add_option("--cap", cap, "diagram depth cap");
  c_zmap->callback([&]() {
    if (method == "lap") method = "direct";
    IntervalMap m = load_map(map_spec);
    std::vector<Integer> fix;
    bool certified = true;
    if (method == "direct") {
      KneadingData kd = kneading(m, 4 * terms);
      PeriodicCensus pc = fix_counts_symbolic(kd, terms);
      fix = pc.counts;
      for (size_t u : pc.undecided) certified = certified && u == 0;
    } else {
      MarkovDiagram d = diagram_of(m, cap);
      fix = fix_counts_diagram(d, terms);
      certified = d.complete;
    }
    Json o;
    o["method"] = method;
    o["terms"] = terms;
    Json fx = Json::array();
    for (const auto& f : fix) fx.push_back(f.get_str());
    o["fix"] = std::move(fx);
    o["series"] = qpoly_to_json(zeta_series_from_counts(fix, terms));
    o["certified"] = certified;
    o["map_hash"] = map_hash_hex(m);
    emit(o);
    if (!certified) rc = 2;
  });

  auto* c_per = app.add_subcommand("periodic", "periodic point and orbit counts");
  add_map(c_per);
  c_per->add_option("--n", nsteps, "count periods 1..n")->required();
  c_per->add_option("--method", method, "direct or diagram")
      ->check(CLI::IsMember({"direct", "diagram", "lap"}));
  c_per->add_option("--cap", cap, "diagram depth cap");
  c_per->add_option("--depth", depth, "kneading depth for the direct method");
  c_per->add_flag("--csv", csv, "CSV output (n, fix)");
  c_per->callback([&]() {
    if (method == "lap") method = "direct";
    IntervalMap m = load_map(map_spec);
    std::vector<Integer> fix;
    std::vector<size_t> undecided;
    bool certified = true;
    if (method == "direct") {
      KneadingData kd = kneading(m, std::max(depth, 4 * nsteps));
      PeriodicCensus pc = fix_counts_symbolic(kd, nsteps);
      fix = pc.counts;
      for (size_t k = 0; k < pc.undecided.size(); ++k)
        if (pc.undecided[k] > 0) undecided.push_back(k + 1);
      certified = undecided.empty();
    } else {
      MarkovDiagram d = diagram_of(m, cap);
      fix = fix_counts_diagram(d, nsteps);
      certified = d.complete;
    }
    if (csv) {
      std::cout << "n,fix\n";
      for (size_t k = 0; k < fix.size(); ++k)
        std::cout << k + 1 << "," << fix[k].get_str() << "\n";
      if (!certified) rc = 2;
      return;
    }
    Json o;
    o["method"] = method;
    o["n"] = nsteps;
    Json fx = Json::array();
    for (const auto& f : fix) fx.push_back(f.get_str());
    o["fix"] = std::move(fx);
    if (certified) {
      Json ox = Json::array();
      for (const auto& c : orbit_counts(fix)) ox.push_back(c.get_str());
      o["orbits"] = std::move(ox);
    } else {
      o["undecided_periods"] = undecided;
    }
    o["certified"] = certified;
    o["map_hash"] = map_hash_hex(m);
    emit(o);
    if (!certified) rc = 2;
  });

  auto* c_eq = app.add_subcommand("equidistribution",
                                  "periodic orbits against the maximal measure");
  add_map(c_eq);
  c_eq->add_option("--n", nsteps, "orbit period")->required();
  c_eq->add_option("--depth", eq_depth, "cylinder depth");
  c_eq->add_option("--cap", cap, "diagram depth cap");
  c_eq->callback([&]() {
    IntervalMap m = load_map(map_spec);
    MarkovDiagram d = diagram_of(m, cap);
    if (!d.complete) {
      std::cerr << "diagram truncated; no certified measure to compare against\n";
      rc = 2;
      return;
    }
    MaxMeasure mu = max_measure(d);
    EquidistributionReport rep =
        periodic_equidistribution(d, mu, m.npieces(), nsteps, eq_depth);
    Json o;
    o["period"] = rep.period;
    o["depth"] = rep.depth;
    o["worst_deviation"] = rep.worst;
    o["worst_word"] = rep.worst_word;
    o["closed_walks"] = rep.total.get_str();
    o["lambda"] = mu.lambda;
    o["map_hash"] = map_hash_hex(m);
    emit(o);
  });

  auto* c_hs = app.add_subcommand("horseshoe", "entropy lower bound by covering families");
  add_map(c_hs);
  c_hs->add_option("--tmax", tmax, "largest iterate to search");
  c_hs->add_option("--margin", margin, "shrink margin denominator");
  c_hs->callback([&]() {
    IntervalMap m = load_map(map_spec);
    auto hs = find_horseshoe(m, tmax, margin);
    Json o;
    o["found"] = bool(hs);
    o["tmax"] = tmax;
    if (hs) {
      o["T"] = hs->T;
      o["intervals"] = [&]() {
        Json a = Json::array();
        for (const auto& iv : hs->intervals)
          a.push_back(Json::array(
              {number_to_json(iv.lo, m.exact), number_to_json(iv.hi, m.exact)}));
        return a;
      }();
      o["entropy_lower"] = hs->entropy();
    }
    EntropyEstimate e = entropy_lap(m, std::max<size_t>(tmax, 8));
    o["lap_upper"] = e.upper;
    o["map_hash"] = map_hash_hex(m);
    emit(o);
  });

  size_t report_depth = 30;
  auto* c_rep = app.add_subcommand("report", "combined analysis bundle");
  add_map(c_rep);
  c_rep->add_option("--depth", report_depth, "analysis depth");
  c_rep->callback([&]() {
    IntervalMap m = load_map(map_spec);
    emit(report_bundle(m, report_depth));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    bool depth_limited = e.kind() == errk::UndecidableAtDepth ||
                         e.kind() == errk::TolExceeded;
    return depth_limited ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return rc;
}
