#pragma once

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "kneadlab/errors.hpp"
#include "kneadlab/interval_map.hpp"

namespace kneadlab {

using Json = nlohmann::json;

/* accepts "p/q", plain integers, and decimal literals like "1.5" (exact) */
inline Rational parse_number_text(const std::string& s) {
  auto dot = s.find('.');
  if (dot == std::string::npos) {
    try {
      return parse_rational(s);
    } catch (const std::invalid_argument& e) {
      throw Error(errk::BadSpec, e.what());
    }
  }
  std::string digits = s.substr(0, dot) + s.substr(dot + 1);
  size_t frac = s.size() - dot - 1;
  if (digits.empty() || frac == 0) throw Error(errk::BadSpec, "bad decimal: '" + s + "'");
  Rational q;
  try {
    q = parse_rational(digits);
  } catch (const std::invalid_argument& e) {
    throw Error(errk::BadSpec, e.what());
  }
  Integer den(1);
  for (size_t i = 0; i < frac; ++i) den *= 10;
  Rational r(q.get_num(), den);
  r.canonicalize();
  return r;
}

namespace detail {

inline bool same_minpoly(const FieldPtr& f, const std::vector<Rational>& p) {
  return f->minpoly() == p;
}

/* one shared field object per distinct descriptor inside a document, so
   numbers parsed from the same file can be combined */
struct FieldRegistry {
  std::vector<FieldPtr> made;

  FieldPtr get(const std::vector<Rational>& minpoly, const Rational& lo,
               const Rational& hi) {
    if (same_minpoly(golden_field(), minpoly)) return golden_field();
    if (same_minpoly(sqrt2_field(), minpoly)) return sqrt2_field();
    for (const auto& f : made)
      if (same_minpoly(f, minpoly)) return f;
    try {
      made.push_back(std::make_shared<NumberField>(minpoly, lo, hi));
    } catch (const std::invalid_argument& e) {
      throw Error(errk::BadSpec, e.what());
    }
    return made.back();
  }
};

inline std::vector<Rational> rational_array(const Json& a) {
  if (!a.is_array()) throw Error(errk::BadSpec, "expected an array of rationals");
  std::vector<Rational> out;
  for (const auto& v : a) {
    if (v.is_string())
      out.push_back(parse_number_text(v.get<std::string>()));
    else if (v.is_number())
      out.push_back(Rational(v.get<double>()));
    else
      throw Error(errk::BadSpec, "expected a rational entry");
  }
  return out;
}

}  // namespace detail

inline Json number_to_json(const Number& x, bool exact_mode) {
  if (x.is_rational()) {
    if (!exact_mode) return Json(x.to_double());
    return Json(rational_str(x.rational()));
  }
  Json o;
  if (x.field() == golden_field())
    o["field"] = "golden";
  else if (x.field() == sqrt2_field())
    o["field"] = "sqrt2";
  else {
    Json f;
    Json mp = Json::array();
    for (const auto& c : x.field()->minpoly()) mp.push_back(rational_str(c));
    auto b = x.field()->bounds();
    f["minpoly"] = mp;
    f["low"] = rational_str(b.lo);
    f["high"] = rational_str(b.hi);
    o["field"] = f;
  }
  Json cs = Json::array();
  for (const auto& c : x.coeffs()) cs.push_back(rational_str(c));
  o["coeffs"] = cs;
  return o;
}

inline Number number_from_json(const Json& v, detail::FieldRegistry& reg) {
  if (v.is_string()) return Number(parse_number_text(v.get<std::string>()));
  if (v.is_number()) return Number(Rational(v.get<double>()));
  if (!v.is_object() || !v.contains("coeffs"))
    throw Error(errk::BadSpec, "a number is a string, a literal, or a field element");
  FieldPtr fld;
  const Json& f = v.at("field");
  if (f.is_string()) {
    std::string name = f.get<std::string>();
    if (name == "golden")
      fld = golden_field();
    else if (name == "sqrt2")
      fld = sqrt2_field();
    else
      throw Error(errk::BadSpec, "unknown field name '" + name + "'");
  } else if (f.is_object()) {
    auto mp = detail::rational_array(f.at("minpoly"));
    Rational lo = parse_number_text(f.at("low").get<std::string>());
    Rational hi = parse_number_text(f.at("high").get<std::string>());
    fld = reg.get(mp, lo, hi);
  } else {
    throw Error(errk::BadSpec, "field must be a name or a root descriptor");
  }
  return Number(fld, detail::rational_array(v.at("coeffs")));
}

/*
 * Map specification document.  Exact mode keeps every number as a "p/q"
 * string or a field-element object; numeric mode writes plain literals.
 * Branch rules are either {"affine": [slope, intercept]} or
 * {"family": "quadratic", "param": t}.
 */
inline Json map_to_json(const IntervalMap& m) {
  Json o;
  o["interval"] = Json::array({number_to_json(m.a, m.exact), number_to_json(m.b, m.exact)});
  o["mode"] = m.exact ? "exact" : "numeric";
  o["tol"] = m.tol;
  if (!m.label.empty()) o["label"] = m.label;
  Json bs = Json::array();
  for (const auto& br : m.branches) {
    Json b;
    b["domain"] = Json::array({number_to_json(br.lo, m.exact), number_to_json(br.hi, m.exact)});
    if (const auto* aff = std::get_if<AffineRule>(&br.rule)) {
      b["affine"] = Json::array(
          {number_to_json(aff->slope, m.exact), number_to_json(aff->intercept, m.exact)});
    } else {
      b["family"] = "quadratic";
      b["param"] = std::get<QuadraticRule>(br.rule).t;
    }
    bs.push_back(std::move(b));
  }
  o["branches"] = std::move(bs);
  return o;
}

namespace detail {
inline IntervalMap map_from_json_impl(const Json& o);
}

inline IntervalMap map_from_json(const Json& o) {
  try {
    return detail::map_from_json_impl(o);
  } catch (const Json::exception& e) {
    throw Error(errk::BadSpec, std::string("map spec: ") + e.what());
  }
}

inline IntervalMap detail::map_from_json_impl(const Json& o) {
  if (!o.is_object()) throw Error(errk::BadSpec, "map spec must be a JSON object");
  detail::FieldRegistry reg;
  IntervalMap m;
  std::string mode = o.value("mode", std::string("exact"));
  if (mode != "exact" && mode != "numeric")
    throw Error(errk::BadSpec, "mode is \"exact\" or \"numeric\"");
  m.exact = mode == "exact";
  m.tol = o.value("tol", 1e-12);
  m.label = o.value("label", std::string());
  const Json& iv = o.at("interval");
  if (!iv.is_array() || iv.size() != 2)
    throw Error(errk::BadSpec, "interval must be [a, b]");
  m.a = number_from_json(iv[0], reg);
  m.b = number_from_json(iv[1], reg);
  const Json& bs = o.at("branches");
  if (!bs.is_array() || bs.empty()) throw Error(errk::BadSpec, "no branches");
  for (const auto& b : bs) {
    const Json& dom = b.at("domain");
    if (!dom.is_array() || dom.size() != 2)
      throw Error(errk::BadSpec, "branch domain must be [lo, hi]");
    Branch br;
    br.lo = number_from_json(dom[0], reg);
    br.hi = number_from_json(dom[1], reg);
    if (b.contains("affine")) {
      const Json& a = b.at("affine");
      if (!a.is_array() || a.size() != 2)
        throw Error(errk::BadSpec, "affine rule must be [slope, intercept]");
      AffineRule rule{number_from_json(a[0], reg), number_from_json(a[1], reg)};
      int s = rule.slope < Number(0) ? -1 : (Number(0) < rule.slope ? 1 : 0);
      if (s == 0) throw Error(errk::BadSpec, "zero slope");
      br.increasing = s > 0;
      br.rule = rule;
    } else if (b.value("family", std::string()) == "quadratic") {
      if (m.exact) throw Error(errk::BadSpec, "quadratic family is numeric-mode");
      double t = b.at("param").get<double>();
      double lo = br.lo.to_double(), hi = br.hi.to_double();
      if (lo < 0.5 && 0.5 < hi)
        throw Error(errk::BadSpec, "quadratic branch straddles the critical point");
      br.increasing = hi <= 0.5;
      br.rule = QuadraticRule{t};
    } else {
      throw Error(errk::BadSpec, "branch needs an affine rule or a known family");
    }
    m.branches.push_back(std::move(br));
  }
  validate(m);
  return m;
}

/*
 * Built-in families.  "tent:s", "beta:b", "quadratic:t", "full:n"; the slope
 * and base parameters take "p/q", decimals, or the names golden and sqrt2.
 */
inline IntervalMap make_builtin(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon == std::string::npos)
    throw Error(errk::BadSpec, "builtin spec is family:param");
  std::string family = spec.substr(0, colon);
  std::string param = spec.substr(colon + 1);
  auto algebraic = [&]() -> Number {
    if (param == "golden" || param == "phi") return Number::generator(golden_field());
    if (param == "sqrt2") return Number::generator(sqrt2_field());
    return Number(parse_number_text(param));
  };
  IntervalMap m;
  try {
    if (family == "tent")
      m = make_tent(algebraic());
    else if (family == "beta")
      m = make_beta(algebraic());
    else if (family == "quadratic")
      m = make_quadratic(std::stod(param));
    else if (family == "full")
      m = make_full(std::stoi(param));
    else
      throw Error(errk::BadSpec, "unknown builtin family '" + family + "'");
  } catch (const std::invalid_argument&) {
    throw Error(errk::BadSpec, "bad builtin parameter '" + param + "'");
  }
  m.label = family + ":" + param;
  return m;
}

/* map source: "builtin:family:param", "-" for standard input, or a path */
inline IntervalMap load_map(const std::string& source) {
  if (source.rfind("builtin:", 0) == 0) return make_builtin(source.substr(8));
  Json doc;
  try {
    if (source == "-") {
      doc = Json::parse(std::cin);
    } else {
      std::ifstream in(source);
      if (!in) throw Error(errk::BadSpec, "cannot open '" + source + "'");
      doc = Json::parse(in);
    }
  } catch (const Json::parse_error& e) {
    throw Error(errk::BadSpec, std::string("map spec is not valid JSON: ") + e.what());
  }
  return map_from_json(doc);
}

inline void write_map(const IntervalMap& m, std::ostream& out) {
  out << map_to_json(m).dump(2) << "\n";
}

/* FNV-1a over the canonical single-line serialization; object keys are
   sorted by the JSON library, so equal maps hash equally */
inline std::uint64_t map_hash(const IntervalMap& m) {
  std::string s = map_to_json(m).dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string map_hash_hex(const IntervalMap& m) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(map_hash(m)));
  return std::string(buf);
}

}  // namespace kneadlab
