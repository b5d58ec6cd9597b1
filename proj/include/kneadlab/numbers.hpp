#pragma once

#include <gmpxx.h>

#include <cmath>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

namespace kneadlab {

using Integer = mpz_class;
using Rational = mpq_class;

inline Rational parse_rational(const std::string& s) {
  Rational q;
  if (q.set_str(s, 10) != 0)
    throw std::invalid_argument("not a rational: '" + s + "'");
  if (sgn(q.get_den()) == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  q.canonicalize();
  return q;
}

inline std::string rational_str(const Rational& q) {
  Rational c = q;
  c.canonicalize();
  return c.get_str();
}

inline double to_double(const Rational& q) { return q.get_d(); }

/* log of a positive integer that may not fit in a double */
inline double log_integer(const Integer& n) {
  if (sgn(n) <= 0) throw std::domain_error("log of non-positive integer");
  long e = 0;
  double m = mpz_get_d_2exp(&e, n.get_mpz_t());
  return std::log(m) + double(e) * std::log(2.0);
}

inline double log_rational(const Rational& q) {
  return log_integer(q.get_num()) - log_integer(q.get_den());
}

namespace detail {

/* closed rational interval, used to bracket polynomial values at a root */
struct IntervalQ {
  Rational lo, hi;
  IntervalQ operator+(const IntervalQ& o) const { return {lo + o.lo, hi + o.hi}; }
  IntervalQ operator*(const IntervalQ& o) const {
    Rational a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
    Rational mn = a, mx = a;
    for (const Rational* v : {&b, &c, &d}) {
      if (*v < mn) mn = *v;
      if (*v > mx) mx = *v;
    }
    return {mn, mx};
  }
  bool excludes_zero() const { return sgn(lo) > 0 || sgn(hi) < 0; }
};

inline IntervalQ eval_poly(const std::vector<Rational>& p, const IntervalQ& x) {
  IntervalQ acc{0, 0};
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + IntervalQ{p[i], p[i]};
  return acc;
}

inline Rational eval_poly_at(const std::vector<Rational>& p, const Rational& x) {
  Rational acc = 0;
  for (size_t i = p.size(); i-- > 0;) acc = acc * x + p[i];
  return acc;
}

inline void trim_poly(std::vector<Rational>& p) {
  while (!p.empty() && sgn(p.back()) == 0) p.pop_back();
}

}  // namespace detail

/*
 * A real algebraic number given by its minimal polynomial together with a
 * rational isolating interval (lo, hi) on which the polynomial changes sign.
 * The interval is refined lazily by bisection whenever a comparison needs
 * more precision.  Elements of Q(theta) hang on to one shared descriptor.
 */
class NumberField {
 public:
  NumberField(std::vector<Rational> minpoly, Rational lo, Rational hi)
      : p_(std::move(minpoly)), lo_(std::move(lo)), hi_(std::move(hi)) {
    detail::trim_poly(p_);
    if (p_.size() < 3)
      throw std::invalid_argument("root descriptor must have degree >= 2");
    if (sgn(detail::eval_poly_at(p_, lo_)) * sgn(detail::eval_poly_at(p_, hi_)) >= 0)
      throw std::invalid_argument("isolating interval has no sign change");
  }

  size_t degree() const { return p_.size() - 1; }
  const std::vector<Rational>& minpoly() const { return p_; }

  detail::IntervalQ bounds() const {
    std::lock_guard<std::mutex> g(mu_);
    return {lo_, hi_};
  }

  /* halve the interval; returns the new bounds */
  detail::IntervalQ refine() const {
    std::lock_guard<std::mutex> g(mu_);
    Rational mid = (lo_ + hi_) / 2;
    int sm = sgn(detail::eval_poly_at(p_, mid));
    if (sm == 0) {  // cannot happen for an irreducible descriptor, but stay safe
      lo_ = mid;
      hi_ = mid;
    } else if (sm == sgn(detail::eval_poly_at(p_, lo_))) {
      lo_ = mid;
    } else {
      hi_ = mid;
    }
    return {lo_, hi_};
  }

 private:
  std::vector<Rational> p_;
  mutable Rational lo_, hi_;
  mutable std::mutex mu_;
};

using FieldPtr = std::shared_ptr<const NumberField>;

namespace detail {

/* polynomial arithmetic over Q, degrees stay tiny */
using Poly = std::vector<Rational>;

inline Poly poly_mul(const Poly& a, const Poly& b) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, Rational(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  trim_poly(r);
  return r;
}

inline void poly_divmod(Poly num, const Poly& den, Poly& quot, Poly& rem) {
  if (den.empty()) throw std::domain_error("polynomial division by zero");
  quot.assign(num.size() > den.size() ? num.size() - den.size() + 1 : 1, Rational(0));
  while (num.size() >= den.size()) {
    Rational c = num.back() / den.back();
    size_t k = num.size() - den.size();
    quot[k] = c;
    for (size_t i = 0; i < den.size(); ++i) num[k + i] -= c * den[i];
    num.pop_back();  // leading term cancels exactly
    trim_poly(num);
  }
  trim_poly(quot);
  rem = std::move(num);
  trim_poly(rem);
}

inline Poly poly_mod(const Poly& a, const Poly& m) {
  if (a.size() < m.size()) return a;
  Poly q, r;
  poly_divmod(a, m, q, r);
  return r;
}

/* inverse of a modulo m, m irreducible, a nonzero mod m */
inline Poly poly_inverse_mod(Poly a, Poly m) {
  Poly r0 = std::move(m), r1 = std::move(a);
  Poly s0 = {}, s1 = {Rational(1)};
  while (!r1.empty()) {
    Poly q, r2;
    poly_divmod(r0, r1, q, r2);
    Poly s2_sub = poly_mul(q, s1);
    Poly s2 = s0;
    if (s2.size() < s2_sub.size()) s2.resize(s2_sub.size(), Rational(0));
    for (size_t i = 0; i < s2_sub.size(); ++i) s2[i] -= s2_sub[i];
    trim_poly(s2);
    r0 = std::move(r1);
    r1 = std::move(r2);
    s0 = std::move(s1);
    s1 = std::move(s2);
  }
  if (r0.size() != 1) throw std::domain_error("element not invertible in field");
  Poly inv = s0;
  for (auto& c : inv) c /= r0[0];
  trim_poly(inv);
  return inv;
}

}  // namespace detail

/*
 * Exact real number: either a plain rational (no field attached) or an
 * element of Q(theta) stored by its coefficient vector in powers of theta.
 * Comparisons are exact; they refine the root interval only as needed and
 * detect equality algebraically (a difference that is the zero polynomial).
 */
class Number {
 public:
  Number() : c_{Rational(0)} {}
  Number(const Rational& q) : c_{q} {}
  Number(Rational&& q) : c_{std::move(q)} {}
  Number(long v) : c_{Rational(v)} {}
  Number(int v) : c_{Rational(v)} {}
  Number(FieldPtr f, std::vector<Rational> coeffs)
      : fld_(std::move(f)), c_(std::move(coeffs)) {
    normalize();
  }

  static Number generator(FieldPtr f) {
    return Number(std::move(f), {Rational(0), Rational(1)});
  }

  bool is_rational() const { return fld_ == nullptr; }
  const Rational& rational() const {
    if (!is_rational()) throw std::domain_error("not a rational number");
    return c_[0];
  }
  const FieldPtr& field() const { return fld_; }

  friend Number operator+(const Number& a, const Number& b) {
    auto [f, x, y] = align(a, b);
    if (x.size() < y.size()) x.resize(y.size(), Rational(0));
    for (size_t i = 0; i < y.size(); ++i) x[i] += y[i];
    return Number(f, std::move(x));
  }
  friend Number operator-(const Number& a, const Number& b) {
    auto [f, x, y] = align(a, b);
    if (x.size() < y.size()) x.resize(y.size(), Rational(0));
    for (size_t i = 0; i < y.size(); ++i) x[i] -= y[i];
    return Number(f, std::move(x));
  }
  friend Number operator*(const Number& a, const Number& b) {
    auto [f, x, y] = align(a, b);
    auto prod = detail::poly_mul(x, y);
    if (f) prod = detail::poly_mod(prod, f->minpoly());
    return Number(f, std::move(prod));
  }
  friend Number operator/(const Number& a, const Number& b) {
    if (b.sign() == 0) throw std::domain_error("division by zero");
    auto [f, x, y] = align(a, b);
    if (!f) return Number(x.empty() ? Rational(0) : x[0] / y[0]);
    auto inv = detail::poly_inverse_mod(y, f->minpoly());
    return Number(f, detail::poly_mod(detail::poly_mul(x, inv), f->minpoly()));
  }
  Number operator-() const {
    Number r = *this;
    for (auto& v : r.c_) v = -v;
    return r;
  }

  int sign() const {
    bool zero = true;
    for (const auto& v : c_)
      if (sgn(v) != 0) zero = false;
    if (zero) return 0;
    if (is_rational()) return sgn(c_[0]);
    bool nontrivial = false;
    for (size_t i = 1; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) nontrivial = true;
    if (!nontrivial) return sgn(c_[0]);
    auto iv = fld_->bounds();
    for (;;) {
      auto v = detail::eval_poly(c_, iv);
      if (v.excludes_zero()) return sgn(v.lo) > 0 ? 1 : -1;
      iv = fld_->refine();
    }
  }

  friend bool operator==(const Number& a, const Number& b) { return (a - b).sign() == 0; }
  friend bool operator!=(const Number& a, const Number& b) { return !(a == b); }
  friend bool operator<(const Number& a, const Number& b) { return (a - b).sign() < 0; }
  friend bool operator>(const Number& a, const Number& b) { return (a - b).sign() > 0; }
  friend bool operator<=(const Number& a, const Number& b) { return (a - b).sign() <= 0; }
  friend bool operator>=(const Number& a, const Number& b) { return (a - b).sign() >= 0; }

  double to_double() const {
    if (is_rational()) return c_[0].get_d();
    auto iv = fld_->bounds();
    Rational eps(1, 1);
    for (int i = 0; i < 60; ++i) eps /= 2;  // ~1e-18
    while (iv.hi - iv.lo > eps) iv = fld_->refine();
    auto v = detail::eval_poly(c_, iv);
    return Rational((v.lo + v.hi) / 2).get_d();
  }

  /* printable form; rationals as p/q, field elements by coefficient list */
  std::string str() const {
    if (is_rational()) return rational_str(c_[0]);
    std::string s = "[";
    for (size_t i = 0; i < c_.size(); ++i) {
      if (i) s += ",";
      s += rational_str(c_[i]);
    }
    return s + "]@theta";
  }

  const std::vector<Rational>& coeffs() const { return c_; }

  /* total order usable as a std::map key (exact comparison) */
  struct Less {
    bool operator()(const Number& a, const Number& b) const { return a < b; }
  };

 private:
  void normalize() {
    detail::trim_poly(c_);
    if (c_.empty()) c_ = {Rational(0)};
    bool flat = true;
    for (size_t i = 1; i < c_.size(); ++i)
      if (sgn(c_[i]) != 0) flat = false;
    if (flat) {
      c_.resize(1);
      fld_.reset();
    }
  }

  static std::tuple<FieldPtr, std::vector<Rational>, std::vector<Rational>> align(
      const Number& a, const Number& b) {
    FieldPtr f;
    if (a.fld_ && b.fld_) {
      if (a.fld_ != b.fld_) throw std::logic_error("numbers from different fields");
      f = a.fld_;
    } else {
      f = a.fld_ ? a.fld_ : b.fld_;
    }
    return {f, a.c_, b.c_};
  }

  FieldPtr fld_;
  std::vector<Rational> c_;
};

/* the golden ratio, root of x^2 - x - 1 in (1, 2) */
inline FieldPtr golden_field() {
  static FieldPtr f = std::make_shared<NumberField>(
      std::vector<Rational>{Rational(-1), Rational(-1), Rational(1)}, Rational(1),
      Rational(2));
  return f;
}

/* sqrt(2), root of x^2 - 2 in (1, 2) */
inline FieldPtr sqrt2_field() {
  static FieldPtr f = std::make_shared<NumberField>(
      std::vector<Rational>{Rational(-2), Rational(0), Rational(1)}, Rational(1),
      Rational(2));
  return f;
}

}  // namespace kneadlab
