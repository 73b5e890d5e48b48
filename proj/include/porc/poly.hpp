#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "porc/arith.hpp"

namespace porc {

/// Dense univariate polynomial in q, coefficients indexed by degree.
/// Invariant: no trailing zero coefficients (the zero polynomial is empty).
template <class C>
class Poly {
 public:
  Poly() = default;
  Poly(C constant) {  // NOLINT(google-explicit-constructor)
    if (constant != 0) coeffs_.push_back(std::move(constant));
  }
  Poly(int constant) : Poly(C(constant)) {}  // NOLINT(google-explicit-constructor)
  explicit Poly(std::vector<C> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Poly monomial(const C& c, std::size_t degree) {
    std::vector<C> v(degree + 1, C(0));
    v[degree] = c;
    return Poly(std::move(v));
  }
  static Poly q() { return monomial(C(1), 1); }

  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  const std::vector<C>& coeffs() const { return coeffs_; }
  C coeff(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : C(0); }
  C leading() const { return coeffs_.empty() ? C(0) : coeffs_.back(); }

  template <class X>
  X eval(const X& x) const {
    X acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + X(*it);
    return acc;
  }

  Poly& operator+=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), C(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    trim();
    return *this;
  }
  Poly& operator-=(const Poly& o) {
    if (o.coeffs_.size() > coeffs_.size()) coeffs_.resize(o.coeffs_.size(), C(0));
    for (std::size_t i = 0; i < o.coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    trim();
    return *this;
  }
  Poly& operator*=(const Poly& o) { return *this = *this * o; }

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator-(Poly a) {
    for (auto& c : a.coeffs_) c = -c;
    return a;
  }
  friend Poly operator*(const Poly& a, const Poly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<C> out(a.coeffs_.size() + b.coeffs_.size() - 1, C(0));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Poly(std::move(out));
  }
  friend bool operator==(const Poly& a, const Poly& b) { return a.coeffs_ == b.coeffs_; }
  friend bool operator!=(const Poly& a, const Poly& b) { return !(a == b); }
  friend bool operator<(const Poly& a, const Poly& b) {
    if (a.coeffs_.size() != b.coeffs_.size()) return a.coeffs_.size() < b.coeffs_.size();
    return a.coeffs_ < b.coeffs_;
  }

  Poly pow(unsigned e) const {
    Poly r(C(1));
    for (unsigned i = 0; i < e; ++i) r *= *this;
    return r;
  }

  /// Substitutes q -> q^k.
  Poly compose_power(unsigned k) const {
    if (is_zero()) return {};
    std::vector<C> out(coeffs_.size() * k - (k - 1), C(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i * k] = coeffs_[i];
    return Poly(std::move(out));
  }

  /// Human-readable form in the variable `var`, highest degree first.
  std::string str(const std::string& var = "q") const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
      C c = coeffs_[static_cast<std::size_t>(i)];
      if (c == 0) continue;
      bool neg = c < 0;
      C mag = neg ? C(-c) : c;
      if (first) {
        if (neg) os << "-";
      } else {
        os << (neg ? " - " : " + ");
      }
      first = false;
      bool unit = (mag == 1);
      if (i == 0) {
        os << coeff_str(mag);
      } else {
        if (!unit) os << coeff_str(mag) << "*";
        os << var;
        if (i > 1) os << "^" << i;
      }
    }
    return os.str();
  }

 private:
  static std::string coeff_str(const C& c) {
    if constexpr (std::is_same_v<C, Rational>) {
      return to_string(c);
    } else {
      return c.str();
    }
  }
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<C> coeffs_;
};

using QPolynomial = Poly<Rational>;
using ZPoly = Poly<Integer>;

inline QPolynomial to_qpoly(const ZPoly& p) {
  std::vector<Rational> c;
  for (const auto& x : p.coeffs()) c.emplace_back(x);
  return QPolynomial(std::move(c));
}

/// Division with remainder over the rationals.
inline std::pair<QPolynomial, QPolynomial> divmod(const QPolynomial& a, const QPolynomial& b) {
  if (b.is_zero()) throw DomainError("polynomial division by zero");
  std::vector<Rational> rem = a.coeffs();
  int db = b.degree();
  int da = a.degree();
  if (da < db) return {QPolynomial(), a};
  std::vector<Rational> quot(static_cast<std::size_t>(da - db + 1), Rational(0));
  Rational lead = b.leading();
  for (int i = da; i >= db; --i) {
    Rational c = rem[static_cast<std::size_t>(i)] / lead;
    quot[static_cast<std::size_t>(i - db)] = c;
    if (c == 0) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(i - db + j)] -= c * b.coeffs()[static_cast<std::size_t>(j)];
  }
  return {QPolynomial(std::move(quot)), QPolynomial(std::move(rem))};
}

inline QPolynomial monic(const QPolynomial& a) {
  if (a.is_zero()) return a;
  Rational l = a.leading();
  std::vector<Rational> c = a.coeffs();
  for (auto& x : c) x /= l;
  return QPolynomial(std::move(c));
}

inline QPolynomial poly_gcd(QPolynomial a, QPolynomial b) {
  while (!b.is_zero()) {
    auto r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

/// Scales a rational polynomial to a primitive integer polynomial with positive
/// leading coefficient; returns {primitive part, scalar} with p = scalar * primitive.
inline std::pair<ZPoly, Rational> primitive_part(const QPolynomial& p) {
  if (p.is_zero()) return {ZPoly(), Rational(0)};
  Integer den = 1;
  for (const auto& c : p.coeffs()) den = lcm_int(den, denominator(c));
  std::vector<Integer> ints;
  Integer g = 0;
  for (const auto& c : p.coeffs()) {
    Integer v = numerator(c * den);
    g = gcd_int(g, v);
    ints.push_back(v);
  }
  if (ints.back() < 0) g = -g;
  for (auto& v : ints) v /= g;
  return {ZPoly(std::move(ints)), Rational(g) / den};
}

/// Unique polynomial of degree < points.size() through (x_i, y_i).
inline QPolynomial interpolate(const std::vector<std::pair<Integer, Rational>>& points) {
  QPolynomial result;
  for (std::size_t i = 0; i < points.size(); ++i) {
    QPolynomial basis(Rational(1));
    Rational denom = 1;
    for (std::size_t j = 0; j < points.size(); ++j) {
      if (i == j) continue;
      basis *= QPolynomial(std::vector<Rational>{Rational(-points[j].first), Rational(1)});
      denom *= Rational(points[i].first - points[j].first);
    }
    std::vector<Rational> c = basis.coeffs();
    for (auto& x : c) x = x * points[i].second / denom;
    result += QPolynomial(std::move(c));
  }
  return result;
}

}  // namespace porc
