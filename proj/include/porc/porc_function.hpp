#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "porc/arith.hpp"
#include "porc/poly.hpp"

namespace porc {

/// Which prime powers q satisfy q = r (mod N).
struct ResidueClass {
  enum Kind { empty, finite, infinite } kind = empty;
  std::vector<std::int64_t> points;  // the members when finite
  std::int64_t sample = 0;           // smallest member when nonempty
};

/// Exact description of the prime powers in a residue class.  Coprime classes
/// contain infinitely many primes (Dirichlet); otherwise gcd(r, N) must be a
/// power of one prime p and the members are the powers p^k in the class.
inline ResidueClass residue_class(std::int64_t r, std::int64_t n) {
  r = mod64(r, n);
  ResidueClass rc;
  std::int64_t g = gcd64(r, n);
  if (g == 1) {
    rc.kind = ResidueClass::infinite;
    for (std::int64_t q = r == 0 ? n : r; ; q += n) {
      if (q > 1 && is_prime_power(q)) {
        rc.sample = q;
        break;
      }
    }
    return rc;
  }
  auto pf = prime_factors64(g);
  if (pf.size() != 1) return rc;
  const std::int64_t p = pf[0];
  int a = 0;
  std::int64_t rest = n;
  while (rest % p == 0) {
    rest /= p;
    ++a;
  }
  std::int64_t pk = 1;
  for (int k = 1; k < a; ++k) {
    pk *= p;
    if (pk % n == r) rc.points.push_back(pk);
  }
  // k >= a: p^k = 0 mod p^a and p^k mod rest is purely periodic in k
  std::int64_t pa = 1;
  for (int k = 0; k < a; ++k) pa *= p;
  if (r % pa == 0) {
    std::int64_t cur = pa % rest;  // p^a mod rest (rest may be 1)
    std::int64_t k = a;
    std::int64_t start = cur;
    do {
      if (rest == 1 || cur == r % rest) {
        rc.kind = ResidueClass::infinite;
        __int128 q = 1;
        for (std::int64_t i = 0; i < k; ++i) q *= p;
        rc.sample = rc.points.empty() ? static_cast<std::int64_t>(q) : rc.points.front();
        return rc;
      }
      cur = (cur * p) % rest;
      ++k;
    } while (cur != start);
  }
  if (!rc.points.empty()) {
    rc.kind = ResidueClass::finite;
    rc.sample = rc.points.front();
  }
  return rc;
}

/// Polynomial on residue classes of q modulo N, coefficients in Q.
class PorcFunction {
 public:
  PorcFunction() : PorcFunction(QPolynomial()) {}
  PorcFunction(const QPolynomial& p) : modulus_(1), branches_{p} {}  // NOLINT(google-explicit-constructor)
  PorcFunction(std::int64_t modulus, std::vector<QPolynomial> branches) : modulus_(modulus), branches_(std::move(branches)) {
    if (modulus_ < 1) throw DomainError("PORC modulus must be positive");
    if (branches_.size() != static_cast<std::size_t>(modulus_)) throw DomainError("PORC branch count must equal the modulus");
  }
  static PorcFunction constant(const Rational& c) { return PorcFunction(QPolynomial(c)); }

  std::int64_t modulus() const { return modulus_; }
  const std::vector<QPolynomial>& branches() const { return branches_; }
  const QPolynomial& branch(std::int64_t r) const { return branches_[static_cast<std::size_t>(mod64(r, modulus_))]; }

  Rational eval(const Integer& q) const {
    auto r = static_cast<std::int64_t>(mod_nonneg(q, Integer(modulus_)));
    return branch(r).eval(Rational(q));
  }
  Rational eval(std::int64_t q) const { return eval(Integer(q)); }

  /// Same function with modulus a multiple of the current one.
  PorcFunction lift(std::int64_t n) const {
    if (n % modulus_ != 0) throw DomainError("lift target must be a multiple of the modulus");
    std::vector<QPolynomial> b;
    for (std::int64_t r = 0; r < n; ++r) b.push_back(branch(r));
    return PorcFunction(n, std::move(b));
  }

  friend PorcFunction operator+(const PorcFunction& f, const PorcFunction& g) {
    return combine(f, g, [](const QPolynomial& a, const QPolynomial& b) { return a + b; });
  }
  friend PorcFunction operator-(const PorcFunction& f, const PorcFunction& g) {
    return combine(f, g, [](const QPolynomial& a, const QPolynomial& b) { return a - b; });
  }
  friend PorcFunction operator*(const PorcFunction& f, const PorcFunction& g) {
    return combine(f, g, [](const QPolynomial& a, const QPolynomial& b) { return a * b; });
  }
  PorcFunction scale(const Rational& c) const { return *this * PorcFunction::constant(c); }
  PorcFunction& operator+=(const PorcFunction& o) { return *this = *this + o; }

  /// Minimal modulus dividing N that describes the same function on every
  /// prime power; branches of classes with finitely many members are the
  /// least-degree interpolants of their values, empty classes are zero.
  PorcFunction normalize() const {
    for (auto d : divisors(modulus_)) {
      std::vector<QPolynomial> out;
      bool ok = true;
      for (std::int64_t s = 0; s < d && ok; ++s) {
        std::optional<QPolynomial> poly;
        std::map<std::int64_t, Rational> values;
        for (std::int64_t r = s; r < modulus_ && ok; r += d) {
          auto rc = residue_class(r, modulus_);
          if (rc.kind == ResidueClass::infinite) {
            if (poly && *poly != branch(r)) ok = false;
            poly = branch(r);
          } else if (rc.kind == ResidueClass::finite) {
            for (auto q : rc.points) values[q] = branch(r).eval(Rational(q));
          }
        }
        if (!ok) break;
        if (poly) {
          for (const auto& [q, v] : values)
            if (poly->eval(Rational(q)) != v) ok = false;
          out.push_back(*poly);
        } else {
          std::vector<std::pair<Integer, Rational>> pts;
          for (const auto& [q, v] : values) pts.emplace_back(Integer(q), v);
          out.push_back(interpolate(pts));
        }
      }
      if (ok) return PorcFunction(d, std::move(out));
    }
    throw ConsistencyError("normalization failed at the full modulus");
  }

  friend bool porc_equal(const PorcFunction& f, const PorcFunction& g) {
    auto a = f.normalize(), b = g.normalize();
    return a.modulus_ == b.modulus_ && a.branches_ == b.branches_;
  }
  friend bool operator==(const PorcFunction& f, const PorcFunction& g) { return porc_equal(f, g); }
  friend bool operator!=(const PorcFunction& f, const PorcFunction& g) { return !porc_equal(f, g); }

  /// Human form: a single polynomial, or one line per distinct branch of the
  /// normalized function over its realizable residues.
  std::string str(const std::string& var = "q") const {
    const auto n = normalize();
    return n.render([&](std::int64_t r) { return residue_class(r, n.modulus_).kind != ResidueClass::empty; }, var);
  }

  /// Human form restricted to q a power of the prime p.
  std::string str_on_powers_of(std::int64_t p, const std::string& var = "q") const {
    const auto n = normalize();
    std::set<std::int64_t> hit;
    for (std::int64_t r = mod64(p, n.modulus_); hit.insert(r).second;) r = (r * p) % n.modulus_;
    return n.render([&](std::int64_t r) { return hit.count(r) > 0; }, var);
  }

  /// Human form restricted to q whose characteristic is not in `excluded`.
  std::string str_excluding(const std::vector<std::int64_t>& excluded, const std::string& var = "q") const {
    const auto n = normalize();
    return n.render(
        [&](std::int64_t r) {
          auto rc = residue_class(r, n.modulus_);
          if (rc.kind == ResidueClass::empty) return false;
          std::int64_t g = gcd64(r, n.modulus_);
          if (g == 1) return true;
          return !std::count(excluded.begin(), excluded.end(), prime_factors64(g)[0]);
        },
        var);
  }

  /// Stable machine form: modulus plus the full sorted branch list.
  nlohmann::json to_json() const {
    nlohmann::json j;
    j["modulus"] = modulus_;
    auto arr = nlohmann::json::array();
    for (std::int64_t r = 0; r < modulus_; ++r) {
      nlohmann::json b;
      b["residue"] = r;
      auto coeffs = nlohmann::json::array();
      for (const auto& c : branches_[static_cast<std::size_t>(r)].coeffs()) coeffs.push_back(to_string(c));
      b["coefficients"] = coeffs;
      b["text"] = branches_[static_cast<std::size_t>(r)].str();
      arr.push_back(b);
    }
    j["branches"] = arr;
    return j;
  }

  static PorcFunction from_json(const nlohmann::json& j) {
    auto n = j.at("modulus").get<std::int64_t>();
    std::vector<QPolynomial> b(static_cast<std::size_t>(n));
    for (const auto& br : j.at("branches")) {
      auto r = br.at("residue").get<std::int64_t>();
      if (r < 0 || r >= n) throw DomainError("branch residue out of range");
      std::vector<Rational> c;
      for (const auto& s : br.at("coefficients")) c.push_back(parse_rational(s.get<std::string>()));
      b[static_cast<std::size_t>(r)] = QPolynomial(std::move(c));
    }
    return PorcFunction(n, std::move(b));
  }

  /// Syntactic identity (same modulus, same branches).
  bool identical(const PorcFunction& o) const { return modulus_ == o.modulus_ && branches_ == o.branches_; }

 private:
  // One clause per distinct branch over the residues accepted by `keep`.
  template <class Keep>
  std::string render(Keep keep, const std::string& var) const {
    std::map<std::string, std::vector<std::int64_t>> groups;
    std::vector<std::string> order;
    for (std::int64_t r = 0; r < modulus_; ++r) {
      if (!keep(r)) continue;
      auto s = branches_[static_cast<std::size_t>(r)].str(var);
      if (!groups.count(s)) order.push_back(s);
      groups[s].push_back(r);
    }
    if (order.empty()) return "0";
    if (order.size() == 1) return order[0];
    std::ostringstream os;
    for (std::size_t i = 0; i < order.size(); ++i) {
      os << (i ? "; " : "") << order[i] << " if " << var << " = ";
      const auto& rs = groups[order[i]];
      for (std::size_t j = 0; j < rs.size(); ++j) os << (j ? "," : "") << rs[j];
      os << " mod " << modulus_;
    }
    return os.str();
  }

  template <class Op>
  static PorcFunction combine(const PorcFunction& f, const PorcFunction& g, Op op) {
    std::int64_t n = lcm64(f.modulus_, g.modulus_);
    std::vector<QPolynomial> b;
    for (std::int64_t r = 0; r < n; ++r) b.push_back(op(f.branch(r), g.branch(r)));
    return PorcFunction(n, std::move(b));
  }

  std::int64_t modulus_;
  std::vector<QPolynomial> branches_;
};

/// f / g branch by branch.  Infinite classes need exact polynomial division;
/// finite classes divide values and re-interpolate; empty classes become 0.
/// The quotient is checked against f = quotient * g (and integrality when
/// requested) at every witness.
inline PorcFunction porc_divide_exact(const PorcFunction& f, const PorcFunction& g, const std::vector<std::int64_t>& witnesses,
                                      bool require_integral = true) {
  std::int64_t n = lcm64(f.modulus(), g.modulus());
  std::vector<QPolynomial> out;
  for (std::int64_t r = 0; r < n; ++r) {
    auto rc = residue_class(r, n);
    const auto& num = f.branch(r);
    const auto& den = g.branch(r);
    if (rc.kind == ResidueClass::empty) {
      out.emplace_back();
    } else if (rc.kind == ResidueClass::infinite) {
      if (den.is_zero()) throw DomainError("division by a PORC function that vanishes on residue " + std::to_string(r) + " mod " + std::to_string(n));
      auto [quot, rem] = divmod(num, den);
      if (!rem.is_zero()) {
        // reduce the rational function; it is a polynomial only if the reduced denominator is constant
        auto h = poly_gcd(num, den);
        auto rden = divmod(den, h).first;
        if (rden.degree() > 0)
          throw ConsistencyError("PORC quotient is not polynomial on residue " + std::to_string(r) + " mod " + std::to_string(n) +
                                 " (witness q = " + std::to_string(rc.sample) + ", value " + to_string(num.eval(Rational(rc.sample)) / den.eval(Rational(rc.sample))) + ")");
        quot = divmod(divmod(num, h).first, rden).first;
      }
      out.push_back(quot);
    } else {
      std::vector<std::pair<Integer, Rational>> pts;
      for (auto q : rc.points) {
        Rational d = den.eval(Rational(q));
        if (d == 0) throw DomainError("division by zero at q = " + std::to_string(q));
        pts.emplace_back(Integer(q), num.eval(Rational(q)) / d);
      }
      out.push_back(interpolate(pts));
    }
  }
  PorcFunction result(n, std::move(out));
  for (auto q : witnesses) {
    Rational v = result.eval(q);
    if (v * g.eval(q) != f.eval(q))
      throw ConsistencyError("PORC quotient check failed at q = " + std::to_string(q));
    if (require_integral && denominator(v) != 1)
      throw ConsistencyError("PORC quotient is not integral at q = " + std::to_string(q) + ": " + to_string(v));
  }
  return result;
}

}  // namespace porc
