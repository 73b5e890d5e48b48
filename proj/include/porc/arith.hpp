#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace porc {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// Raised when an argument violates an operation's precondition.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when an exact computation detects an internal inconsistency.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a brute-force enumeration would exceed its budget.
class BudgetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline Integer numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

inline Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }

inline Integer gcd_int(Integer a, Integer b) {
  a = abs_int(a);
  b = abs_int(b);
  while (b != 0) {
    Integer t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline Integer lcm_int(const Integer& a, const Integer& b) {
  if (a == 0 || b == 0) return 0;
  return abs_int(a / gcd_int(a, b) * b);
}

/// Extended gcd: returns g = gcd(a,b) >= 0 and sets x,y with a*x + b*y = g.
inline Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
  Integer old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    Integer quot = old_r / r;
    Integer tmp = old_r - quot * r;
    old_r = std::move(r);
    r = std::move(tmp);
    tmp = old_s - quot * s;
    old_s = std::move(s);
    s = std::move(tmp);
    tmp = old_t - quot * t;
    old_t = std::move(t);
    t = std::move(tmp);
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

/// Floor division for signed integers.
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

inline Integer mod_nonneg(const Integer& a, const Integer& m) {
  Integer r = a % m;
  if (r < 0) r += abs_int(m);
  return r;
}

inline Integer ipow(const Integer& base, unsigned e) {
  Integer r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

inline std::int64_t ipow64(std::int64_t base, unsigned e) {
  std::int64_t r = 1;
  for (unsigned i = 0; i < e; ++i) r *= base;
  return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }
inline std::int64_t lcm64(std::int64_t a, std::int64_t b) { return (a == 0 || b == 0) ? 0 : std::lcm(a, b); }

inline std::int64_t mod64(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

inline bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

/// Distinct prime factors in increasing order.
inline std::vector<Integer> prime_factors(Integer n) {
  std::vector<Integer> out;
  n = abs_int(n);
  if (n < 2) return out;
  for (Integer d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

inline std::vector<std::int64_t> prime_factors64(std::int64_t n) {
  std::vector<std::int64_t> out;
  if (n < 0) n = -n;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

/// Decomposition of a prime power q = p^k.
struct PrimePower {
  std::int64_t p = 0;
  unsigned k = 0;
};

/// Returns {p,k} if q is a prime power p^k with k >= 1, otherwise {0,0}.
inline PrimePower as_prime_power(std::int64_t q) {
  if (q < 2) return {};
  std::int64_t p = 0;
  for (std::int64_t d = 2; d * d <= q; ++d) {
    if (q % d == 0) {
      p = d;
      break;
    }
  }
  if (p == 0) return {q, 1};
  unsigned k = 0;
  while (q % p == 0) {
    q /= p;
    ++k;
  }
  return q == 1 ? PrimePower{p, k} : PrimePower{};
}

inline bool is_prime_power(std::int64_t q) { return as_prime_power(q).p != 0; }

inline std::vector<std::int64_t> divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (std::int64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

/// Prime powers in increasing order, extended on demand.
class PrimePowerSequence {
 public:
  std::int64_t at(std::size_t i) {
    while (values_.size() <= i) extend();
    return values_[i];
  }

 private:
  void extend() {
    std::int64_t next = limit_ * 2;
    for (std::int64_t q = limit_ + 1; q <= next; ++q)
      if (is_prime_power(q)) values_.push_back(q);
    limit_ = next;
  }
  std::vector<std::int64_t> values_;
  std::int64_t limit_ = 1;
};

inline std::string to_string(const Rational& r) {
  if (denominator(r) == 1) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

inline Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(Integer(s));
  return Rational(Integer(s.substr(0, slash)), Integer(s.substr(slash + 1)));
}

}  // namespace porc
