#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "porc/arith.hpp"

namespace porc {

/// Finite field GF(p^k) in the power basis of a fixed monic irreducible modulus.
///
/// Elements are packed as integers in [0, p^k): the coefficient of x^i is the
/// i-th base-p digit.  Multiplication goes through exp/log tables over a
/// primitive element; instances are immutable after construction and may be
/// shared freely between threads.
class FiniteField {
 public:
  using Elem = std::uint32_t;

  static constexpr std::int64_t kDefaultSizeBound = std::int64_t{1} << 24;

  FiniteField(std::int64_t p, unsigned k, std::int64_t size_bound = kDefaultSizeBound) : p_(p), k_(k) {
    if (!is_prime(p)) throw DomainError("field characteristic " + std::to_string(p) + " is not prime");
    if (k == 0) throw DomainError("field degree must be positive");
    std::int64_t q = 1;
    for (unsigned i = 0; i < k; ++i) {
      q *= p;
      if (q > size_bound) throw BudgetError("field order exceeds size bound");
    }
    q_ = q;
    modulus_ = smallest_irreducible();
    build_tables();
  }

  std::int64_t characteristic() const { return p_; }
  unsigned degree() const { return k_; }
  std::int64_t order() const { return q_; }
  /// Monic modulus, coefficients low degree first (length k+1).
  const std::vector<std::int64_t>& modulus() const { return modulus_; }

  static constexpr Elem zero() { return 0; }
  static constexpr Elem one() { return 1; }
  bool is_zero(Elem a) const { return a == 0; }

  Elem from_int(std::int64_t n) const { return static_cast<Elem>(mod64(n, p_)); }
  Elem from_int(const Integer& n) const { return static_cast<Elem>(static_cast<std::int64_t>(mod_nonneg(n, Integer(p_)))); }

  Elem add(Elem a, Elem b) const {
    if (p_ == 2) return a ^ b;
    Elem out = 0, place = 1;
    auto p = static_cast<Elem>(p_);
    while (a != 0 || b != 0) {
      Elem d = (a % p + b % p) % p;
      out += d * place;
      place *= p;
      a /= p;
      b /= p;
    }
    return out;
  }
  Elem neg(Elem a) const {
    if (p_ == 2) return a;
    Elem out = 0, place = 1;
    auto p = static_cast<Elem>(p_);
    while (a != 0) {
      Elem d = (p - a % p) % p;
      out += d * place;
      place *= p;
      a /= p;
    }
    return out;
  }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t s = std::uint64_t(log_[a]) + log_[b];
    auto n = static_cast<std::uint64_t>(q_ - 1);
    if (s >= n) s -= n;
    return exp_[s];
  }
  Elem inv(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero field element");
    auto n = static_cast<std::uint32_t>(q_ - 1);
    return exp_[(n - log_[a]) % n];
  }
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

  /// a^e for any integer e (e < 0 requires a != 0).
  Elem pow(Elem a, const Integer& e) const {
    if (a == 0) {
      if (e < 0) throw DomainError("zero raised to a negative power");
      return e == 0 ? 1 : 0;
    }
    Integer n = q_ - 1;
    auto r = static_cast<std::uint64_t>(mod_nonneg(Integer(log_[a]) * mod_nonneg(e, n), n));
    return exp_[r];
  }
  Elem pow(Elem a, std::int64_t e) const { return pow(a, Integer(e)); }

  /// Discrete logarithm base the primitive element (a != 0).
  std::uint32_t log(Elem a) const { return log_[a]; }
  Elem exp(std::uint64_t i) const { return exp_[i % static_cast<std::uint64_t>(q_ - 1)]; }
  Elem primitive() const { return exp_[q_ > 2 ? 1 : 0]; }

  /// Multiplicative order of a nonzero element.
  std::int64_t mult_order(Elem a) const {
    std::int64_t n = q_ - 1;
    return n / gcd64(n, log_[a]);
  }

  /// True iff a subfield of order sub_q exists.
  bool has_subfield(std::int64_t sub_q) const {
    auto pp = as_prime_power(sub_q);
    return pp.p == p_ && k_ % pp.k == 0;
  }

  /// x -> x^sub_q, the Frobenius automorphism relative to GF(sub_q).
  Elem frobenius(Elem a, std::int64_t sub_q) const {
    if (!has_subfield(sub_q)) throw DomainError("not a subfield order: " + std::to_string(sub_q));
    return pow(a, Integer(sub_q));
  }

  /// Elements of the subfield of order sub_q, ascending by packed value.
  std::vector<Elem> subfield_elements(std::int64_t sub_q) const {
    if (!has_subfield(sub_q)) throw DomainError("not a subfield order: " + std::to_string(sub_q));
    std::vector<Elem> out{0};
    std::int64_t step = (q_ - 1) / (sub_q - 1);
    for (std::int64_t i = 0; i < sub_q - 1; ++i) out.push_back(exp_[static_cast<std::size_t>(i * step)]);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Inverse by the extended Euclidean algorithm on the power-basis polynomial.
  Elem inverse_euclid(Elem a) const {
    if (a == 0) throw DomainError("inverse of zero field element");
    auto r0 = modulus_;
    auto r1 = unpack(a);
    std::vector<std::int64_t> s0{0}, s1{1};
    trim(r1);
    while (!(r1.size() == 1 && r1[0] != 0) && !r1.empty()) {
      auto [quot, rem] = poly_divmod(r0, r1);
      auto s2 = poly_sub(s0, poly_mul(quot, s1));
      r0 = std::move(r1);
      r1 = std::move(rem);
      s0 = std::move(s1);
      s1 = std::move(s2);
    }
    // r1 is a nonzero constant c; s1 * a = c (mod modulus)
    std::int64_t cinv = inv_mod_p(r1[0]);
    for (auto& c : s1) c = mod64(c * cinv, p_);
    return pack(poly_divmod(s1, modulus_).second);
  }

  std::vector<std::int64_t> unpack(Elem a) const {
    std::vector<std::int64_t> c(k_, 0);
    for (unsigned i = 0; i < k_; ++i) {
      c[i] = a % p_;
      a /= static_cast<Elem>(p_);
    }
    return c;
  }
  Elem pack(const std::vector<std::int64_t>& c) const {
    Elem out = 0, place = 1;
    for (unsigned i = 0; i < k_ && i < c.size(); ++i) {
      out += static_cast<Elem>(mod64(c[i], p_)) * place;
      place *= static_cast<Elem>(p_);
    }
    return out;
  }

  std::string str(Elem a) const {
    if (k_ == 1) return std::to_string(a);
    auto c = unpack(a);
    std::string s;
    for (int i = static_cast<int>(k_) - 1; i >= 0; --i) {
      if (c[static_cast<std::size_t>(i)] == 0) continue;
      if (!s.empty()) s += "+";
      if (i == 0 || c[static_cast<std::size_t>(i)] != 1) s += std::to_string(c[static_cast<std::size_t>(i)]);
      if (i > 0) s += (i == 1 ? "x" : "x^" + std::to_string(i));
    }
    return s.empty() ? "0" : s;
  }

 private:
  using P = std::vector<std::int64_t>;

  void trim(P& a) const {
    while (!a.empty() && a.back() == 0) a.pop_back();
  }
  std::int64_t inv_mod_p(std::int64_t a) const {
    std::int64_t r = 1, b = mod64(a, p_), e = p_ - 2;
    while (e > 0) {
      if (e & 1) r = r * b % p_;
      b = b * b % p_;
      e >>= 1;
    }
    return r;
  }
  P poly_sub(const P& a, const P& b) const {
    P out(std::max(a.size(), b.size()), 0);
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i];
    for (std::size_t i = 0; i < b.size(); ++i) out[i] = mod64(out[i] - b[i], p_);
    trim(out);
    return out;
  }
  P poly_mul(const P& a, const P& b) const {
    if (a.empty() || b.empty()) return {};
    P out(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = (out[i + j] + a[i] * b[j]) % p_;
    trim(out);
    return out;
  }
  std::pair<P, P> poly_divmod(P a, P b) const {
    trim(a);
    trim(b);
    if (a.size() < b.size()) return {P{}, a};
    P quot(a.size() - b.size() + 1, 0);
    std::int64_t linv = inv_mod_p(b.back());
    for (std::size_t i = a.size(); i-- >= b.size();) {
      std::int64_t c = a[i] * linv % p_;
      quot[i - (b.size() - 1)] = c;
      if (c == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        std::size_t idx = i - (b.size() - 1) + j;
        a[idx] = mod64(a[idx] - c * b[j], p_);
      }
    }
    trim(a);
    trim(quot);
    return {quot, a};
  }

  /// Lexicographically smallest monic irreducible of degree k, comparing the
  /// coefficient sequence (c_0, c_1, ..., c_{k-1}) with c_0 most significant.
  P smallest_irreducible() const {
    std::int64_t count = q_;
    for (std::int64_t idx = 0; idx < count; ++idx) {
      P cand(k_ + 1, 0);
      std::int64_t t = idx;
      for (int i = static_cast<int>(k_) - 1; i >= 0; --i) {
        cand[static_cast<std::size_t>(i)] = t % p_;
        t /= p_;
      }
      cand[k_] = 1;
      if (is_irreducible(cand)) return cand;
    }
    throw ConsistencyError("no irreducible polynomial found");
  }

  bool is_irreducible(const P& f) const {
    unsigned n = static_cast<unsigned>(f.size() - 1);
    if (n == 1) return true;
    if (f[0] == 0) return false;
    for (unsigned d = 1; d <= n / 2; ++d) {
      std::int64_t total = ipow64(p_, d);
      for (std::int64_t idx = 0; idx < total; ++idx) {
        P g(d + 1, 0);
        std::int64_t t = idx;
        for (unsigned i = 0; i < d; ++i) {
          g[i] = t % p_;
          t /= p_;
        }
        g[d] = 1;
        if (poly_divmod(f, g).second.empty()) return false;
      }
    }
    return true;
  }

  Elem slow_mul(Elem a, Elem b) const { return pack(poly_divmod(poly_mul(unpack(a), unpack(b)), modulus_).second); }

  void build_tables() {
    auto n = static_cast<std::uint64_t>(q_ - 1);
    exp_.assign(n + 1, 1);
    log_.assign(static_cast<std::size_t>(q_), 0);
    if (q_ == 2) {
      exp_[0] = 1;
      return;
    }
    auto factors = prime_factors64(q_ - 1);
    auto slow_pow = [&](Elem a, std::int64_t e) {
      Elem r = 1;
      while (e > 0) {
        if (e & 1) r = slow_mul(r, a);
        a = slow_mul(a, a);
        e >>= 1;
      }
      return r;
    };
    Elem gen = 0;
    for (Elem cand = 2; cand < static_cast<Elem>(q_); ++cand) {
      bool ok = true;
      for (auto l : factors)
        if (slow_pow(cand, (q_ - 1) / l) == 1) {
          ok = false;
          break;
        }
      if (ok) {
        gen = cand;
        break;
      }
    }
    if (gen == 0) throw ConsistencyError("no primitive element found");
    Elem cur = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
      exp_[i] = cur;
      log_[cur] = static_cast<std::uint32_t>(i);
      cur = slow_mul(cur, gen);
    }
    exp_[n] = 1;
  }

  std::int64_t p_;
  unsigned k_;
  std::int64_t q_ = 0;
  P modulus_;
  std::vector<Elem> exp_;
  std::vector<std::uint32_t> log_;
};

using Field = std::shared_ptr<const FiniteField>;

/// Constructs GF(p^k) with the lexicographically smallest irreducible modulus.
inline Field make_field(std::int64_t p, unsigned k, std::int64_t size_bound = FiniteField::kDefaultSizeBound) {
  return std::make_shared<const FiniteField>(p, k, size_bound);
}

/// Field of order q (q a prime power).
inline Field make_field_of_order(std::int64_t q, std::int64_t size_bound = FiniteField::kDefaultSizeBound) {
  auto pp = as_prime_power(q);
  if (pp.p == 0) throw DomainError(std::to_string(q) + " is not a prime power");
  return make_field(pp.p, pp.k, size_bound);
}

/// Value-semantic element bound to its field; the field must outlive it.
struct FieldElem {
  const FiniteField* field = nullptr;
  FiniteField::Elem value = 0;

  friend FieldElem operator+(FieldElem a, FieldElem b) { return {a.field, a.field->add(a.value, b.value)}; }
  friend FieldElem operator-(FieldElem a, FieldElem b) { return {a.field, a.field->sub(a.value, b.value)}; }
  friend FieldElem operator*(FieldElem a, FieldElem b) { return {a.field, a.field->mul(a.value, b.value)}; }
  friend FieldElem operator/(FieldElem a, FieldElem b) { return {a.field, a.field->div(a.value, b.value)}; }
  friend bool operator==(FieldElem a, FieldElem b) { return a.value == b.value; }
  friend bool operator!=(FieldElem a, FieldElem b) { return a.value != b.value; }
};

inline std::vector<FieldElem> elements(const FiniteField& f) {
  std::vector<FieldElem> out;
  out.reserve(static_cast<std::size_t>(f.order()));
  for (std::int64_t v = 0; v < f.order(); ++v) out.push_back({&f, static_cast<FiniteField::Elem>(v)});
  return out;
}

inline FieldElem frobenius(FieldElem x, std::int64_t q) { return {x.field, x.field->frobenius(x.value, q)}; }

/// x^e; negative exponents invert through the extended Euclidean algorithm.
inline FieldElem elem_pow(FieldElem x, std::int64_t e) {
  const FiniteField& f = *x.field;
  if (e < 0) {
    if (x.value == 0) throw DomainError("zero raised to a negative power");
    return {x.field, f.pow(f.inverse_euclid(x.value), Integer(-e))};
  }
  return {x.field, f.pow(x.value, Integer(e))};
}

/// Embedding of `small` into `big` as a table indexed by packed value: the
/// generator x of `small` goes to the smallest root of its modulus in `big`.
inline std::vector<FiniteField::Elem> embed_field(const FiniteField& small, const FiniteField& big) {
  if (!big.has_subfield(small.order())) throw DomainError("field of order " + std::to_string(small.order()) +
                                                          " does not embed in order " + std::to_string(big.order()));
  const auto& mod = small.modulus();
  auto eval = [&](FiniteField::Elem x) {
    FiniteField::Elem acc = 0;
    for (std::size_t i = mod.size(); i-- > 0;) acc = big.add(big.mul(acc, x), big.from_int(mod[i]));
    return acc;
  };
  FiniteField::Elem beta = 0;
  bool found = false;
  for (std::int64_t v = 0; v < big.order() && !found; ++v)
    if (eval(static_cast<FiniteField::Elem>(v)) == 0) {
      beta = static_cast<FiniteField::Elem>(v);
      found = true;
    }
  if (!found) throw ConsistencyError("no root of the subfield modulus");
  std::vector<FiniteField::Elem> table(static_cast<std::size_t>(small.order()));
  for (std::int64_t v = 0; v < small.order(); ++v) {
    auto digits = small.unpack(static_cast<FiniteField::Elem>(v));
    FiniteField::Elem acc = 0;
    for (std::size_t i = digits.size(); i-- > 0;) acc = big.add(big.mul(acc, beta), big.from_int(digits[i]));
    table[static_cast<std::size_t>(v)] = acc;
  }
  return table;
}

}  // namespace porc
