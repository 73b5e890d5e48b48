#pragma once

#include <vector>

#include "porc/gf.hpp"
#include "porc/matrix.hpp"

namespace porc {

/// Polynomials over a finite field, coefficients low degree first, no trailing zeros.
using GfPoly = std::vector<FiniteField::Elem>;

namespace gfpoly {

inline void trim(GfPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

inline int degree(const GfPoly& a) { return static_cast<int>(a.size()) - 1; }

inline GfPoly add(const FiniteField& f, const GfPoly& a, const GfPoly& b) {
  GfPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = f.add(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(out);
  return out;
}

inline GfPoly sub(const FiniteField& f, const GfPoly& a, const GfPoly& b) {
  GfPoly out(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = f.sub(i < a.size() ? a[i] : 0, i < b.size() ? b[i] : 0);
  trim(out);
  return out;
}

inline GfPoly mul(const FiniteField& f, const GfPoly& a, const GfPoly& b) {
  if (a.empty() || b.empty()) return {};
  GfPoly out(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) out[i + j] = f.add(out[i + j], f.mul(a[i], b[j]));
  }
  trim(out);
  return out;
}

inline std::pair<GfPoly, GfPoly> divmod(const FiniteField& f, GfPoly a, const GfPoly& b) {
  if (b.empty()) throw DomainError("polynomial division by zero");
  trim(a);
  if (a.size() < b.size()) return {GfPoly{}, a};
  GfPoly quot(a.size() - b.size() + 1, 0);
  auto linv = f.inv(b.back());
  for (std::size_t i = a.size(); i-- >= b.size();) {
    auto c = f.mul(a[i], linv);
    quot[i - (b.size() - 1)] = c;
    if (c == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      std::size_t idx = i - (b.size() - 1) + j;
      a[idx] = f.sub(a[idx], f.mul(c, b[j]));
    }
  }
  trim(a);
  trim(quot);
  return {quot, a};
}

inline GfPoly monic(const FiniteField& f, GfPoly a) {
  if (a.empty()) return a;
  auto linv = f.inv(a.back());
  for (auto& c : a) c = f.mul(c, linv);
  return a;
}

inline GfPoly gcd(const FiniteField& f, GfPoly a, GfPoly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto r = divmod(f, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(f, a);
}

inline GfPoly pow_mod(const FiniteField& f, GfPoly base, Integer e, const GfPoly& m) {
  GfPoly r{1};
  base = divmod(f, base, m).second;
  while (e > 0) {
    if ((e & 1) != 0) r = divmod(f, mul(f, r, base), m).second;
    base = divmod(f, mul(f, base, base), m).second;
    e >>= 1;
  }
  return r;
}

inline GfPoly power(const FiniteField& f, const GfPoly& a, unsigned e) {
  GfPoly r{1};
  for (unsigned i = 0; i < e; ++i) r = mul(f, r, a);
  return r;
}

/// Monic polynomial of the given degree indexed by idx in [0, q^degree): the
/// lower coefficients are the base-q digits of idx in packed element order.
inline GfPoly monic_by_index(const FiniteField& f, unsigned deg, std::int64_t idx) {
  GfPoly g(deg + 1, 0);
  for (unsigned i = 0; i < deg; ++i) {
    g[i] = static_cast<FiniteField::Elem>(idx % f.order());
    idx /= f.order();
  }
  g[deg] = 1;
  return g;
}

/// Polynomial evaluated at a square matrix.
inline GfMatrix eval_matrix(const FiniteField& f, const GfPoly& p, const GfMatrix& a) {
  GfMatrix acc = zeros(f, a.rows(), a.cols());
  for (auto it = p.rbegin(); it != p.rend(); ++it) {
    acc = mat_mul(f, acc, a);
    for (std::size_t i = 0; i < a.rows(); ++i) acc(i, i) = f.add(acc(i, i), *it);
  }
  return acc;
}

/// Characteristic polynomial det(xI - A) via Hessenberg reduction.
inline GfPoly charpoly(const FiniteField& f, GfMatrix h) {
  if (!h.square()) throw DomainError("charpoly of non-square matrix");
  const std::size_t n = h.rows();
  for (std::size_t j = 0; j + 2 < n; ++j) {
    std::size_t i = j + 1;
    while (i < n && h(i, j) == 0) ++i;
    if (i == n) continue;
    if (i != j + 1) {
      h.swap_rows(i, j + 1);
      h.swap_cols(i, j + 1);
    }
    auto pinv = f.inv(h(j + 1, j));
    for (std::size_t k = j + 2; k < n; ++k) {
      if (h(k, j) == 0) continue;
      auto u = f.mul(h(k, j), pinv);
      for (std::size_t c = 0; c < n; ++c) h(k, c) = f.sub(h(k, c), f.mul(u, h(j + 1, c)));
      for (std::size_t r = 0; r < n; ++r) h(r, j + 1) = f.add(h(r, j + 1), f.mul(u, h(r, k)));
    }
  }
  std::vector<GfPoly> p(n + 1);
  p[0] = GfPoly{1};
  for (std::size_t m = 1; m <= n; ++m) {
    GfPoly lin{f.neg(h(m - 1, m - 1)), 1};
    trim(lin);
    GfPoly acc = mul(f, lin, p[m - 1]);
    auto t = FiniteField::one();
    for (std::size_t i = m - 1; i >= 1; --i) {
      t = f.mul(t, h(i, i - 1));
      auto coef = f.mul(h(i - 1, m - 1), t);
      if (coef != 0) acc = sub(f, acc, mul(f, GfPoly{coef}, p[i - 1]));
    }
    p[m] = acc;
  }
  return p[n];
}

/// Companion matrix (row convention) of a monic polynomial of degree >= 1.
inline GfMatrix companion(const FiniteField& f, const GfPoly& g) {
  const std::size_t d = g.size() - 1;
  GfMatrix c = zeros(f, d, d);
  for (std::size_t i = 0; i + 1 < d; ++i) c(i, i + 1) = 1;
  for (std::size_t j = 0; j < d; ++j) c(d - 1, j) = f.neg(g[j]);
  return c;
}

/// Distinct monic irreducible factors of f, sorted by (degree, coefficients).
inline std::vector<GfPoly> distinct_irreducible_factors(const FiniteField& f, GfPoly poly) {
  poly = monic(f, poly);
  std::vector<GfPoly> out;
  if (degree(poly) < 1) return out;
  const GfPoly x{0, 1};
  GfPoly xq = x;  // x^{q^i} mod poly
  std::vector<std::vector<GfPoly>> by_degree(static_cast<std::size_t>(degree(poly)) + 1);
  for (int i = 1; i <= degree(poly); ++i) {
    xq = pow_mod(f, xq, Integer(f.order()), poly);
    GfPoly h = gcd(f, poly, sub(f, xq, x));
    // remove irreducibles of degree properly dividing i
    for (int d = 1; d < i; ++d) {
      if (i % d != 0) continue;
      for (const auto& g : by_degree[static_cast<std::size_t>(d)]) h = divmod(f, h, g).first;
    }
    h = monic(f, h);
    if (degree(h) < 1) continue;
    auto& bucket = by_degree[static_cast<std::size_t>(i)];
    if (degree(h) == i) {
      bucket.push_back(h);
    } else {
      // squarefree product of degree-i irreducibles: every monic degree-i divisor is irreducible
      std::int64_t total = ipow64(f.order(), static_cast<unsigned>(i));
      for (std::int64_t idx = 0; idx < total && degree(h) >= i; ++idx) {
        GfPoly g = monic_by_index(f, static_cast<unsigned>(i), idx);
        auto [quot, rem] = divmod(f, h, g);
        if (rem.empty()) {
          bucket.push_back(g);
          h = quot;
        }
      }
      if (degree(h) != 0) throw ConsistencyError("equal-degree splitting failed");
    }
  }
  for (auto& b : by_degree) {
    std::sort(b.begin(), b.end());
    for (auto& g : b) out.push_back(g);
  }
  return out;
}

inline bool is_irreducible(const FiniteField& f, const GfPoly& g) {
  auto factors = distinct_irreducible_factors(f, g);
  return factors.size() == 1 && factors[0] == monic(f, g);
}

/// All monic irreducible polynomials of degree d over f with nonzero constant term.
inline std::vector<GfPoly> monic_irreducibles(const FiniteField& f, unsigned d) {
  std::vector<GfPoly> out;
  std::int64_t total = ipow64(f.order(), d);
  for (std::int64_t idx = 0; idx < total; ++idx) {
    GfPoly g = monic_by_index(f, d, idx);
    if (g[0] == 0) continue;
    if (is_irreducible(f, g)) out.push_back(g);
  }
  return out;
}

inline std::string str(const FiniteField& f, const GfPoly& a) {
  if (a.empty()) return "0";
  std::string s;
  for (int i = degree(a); i >= 0; --i) {
    auto c = a[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!s.empty()) s += " + ";
    std::string cs = f.str(c);
    if (f.degree() > 1 && cs.find('+') != std::string::npos) cs = "(" + cs + ")";
    if (i == 0) {
      s += cs;
    } else {
      if (c != 1) s += cs + "*";
      s += (i == 1 ? "x" : "x^" + std::to_string(i));
    }
  }
  return s;
}

}  // namespace gfpoly
}  // namespace porc
