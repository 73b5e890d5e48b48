#pragma once

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "porc/gfpoly.hpp"
#include "porc/linalg.hpp"
#include "porc/poly.hpp"

namespace porc {

/// One (degree, exponent multiset) entry of a matrix type; exps kept ascending.
struct TypePair {
  int degree = 1;
  std::vector<int> exps;

  int weight() const {
    int s = 0;
    for (int e : exps) s += e;
    return degree * s;
  }
  friend bool operator==(const TypePair& a, const TypePair& b) { return a.degree == b.degree && a.exps == b.exps; }
  friend bool operator!=(const TypePair& a, const TypePair& b) { return !(a == b); }
  friend bool operator<(const TypePair& a, const TypePair& b) {
    if (a.degree != b.degree) return a.degree < b.degree;
    return a.exps < b.exps;
  }
};

/// Conjugacy-class type of an invertible matrix: a multiset of pairs, stored sorted.
class MatrixType {
 public:
  MatrixType() = default;
  explicit MatrixType(std::vector<TypePair> pairs) : pairs_(std::move(pairs)) {
    for (auto& p : pairs_) {
      if (p.degree < 1 || p.exps.empty()) throw DomainError("malformed type pair");
      for (int e : p.exps)
        if (e < 1) throw DomainError("type exponents must be positive");
      std::sort(p.exps.begin(), p.exps.end());
    }
    std::sort(pairs_.begin(), pairs_.end());
  }

  const std::vector<TypePair>& pairs() const { return pairs_; }
  int dimension() const {
    int s = 0;
    for (const auto& p : pairs_) s += p.weight();
    return s;
  }

  std::string str() const {
    std::ostringstream os;
    os << "{";
    for (std::size_t i = 0; i < pairs_.size(); ++i) {
      os << (i ? "," : "") << "(" << pairs_[i].degree << ",{";
      for (std::size_t j = 0; j < pairs_[i].exps.size(); ++j) os << (j ? "," : "") << pairs_[i].exps[j];
      os << "})";
    }
    os << "}";
    return os.str();
  }

  friend bool operator==(const MatrixType& a, const MatrixType& b) { return a.pairs_ == b.pairs_; }
  friend bool operator!=(const MatrixType& a, const MatrixType& b) { return !(a == b); }
  friend bool operator<(const MatrixType& a, const MatrixType& b) { return a.pairs_ < b.pairs_; }

 private:
  std::vector<TypePair> pairs_;
};

/// Parses "{(2,{2}),(2,{3})}" (whitespace ignored).
inline MatrixType parse_type(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  std::vector<TypePair> pairs;
  std::size_t i = 0;
  auto expect = [&](char c) {
    if (i >= s.size() || s[i] != c) throw DomainError("malformed type string: " + text);
    ++i;
  };
  auto number = [&]() {
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) throw DomainError("malformed type string: " + text);
    return std::stoi(s.substr(start, i - start));
  };
  expect('{');
  while (i < s.size() && s[i] != '}') {
    if (!pairs.empty()) expect(',');
    expect('(');
    TypePair p;
    p.degree = number();
    expect(',');
    expect('{');
    p.exps.push_back(number());
    while (i < s.size() && s[i] == ',') {
      ++i;
      p.exps.push_back(number());
    }
    expect('}');
    expect(')');
    pairs.push_back(std::move(p));
  }
  expect('}');
  if (i != s.size() || pairs.empty()) throw DomainError("malformed type string: " + text);
  return MatrixType(std::move(pairs));
}

/// Jordan block sizes, weakly decreasing.
struct Partition {
  std::vector<int> parts;
  int size() const {
    int s = 0;
    for (int p : parts) s += p;
    return s;
  }
  friend bool operator==(const Partition& a, const Partition& b) { return a.parts == b.parts; }
};

struct PrimaryFactor {
  GfPoly poly;
  int exponent = 1;
  friend bool operator==(const PrimaryFactor& a, const PrimaryFactor& b) {
    return a.poly == b.poly && a.exponent == b.exponent;
  }
  friend bool operator<(const PrimaryFactor& a, const PrimaryFactor& b) {
    if (a.poly.size() != b.poly.size()) return a.poly.size() < b.poly.size();
    if (a.poly != b.poly) return a.poly < b.poly;
    return a.exponent < b.exponent;
  }
};

/// Block sizes read off the rank sequence of powers of n: the number of blocks
/// of size >= k is (rank(n^{k-1}) - rank(n^k)) / unit.  Stops once the rank
/// stabilizes; `require_nilpotent` demands that it stabilizes at zero.
template <class F>
std::vector<int> rank_drop_partition(const F& f, const Matrix<typename F::Elem>& n, int unit, bool require_nilpotent) {
  const std::size_t dim = n.rows();
  std::vector<std::size_t> ranks{dim};
  auto power = identity(f, dim);
  for (std::size_t k = 1; k <= dim; ++k) {
    power = mat_mul(f, power, n);
    ranks.push_back(rank(f, power));
    if (ranks.back() == ranks[ranks.size() - 2]) {
      ranks.pop_back();
      break;
    }
  }
  if (require_nilpotent && ranks.back() != 0) throw DomainError("matrix is not nilpotent");
  std::vector<int> at_least;  // at_least[k-1] = #blocks of size >= k
  for (std::size_t k = 1; k < ranks.size(); ++k) at_least.push_back(static_cast<int>(ranks[k - 1] - ranks[k]) / unit);
  std::vector<int> parts;
  for (std::size_t k = at_least.size(); k-- > 0;) {
    int exact = at_least[k] - (k + 1 < at_least.size() ? at_least[k + 1] : 0);
    for (int c = 0; c < exact; ++c) parts.push_back(static_cast<int>(k + 1));
  }
  return parts;
}

/// Jordan partition of a unipotent matrix from rank((U - I)^k).
template <class F>
Partition unipotent_partition(const F& f, const Matrix<typename F::Elem>& u) {
  if (!u.square()) throw DomainError("unipotent_partition needs a square matrix");
  try {
    return Partition{rank_drop_partition(f, mat_sub(f, u, identity(f, u.rows())), 1, true)};
  } catch (const DomainError&) {
    throw DomainError("matrix is not unipotent");
  }
}

/// Jordan block sizes of eigenvalue x in a matrix over f (empty when x is not an eigenvalue).
template <class F>
std::vector<int> eigenvalue_blocks(const F& f, const Matrix<typename F::Elem>& a, const typename F::Elem& x) {
  return rank_drop_partition(f, mat_sub(f, a, mat_scale(f, x, identity(f, a.rows()))), 1, false);
}

/// Primary invariant factors p_i^{e_i} of an invertible matrix over f, sorted.
inline std::vector<PrimaryFactor> primary_invariant_factors(const FiniteField& f, const GfMatrix& a) {
  if (!a.square()) throw DomainError("primary_invariant_factors needs a square matrix");
  if (det(f, a) == 0) throw DomainError("primary_invariant_factors: matrix is singular");
  auto cp = gfpoly::charpoly(f, a);
  std::vector<PrimaryFactor> out;
  for (const auto& g : gfpoly::distinct_irreducible_factors(f, cp)) {
    auto ga = gfpoly::eval_matrix(f, g, a);
    for (int e : rank_drop_partition(f, ga, gfpoly::degree(g), false)) out.push_back({g, e});
  }
  std::sort(out.begin(), out.end());
  return out;
}

/// Type of an invertible matrix: primary invariant factors grouped by irreducible.
inline MatrixType type_of(const FiniteField& f, const GfMatrix& a) {
  std::map<GfPoly, std::vector<int>> grouped;
  for (const auto& pf : primary_invariant_factors(f, a)) grouped[pf.poly].push_back(pf.exponent);
  std::vector<TypePair> pairs;
  for (auto& [g, exps] : grouped) pairs.push_back({gfpoly::degree(g), exps});
  return MatrixType(std::move(pairs));
}

/// |GL(m,q)| = prod_{i<m} (q^m - q^i).
inline QPolynomial gl_order_poly(int m) {
  if (m < 1) throw DomainError("gl_order_poly: m must be positive");
  QPolynomial out(Rational(1));
  for (int i = 0; i < m; ++i)
    out *= QPolynomial::monomial(Rational(1), static_cast<std::size_t>(m)) - QPolynomial::monomial(Rational(1), static_cast<std::size_t>(i));
  return out;
}

/// Centralizer order of a unipotent-type block with partition lambda over a
/// field of order Q = q^degree:  Q^{sum lambda'_i^2} prod_i prod_{k<=m_i} (1 - Q^{-k}),
/// m_i the multiplicity of part i.
inline QPolynomial centralizer_poly(const TypePair& pair) {
  std::vector<int> lam = pair.exps;
  std::sort(lam.rbegin(), lam.rend());
  int largest = lam.front();
  long sum_conj_sq = 0;
  for (int i = 1; i <= largest; ++i) {
    long c = 0;
    for (int part : lam)
      if (part >= i) ++c;
    sum_conj_sq += c * c;
  }
  std::map<int, int> mult;
  for (int part : lam) ++mult[part];
  long shift = 0;
  QPolynomial prod(Rational(1));
  auto d = static_cast<std::size_t>(pair.degree);
  for (auto [part, m] : mult)
    for (int k = 1; k <= m; ++k) {
      shift += k;
      prod *= QPolynomial::monomial(Rational(1), d * static_cast<std::size_t>(k)) - QPolynomial(Rational(1));
    }
  return prod * QPolynomial::monomial(Rational(1), d * static_cast<std::size_t>(sum_conj_sq - shift));
}

/// Size of the conjugacy class of any matrix of type t in GL(m,q), m = dim t.
inline QPolynomial class_size_poly(const MatrixType& t) {
  QPolynomial cent(Rational(1));
  for (const auto& p : t.pairs()) cent *= centralizer_poly(p);
  auto [quot, rem] = divmod(gl_order_poly(t.dimension()), cent);
  if (!rem.is_zero()) throw ConsistencyError("class_size_poly: centralizer does not divide |GL| for " + t.str());
  return quot;
}

/// Partitions of n as ascending exponent lists, in lexicographic order.
inline std::vector<std::vector<int>> ascending_partitions(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int, int)> rec = [&](int remaining, int min_part) {
    if (remaining == 0) {
      out.push_back(cur);
      return;
    }
    for (int p = min_part; p <= remaining; ++p) {
      cur.push_back(p);
      rec(remaining - p, p);
      cur.pop_back();
    }
  };
  rec(n, 1);
  std::sort(out.begin(), out.end());
  return out;
}

/// Every type of GL(m), canonically sorted and duplicate-free.
inline std::vector<MatrixType> enumerate_types(int m, int bound = 6) {
  if (m < 1) throw DomainError("enumerate_types: m must be positive");
  if (m > bound) throw BudgetError("enumerate_types: m exceeds bound " + std::to_string(bound));
  std::vector<TypePair> items;
  for (int d = 1; d <= m; ++d)
    for (int s = 1; d * s <= m; ++s)
      for (auto& exps : ascending_partitions(s)) items.push_back({d, exps});
  std::sort(items.begin(), items.end());
  std::vector<MatrixType> out;
  std::vector<TypePair> cur;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int remaining) {
    if (remaining == 0) {
      out.emplace_back(cur);
      return;
    }
    for (std::size_t i = start; i < items.size(); ++i) {
      if (items[i].weight() > remaining) continue;
      cur.push_back(items[i]);
      rec(i, remaining - items[i].weight());
      cur.pop_back();
    }
  };
  rec(0, m);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// One conjugacy class of GL(m,q): its type, the irreducible assigned to each
/// pair of the type, and a rational-canonical representative.
struct ConjugacyClass {
  MatrixType type;
  std::vector<GfPoly> polys;
  GfMatrix representative;
};

/// Block-diagonal of companion matrices of g_i^e for e in S_i.
inline GfMatrix type_representative(const FiniteField& f, const MatrixType& t, const std::vector<GfPoly>& polys) {
  std::vector<GfMatrix> blocks;
  for (std::size_t i = 0; i < t.pairs().size(); ++i)
    for (int e : t.pairs()[i].exps) blocks.push_back(gfpoly::companion(f, gfpoly::power(f, polys[i], static_cast<unsigned>(e))));
  return direct_sum(f, blocks);
}

/// All conjugacy classes of GL(m, |f|) of the given type.
inline std::vector<ConjugacyClass> classes_of_type(const FiniteField& f, const MatrixType& t) {
  std::map<int, std::vector<GfPoly>> irr;
  for (const auto& p : t.pairs())
    if (!irr.count(p.degree)) irr[p.degree] = gfpoly::monic_irreducibles(f, static_cast<unsigned>(p.degree));
  std::vector<ConjugacyClass> out;
  const auto& pairs = t.pairs();
  std::vector<std::size_t> choice(pairs.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == pairs.size()) {
      std::vector<GfPoly> polys;
      for (std::size_t j = 0; j < pairs.size(); ++j) polys.push_back(irr[pairs[j].degree][choice[j]]);
      out.push_back({t, polys, type_representative(f, t, polys)});
      return;
    }
    const auto& pool = irr[pairs[i].degree];
    // identical pairs take increasing polynomial indices
    std::size_t start = (i > 0 && pairs[i - 1] == pairs[i]) ? choice[i - 1] + 1 : 0;
    for (std::size_t c = start; c < pool.size(); ++c) {
      bool used = false;
      for (std::size_t j = 0; j < i; ++j)
        if (pairs[j].degree == pairs[i].degree && choice[j] == c) used = true;
      if (used) continue;
      choice[i] = c;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

/// Every conjugacy class of GL(m, |f|), grouped by type in canonical order.
inline std::vector<ConjugacyClass> conjugacy_classes(const FiniteField& f, int m) {
  std::vector<ConjugacyClass> out;
  for (const auto& t : enumerate_types(m)) {
    auto cls = classes_of_type(f, t);
    out.insert(out.end(), cls.begin(), cls.end());
  }
  return out;
}

}  // namespace porc
