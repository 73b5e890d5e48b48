#pragma once

#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "porc/canon.hpp"
#include "porc/linalg.hpp"

namespace porc {

enum class FamilyKind { natural, tensor_square, exterior_square, structure_constants, custom };

/// One factor of a term: entry (i,j) of A, or of A^{-1} when `inverse`.
struct FamilyFactor {
  bool inverse = false;
  std::size_t i = 0, j = 0;
};

struct FamilyTerm {
  std::int64_t coef = 1;
  std::vector<FamilyFactor> factors;
};

/// phi(A)(row, col) = sum of terms.
struct FamilyEntry {
  std::size_t row = 0, col = 0;
  std::vector<FamilyTerm> terms;
};

/// A homomorphism GL(m) -> GL(n) in weight-diagonal presentation, acting on
/// row vectors (v -> v phi(A)).  Entries of phi(A) are integer polynomials in
/// the entries of A and A^{-1}.
struct AlgebraicFamily {
  FamilyKind kind = FamilyKind::custom;
  std::string name;
  int m = 1;
  int n = 1;
  std::vector<std::vector<int>> weights;  // n rows of length m
  int det_power = 0;
  std::vector<std::int64_t> bad_primes;
  std::vector<FamilyEntry> entries;

  bool uses_inverse() const {
    for (const auto& e : entries)
      for (const auto& t : e.terms)
        for (const auto& f : t.factors)
          if (f.inverse) return true;
    return false;
  }
  bool is_bad(std::int64_t p) const {
    return std::find(bad_primes.begin(), bad_primes.end(), p) != bad_primes.end();
  }
};

inline std::string family_kind_name(FamilyKind k) {
  switch (k) {
    case FamilyKind::natural: return "natural";
    case FamilyKind::tensor_square: return "tensor2";
    case FamilyKind::exterior_square: return "ext2";
    case FamilyKind::structure_constants: return "algebras";
    case FamilyKind::custom: return "custom";
  }
  return "custom";
}

inline FamilyKind parse_family_kind(const std::string& s) {
  if (s == "natural") return FamilyKind::natural;
  if (s == "tensor2" || s == "tensor_square") return FamilyKind::tensor_square;
  if (s == "ext2" || s == "exterior_square") return FamilyKind::exterior_square;
  if (s == "algebras" || s == "structure_constants") return FamilyKind::structure_constants;
  throw DomainError("unknown family kind: " + s);
}

inline AlgebraicFamily builtin_family(FamilyKind kind, int m) {
  if (m < 1) throw DomainError("family dimension m must be positive");
  AlgebraicFamily fam;
  fam.kind = kind;
  fam.name = family_kind_name(kind);
  fam.m = m;
  const auto um = static_cast<std::size_t>(m);
  auto a = [](std::size_t i, std::size_t j) { return FamilyFactor{false, i, j}; };
  auto unit = [&](std::initializer_list<std::pair<std::size_t, int>> idx) {
    std::vector<int> w(um, 0);
    for (auto [i, c] : idx) w[i] += c;
    return w;
  };
  switch (kind) {
    case FamilyKind::natural:
      fam.n = m;
      for (std::size_t i = 0; i < um; ++i) {
        fam.weights.push_back(unit({{i, 1}}));
        for (std::size_t j = 0; j < um; ++j) fam.entries.push_back({i, j, {{1, {a(i, j)}}}});
      }
      break;
    case FamilyKind::tensor_square:
      fam.n = m * m;
      for (std::size_t i = 0; i < um; ++i)
        for (std::size_t k = 0; k < um; ++k) {
          fam.weights.push_back(unit({{i, 1}, {k, 1}}));
          for (std::size_t j = 0; j < um; ++j)
            for (std::size_t l = 0; l < um; ++l) fam.entries.push_back({i * um + k, j * um + l, {{1, {a(i, j), a(k, l)}}}});
        }
      break;
    case FamilyKind::exterior_square: {
      std::vector<std::pair<std::size_t, std::size_t>> basis;
      for (std::size_t i = 0; i < um; ++i)
        for (std::size_t j = i + 1; j < um; ++j) basis.emplace_back(i, j);
      fam.n = static_cast<int>(basis.size());
      for (std::size_t r = 0; r < basis.size(); ++r) {
        auto [i, j] = basis[r];
        fam.weights.push_back(unit({{i, 1}, {j, 1}}));
        for (std::size_t c = 0; c < basis.size(); ++c) {
          auto [k, l] = basis[c];
          fam.entries.push_back({r, c, {{1, {a(i, k), a(j, l)}}, {-1, {a(i, l), a(j, k)}}}});
        }
      }
      break;
    }
    case FamilyKind::structure_constants:
      // coordinates lambda_{ijk}: e_i e_j = sum_k lambda_{ijk} e_k; phi(A) = A (x) A (x) A^{-T}
      fam.n = m * m * m;
      fam.det_power = 1;
      for (std::size_t r = 0; r < um; ++r)
        for (std::size_t s = 0; s < um; ++s)
          for (std::size_t t = 0; t < um; ++t) {
            fam.weights.push_back(unit({{r, 1}, {s, 1}, {t, -1}}));
            for (std::size_t i = 0; i < um; ++i)
              for (std::size_t j = 0; j < um; ++j)
                for (std::size_t k = 0; k < um; ++k)
                  fam.entries.push_back({(r * um + s) * um + t, (i * um + j) * um + k,
                                         {{1, {a(r, i), a(s, j), FamilyFactor{true, k, t}}}}});
          }
      break;
    case FamilyKind::custom:
      throw DomainError("custom families are loaded from a file");
  }
  return fam;
}

inline std::int64_t field_characteristic(const FiniteField& f) { return f.characteristic(); }
inline std::int64_t field_characteristic(const RationalField&) { return 0; }

/// phi(A) over the field of A.
template <class F>
Matrix<typename F::Elem> apply_family(const AlgebraicFamily& fam, const F& f, const Matrix<typename F::Elem>& a) {
  const auto um = static_cast<std::size_t>(fam.m);
  if (a.rows() != um || a.cols() != um) throw DomainError("family input must be " + std::to_string(fam.m) + "x" + std::to_string(fam.m));
  if (fam.is_bad(field_characteristic(f))) throw DomainError("characteristic " + std::to_string(field_characteristic(f)) + " is excluded for this family");
  Matrix<typename F::Elem> b;
  if (fam.uses_inverse()) {
    auto inv = try_inverse(f, a);
    if (!inv) throw DomainError("family input is singular");
    b = *inv;
  } else if (f.is_zero(det(f, a))) {
    throw DomainError("family input is singular");
  }
  const auto un = static_cast<std::size_t>(fam.n);
  Matrix<typename F::Elem> out(un, un, f.zero());
  for (const auto& e : fam.entries) {
    auto acc = f.zero();
    for (const auto& t : e.terms) {
      auto prod = f.from_int(t.coef);
      for (const auto& x : t.factors) {
        prod = f.mul(prod, x.inverse ? b(x.i, x.j) : a(x.i, x.j));
        if (f.is_zero(prod)) break;
      }
      acc = f.add(acc, prod);
    }
    out(e.row, e.col) = f.add(out(e.row, e.col), acc);
  }
  return out;
}

/// Checks the weight-diagonal presentation and the homomorphism property on
/// random samples over GF(p); throws DomainError describing the first failure.
inline void verify_family(const AlgebraicFamily& fam, std::uint32_t seed = 1, int samples = 10) {
  std::int64_t p = 5;
  while (fam.is_bad(p) || !is_prime(p)) ++p;
  auto f = make_field(p, 1);
  const auto um = static_cast<std::size_t>(fam.m);
  std::mt19937 rng(seed);
  std::uniform_int_distribution<FiniteField::Elem> pick(0, static_cast<FiniteField::Elem>(p - 1));
  auto random_invertible = [&]() {
    while (true) {
      GfMatrix a(um, um, 0);
      for (auto& x : a.data()) x = pick(rng);
      if (det(*f, a) != 0) return a;
    }
  };
  for (int s = 0; s < samples; ++s) {
    GfMatrix d = zeros(*f, um, um);
    for (std::size_t i = 0; i < um; ++i) d(i, i) = static_cast<FiniteField::Elem>(1 + pick(rng) % (p - 1));
    auto pd = apply_family(fam, *f, d);
    for (std::size_t r = 0; r < static_cast<std::size_t>(fam.n); ++r)
      for (std::size_t c = 0; c < static_cast<std::size_t>(fam.n); ++c) {
        FiniteField::Elem expect = 0;
        if (r == c) {
          expect = 1;
          for (std::size_t j = 0; j < um; ++j) expect = f->mul(expect, f->pow(d(j, j), std::int64_t{fam.weights[r][j]}));
        }
        if (pd(r, c) != expect)
          throw DomainError("family '" + fam.name + "' is not weight-diagonal at (" + std::to_string(r) + "," + std::to_string(c) + ")");
      }
    auto a = random_invertible(), b = random_invertible();
    if (apply_family(fam, *f, mat_mul(*f, a, b)) != mat_mul(*f, apply_family(fam, *f, a), apply_family(fam, *f, b)))
      throw DomainError("family '" + fam.name + "' is not a homomorphism");
  }
}

/// Declarative family file.  Lines (indices 0-based, '#' starts a comment):
///   name <text>
///   m <int>
///   n <int>
///   det_power <int>
///   bad_primes <p> ...
///   weight <row> <w_0> ... <w_{m-1}>
///   term <row> <col> <coef> <factor> ...     factor = a:i:j (entry of A) or b:i:j (entry of A^{-1})
inline AlgebraicFamily parse_family(const std::string& text) {
  AlgebraicFamily fam;
  fam.kind = FamilyKind::custom;
  fam.name = "custom";
  fam.m = 0;
  fam.n = 0;
  std::map<std::size_t, std::vector<int>> weights;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<FamilyTerm>> terms;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& msg) { throw DomainError("family file line " + std::to_string(lineno) + ": " + msg); };
  auto to_int = [&](const std::string& s) -> std::int64_t {
    try {
      std::size_t pos = 0;
      auto v = std::stoll(s, &pos);
      if (pos != s.size()) fail("not an integer: " + s);
      return v;
    } catch (const std::logic_error&) {
      fail("not an integer: " + s);
    }
    return 0;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> tok;
    for (std::string t; ls >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    const auto& key = tok[0];
    if (key == "name") {
      if (tok.size() < 2) fail("name needs a value");
      fam.name = tok[1];
    } else if (key == "m" || key == "n" || key == "det_power") {
      if (tok.size() != 2) fail(key + " takes one integer");
      auto v = to_int(tok[1]);
      if (v < (key == "det_power" ? 0 : 1)) fail(key + " out of range");
      (key == "m" ? fam.m : key == "n" ? fam.n : fam.det_power) = static_cast<int>(v);
    } else if (key == "bad_primes") {
      for (std::size_t i = 1; i < tok.size(); ++i) {
        auto p = to_int(tok[i]);
        if (!is_prime(p)) fail("bad prime " + tok[i] + " is not prime");
        fam.bad_primes.push_back(p);
      }
    } else if (key == "weight") {
      if (fam.m == 0 || fam.n == 0) fail("m and n must precede weights");
      if (tok.size() != static_cast<std::size_t>(fam.m) + 2) fail("weight needs a row and m exponents");
      auto row = to_int(tok[1]);
      if (row < 0 || row >= fam.n) fail("weight row out of range");
      std::vector<int> w;
      for (std::size_t i = 2; i < tok.size(); ++i) w.push_back(static_cast<int>(to_int(tok[i])));
      weights[static_cast<std::size_t>(row)] = w;
    } else if (key == "term") {
      if (fam.m == 0 || fam.n == 0) fail("m and n must precede terms");
      if (tok.size() < 4) fail("term needs row, col, coefficient");
      auto row = to_int(tok[1]), col = to_int(tok[2]);
      if (row < 0 || row >= fam.n || col < 0 || col >= fam.n) fail("term position out of range");
      FamilyTerm t;
      t.coef = to_int(tok[3]);
      for (std::size_t i = 4; i < tok.size(); ++i) {
        const auto& s = tok[i];
        auto c1 = s.find(':'), c2 = s.rfind(':');
        if (s.size() < 5 || c1 != 1 || c2 == c1 || (s[0] != 'a' && s[0] != 'b')) fail("bad factor " + s);
        auto fi = to_int(s.substr(2, c2 - 2)), fj = to_int(s.substr(c2 + 1));
        if (fi < 0 || fi >= fam.m || fj < 0 || fj >= fam.m) fail("factor index out of range: " + s);
        t.factors.push_back({s[0] == 'b', static_cast<std::size_t>(fi), static_cast<std::size_t>(fj)});
      }
      terms[{static_cast<std::size_t>(row), static_cast<std::size_t>(col)}].push_back(t);
    } else {
      fail("unknown keyword " + key);
    }
  }
  if (fam.m == 0 || fam.n == 0) throw DomainError("family file must set m and n");
  for (std::size_t r = 0; r < static_cast<std::size_t>(fam.n); ++r) {
    if (!weights.count(r)) throw DomainError("family file is missing weight " + std::to_string(r));
    fam.weights.push_back(weights[r]);
  }
  for (auto& [pos, ts] : terms) fam.entries.push_back({pos.first, pos.second, ts});
  verify_family(fam);
  return fam;
}

inline AlgebraicFamily load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("cannot open family file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_family(ss.str());
}

/// Eigenvalue monomial prod_i lambda_i^{h_i(q)}; h_i has degree < n_i.
struct MonomialInFrobenius {
  std::vector<ZPoly> exps;

  Integer exponent(std::size_t i, const Integer& q) const { return exps[i].eval(q); }
  bool is_trivial() const {
    for (const auto& h : exps)
      if (!h.is_zero()) return false;
    return true;
  }
  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < exps.size(); ++i) {
      const auto& h = exps[i];
      if (h.is_zero()) continue;
      std::string sym = exps.size() <= 26 ? std::string(1, static_cast<char>('a' + i)) : "x" + std::to_string(i + 1);
      if (h == ZPoly(1)) {
        out += sym;
        continue;
      }
      std::string e = h.str("q");
      bool simple = h.degree() == 0 && h.coeff(0) > 0;
      out += sym + "^" + (simple ? e : "(" + e + ")");
    }
    return out.empty() ? "1" : out;
  }
  friend bool operator==(const MonomialInFrobenius& a, const MonomialInFrobenius& b) { return a.exps == b.exps; }
  friend bool operator!=(const MonomialInFrobenius& a, const MonomialInFrobenius& b) { return !(a == b); }
  /// Lex order with larger exponents first, symbol by symbol, constant term upward.
  friend bool operator<(const MonomialInFrobenius& a, const MonomialInFrobenius& b) {
    for (std::size_t i = 0; i < std::min(a.exps.size(), b.exps.size()); ++i) {
      auto len = std::max(a.exps[i].coeffs().size(), b.exps[i].coeffs().size());
      for (std::size_t k = 0; k < len; ++k) {
        auto x = a.exps[i].coeff(k), y = b.exps[i].coeff(k);
        if (x != y) return x > y;
      }
    }
    return a.exps.size() < b.exps.size();
  }
};

struct JordanBlock {
  MonomialInFrobenius monomial;
  int size = 1;
  int multiplicity = 1;
  friend bool operator==(const JordanBlock& a, const JordanBlock& b) {
    return a.monomial == b.monomial && a.size == b.size && a.multiplicity == b.multiplicity;
  }
};

constexpr std::int64_t kGeneric = 0;

inline std::string char_class_name(std::int64_t c) { return c == kGeneric ? "generic" : "char " + std::to_string(c); }

/// Jordan form of phi(A) with symbolic eigenvalues: blocks sorted by
/// (monomial, size), identical (monomial, size) merged into a multiplicity.
struct SymbolicJordanSpec {
  std::int64_t char_class = kGeneric;
  std::vector<int> degrees;  // n_i per eigenvalue symbol
  std::vector<JordanBlock> blocks;

  std::vector<MonomialInFrobenius> monomials() const {
    std::vector<MonomialInFrobenius> out;
    for (const auto& b : blocks)
      if (out.empty() || out.back() != b.monomial) out.push_back(b.monomial);
    return out;
  }
  int dimension() const {
    int s = 0;
    for (const auto& b : blocks) s += b.size * b.multiplicity;
    return s;
  }
  /// Block sizes of one monomial, ascending, repeated by multiplicity.
  std::vector<int> sizes_of(const MonomialInFrobenius& mono) const {
    std::vector<int> out;
    for (const auto& b : blocks)
      if (b.monomial == mono)
        for (int c = 0; c < b.multiplicity; ++c) out.push_back(b.size);
    return out;
  }
  std::string str() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& b : blocks)
      for (int c = 0; c < b.multiplicity; ++c) {
        os << (first ? "" : " + ") << b.monomial.str() << "J" << b.size;
        first = false;
      }
    return os.str();
  }
};

namespace detail {

struct WeightBlocks {
  std::map<std::vector<int>, std::vector<std::size_t>> groups;  // collapsed weight -> target indices
};

inline WeightBlocks weight_groups(const AlgebraicFamily& fam, const std::vector<int>& parts) {
  int total = 0;
  for (int k : parts) {
    if (k < 1) throw DomainError("partition parts must be positive");
    total += k;
  }
  if (total != fam.m) throw DomainError("partition sums to " + std::to_string(total) + ", expected m = " + std::to_string(fam.m));
  std::vector<std::size_t> owner;
  for (std::size_t b = 0; b < parts.size(); ++b)
    for (int c = 0; c < parts[b]; ++c) owner.push_back(b);
  WeightBlocks wb;
  for (std::size_t a = 0; a < static_cast<std::size_t>(fam.n); ++a) {
    std::vector<int> w(parts.size(), 0);
    for (std::size_t j = 0; j < owner.size(); ++j) w[owner[j]] += fam.weights[a][j];
    wb.groups[w].push_back(a);
  }
  return wb;
}

template <class F>
Matrix<typename F::Elem> unipotent_jordan(const F& f, const std::vector<int>& parts) {
  std::vector<Matrix<typename F::Elem>> blocks;
  for (int k : parts) {
    auto j = identity(f, static_cast<std::size_t>(k));
    for (std::size_t i = 0; i + 1 < static_cast<std::size_t>(k); ++i) j(i, i + 1) = f.one();
    blocks.push_back(j);
  }
  return direct_sum(f, blocks);
}

template <class F>
Matrix<typename F::Elem> submatrix(const Matrix<typename F::Elem>& m, const std::vector<std::size_t>& idx) {
  Matrix<typename F::Elem> out(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < idx.size(); ++j) out(i, j) = m(idx[i], idx[j]);
  return out;
}

/// Per collapsed weight, the Jordan partition of phi(J) restricted to that weight space.
template <class F>
std::map<std::vector<int>, std::vector<int>> weight_partitions(const AlgebraicFamily& fam, const F& f, const std::vector<int>& parts) {
  auto wb = weight_groups(fam, parts);
  auto m = apply_family(fam, f, unipotent_jordan(f, parts));
  std::vector<const std::vector<int>*> group_of(static_cast<std::size_t>(fam.n));
  for (const auto& [w, idx] : wb.groups)
    for (auto a : idx) group_of[a] = &w;
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c)
      if (!f.is_zero(m(r, c)) && *group_of[r] != *group_of[c])
        throw ConsistencyError("phi(J) mixes weight spaces; the weights do not match the action");
  std::map<std::vector<int>, std::vector<int>> out;
  for (const auto& [w, idx] : wb.groups) {
    Partition part;
    try {
      part = unipotent_partition(f, submatrix<F>(m, idx));
    } catch (const DomainError&) {
      throw DomainError("weight block is not unipotent; the family's weights are inconsistent");
    }
    auto sizes = part.parts;
    std::sort(sizes.begin(), sizes.end());
    out[w] = sizes;
  }
  return out;
}

inline std::map<std::vector<int>, std::vector<int>> weight_partitions_for(const AlgebraicFamily& fam, const std::vector<int>& parts,
                                                                           std::int64_t char_class) {
  if (char_class == kGeneric) return weight_partitions(fam, RationalField{}, parts);
  if (!is_prime(char_class)) throw DomainError("characteristic " + std::to_string(char_class) + " is not prime");
  if (fam.is_bad(char_class)) throw DomainError("characteristic " + std::to_string(char_class) + " is excluded for this family");
  auto f = make_field(char_class, 1);
  return weight_partitions(fam, *f, parts);
}

inline std::vector<JordanBlock> merge_blocks(std::vector<std::pair<MonomialInFrobenius, int>> raw) {
  std::sort(raw.begin(), raw.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first < y.first;
    return x.second < y.second;
  });
  std::vector<JordanBlock> out;
  for (const auto& [mono, size] : raw) {
    if (!out.empty() && out.back().monomial == mono && out.back().size == size)
      ++out.back().multiplicity;
    else
      out.push_back({mono, size, 1});
  }
  return out;
}

}  // namespace detail

/// Jordan form of phi(lambda_1 J_{k_1} + ... + lambda_r J_{k_r}) with
/// independent symbols lambda_i, in the given characteristic (0 = generic).
inline SymbolicJordanSpec symbolic_jordan_partition(const AlgebraicFamily& fam, const std::vector<int>& parts, std::int64_t char_class) {
  SymbolicJordanSpec spec;
  spec.char_class = char_class;
  spec.degrees.assign(parts.size(), 1);
  std::vector<std::pair<MonomialInFrobenius, int>> raw;
  for (const auto& [w, sizes] : detail::weight_partitions_for(fam, parts, char_class)) {
    MonomialInFrobenius mono;
    for (int e : w) mono.exps.emplace_back(e);
    for (int s : sizes) raw.emplace_back(mono, s);
  }
  spec.blocks = detail::merge_blocks(std::move(raw));
  return spec;
}

/// Primes at which the Jordan structure differs from characteristic zero,
/// together with the family's bad primes.  Candidates are the primes dividing
/// a nonzero elementary divisor of some (M_w - I)^k; each is confirmed over GF(p).
inline std::vector<std::int64_t> exceptional_primes(const AlgebraicFamily& fam, const std::vector<int>& parts) {
  auto wb = detail::weight_groups(fam, parts);
  RationalField qf;
  auto m = apply_family(fam, qf, detail::unipotent_jordan(qf, parts));
  std::set<std::int64_t> candidates;
  for (const auto& [w, idx] : wb.groups) {
    auto n = mat_sub(qf, detail::submatrix<RationalField>(m, idx), identity(qf, idx.size()));
    IntMatrix ni(n.rows(), n.cols(), Integer(0));
    Integer den = 1;
    for (const auto& x : n.data()) den = lcm_int(den, denominator(x));
    for (std::size_t i = 0; i < n.rows(); ++i)
      for (std::size_t j = 0; j < n.cols(); ++j) ni(i, j) = numerator(n(i, j) * den);
    for (const auto& p : prime_factors(den)) candidates.insert(static_cast<std::int64_t>(p));
    IntMatrix power = ni;
    for (std::size_t k = 1; k < idx.size(); ++k) {
      for (const auto& d : smith_diagonal(power))
        if (d != 0)
          for (const auto& p : prime_factors(d)) candidates.insert(static_cast<std::int64_t>(p));
      power = int_mul(power, ni);
    }
  }
  std::set<std::int64_t> out(fam.bad_primes.begin(), fam.bad_primes.end());
  auto generic = detail::weight_partitions_for(fam, parts, kGeneric);
  for (auto p : candidates) {
    if (fam.is_bad(p)) continue;
    if (detail::weight_partitions_for(fam, parts, p) != generic) out.insert(p);
  }
  return {out.begin(), out.end()};
}

/// One Jordan block of the splitting-field form of a type: pair index, Frobenius power k, size.
struct ExpandedBlock {
  std::size_t pair = 0;
  int frobenius_power = 0;
  int size = 1;
};

inline std::vector<ExpandedBlock> expand_type(const MatrixType& t) {
  std::vector<ExpandedBlock> out;
  for (std::size_t i = 0; i < t.pairs().size(); ++i)
    for (int k = 0; k < t.pairs()[i].degree; ++k)
      for (int e : t.pairs()[i].exps) out.push_back({i, k, e});
  return out;
}

inline std::vector<int> expanded_partition(const MatrixType& t) {
  std::vector<int> parts;
  for (const auto& b : expand_type(t)) parts.push_back(b.size);
  return parts;
}

/// Symbolic Jordan form of phi(A) for A of type t: eigenvalue symbols are
/// lambda_i^{q^k}, monomials are expressed in the base symbols lambda_i.
inline SymbolicJordanSpec jordan_spec_for_type(const AlgebraicFamily& fam, const MatrixType& t, std::int64_t char_class) {
  if (t.dimension() != fam.m) throw DomainError("type " + t.str() + " is not a type of GL(" + std::to_string(fam.m) + ")");
  auto blocks = expand_type(t);
  std::vector<int> parts;
  for (const auto& b : blocks) parts.push_back(b.size);
  SymbolicJordanSpec spec;
  spec.char_class = char_class;
  for (const auto& p : t.pairs()) spec.degrees.push_back(p.degree);
  std::vector<std::pair<MonomialInFrobenius, int>> raw;
  for (const auto& [w, sizes] : detail::weight_partitions_for(fam, parts, char_class)) {
    std::vector<std::vector<Integer>> coef(t.pairs().size());
    for (std::size_t i = 0; i < coef.size(); ++i) coef[i].assign(static_cast<std::size_t>(t.pairs()[i].degree), Integer(0));
    for (std::size_t b = 0; b < blocks.size(); ++b) coef[blocks[b].pair][static_cast<std::size_t>(blocks[b].frobenius_power)] += w[b];
    MonomialInFrobenius mono;
    for (auto& c : coef) mono.exps.emplace_back(std::move(c));
    for (int s : sizes) raw.emplace_back(mono, s);
  }
  spec.blocks = detail::merge_blocks(std::move(raw));
  return spec;
}

/// h(q) -> q h(q) mod q^n - 1 (cyclic shift of coefficients); n = 1 is the identity.
inline ZPoly frobenius_exponent(const ZPoly& h, int n) {
  if (n == 1 || h.is_zero()) return h;
  std::vector<Integer> c(static_cast<std::size_t>(n), Integer(0));
  for (std::size_t k = 0; k < h.coeffs().size(); ++k) c[(k + 1) % static_cast<std::size_t>(n)] += h.coeffs()[k];
  return ZPoly(std::move(c));
}

inline MonomialInFrobenius frobenius_monomial(const MonomialInFrobenius& mono, const std::vector<int>& degrees) {
  MonomialInFrobenius out;
  for (std::size_t i = 0; i < mono.exps.size(); ++i) out.exps.push_back(frobenius_exponent(mono.exps[i], degrees[i]));
  return out;
}

/// Permutation of spec.monomials() induced by x -> x^q.
inline std::vector<std::size_t> frobenius_on_monomials(const SymbolicJordanSpec& spec) {
  auto mons = spec.monomials();
  std::vector<std::size_t> perm;
  for (const auto& mono : mons) {
    auto img = frobenius_monomial(mono, spec.degrees);
    auto it = std::lower_bound(mons.begin(), mons.end(), img);
    if (it == mons.end() || *it != img) throw ConsistencyError("Frobenius image " + img.str() + " is not a monomial of the spec");
    perm.push_back(static_cast<std::size_t>(it - mons.begin()));
  }
  std::vector<bool> hit(perm.size(), false);
  for (auto p : perm) {
    if (hit[p]) throw ConsistencyError("Frobenius action on monomials is not a permutation");
    hit[p] = true;
  }
  return perm;
}

/// Type of phi(A) when the distinct monomials coincide according to
/// class_of (one label per monomial of spec.monomials()).
inline MatrixType image_type(const SymbolicJordanSpec& spec, const std::vector<int>& class_of) {
  auto mons = spec.monomials();
  if (class_of.size() != mons.size()) throw DomainError("equality pattern has wrong length");
  auto perm = frobenius_on_monomials(spec);
  std::map<int, int> image;
  for (std::size_t a = 0; a < mons.size(); ++a) {
    int from = class_of[a], to = class_of[perm[a]];
    auto [it, fresh] = image.emplace(from, to);
    if (!fresh && it->second != to) throw DomainError("equality pattern is not Frobenius-consistent");
  }
  std::map<int, std::vector<int>> sizes;
  for (std::size_t a = 0; a < mons.size(); ++a) {
    auto s = spec.sizes_of(mons[a]);
    auto& dst = sizes[class_of[a]];
    dst.insert(dst.end(), s.begin(), s.end());
  }
  std::set<int> seen;
  std::vector<TypePair> pairs;
  for (auto& [c, sz] : sizes) {
    if (seen.count(c)) continue;
    int len = 0;
    int cur = c;
    do {
      seen.insert(cur);
      auto s1 = sizes[cur];
      std::sort(s1.begin(), s1.end());
      auto s0 = sz;
      std::sort(s0.begin(), s0.end());
      if (s0 != s1) throw ConsistencyError("Frobenius-conjugate eigenvalues with different block sizes");
      cur = image[cur];
      ++len;
    } while (cur != c);
    pairs.push_back({len, sz});
  }
  return MatrixType(std::move(pairs));
}

}  // namespace porc
