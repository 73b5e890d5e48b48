#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "porc/arith.hpp"
#include "porc/matrix.hpp"

namespace porc {

/// Result of a Smith normal form computation: U * M * V = S.
struct SmithForm {
  IntMatrix S;
  IntMatrix U;
  IntMatrix V;

  std::vector<Integer> diagonal() const {
    std::vector<Integer> d;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i) d.push_back(S(i, i));
    return d;
  }
};

namespace detail {

// Shared SNF driver; Track selects whether U and V are maintained.
template <bool Track>
void smith_reduce(IntMatrix& S, IntMatrix* U, IntMatrix* V) {
  const std::size_t rows = S.rows(), cols = S.cols();
  auto row_axpy = [&](std::size_t dst, std::size_t src, const Integer& c) {  // row dst -= c * row src
    for (std::size_t j = 0; j < cols; ++j)
      if (S(src, j) != 0) S(dst, j) -= c * S(src, j);
    if constexpr (Track)
      for (std::size_t j = 0; j < rows; ++j)
        if ((*U)(src, j) != 0) (*U)(dst, j) -= c * (*U)(src, j);
  };
  auto col_axpy = [&](std::size_t dst, std::size_t src, const Integer& c) {  // col dst -= c * col src
    for (std::size_t i = 0; i < rows; ++i)
      if (S(i, src) != 0) S(i, dst) -= c * S(i, src);
    if constexpr (Track)
      for (std::size_t i = 0; i < cols; ++i)
        if ((*V)(i, src) != 0) (*V)(i, dst) -= c * (*V)(i, src);
  };

  for (std::size_t t = 0; t < std::min(rows, cols); ++t) {
    while (true) {
      // minimal |entry| in the trailing block, ties broken by (row, col)
      std::optional<std::pair<std::size_t, std::size_t>> best;
      Integer best_abs;
      for (std::size_t i = t; i < rows; ++i)
        for (std::size_t j = t; j < cols; ++j) {
          if (S(i, j) == 0) continue;
          Integer a = abs_int(S(i, j));
          if (!best || a < best_abs) {
            best = {i, j};
            best_abs = a;
          }
        }
      if (!best) return;
      S.swap_rows(t, best->first);
      S.swap_cols(t, best->second);
      if constexpr (Track) {
        U->swap_rows(t, best->first);
        V->swap_cols(t, best->second);
      }
      bool clean = true;
      for (std::size_t i = t + 1; i < rows; ++i) {
        if (S(i, t) == 0) continue;
        Integer c = S(i, t) / S(t, t);
        if (c != 0) row_axpy(i, t, c);
        if (S(i, t) != 0) clean = false;
      }
      for (std::size_t j = t + 1; j < cols; ++j) {
        if (S(t, j) == 0) continue;
        Integer c = S(t, j) / S(t, t);
        if (c != 0) col_axpy(j, t, c);
        if (S(t, j) != 0) clean = false;
      }
      if (!clean) continue;
      // divisibility chain: pivot must divide the whole trailing block
      std::optional<std::size_t> bad_row;
      for (std::size_t i = t + 1; i < rows && !bad_row; ++i)
        for (std::size_t j = t + 1; j < cols; ++j)
          if (S(i, j) % S(t, t) != 0) {
            bad_row = i;
            break;
          }
      if (!bad_row) break;
      row_axpy(t, *bad_row, Integer(-1));
    }
    if (S(t, t) < 0) {
      for (std::size_t j = 0; j < cols; ++j) S(t, j) = -S(t, j);
      if constexpr (Track)
        for (std::size_t j = 0; j < rows; ++j) (*U)(t, j) = -(*U)(t, j);
    }
  }
}

}  // namespace detail

/// Smith normal form with unimodular transforms: U * M * V = S, S diagonal,
/// nonnegative, with d_1 | d_2 | ... .  Pivots are chosen as a minimal
/// nonzero absolute value in the trailing block.
inline SmithForm smith_normal_form(const IntMatrix& m) {
  SmithForm out{m, int_identity(m.rows()), int_identity(m.cols())};
  detail::smith_reduce<true>(out.S, &out.U, &out.V);
  return out;
}

/// Diagonal of the Smith normal form only.
inline std::vector<Integer> smith_diagonal(IntMatrix m) {
  detail::smith_reduce<false>(m, nullptr, nullptr);
  std::vector<Integer> d;
  for (std::size_t i = 0; i < std::min(m.rows(), m.cols()); ++i) d.push_back(m(i, i));
  return d;
}

/// Product of the elementary divisors (0 when the matrix is rank deficient).
inline Integer elementary_divisor_product(const IntMatrix& m) {
  Integer p = 1;
  for (const auto& d : smith_diagonal(m)) p *= d;
  if (m.rows() < m.cols()) return 0;
  return p;
}

/// Unimodular Q built only from row swaps, subtraction of integer multiples of
/// one row from another, and row negation, such that Q * C is upper triangular
/// with positive diagonal.
inline IntMatrix unimodular_triangularize(const IntMatrix& c) {
  if (!c.square()) throw DomainError("unimodular_triangularize needs a square matrix");
  const std::size_t n = c.rows();
  IntMatrix d = c;
  IntMatrix q = int_identity(n);
  auto swap = [&](std::size_t a, std::size_t b) {
    d.swap_rows(a, b);
    q.swap_rows(a, b);
  };
  auto subtract = [&](std::size_t dst, std::size_t src, const Integer& k) {
    for (std::size_t j = 0; j < n; ++j) {
      d(dst, j) -= k * d(src, j);
      q(dst, j) -= k * q(src, j);
    }
  };
  auto negate = [&](std::size_t r) {
    for (std::size_t j = 0; j < n; ++j) {
      d(r, j) = -d(r, j);
      q(r, j) = -q(r, j);
    }
  };
  for (std::size_t col = 0; col < n; ++col) {
    while (true) {
      std::optional<std::size_t> best;
      for (std::size_t i = col; i < n; ++i)
        if (d(i, col) != 0 && (!best || abs_int(d(i, col)) < abs_int(d(*best, col)))) best = i;
      if (!best) throw DomainError("unimodular_triangularize: matrix is singular");
      swap(col, *best);
      bool done = true;
      for (std::size_t i = col + 1; i < n; ++i) {
        if (d(i, col) == 0) continue;
        subtract(i, col, d(i, col) / d(col, col));
        if (d(i, col) != 0) done = false;
      }
      if (done) break;
    }
    if (d(col, col) < 0) negate(col);
  }
  return q;
}

/// Rational matrix whose entries lie in the ring of rationals with
/// denominators divisible only by the primes in `primes`.
struct PLocalMatrix {
  RatMatrix matrix;
  std::vector<Integer> primes;

  bool entries_local() const {
    for (const auto& x : matrix.data()) {
      Integer den = denominator(x);
      for (const auto& p : primes)
        while (den % p == 0) den /= p;
      if (den != 1) return false;
    }
    return true;
  }
};

namespace detail {

inline bool denominators_in(const RatMatrix& m, const std::vector<Integer>& primes) {
  return PLocalMatrix{m, primes}.entries_local();
}

// Clears denominators of a rational vector and divides by the content.
inline std::vector<Integer> primitive_integer_vector(const std::vector<Rational>& v) {
  Integer den = 1;
  for (const auto& x : v) den = lcm_int(den, denominator(x));
  std::vector<Integer> out;
  Integer g = 0;
  for (const auto& x : v) {
    Integer n = numerator(x * den);
    g = gcd_int(g, n);
    out.push_back(n);
  }
  if (g > 1)
    for (auto& x : out) x /= g;
  return out;
}

}  // namespace detail

/// Conjugates a complete family of mutually orthogonal rational idempotents to
/// diagonal form.  Builds an integer eigenbasis C grouped by idempotent, a
/// unimodular Q with QC upper triangular, and the unit upper triangular
/// correction E whose block-i columns are the columns of F_i = Q E_i Q^{-1};
/// returns T = Q^{-1} E, so T^{-1} E_i T is diagonal with 0/1 entries.
inline PLocalMatrix simultaneous_diagonalize(const std::vector<RatMatrix>& idempotents, const std::vector<Integer>& primes) {
  RationalField f;
  if (idempotents.empty()) throw DomainError("simultaneous_diagonalize: empty idempotent list");
  const std::size_t n = idempotents.front().rows();
  RatMatrix sum = zeros(f, n, n);
  for (std::size_t i = 0; i < idempotents.size(); ++i) {
    const auto& e = idempotents[i];
    if (e.rows() != n || e.cols() != n) throw DomainError("simultaneous_diagonalize: dimension mismatch");
    if (!detail::denominators_in(e, primes)) throw DomainError("simultaneous_diagonalize: denominator outside prime set");
    if (mat_mul(f, e, e) != e) throw DomainError("simultaneous_diagonalize: input " + std::to_string(i) + " is not idempotent");
    for (std::size_t j = 0; j < idempotents.size(); ++j) {
      if (i == j) continue;
      if (mat_mul(f, e, idempotents[j]) != zeros(f, n, n))
        throw DomainError("simultaneous_diagonalize: inputs " + std::to_string(i) + "," + std::to_string(j) + " not orthogonal");
    }
    sum = mat_add(f, sum, e);
  }
  if (sum != identity(f, n)) throw DomainError("simultaneous_diagonalize: idempotents do not sum to the identity");

  // integer eigenbasis, columns grouped by idempotent in input order
  IntMatrix c(n, n, Integer(0));
  std::vector<std::size_t> owner;
  for (std::size_t i = 0; i < idempotents.size(); ++i) {
    auto basis = nullspace(f, mat_sub(f, idempotents[i], identity(f, n)));
    for (const auto& v : basis) {
      auto iv = detail::primitive_integer_vector(v);
      std::size_t col = owner.size();
      for (std::size_t r = 0; r < n; ++r) c(r, col) = iv[r];
      owner.push_back(i);
    }
  }
  if (owner.size() != n) throw ConsistencyError("simultaneous_diagonalize: eigenbasis has wrong size");

  IntMatrix q = unimodular_triangularize(c);
  RatMatrix qr = to_rational(q);
  RatMatrix qinv = inverse(f, qr);
  RatMatrix e(n, n, Rational(0));
  std::vector<RatMatrix> projected;
  for (const auto& ei : idempotents) projected.push_back(mat_mul(f, mat_mul(f, qr, ei), qinv));
  for (std::size_t col = 0; col < n; ++col) {
    const auto& fi = projected[owner[col]];
    for (std::size_t r = 0; r < n; ++r) e(r, col) = fi(r, col);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (e(i, i) != 1) throw ConsistencyError("simultaneous_diagonalize: correction matrix is not unit triangular");
    for (std::size_t j = 0; j < i; ++j)
      if (e(i, j) != 0) throw ConsistencyError("simultaneous_diagonalize: correction matrix is not upper triangular");
  }
  PLocalMatrix t{mat_mul(f, qinv, e), primes};
  if (!t.entries_local()) throw ConsistencyError("simultaneous_diagonalize: result leaves the local ring");
  return t;
}

/// Row rank over the rationals.
inline std::size_t rank(const RatMatrix& m) { return rank(RationalField{}, m); }

/// Row rank over a finite field.
inline std::size_t rank(const FiniteField& f, const GfMatrix& m) { return rank<FiniteField>(f, m); }

/// Full-rank sublattice of Z^t kept in canonical Hermite normal form: an upper
/// triangular basis with positive pivots and entries above each pivot reduced
/// into [0, pivot).
class IntLattice {
 public:
  explicit IntLattice(std::size_t dim) : basis_(dim) {}

  std::size_t dim() const { return basis_.size(); }

  void add(std::vector<Integer> v) {
    const std::size_t t = dim();
    for (std::size_t j = 0; j < t; ++j) {
      if (v[j] == 0) continue;
      if (basis_[j].empty()) {
        if (v[j] < 0)
          for (auto& x : v) x = -x;
        basis_[j] = std::move(v);
        reduce();
        return;
      }
      auto& b = basis_[j];
      Integer x, y;
      Integer g = ext_gcd(b[j], v[j], x, y);
      Integer bg = b[j] / g, vg = v[j] / g;
      std::vector<Integer> nb(t), nv(t);
      for (std::size_t k = j; k < t; ++k) {
        nb[k] = x * b[k] + y * v[k];
        nv[k] = bg * v[k] - vg * b[k];
      }
      b = std::move(nb);
      v = std::move(nv);
    }
    reduce();
  }

  bool contains(std::vector<Integer> v) const {
    for (std::size_t j = 0; j < dim(); ++j) {
      if (v[j] == 0) continue;
      if (basis_[j].empty()) return false;
      if (v[j] % basis_[j][j] != 0) return false;
      Integer c = v[j] / basis_[j][j];
      for (std::size_t k = j; k < dim(); ++k) v[k] -= c * basis_[j][k];
    }
    return true;
  }

  bool full_rank() const {
    return std::all_of(basis_.begin(), basis_.end(), [](const auto& r) { return !r.empty(); });
  }

  /// |Z^t / L|, the product of the elementary divisors.
  Integer index() const {
    if (!full_rank()) throw DomainError("lattice index of a rank-deficient lattice");
    Integer p = 1;
    for (std::size_t j = 0; j < dim(); ++j) p *= basis_[j][j];
    return p;
  }

  IntMatrix basis_matrix() const {
    IntMatrix m(dim(), dim(), Integer(0));
    for (std::size_t i = 0; i < dim(); ++i)
      if (!basis_[i].empty())
        for (std::size_t j = 0; j < dim(); ++j) m(i, j) = basis_[i][j];
    return m;
  }

  friend bool operator<(const IntLattice& a, const IntLattice& b) { return a.basis_ < b.basis_; }
  friend bool operator==(const IntLattice& a, const IntLattice& b) { return a.basis_ == b.basis_; }

 private:
  void reduce() {
    for (std::size_t j = 0; j < dim(); ++j) {
      if (basis_[j].empty()) continue;
      const Integer& p = basis_[j][j];
      for (std::size_t i = 0; i < j; ++i) {
        if (basis_[i].empty()) continue;
        Integer c = floor_div(basis_[i][j], p);
        if (c == 0) continue;
        for (std::size_t k = j; k < dim(); ++k) basis_[i][k] -= c * basis_[j][k];
      }
    }
  }
  std::vector<std::vector<Integer>> basis_;
};

}  // namespace porc
