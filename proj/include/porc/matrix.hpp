#pragma once

#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "porc/arith.hpp"
#include "porc/gf.hpp"

namespace porc {

/// Dense row-major matrix.  Arithmetic is supplied by a field context so the
/// same algorithms run over the rationals and over any GF(q).
template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T{}) : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data) : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows * cols) throw DomainError("matrix data size mismatch");
  }
  static Matrix from_rows(const std::vector<std::vector<T>>& rows) {
    std::size_t r = rows.size(), c = rows.empty() ? 0 : rows[0].size();
    Matrix m(r, c);
    for (std::size_t i = 0; i < r; ++i) {
      if (rows[i].size() != c) throw DomainError("ragged matrix rows");
      for (std::size_t j = 0; j < c; ++j) m(i, j) = rows[i][j];
    }
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const std::vector<T>& data() const { return data_; }
  std::vector<T>& data() { return data_; }
  std::vector<T> row(std::size_t i) const {
    return std::vector<T>(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                          data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
  }
  void swap_rows(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < cols_; ++j) std::swap((*this)(a, j), (*this)(b, j));
  }
  void swap_cols(std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < rows_; ++i) std::swap((*this)(i, a), (*this)(i, b));
  }
  Matrix transpose() const {
    Matrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }
  friend bool operator<(const Matrix& a, const Matrix& b) {
    if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
    if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
    return a.data_ < b.data_;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

using IntMatrix = Matrix<Integer>;
using RatMatrix = Matrix<Rational>;
using GfMatrix = Matrix<FiniteField::Elem>;

/// Field context for the rationals with the same surface as FiniteField.
struct RationalField {
  using Elem = Rational;
  static Elem zero() { return 0; }
  static Elem one() { return 1; }
  static bool is_zero(const Elem& a) { return a == 0; }
  static Elem from_int(std::int64_t n) { return Elem(n); }
  static Elem from_int(const Integer& n) { return Elem(n); }
  static Elem add(const Elem& a, const Elem& b) { return a + b; }
  static Elem sub(const Elem& a, const Elem& b) { return a - b; }
  static Elem neg(const Elem& a) { return -a; }
  static Elem mul(const Elem& a, const Elem& b) { return a * b; }
  static Elem div(const Elem& a, const Elem& b) { return a / b; }
  static Elem inv(const Elem& a) {
    if (a == 0) throw DomainError("inverse of zero");
    return 1 / a;
  }
  static std::string str(const Elem& a) { return to_string(a); }
};

template <class F>
Matrix<typename F::Elem> identity(const F& f, std::size_t n) {
  Matrix<typename F::Elem> m(n, n, f.zero());
  for (std::size_t i = 0; i < n; ++i) m(i, i) = f.one();
  return m;
}

template <class F>
Matrix<typename F::Elem> zeros(const F& f, std::size_t r, std::size_t c) {
  return Matrix<typename F::Elem>(r, c, f.zero());
}

template <class F>
Matrix<typename F::Elem> mat_mul(const F& f, const Matrix<typename F::Elem>& a, const Matrix<typename F::Elem>& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product dimension mismatch");
  Matrix<typename F::Elem> out(a.rows(), b.cols(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const auto& aik = a(i, k);
      if (f.is_zero(aik)) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) = f.add(out(i, j), f.mul(aik, b(k, j)));
    }
  return out;
}

template <class F>
Matrix<typename F::Elem> mat_add(const F& f, const Matrix<typename F::Elem>& a, const Matrix<typename F::Elem>& b) {
  Matrix<typename F::Elem> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.add(a(i, j), b(i, j));
  return out;
}

template <class F>
Matrix<typename F::Elem> mat_sub(const F& f, const Matrix<typename F::Elem>& a, const Matrix<typename F::Elem>& b) {
  Matrix<typename F::Elem> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.sub(a(i, j), b(i, j));
  return out;
}

template <class F>
Matrix<typename F::Elem> mat_scale(const F& f, const typename F::Elem& c, const Matrix<typename F::Elem>& a) {
  Matrix<typename F::Elem> out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = f.mul(c, a(i, j));
  return out;
}

template <class F>
Matrix<typename F::Elem> mat_pow(const F& f, const Matrix<typename F::Elem>& a, unsigned e) {
  auto r = identity(f, a.rows());
  for (unsigned i = 0; i < e; ++i) r = mat_mul(f, r, a);
  return r;
}

/// Row vector times matrix.
template <class F>
std::vector<typename F::Elem> vec_mul(const F& f, const std::vector<typename F::Elem>& v, const Matrix<typename F::Elem>& a) {
  std::vector<typename F::Elem> out(a.cols(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (f.is_zero(v[i])) continue;
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] = f.add(out[j], f.mul(v[i], a(i, j)));
  }
  return out;
}

/// Kronecker product: (a ⊗ b)[(i,k),(j,l)] = a[i,j] b[k,l].
template <class F>
Matrix<typename F::Elem> kron(const F& f, const Matrix<typename F::Elem>& a, const Matrix<typename F::Elem>& b) {
  Matrix<typename F::Elem> out(a.rows() * b.rows(), a.cols() * b.cols(), f.zero());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      if (f.is_zero(a(i, j))) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = f.mul(a(i, j), b(k, l));
    }
  return out;
}

template <class F>
Matrix<typename F::Elem> direct_sum(const F& f, const std::vector<Matrix<typename F::Elem>>& blocks) {
  std::size_t n = 0;
  for (const auto& b : blocks) n += b.rows();
  Matrix<typename F::Elem> out(n, n, f.zero());
  std::size_t off = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < b.cols(); ++j) out(off + i, off + j) = b(i, j);
    off += b.rows();
  }
  return out;
}

/// In-place reduced row echelon form; returns pivot columns.
template <class F>
std::vector<std::size_t> rref_in_place(const F& f, Matrix<typename F::Elem>& m) {
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
    std::size_t piv = r;
    while (piv < m.rows() && f.is_zero(m(piv, c))) ++piv;
    if (piv == m.rows()) continue;
    m.swap_rows(r, piv);
    auto inv = f.inv(m(r, c));
    for (std::size_t j = c; j < m.cols(); ++j) m(r, j) = f.mul(inv, m(r, j));
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == r || f.is_zero(m(i, c))) continue;
      auto factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(r, j)));
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

/// Row rank by exact Gaussian elimination.
template <class F>
std::size_t rank(const F& f, Matrix<typename F::Elem> m) {
  return rref_in_place(f, m).size();
}

template <class F>
typename F::Elem det(const F& f, Matrix<typename F::Elem> m) {
  if (!m.square()) throw DomainError("determinant of non-square matrix");
  auto d = f.one();
  std::size_t n = m.rows();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && f.is_zero(m(piv, c))) ++piv;
    if (piv == n) return f.zero();
    if (piv != c) {
      m.swap_rows(piv, c);
      d = f.neg(d);
    }
    d = f.mul(d, m(c, c));
    auto inv = f.inv(m(c, c));
    for (std::size_t i = c + 1; i < n; ++i) {
      if (f.is_zero(m(i, c))) continue;
      auto factor = f.mul(m(i, c), inv);
      for (std::size_t j = c; j < n; ++j) m(i, j) = f.sub(m(i, j), f.mul(factor, m(c, j)));
    }
  }
  return d;
}

template <class F>
std::optional<Matrix<typename F::Elem>> try_inverse(const F& f, const Matrix<typename F::Elem>& m) {
  if (!m.square()) throw DomainError("inverse of non-square matrix");
  std::size_t n = m.rows();
  Matrix<typename F::Elem> aug(n, 2 * n, f.zero());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) aug(i, j) = m(i, j);
    aug(i, n + i) = f.one();
  }
  auto piv = rref_in_place(f, aug);
  if (piv.size() < n || piv[n - 1] != n - 1) return std::nullopt;
  Matrix<typename F::Elem> out(n, n, f.zero());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = aug(i, n + j);
  return out;
}

template <class F>
Matrix<typename F::Elem> inverse(const F& f, const Matrix<typename F::Elem>& m) {
  auto r = try_inverse(f, m);
  if (!r) throw DomainError("matrix is singular");
  return *r;
}

/// Basis of the right nullspace {x : m x = 0}, one basis vector per free column.
template <class F>
std::vector<std::vector<typename F::Elem>> nullspace(const F& f, Matrix<typename F::Elem> m) {
  auto piv = rref_in_place(f, m);
  std::vector<bool> is_piv(m.cols(), false);
  for (auto c : piv) is_piv[c] = true;
  std::vector<std::vector<typename F::Elem>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_piv[free]) continue;
    std::vector<typename F::Elem> v(m.cols(), f.zero());
    v[free] = f.one();
    for (std::size_t r = 0; r < piv.size(); ++r) v[piv[r]] = f.neg(m(r, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

template <class F>
std::string mat_str(const F& f, const Matrix<typename F::Elem>& m) {
  std::ostringstream os;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    os << "[";
    for (std::size_t j = 0; j < m.cols(); ++j) os << (j ? " " : "") << f.str(m(i, j));
    os << "]\n";
  }
  return os.str();
}

inline RatMatrix to_rational(const IntMatrix& m) {
  RatMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = Rational(m(i, j));
  return out;
}

inline IntMatrix int_mul(const IntMatrix& a, const IntMatrix& b) {
  if (a.cols() != b.rows()) throw DomainError("matrix product dimension mismatch");
  IntMatrix out(a.rows(), b.cols(), Integer(0));
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
    }
  return out;
}

inline IntMatrix int_identity(std::size_t n) {
  IntMatrix m(n, n, Integer(0));
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

/// Exact integer determinant (fraction-free Bareiss elimination).
inline Integer int_det(IntMatrix m) {
  if (!m.square()) throw DomainError("determinant of non-square matrix");
  std::size_t n = m.rows();
  if (n == 0) return 1;
  Integer sign = 1, prev = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (m(k, k) == 0) {
      std::size_t piv = k + 1;
      while (piv < n && m(piv, k) == 0) ++piv;
      if (piv == n) return 0;
      m.swap_rows(k, piv);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) m(i, j) = (m(i, j) * m(k, k) - m(i, k) * m(k, j)) / prev;
    prev = m(k, k);
  }
  return sign * m(n - 1, n - 1);
}

}  // namespace porc
