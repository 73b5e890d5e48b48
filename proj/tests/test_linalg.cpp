#include <random>

#include <gtest/gtest.h>

#include "porc/gf.hpp"
#include "porc/linalg.hpp"
#include "test_support.hpp"

namespace porc {
namespace {

IntMatrix im(const std::vector<std::vector<int>>& rows) {
  std::vector<std::vector<Integer>> r;
  for (const auto& row : rows) r.emplace_back(row.begin(), row.end());
  return IntMatrix::from_rows(r);
}

RatMatrix rm(const std::vector<std::vector<int>>& rows) { return to_rational(im(rows)); }

void expect_smith_contract(const IntMatrix& m) {
  auto snf = smith_normal_form(m);
  EXPECT_EQ(int_mul(int_mul(snf.U, m), snf.V), snf.S);
  EXPECT_EQ(abs_int(int_det(snf.U)), 1);
  EXPECT_EQ(abs_int(int_det(snf.V)), 1);
  for (std::size_t i = 0; i < snf.S.rows(); ++i)
    for (std::size_t j = 0; j < snf.S.cols(); ++j)
      if (i != j) {
        EXPECT_EQ(snf.S(i, j), 0);
      }
  auto d = snf.diagonal();
  for (std::size_t i = 0; i < d.size(); ++i) {
    EXPECT_GE(d[i], 0);
    if (i + 1 < d.size() && d[i] != 0) {
      EXPECT_EQ(d[i + 1] % d[i], 0);
    }
    if (i + 1 < d.size() && d[i] == 0) {
      EXPECT_EQ(d[i + 1], 0);
    }
  }
  EXPECT_EQ(smith_diagonal(m), d);
}

TEST(SmithNormalForm, Identity) {
  auto snf = smith_normal_form(int_identity(2));
  EXPECT_EQ(snf.S, int_identity(2));
}

TEST(SmithNormalForm, HandReducedExample) {
  auto m = im({{2, 0}, {1, 3}});
  auto snf = smith_normal_form(m);
  EXPECT_EQ(snf.diagonal(), (std::vector<Integer>{1, 6}));
  expect_smith_contract(m);
}

TEST(SmithNormalForm, MonomialExampleMatchesEnumeration) {
  // x1^3 = 1, x1^3 x2^-2 = 1, plus membership x_i^{q^n - 1} = 1 at q = 2, n = 2
  auto m = im({{3, 0}, {3, -2}, {3, 0}, {0, 3}});
  auto f = make_field(2, 2);
  std::int64_t count = 0;
  for (FiniteField::Elem x1 = 1; x1 < 4; ++x1)
    for (FiniteField::Elem x2 = 1; x2 < 4; ++x2)
      if (f->pow(x1, 3) == 1 && f->mul(f->pow(x1, 3), f->pow(x2, -2)) == 1 && f->pow(x2, 3) == 1) ++count;
  EXPECT_EQ(count, 3);
  EXPECT_EQ(elementary_divisor_product(m), count);
  expect_smith_contract(m);
}

TEST(SmithNormalForm, RandomContract) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9), dim(1, 5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t r = static_cast<std::size_t>(dim(rng)), c = static_cast<std::size_t>(dim(rng));
    IntMatrix m(r, c, Integer(0));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) m(i, j) = entry(rng);
    expect_smith_contract(m);
    if (r == c) {
      Integer prod = 1;
      for (const auto& d : smith_diagonal(m)) prod *= d;
      EXPECT_EQ(prod, abs_int(int_det(m)));
    }
  }
}

void expect_triangularize_contract(const IntMatrix& c) {
  auto q = unimodular_triangularize(c);
  EXPECT_EQ(abs_int(int_det(q)), 1);
  auto qc = int_mul(q, c);
  for (std::size_t i = 0; i < qc.rows(); ++i)
    for (std::size_t j = 0; j < i; ++j) EXPECT_EQ(qc(i, j), 0);
  EXPECT_EQ(abs_int(int_det(qc)), abs_int(int_det(c)));
}

TEST(UnimodularTriangularize, Examples) {
  EXPECT_EQ(unimodular_triangularize(int_identity(3)), int_identity(3));
  auto swap = im({{0, 1}, {1, 0}});
  EXPECT_EQ(unimodular_triangularize(swap), swap);
  expect_triangularize_contract(swap);
  EXPECT_THROW(unimodular_triangularize(im({{1, 2}, {2, 4}})), DomainError);
}

TEST(UnimodularTriangularize, RandomNonsingular) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> entry(-20, 20);
  int done = 0;
  while (done < 50) {
    IntMatrix c(3, 3, Integer(0));
    for (auto i = 0u; i < 3; ++i)
      for (auto j = 0u; j < 3; ++j) c(i, j) = entry(rng);
    if (int_det(c) == 0) continue;
    expect_triangularize_contract(c);
    ++done;
  }
}

void expect_diagonalizes(const std::vector<RatMatrix>& es, const PLocalMatrix& t) {
  RationalField f;
  RatMatrix tr = t.matrix;
  EXPECT_TRUE(t.entries_local());
  Rational d = det(f, tr);
  EXPECT_TRUE(d == 1 || d == -1);
  auto tinv = inverse(f, tr);
  RatMatrix sum = zeros(f, tr.rows(), tr.rows());
  for (const auto& e : es) {
    auto conj = mat_mul(f, mat_mul(f, tinv, e), tr);
    for (std::size_t i = 0; i < conj.rows(); ++i)
      for (std::size_t j = 0; j < conj.cols(); ++j) {
        if (i != j) EXPECT_EQ(conj(i, j), 0);
        else EXPECT_TRUE(conj(i, i) == 0 || conj(i, i) == 1);
      }
    EXPECT_EQ(mat_mul(f, conj, conj), conj);
    sum = mat_add(f, sum, conj);
  }
  EXPECT_EQ(sum, identity(f, tr.rows()));
}

TEST(SimultaneousDiagonalize, IdentityGivesIdentity) {
  RationalField f;
  auto t = simultaneous_diagonalize({identity(f, 3)}, {});
  EXPECT_EQ(t.matrix, identity(f, 3));
}

TEST(SimultaneousDiagonalize, TwoByTwoPair) {
  RationalField f;
  auto e1 = rm({{1, 1}, {0, 0}});
  auto e2 = rm({{0, -1}, {0, 1}});
  ASSERT_EQ(mat_mul(f, e1, e1), e1);
  ASSERT_EQ(mat_mul(f, e2, e2), e2);
  ASSERT_EQ(mat_mul(f, e1, e2), zeros(f, 2, 2));
  ASSERT_EQ(mat_mul(f, e2, e1), zeros(f, 2, 2));
  auto t = simultaneous_diagonalize({e1, e2}, {});
  expect_diagonalizes({e1, e2}, t);
}

TEST(SimultaneousDiagonalize, ConjugatedIndicatorsWithEmptyPrimeSet) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    auto es = testing_support::random_idempotent_family(rng, 3, 3);
    auto t = simultaneous_diagonalize(es, {});
    expect_diagonalizes(es, t);
    for (const auto& x : t.matrix.data()) EXPECT_EQ(denominator(x), 1);
  }
}

TEST(SimultaneousDiagonalize, LocalDenominators) {
  // projection onto span(1,1) along span(1,-1) needs 1/2
  RationalField f;
  RatMatrix e1(2, 2, Rational(1, 2));
  auto e2 = mat_sub(f, identity(f, 2), e1);
  EXPECT_THROW(simultaneous_diagonalize({e1, e2}, {}), DomainError);
  auto t = simultaneous_diagonalize({e1, e2}, {Integer(2)});
  expect_diagonalizes({e1, e2}, t);
}

TEST(SimultaneousDiagonalize, RejectsBadInputs) {
  RationalField f;
  auto e1 = rm({{1, 1}, {0, 0}});
  EXPECT_THROW(simultaneous_diagonalize({e1}, {}), DomainError);  // does not sum to I
  auto not_idem = rm({{2, 0}, {0, 0}});
  EXPECT_THROW(simultaneous_diagonalize({not_idem, mat_sub(f, identity(f, 2), not_idem)}, {}), DomainError);
  auto a = rm({{1, 0}, {0, 0}});
  auto b = rm({{1, 1}, {0, 1}});
  EXPECT_THROW(simultaneous_diagonalize({a, b}, {}), DomainError);
}

TEST(Rank, Examples) {
  RationalField qf;
  EXPECT_EQ(rank(zeros(qf, 3, 4)), 0u);
  EXPECT_EQ(rank(identity(qf, 4)), 4u);
  auto f = make_field(2, 1);
  GfMatrix j3 = zeros(*f, 3, 3);
  for (std::size_t i = 0; i < 3; ++i) j3(i, i) = 1;
  j3(0, 1) = 1;
  j3(1, 2) = 1;
  EXPECT_EQ(rank(*f, mat_sub(*f, j3, identity(*f, 3))), 2u);
}

TEST(IntLattice, IndexEqualsElementaryDivisorProduct) {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> entry(-12, 12), rows(0, 4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t t = 3;
    IntLattice lat(t);
    std::vector<std::vector<Integer>> all;
    for (std::size_t i = 0; i < t; ++i) {
      std::vector<Integer> v(t, Integer(0));
      v[i] = 24;
      all.push_back(v);
    }
    int extra = rows(rng);
    for (int r = 0; r < extra; ++r) {
      std::vector<Integer> v;
      for (std::size_t j = 0; j < t; ++j) v.emplace_back(entry(rng));
      all.push_back(v);
    }
    std::shuffle(all.begin(), all.end(), rng);
    for (const auto& v : all) lat.add(v);
    EXPECT_EQ(lat.index(), elementary_divisor_product(IntMatrix::from_rows(all)));
    for (const auto& v : all) EXPECT_TRUE(lat.contains(v));
    // canonical form is independent of insertion order
    IntLattice again(t);
    std::reverse(all.begin(), all.end());
    for (const auto& v : all) again.add(v);
    EXPECT_EQ(lat, again);
  }
}

}  // namespace
}  // namespace porc
