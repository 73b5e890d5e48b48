#include <random>
#include <set>

#include <gtest/gtest.h>

#include "porc/gf.hpp"

namespace porc {
namespace {

// Oracle: repeated multiplication, independent of the log tables' exponent arithmetic.
std::int64_t order_by_multiplication(const FiniteField& f, FiniteField::Elem x) {
  FiniteField::Elem acc = x;
  std::int64_t k = 1;
  while (acc != 1) {
    acc = f.mul(acc, x);
    ++k;
  }
  return k;
}

TEST(FiniteFieldTest, PrimeFieldTwo) {
  auto f = make_field(2, 1);
  EXPECT_EQ(f->order(), 2);
  auto els = elements(*f);
  ASSERT_EQ(els.size(), 2u);
  EXPECT_EQ(els[0].value, 0u);
  EXPECT_EQ(els[1].value, 1u);
}

TEST(FiniteFieldTest, OrderNineEnumeratesNineElements) {
  auto f = make_field(3, 2);
  std::set<FiniteField::Elem> seen;
  for (auto e : elements(*f)) seen.insert(e.value);
  EXPECT_EQ(seen.size(), 9u);
}

TEST(FiniteFieldTest, SixteenHasElementOfOrderFifteen) {
  auto f = make_field(2, 4);
  std::int64_t best = 0;
  for (FiniteField::Elem x = 1; x < 16; ++x) best = std::max(best, order_by_multiplication(*f, x));
  EXPECT_EQ(best, 15);
}

TEST(FiniteFieldTest, ModulusIsSmallestIrreducible) {
  // x^2+x+1 is the only irreducible quadratic over GF(2)
  auto f4 = make_field(2, 2);
  EXPECT_EQ(f4->modulus(), (std::vector<std::int64_t>{1, 1, 1}));
  // over GF(3): candidates x^2+c1 x+c0 in order c0 major; x^2+1 is irreducible (no roots)
  auto f9 = make_field(3, 2);
  EXPECT_EQ(f9->modulus(), (std::vector<std::int64_t>{1, 0, 1}));
  // x^3+x+1 over GF(2): c0=1,c1=0,c2=0 gives x^3+1 (root 1), next c0=1,c1=0,c2=1 x^3+x^2+1
  auto f8 = make_field(2, 3);
  auto m = f8->modulus();
  for (std::int64_t r = 0; r < 2; ++r) {
    std::int64_t v = 0;
    for (std::size_t i = m.size(); i-- > 0;) v = (v * r + m[i]) % 2;
    EXPECT_NE(v, 0) << "modulus has root " << r;
  }
  EXPECT_EQ(m, (std::vector<std::int64_t>{1, 0, 1, 1}));
}

TEST(FiniteFieldTest, FrobeniusOnGF4) {
  auto f = make_field(2, 2);
  FieldElem lambda{f.get(), 2};  // the class of x, a root of x^2+x+1
  FieldElem one{f.get(), 1};
  EXPECT_EQ(lambda * lambda + lambda + one, (FieldElem{f.get(), 0}));
  EXPECT_EQ(frobenius(lambda, 2), lambda + one);
}

TEST(FiniteFieldTest, FrobeniusFixesSubfieldAndHasOrderTwo) {
  auto f = make_field(5, 2);
  auto sub = f->subfield_elements(5);
  EXPECT_EQ(sub.size(), 5u);
  std::size_t fixed = 0;
  for (auto x : elements(*f)) {
    if (frobenius(x, 5) == x) ++fixed;
    EXPECT_EQ(frobenius(frobenius(x, 5), 5), x);
  }
  EXPECT_EQ(fixed, 5u);
  for (auto v : sub) EXPECT_EQ(f->frobenius(v, 5), v);
}

TEST(FiniteFieldTest, InvalidSubfieldRejected) {
  auto f = make_field(2, 4);
  EXPECT_THROW(f->frobenius(3, 8), DomainError);
  EXPECT_THROW(f->frobenius(3, 3), DomainError);
  EXPECT_NO_THROW(f->frobenius(3, 4));
}

TEST(FiniteFieldTest, ElemPow) {
  auto f5 = make_field(5, 1);
  for (auto x : elements(*f5)) {
    if (x.value == 0) continue;
    EXPECT_EQ(elem_pow(x, 0).value, 1u);
    EXPECT_EQ(elem_pow(x, 4).value, 1u);
  }
  auto f4 = make_field(2, 2);
  FieldElem lambda{f4.get(), 2};
  EXPECT_EQ(elem_pow(lambda, -1), elem_pow(lambda, 2));
  EXPECT_THROW(elem_pow(FieldElem{f4.get(), 0}, -1), DomainError);
}

TEST(FiniteFieldTest, Errors) {
  EXPECT_THROW(make_field(4, 1), DomainError);
  EXPECT_THROW(make_field(1, 1), DomainError);
  EXPECT_THROW(make_field(2, 0), DomainError);
  EXPECT_THROW(make_field(2, 30), BudgetError);
  EXPECT_THROW(make_field(3, 5, 100), BudgetError);
}

class FieldProperties : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(FieldProperties, FermatInversesAndFrobeniusIsAutomorphism) {
  auto [p, k] = GetParam();
  auto f = make_field(p, static_cast<unsigned>(k));
  const std::int64_t q = f->order();
  std::set<FiniteField::Elem> seen;
  for (auto x : elements(*f)) {
    seen.insert(x.value);
    if (x.value == 0) continue;
    EXPECT_EQ(f->pow(x.value, Integer(q - 1)), 1u);
    EXPECT_EQ(f->mul(x.value, f->inv(x.value)), 1u);
    EXPECT_EQ(f->inverse_euclid(x.value), f->inv(x.value));
  }
  EXPECT_EQ(static_cast<std::int64_t>(seen.size()), q);

  std::mt19937 rng(12345);
  std::uniform_int_distribution<std::int64_t> pick(0, q - 1);
  for (int trial = 0; trial < 200; ++trial) {
    auto a = static_cast<FiniteField::Elem>(pick(rng));
    auto b = static_cast<FiniteField::Elem>(pick(rng));
    for (std::int64_t sub = p; sub <= q; sub *= p) {
      if (!f->has_subfield(sub)) continue;
      EXPECT_EQ(f->frobenius(f->add(a, b), sub), f->add(f->frobenius(a, sub), f->frobenius(b, sub)));
      EXPECT_EQ(f->frobenius(f->mul(a, b), sub), f->mul(f->frobenius(a, sub), f->frobenius(b, sub)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(SmallFields, FieldProperties,
                         ::testing::Values(std::pair{2, 1}, std::pair{2, 2}, std::pair{2, 3}, std::pair{2, 6}, std::pair{3, 1},
                                           std::pair{3, 2}, std::pair{3, 4}, std::pair{5, 2}, std::pair{7, 2}));

}  // namespace
}  // namespace porc
