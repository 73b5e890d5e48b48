#include <gtest/gtest.h>

#include <map>
#include <random>

#include "porc/canon.hpp"
#include "porc/monomial.hpp"

using namespace porc;

namespace {

ZPoly zp(std::vector<int> c) {
  std::vector<Integer> r;
  for (int x : c) r.emplace_back(x);
  return ZPoly(std::move(r));
}

MonomialSystem one_unknown(int degree, std::vector<ZPoly> eqs, std::vector<ZPoly> neqs = {}) {
  MonomialSystem s;
  s.unknowns.push_back({"x", degree});
  for (auto& e : eqs) s.equations.push_back({e});
  for (auto& e : neqs) s.nonequations.push_back({e});
  return s;
}

const char* kExample = R"(# two unknowns in GF(q^2)
unknown x1 2
unknown x2 2
eq -1,0,1 0
eq 1,1 -2
)";

// number of monic irreducibles of degree d over GF(q), excluding x
Integer irreducible_count(int d, std::int64_t q) {
  auto mobius = [](int n) {
    int m = 1;
    for (int p = 2; p <= n; ++p)
      if (n % p == 0) {
        n /= p;
        if (n % p == 0) return 0;
        m = -m;
      }
    return m;
  };
  Integer s = 0;
  for (int e = 1; e <= d; ++e)
    if (d % e == 0) s += mobius(d / e) * ipow(Integer(q), static_cast<unsigned>(e));
  s /= d;
  if (d == 1) s -= 1;
  return s;
}

// ordered tuples of pairwise distinct irreducibles with the type's degrees, times a root choice each
Integer type_tuple_count(const MatrixType& t, std::int64_t q) {
  std::map<int, int> used;
  Integer total = 1;
  for (const auto& p : t.pairs()) {
    Integer avail = irreducible_count(p.degree, q) - used[p.degree]++;
    if (avail <= 0) return 0;
    total *= avail * p.degree;
  }
  return total;
}

const std::vector<std::int64_t> kQs = {2, 3, 4, 5, 7, 8, 9};

}  // namespace

TEST(Monomial, BuildTypeSystemExamples) {
  auto s = build_type_system(parse_type("{(2,{2}),(2,{3})}"));
  ASSERT_EQ(s.unknowns.size(), 2u);
  EXPECT_EQ(s.ambient_degree(), 2);
  ASSERT_EQ(s.equations.size(), 2u);
  EXPECT_EQ(s.equations[0], (MonomialRow{zp({-1, 0, 1}), zp({})}));
  EXPECT_EQ(s.equations[1], (MonomialRow{zp({}), zp({-1, 0, 1})}));
  ASSERT_EQ(s.nonequations.size(), 4u);
  EXPECT_EQ(s.nonequations[0], (MonomialRow{zp({-1, 1}), zp({})}));
  EXPECT_EQ(s.nonequations[1], (MonomialRow{zp({}), zp({-1, 1})}));
  EXPECT_EQ(s.nonequations[2], (MonomialRow{zp({1}), zp({-1})}));
  EXPECT_EQ(s.nonequations[3], (MonomialRow{zp({1}), zp({0, -1})}));

  auto t = build_type_system(parse_type("{(1,{1})}"));
  ASSERT_EQ(t.equations.size(), 1u);
  EXPECT_EQ(t.equations[0], MonomialRow{zp({-1, 1})});
  EXPECT_TRUE(t.nonequations.empty());

  auto u = build_type_system(parse_type("{(2,{3})}"));
  EXPECT_EQ(u.equations, std::vector<MonomialRow>{MonomialRow{zp({-1, 0, 1})}});
  EXPECT_EQ(u.nonequations, std::vector<MonomialRow>{MonomialRow{zp({-1, 1})}});
}

TEST(Monomial, CountExamples) {
  EXPECT_EQ(count_solutions_at(one_unknown(1, {zp({-1, 1})}), 4), 3);
  auto ex = parse_system(kExample);
  EXPECT_EQ(count_solutions_at(ex, 2), 3);
  EXPECT_EQ(enumerate_solutions(ex, 2), 3);
  EXPECT_EQ(count_solutions_at(build_type_system(parse_type("{(2,{3})}")), 3), 6);
  EXPECT_EQ(enumerate_solutions(build_type_system(parse_type("{(2,{3})}")), 3), 6);
}

TEST(Monomial, EnumerateExamples) {
  auto sq = one_unknown(1, {zp({2}), zp({-1, 1})});
  EXPECT_EQ(enumerate_solutions(sq, 5), 2);
  EXPECT_EQ(enumerate_solutions(sq, 4), 1);
  EXPECT_EQ(count_solutions_at(sq, 5), 2);
  EXPECT_EQ(count_solutions_at(sq, 4), 1);
  auto contra = one_unknown(1, {zp({3})}, {zp({3})});
  for (auto q : kQs) {
    EXPECT_EQ(enumerate_solutions(contra, q), 0);
    EXPECT_EQ(count_solutions_at(contra, q), 0);
  }
  EXPECT_THROW(enumerate_solutions(build_type_system(parse_type("{(1,{1}),(1,{1}),(1,{1})}")), 9, 100), BudgetError);
}

TEST(Monomial, NoNonequationsIsSingleIndex) {
  auto ex = parse_system(kExample);
  for (auto q : {2, 3, 4, 5}) {
    IntLattice lat(2);
    Integer mem = Integer(q) * q - 1;
    lat.add({mem, 0});
    lat.add({0, mem});
    lat.add({Integer(q) * q - 1, 0});
    lat.add({Integer(q) + 1, -2});
    EXPECT_EQ(count_solutions_at(ex, q), lat.index());
  }
}

TEST(Monomial, OracleEquivalenceOnTypes) {
  for (int m = 1; m <= 3; ++m)
    for (const auto& t : enumerate_types(m)) {
      auto sys = build_type_system(t);
      for (auto q : kQs) {
        Integer c = count_solutions_at(sys, q);
        EXPECT_EQ(c, type_tuple_count(t, q)) << t.str() << " q=" << q;
        try {
          EXPECT_EQ(c, enumerate_solutions(sys, q, std::int64_t{1} << 20)) << t.str() << " q=" << q;
        } catch (const BudgetError&) {
        }
      }
    }
}

TEST(Monomial, OracleEquivalenceRandomSystems) {
  std::mt19937 rng(17);
  for (int it = 0; it < 60; ++it) {
    MonomialSystem s;
    int t = static_cast<int>(rng() % 2) + 1;
    for (int i = 0; i < t; ++i) s.unknowns.push_back({"x" + std::to_string(i), static_cast<int>(rng() % 2) + 1});
    auto row = [&]() {
      MonomialRow r;
      for (int i = 0; i < t; ++i) r.push_back(zp({static_cast<int>(rng() % 7) - 3, static_cast<int>(rng() % 3) - 1}));
      return r;
    };
    for (unsigned k = rng() % 3; k > 0; --k) s.equations.push_back(row());
    for (unsigned k = rng() % 3; k > 0; --k) s.nonequations.push_back(row());
    for (auto q : {2, 3, 4, 5}) EXPECT_EQ(count_solutions_at(s, q), enumerate_solutions(s, q)) << serialize_system(s) << "q=" << q;
  }
}

TEST(Monomial, ClassMembers) {
  EXPECT_EQ(class_members(1, 2, 4), (std::vector<std::int64_t>{3, 5, 7, 9}));
  EXPECT_EQ(class_members(0, 2, 3), (std::vector<std::int64_t>{2, 4, 8}));
  EXPECT_EQ(class_members(3, 6, 3), (std::vector<std::int64_t>{3, 9, 27}));
  EXPECT_EQ(class_members(3, 9, 5), (std::vector<std::int64_t>{3}));
  EXPECT_TRUE(class_members(0, 6, 5).empty());
  EXPECT_EQ(class_members(1, 4, 3), (std::vector<std::int64_t>{5, 9, 13}));
}

TEST(Monomial, InferExamples) {
  auto a = infer_porc(one_unknown(1, {zp({-1, 1})}));
  EXPECT_EQ(a.function.modulus(), 1);
  EXPECT_EQ(a.function, PorcFunction(to_qpoly(zp({-1, 1}))));

  auto b = infer_porc(one_unknown(1, {zp({2}), zp({-1, 1})}));
  EXPECT_EQ(b.function.modulus(), 2);
  for (auto q : kQs) EXPECT_EQ(b.function.eval(q), Rational(gcd64(2, q - 1)));

  auto c = infer_porc(one_unknown(2, {zp({-1, 0, 1}), zp({1, 1})}, {zp({-1, 1})}));
  EXPECT_EQ(c.function.modulus(), 2);
  EXPECT_EQ(c.function.branch(0), to_qpoly(zp({0, 1})));
  EXPECT_EQ(c.function.branch(1), to_qpoly(zp({-1, 1})));
  EXPECT_GE(c.validation_points.size(), 2u);
}

TEST(Monomial, InferReproducesCounts) {
  for (int m = 1; m <= 3; ++m)
    for (const auto& t : enumerate_types(m)) {
      auto sys = build_type_system(t);
      auto res = infer_porc(sys);
      for (std::int64_t q = 2; q <= 32; ++q)
        if (is_prime_power(q)) {
          EXPECT_EQ(res.function.eval(q), Rational(count_solutions_at(sys, q))) << t.str() << " q=" << q;
        }
    }
  auto cube = infer_porc(one_unknown(1, {zp({3}), zp({-1, 1})}));
  for (std::int64_t q = 2; q <= 64; ++q)
    if (is_prime_power(q)) {
      EXPECT_EQ(cube.function.eval(q), Rational(gcd64(3, q - 1)));
    }
}

TEST(Monomial, GcdFormExamples) {
  auto one = gcd_form(PorcFunction::constant(1));
  ASSERT_TRUE(one);
  EXPECT_EQ(one->alpha, 1);
  EXPECT_TRUE(one->terms.empty());
  EXPECT_EQ(one->primitive_poly, ZPoly(1));

  auto two = gcd_form(infer_porc(one_unknown(1, {zp({2}), zp({-1, 1})})).function);
  ASSERT_TRUE(two);
  EXPECT_EQ(two->alpha, 0);
  ASSERT_EQ(two->terms.size(), 1u);
  EXPECT_EQ(two->terms[0].coef, 1);
  EXPECT_EQ(two->terms[0].n, 1);
  EXPECT_EQ(two->terms[0].m, 2);
  EXPECT_EQ(two->primitive_poly, ZPoly(1));
  EXPECT_EQ(two->str(), "gcd(q - 1, 2)");

  auto three = gcd_form(infer_porc(one_unknown(1, {zp({3}), zp({-1, 1})})).function);
  ASSERT_TRUE(three);
  EXPECT_EQ(three->alpha, 0);
  ASSERT_EQ(three->terms.size(), 1u);
  EXPECT_EQ(three->terms[0].n, 1);
  EXPECT_EQ(three->terms[0].m, 3);
}

TEST(Monomial, GcdFormEvaluatesLikeSource) {
  std::vector<MonomialSystem> systems = {
      one_unknown(1, {zp({2}), zp({-1, 1})}),
      one_unknown(1, {zp({3}), zp({-1, 1})}),
      one_unknown(1, {zp({4}), zp({-1, 1})}),
      parse_system(kExample),
  };
  for (const auto& s : systems) {
    auto f = infer_porc(s).function;
    auto g = gcd_form(f);
    ASSERT_TRUE(g) << f.str();
    for (std::int64_t q = 2; q <= 100; ++q)
      if (is_prime_power(q)) {
        EXPECT_EQ(g->eval(q), f.eval(q)) << f.str() << " q=" << q;
      }
  }
}

TEST(Monomial, GcdFormRejectsMixedPolynomials) {
  PorcFunction f(2, {to_qpoly(zp({0, 1})), to_qpoly(zp({1, 0, 1}))});
  EXPECT_FALSE(gcd_form(f));
  // q on even q, q - 1 on odd q: branches are not multiples of one polynomial
  EXPECT_FALSE(gcd_form(infer_porc(one_unknown(2, {zp({-1, 0, 1}), zp({1, 1})}, {zp({-1, 1})})).function));
}

TEST(Monomial, SystemFileRoundTrip) {
  auto s = parse_system(kExample);
  EXPECT_EQ(s.unknowns.size(), 2u);
  EXPECT_EQ(s.equations.size(), 2u);
  auto t = parse_system(serialize_system(s));
  EXPECT_EQ(t.key(), s.key());
  auto u = build_type_system(parse_type("{(2,{2}),(2,{3})}"));
  EXPECT_EQ(parse_system(serialize_system(u)).key(), u.key());
  EXPECT_THROW(parse_system("unknown x 1\neq 1 2\n"), DomainError);
  EXPECT_THROW(parse_system("eq 1\n"), DomainError);
  EXPECT_THROW(parse_system("unknown x 0\n"), DomainError);
  EXPECT_THROW(parse_system("unknown x 1\nfoo 1\n"), DomainError);
  EXPECT_THROW(parse_system("unknown x 1\neq 1,a\n"), DomainError);
  EXPECT_THROW(parse_system(""), DomainError);
}
