#include <map>
#include <random>

#include <gtest/gtest.h>

#include "porc/family.hpp"

namespace porc {
namespace {

using Sizes = std::vector<int>;

GfMatrix random_invertible(const FiniteField& f, std::size_t n, std::mt19937& rng) {
  std::uniform_int_distribution<FiniteField::Elem> pick(0, static_cast<FiniteField::Elem>(f.order() - 1));
  while (true) {
    GfMatrix a(n, n, 0);
    for (auto& x : a.data()) x = pick(rng);
    if (det(f, a) != 0) return a;
  }
}

std::map<std::string, Sizes> by_monomial(const SymbolicJordanSpec& spec) {
  std::map<std::string, Sizes> out;
  for (const auto& mono : spec.monomials()) out[mono.str()] = spec.sizes_of(mono);
  return out;
}

TEST(BuiltinFamily, Shapes) {
  auto e = builtin_family(FamilyKind::exterior_square, 4);
  EXPECT_EQ(e.n, 6);
  EXPECT_EQ(e.det_power, 0);
  auto t = builtin_family(FamilyKind::tensor_square, 3);
  EXPECT_EQ(t.n, 9);
  auto s = builtin_family(FamilyKind::structure_constants, 2);
  EXPECT_EQ(s.n, 8);
  EXPECT_EQ(s.det_power, 1);
  EXPECT_TRUE(s.bad_primes.empty());
  EXPECT_EQ(builtin_family(FamilyKind::natural, 3).n, 3);
  EXPECT_THROW(builtin_family(FamilyKind::natural, 0), DomainError);
  EXPECT_EQ(parse_family_kind("algebras"), FamilyKind::structure_constants);
  EXPECT_EQ(parse_family_kind("exterior_square"), FamilyKind::exterior_square);
  EXPECT_THROW(parse_family_kind("sym3"), DomainError);
}

TEST(ApplyFamily, ExteriorSquareOfTwoByTwoIsDeterminant) {
  auto f = make_field(7, 1);
  auto fam = builtin_family(FamilyKind::exterior_square, 2);
  GfMatrix a = GfMatrix::from_rows({{3, 5}, {2, 6}});
  auto out = apply_family(fam, *f, a);
  ASSERT_EQ(out.rows(), 1u);
  EXPECT_EQ(out(0, 0), f->sub(f->mul(3, 6), f->mul(5, 2)));
}

TEST(ApplyFamily, IdentityToIdentity) {
  auto f = make_field(5, 1);
  for (auto kind : {FamilyKind::natural, FamilyKind::tensor_square, FamilyKind::exterior_square, FamilyKind::structure_constants})
    for (int m = 1; m <= 3; ++m) {
      auto fam = builtin_family(kind, m);
      EXPECT_EQ(apply_family(fam, *f, identity(*f, static_cast<std::size_t>(m))), identity(*f, static_cast<std::size_t>(fam.n)));
    }
}

TEST(ApplyFamily, TensorSquareOfDiagonal) {
  auto f = make_field(7, 1);
  auto fam = builtin_family(FamilyKind::tensor_square, 2);
  GfMatrix d = GfMatrix::from_rows({{2, 0}, {0, 3}});
  GfMatrix expect = zeros(*f, 4, 4);
  expect(0, 0) = 4;
  expect(1, 1) = 6;
  expect(2, 2) = 6;
  expect(3, 3) = 2;
  EXPECT_EQ(apply_family(fam, *f, d), expect);
}

TEST(ApplyFamily, TensorSquareOfJordanBlockIsKronecker) {
  auto f = make_field(3, 1);
  GfMatrix j = GfMatrix::from_rows({{1, 1}, {0, 1}});
  EXPECT_EQ(apply_family(builtin_family(FamilyKind::tensor_square, 2), *f, j), kron(*f, j, j));
}

TEST(ApplyFamily, StructureConstantsOfDiagonal) {
  auto f = make_field(7, 1);
  auto fam = builtin_family(FamilyKind::structure_constants, 2);
  const FiniteField::Elem lam[2] = {3, 5};
  GfMatrix d = GfMatrix::from_rows({{3, 0}, {0, 5}});
  auto out = apply_family(fam, *f, d);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k) {
        auto idx = (i * 2 + j) * 2 + k;
        EXPECT_EQ(out(idx, idx), f->div(f->mul(lam[i], lam[j]), lam[k]));
      }
}

TEST(ApplyFamily, HomomorphismAndInverse) {
  auto f = make_field(5, 1);
  std::mt19937 rng(17);
  for (auto kind : {FamilyKind::natural, FamilyKind::tensor_square, FamilyKind::exterior_square, FamilyKind::structure_constants}) {
    auto fam = builtin_family(kind, 3);
    for (int t = 0; t < 5; ++t) {
      auto a = random_invertible(*f, 3, rng), b = random_invertible(*f, 3, rng);
      EXPECT_EQ(apply_family(fam, *f, mat_mul(*f, a, b)), mat_mul(*f, apply_family(fam, *f, a), apply_family(fam, *f, b)));
      EXPECT_EQ(mat_mul(*f, apply_family(fam, *f, a), apply_family(fam, *f, inverse(*f, a))), identity(*f, static_cast<std::size_t>(fam.n)));
    }
  }
  EXPECT_THROW(apply_family(builtin_family(FamilyKind::natural, 2), *f, zeros(*f, 2, 2)), DomainError);
  EXPECT_THROW(apply_family(builtin_family(FamilyKind::natural, 2), *f, identity(*f, 3)), DomainError);
}

TEST(ApplyFamily, WeightConsistency) {
  std::mt19937 rng(23);
  for (std::int64_t p : {3, 5, 7}) {
    auto f = make_field(p, 1);
    std::uniform_int_distribution<FiniteField::Elem> pick(1, static_cast<FiniteField::Elem>(p - 1));
    for (auto kind : {FamilyKind::natural, FamilyKind::tensor_square, FamilyKind::exterior_square, FamilyKind::structure_constants})
      for (int m : {2, 3}) {
        auto fam = builtin_family(kind, m);
        for (int t = 0; t < 50; ++t) {
          GfMatrix d = zeros(*f, static_cast<std::size_t>(m), static_cast<std::size_t>(m));
          for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) d(i, i) = pick(rng);
          auto out = apply_family(fam, *f, d);
          for (std::size_t r = 0; r < out.rows(); ++r)
            for (std::size_t c = 0; c < out.cols(); ++c) {
              FiniteField::Elem expect = 0;
              if (r == c) {
                expect = 1;
                for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j)
                  expect = f->mul(expect, f->pow(d(j, j), std::int64_t{fam.weights[r][j]}));
              }
              ASSERT_EQ(out(r, c), expect);
            }
        }
      }
  }
}

TEST(SymbolicJordan, TensorSquarePartitionTwoThree) {
  auto fam = builtin_family(FamilyKind::tensor_square, 5);
  auto generic = by_monomial(symbolic_jordan_partition(fam, {2, 3}, kGeneric));
  EXPECT_EQ(generic, (std::map<std::string, Sizes>{{"a^2", {1, 3}}, {"ab", {2, 2, 4, 4}}, {"b^2", {1, 3, 5}}}));
  auto c2 = by_monomial(symbolic_jordan_partition(fam, {2, 3}, 2));
  EXPECT_EQ(c2, (std::map<std::string, Sizes>{{"a^2", {2, 2}}, {"ab", {2, 2, 4, 4}}, {"b^2", {1, 4, 4}}}));
  auto c3 = by_monomial(symbolic_jordan_partition(fam, {2, 3}, 3));
  EXPECT_EQ(c3, (std::map<std::string, Sizes>{{"a^2", {1, 3}}, {"ab", {3, 3, 3, 3}}, {"b^2", {3, 3, 3}}}));
  EXPECT_EQ(exceptional_primes(fam, {2, 3}), (std::vector<std::int64_t>{2, 3}));
}

TEST(SymbolicJordan, ExceptionalPrimesSmallCases) {
  EXPECT_TRUE(exceptional_primes(builtin_family(FamilyKind::exterior_square, 2), {2}).empty());
  EXPECT_EQ(exceptional_primes(builtin_family(FamilyKind::tensor_square, 2), {2}), (std::vector<std::int64_t>{2}));
  auto t2 = builtin_family(FamilyKind::tensor_square, 2);
  EXPECT_EQ(by_monomial(symbolic_jordan_partition(t2, {2}, kGeneric)), (std::map<std::string, Sizes>{{"a^2", {1, 3}}}));
  EXPECT_EQ(by_monomial(symbolic_jordan_partition(t2, {2}, 2)), (std::map<std::string, Sizes>{{"a^2", {2, 2}}}));
  EXPECT_THROW(symbolic_jordan_partition(t2, {1, 2}, kGeneric), DomainError);
  EXPECT_THROW(symbolic_jordan_partition(t2, {2}, 4), DomainError);
}

TEST(SymbolicJordan, StableOutsideExceptionalPrimes) {
  for (auto kind : {FamilyKind::tensor_square, FamilyKind::exterior_square, FamilyKind::structure_constants})
    for (int m : {2, 3}) {
      auto fam = builtin_family(kind, m);
      for (const auto& parts : std::vector<std::vector<int>>{{m}, {1, m - 1}}) {
        if (parts.back() == 0) continue;
        auto ex = exceptional_primes(fam, parts);
        auto generic = symbolic_jordan_partition(fam, parts, kGeneric).blocks;
        int checked = 0;
        for (std::int64_t p = 2; checked < 3; ++p) {
          if (!is_prime(p) || std::find(ex.begin(), ex.end(), p) != ex.end()) continue;
          EXPECT_EQ(symbolic_jordan_partition(fam, parts, p).blocks, generic) << family_kind_name(kind) << " p=" << p;
          ++checked;
        }
        for (auto p : ex) EXPECT_NE(symbolic_jordan_partition(fam, parts, p).blocks, generic);
      }
    }
}

TEST(JordanSpecForType, IrreducibleQuadraticTensorSquare) {
  auto fam = builtin_family(FamilyKind::tensor_square, 6);
  auto spec = jordan_spec_for_type(fam, parse_type("{(2,{3})}"), kGeneric);
  EXPECT_EQ(by_monomial(spec),
            (std::map<std::string, Sizes>{{"a^2", {1, 3, 5}}, {"a^(q + 1)", {1, 1, 3, 3, 5, 5}}, {"a^(2*q)", {1, 3, 5}}}));
  EXPECT_EQ(spec.dimension(), 36);
  auto perm = frobenius_on_monomials(spec);
  auto mons = spec.monomials();
  std::map<std::string, std::string> img;
  for (std::size_t i = 0; i < mons.size(); ++i) img[mons[i].str()] = mons[perm[i]].str();
  EXPECT_EQ(img, (std::map<std::string, std::string>{{"a^2", "a^(2*q)"}, {"a^(2*q)", "a^2"}, {"a^(q + 1)", "a^(q + 1)"}}));
}

TEST(JordanSpecForType, TwoEigenvaluesTensorSquare) {
  auto fam = builtin_family(FamilyKind::tensor_square, 5);
  auto spec = jordan_spec_for_type(fam, parse_type("{(1,{2}),(1,{3})}"), kGeneric);
  EXPECT_EQ(by_monomial(spec), (std::map<std::string, Sizes>{{"a^2", {1, 3}}, {"ab", {2, 2, 4, 4}}, {"b^2", {1, 3, 5}}}));
  // one monomial per basis vector of the Jordan-block tensor products
  std::vector<std::string> seq;
  for (const auto& b : spec.blocks)
    for (int c = 0; c < b.multiplicity; ++c) seq.push_back(b.monomial.str());
  EXPECT_EQ(seq, (std::vector<std::string>{"a^2", "a^2", "ab", "ab", "ab", "ab", "b^2", "b^2", "b^2"}));
  auto perm = frobenius_on_monomials(spec);
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(perm[i], i);
}

TEST(JordanSpecForType, NaturalFamily) {
  auto spec = jordan_spec_for_type(builtin_family(FamilyKind::natural, 1), parse_type("{(1,{1})}"), kGeneric);
  ASSERT_EQ(spec.blocks.size(), 1u);
  EXPECT_EQ(spec.blocks[0].monomial.str(), "a");
  EXPECT_EQ(spec.blocks[0].size, 1);
  EXPECT_EQ(spec.blocks[0].multiplicity, 1);
  EXPECT_EQ(image_type(spec, {0}), parse_type("{(1,{1})}"));
  EXPECT_THROW(jordan_spec_for_type(builtin_family(FamilyKind::natural, 2), parse_type("{(1,{1})}"), kGeneric), DomainError);
}

TEST(JordanSpecForType, FrobeniusPowerIsIdentity) {
  auto fam = builtin_family(FamilyKind::tensor_square, 10);
  auto spec = jordan_spec_for_type(fam, parse_type("{(2,{2}),(2,{3})}"), kGeneric);
  auto perm = frobenius_on_monomials(spec);
  for (std::size_t i = 0; i < perm.size(); ++i) EXPECT_EQ(perm[perm[i]], i);
  bool moved = false;
  for (std::size_t i = 0; i < perm.size(); ++i) moved |= perm[i] != i;
  EXPECT_TRUE(moved);

  for (int m = 1; m <= 3; ++m)
    for (auto kind : {FamilyKind::tensor_square, FamilyKind::exterior_square, FamilyKind::structure_constants}) {
      if (kind == FamilyKind::exterior_square && m == 1) continue;
      auto f2 = builtin_family(kind, m);
      for (const auto& t : enumerate_types(m)) {
        auto s = jordan_spec_for_type(f2, t, kGeneric);
        auto p = frobenius_on_monomials(s);
        int l = 1;
        for (int d : s.degrees) l = std::lcm(l, d);
        for (std::size_t i = 0; i < p.size(); ++i) {
          std::size_t cur = i;
          for (int r = 0; r < l; ++r) cur = p[cur];
          EXPECT_EQ(cur, i);
        }
      }
    }
}

TEST(ImageType, WorkedExample) {
  auto fam = builtin_family(FamilyKind::tensor_square, 5);
  auto spec = jordan_spec_for_type(fam, parse_type("{(1,{2}),(1,{3})}"), kGeneric);
  // monomials in order a^2, ab, b^2
  ASSERT_EQ(spec.monomials().size(), 3u);
  EXPECT_EQ(image_type(spec, {0, 1, 0}), parse_type("{(1,{1,1,3,3,5}),(1,{2,2,4,4})}"));
  EXPECT_EQ(image_type(spec, {0, 1, 2}), parse_type("{(1,{1,3}),(1,{2,2,4,4}),(1,{1,3,5})}"));
}

TEST(ImageType, FrobeniusOrbitsAndConsistency) {
  auto fam = builtin_family(FamilyKind::tensor_square, 6);
  auto spec = jordan_spec_for_type(fam, parse_type("{(2,{3})}"), kGeneric);
  // order: a^2, a^(q+1), a^(2q) ; a^2 and a^(2q) swap
  EXPECT_EQ(image_type(spec, {0, 1, 2}), parse_type("{(2,{1,3,5}),(1,{1,1,3,3,5,5})}"));
  EXPECT_EQ(image_type(spec, {0, 1, 0}), parse_type("{(1,{1,1,3,3,5,5}),(1,{1,1,3,3,5,5})}"));
  EXPECT_THROW(image_type(spec, {0, 0, 1}), DomainError);
  EXPECT_THROW(image_type(spec, {0, 1}), DomainError);
}

// Concrete check: eigenvalue data of phi(A) in a splitting field against the
// symbolic spec evaluated at the eigenvalues of A.
void check_specialization(const AlgebraicFamily& fam, std::int64_t q) {
  auto small = make_field_of_order(q);
  for (const auto& t : enumerate_types(fam.m)) {
    int d = 1;
    for (const auto& p : t.pairs()) d = std::lcm(d, p.degree);
    auto big = make_field(small->characteristic(), small->degree() * static_cast<unsigned>(d));
    auto emb = embed_field(*small, *big);
    auto ex = exceptional_primes(fam, expanded_partition(t));
    std::int64_t cc = std::find(ex.begin(), ex.end(), small->characteristic()) != ex.end() ? small->characteristic() : kGeneric;
    auto spec = jordan_spec_for_type(fam, t, cc);
    auto classes = classes_of_type(*small, t);
    if (classes.empty()) continue;
    const auto& cls = classes.front();
    GfMatrix a(cls.representative.rows(), cls.representative.cols(), 0);
    for (std::size_t i = 0; i < a.data().size(); ++i) a.data()[i] = emb[cls.representative.data()[i]];
    auto phi = apply_family(fam, *big, a);
    // a root of each pair's irreducible in the big field
    std::vector<FiniteField::Elem> roots;
    for (const auto& g : cls.polys) {
      bool found = false;
      for (std::int64_t v = 1; v < big->order() && !found; ++v) {
        FiniteField::Elem acc = 0;
        for (std::size_t i = g.size(); i-- > 0;) acc = big->add(big->mul(acc, static_cast<FiniteField::Elem>(v)), emb[g[i]]);
        if (acc == 0) {
          roots.push_back(static_cast<FiniteField::Elem>(v));
          found = true;
        }
      }
      ASSERT_TRUE(found);
    }
    std::map<FiniteField::Elem, Sizes> predicted;
    for (const auto& mono : spec.monomials()) {
      FiniteField::Elem v = 1;
      for (std::size_t i = 0; i < roots.size(); ++i) v = big->mul(v, big->pow(roots[i], mono.exponent(i, Integer(q))));
      auto s = spec.sizes_of(mono);
      predicted[v].insert(predicted[v].end(), s.begin(), s.end());
    }
    for (auto& [v, s] : predicted) {
      std::sort(s.begin(), s.end());
      auto actual = eigenvalue_blocks(*big, phi, v);
      std::sort(actual.begin(), actual.end());
      EXPECT_EQ(actual, s) << fam.name << " m=" << fam.m << " type " << t.str() << " q=" << q;
    }
  }
}

TEST(JordanSpecForType, SpecializationSoundness) {
  for (std::int64_t q : {2, 3, 4, 5}) {
    check_specialization(builtin_family(FamilyKind::natural, 2), q);
    check_specialization(builtin_family(FamilyKind::tensor_square, 2), q);
    check_specialization(builtin_family(FamilyKind::tensor_square, 3), q);
    check_specialization(builtin_family(FamilyKind::exterior_square, 3), q);
    check_specialization(builtin_family(FamilyKind::exterior_square, 4), q);
    check_specialization(builtin_family(FamilyKind::structure_constants, 2), q);
  }
}

TEST(FamilyFile, TensorSquareFromFileMatchesBuiltin) {
  std::string text = "# tensor square of GL(2)\nname t2\nm 2\nn 4\ndet_power 0\n";
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) {
      std::vector<int> w(2, 0);
      ++w[static_cast<std::size_t>(i)];
      ++w[static_cast<std::size_t>(k)];
      text += "weight " + std::to_string(i * 2 + k) + " " + std::to_string(w[0]) + " " + std::to_string(w[1]) + "\n";
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l)
          text += "term " + std::to_string(i * 2 + k) + " " + std::to_string(j * 2 + l) + " 1 a:" + std::to_string(i) + ":" +
                  std::to_string(j) + " a:" + std::to_string(k) + ":" + std::to_string(l) + "\n";
    }
  auto fam = parse_family(text);
  EXPECT_EQ(fam.name, "t2");
  auto builtin = builtin_family(FamilyKind::tensor_square, 2);
  auto f = make_field(5, 1);
  std::mt19937 rng(8);
  for (int t = 0; t < 10; ++t) {
    auto a = random_invertible(*f, 2, rng);
    EXPECT_EQ(apply_family(fam, *f, a), apply_family(builtin, *f, a));
  }
  EXPECT_EQ(symbolic_jordan_partition(fam, {2}, kGeneric).blocks, symbolic_jordan_partition(builtin, {2}, kGeneric).blocks);
}

TEST(FamilyFile, InverseFactorsAndErrors) {
  // contragredient of GL(1): x -> x^{-1}
  auto fam = parse_family("m 1\nn 1\ndet_power 1\nweight 0 -1\nterm 0 0 1 b:0:0\n");
  auto f = make_field(7, 1);
  EXPECT_EQ(apply_family(fam, *f, GfMatrix::from_rows({{3}})), GfMatrix::from_rows({{5}}));
  EXPECT_THROW(parse_family("m 1\nn 1\nweight 0 1\nterm 0 0 2 a:0:0\n"), DomainError);  // not weight-diagonal
  EXPECT_THROW(parse_family("m 1\nn 1\nterm 0 0 1 a:0:0\n"), DomainError);              // missing weight
  EXPECT_THROW(parse_family("m 1\nn 1\nweight 0 1\nterm 0 0 1 c:0:0\n"), DomainError);
  EXPECT_THROW(parse_family("m 1\nn 2\nweight 0 1\nweight 1 1\nterm 0 0 1 a:0:0\nterm 1 1 1 a:0:0\nterm 0 1 1\n"), DomainError);
  EXPECT_THROW(parse_family("frobnicate 3\n"), DomainError);
  EXPECT_THROW(load_family_file("/nonexistent/family.txt"), DomainError);
}

}  // namespace
}  // namespace porc
