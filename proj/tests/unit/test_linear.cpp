#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grothcat/algebra.hpp"
#include "grothcat/echelon.hpp"
#include "grothcat/path_algebra.hpp"
#include "oracles.hpp"

using namespace grothcat;

TEST(Scalar, RationalArithmetic) {
  Field q = Field::rational();
  Scalar a = q.parse_scalar("3/4");
  Scalar b = q.from_int(-2);
  EXPECT_EQ((a + b).to_string(), "-5/4");
  EXPECT_EQ((a * b).to_string(), "-3/2");
  EXPECT_EQ((a / b).to_string(), "-3/8");
  EXPECT_THROW(a / q.zero(), Error);
}

TEST(Scalar, PrimeFieldArithmetic) {
  Field f = Field::prime(7);
  Scalar three = f.from_int(3);
  EXPECT_EQ((three * f.from_int(5)).to_string(), "1");
  EXPECT_EQ((f.one() / three).to_string(), "5");
  EXPECT_EQ((-three).to_string(), "4");
  EXPECT_EQ(f.from_int(-1).to_string(), "6");
  EXPECT_EQ(f.parse_scalar("1/2").to_string(), "4");
  EXPECT_THROW(Field::prime(8), Error);
  EXPECT_THROW(three + Field::rational().one(), Error);
}

TEST(Scalar, ParsesFieldNames) {
  EXPECT_TRUE(Field::parse("rational").is_rational());
  EXPECT_EQ(Field::parse("fp:11").modulus(), 11u);
  EXPECT_THROW(Field::parse("complex"), Error);
}

TEST(Echelon, RankMatchesHandComputation) {
  Field q = Field::rational();
  auto s = [&](long v) { return q.from_int(v); };
  std::vector<SparseVector> rows{{{0, s(1)}, {1, s(2)}}, {{0, s(2)}, {1, s(4)}}, {{2, s(1)}}};
  EXPECT_EQ(rank_of(rows), 2u);
  RowEchelon e;
  for (auto& r : rows) e.insert(r);
  EXPECT_TRUE(e.reduce({{0, s(3)}, {1, s(6)}, {2, s(-1)}}).empty());
  EXPECT_FALSE(e.reduce({{0, s(1)}}).empty());
}

TEST(Echelon, RankIsOrderIndependent) {
  std::mt19937_64 rng(5);
  Field f = Field::prime(5);
  for (int n = 0; n < 50; ++n) {
    std::vector<SparseVector> rows(4);
    for (auto& r : rows) {
      for (std::size_t c = 0; c < 5; ++c) {
        long v = static_cast<long>(rng() % 5);
        if (v) r.emplace(c, f.from_int(v));
      }
    }
    std::size_t rank = rank_of(rows);
    std::shuffle(rows.begin(), rows.end(), rng);
    EXPECT_EQ(rank_of(rows), rank);
    EXPECT_LE(rank, 4u);
  }
}

TEST(PathAlgebra, CommutingSquare) {
  auto q = fixtures::square_quiver();
  LinearRelationSet r;
  r.relations.push_back(fixtures::path_element(q, {"b", "a"}) - fixtures::path_element(q, {"d", "c"}));
  HomBasis h = hom_basis(q, r, "1", "5", 6);
  EXPECT_EQ(h.dimension(), 2u);
  QuotientPathCategory cat(q, r, Field::rational());
  EXPECT_EQ(cat.normal_form(fixtures::path_element(q, {"d", "c"})), cat.normal_form(fixtures::path_element(q, {"b", "a"})));
  EXPECT_EQ(cat.hom("1", "2").dimension(), 1u);
  EXPECT_EQ(cat.hom("5", "1").dimension(), 0u);
}

TEST(PathAlgebra, MonomialRelationsMatchAvoidingPaths) {
  // Cyclic quiver 1 -> 2 -> 3 -> 1 with the monomial relation on every composite of length 3.
  Quiver q;
  for (auto v : {"1", "2", "3"}) q.add_vertex(v);
  q.add_arrow("x", "1", "2");
  q.add_arrow("y", "2", "3");
  q.add_arrow("z", "3", "1");
  std::vector<Path> forbidden{q.composite({"z", "y", "x"}), q.composite({"x", "z", "y"}), q.composite({"y", "x", "z"})};
  LinearRelationSet r;
  for (const auto& p : forbidden) r.relations.emplace_back(p, Field::rational().one());
  QuotientPathCategory cat(q, r, Field::rational());
  for (const auto& s : q.vertices()) {
    for (const auto& t : q.vertices()) {
      EXPECT_EQ(cat.hom(s, t).dimension(), oracles::avoiding_paths(q, s, t, forbidden, 8)) << s << "->" << t;
    }
  }
  // A long path reduces to zero.
  LinComb longest(q.composite({"x", "z", "y", "x"}), Field::rational().one());
  EXPECT_TRUE(cat.normal_form(longest).is_zero());
}

TEST(PathAlgebra, FreeLoopIsInfiniteDimensional) {
  auto q = fixtures::loop_quiver();
  EXPECT_THROW(QuotientPathCategory(q, {}, Field::rational(), 6), Error);
}

TEST(PathAlgebra, TruncatedLoop) {
  auto q = fixtures::loop_quiver();
  LinearRelationSet r;
  r.relations.push_back(fixtures::path_element(q, {"g", "g"}) - fixtures::path_element(q, {"g", "g", "g"}));
  QuotientPathCategory cat(q, r, Field::rational());
  EXPECT_EQ(cat.hom("1", "1").dimension(), 3u);
  LinComb g5(q.path({"g", "g", "g", "g", "g"}), Field::rational().one());
  EXPECT_EQ(cat.normal_form(g5), cat.normal_form(fixtures::path_element(q, {"g", "g"})));
}

TEST(Algebra, Presets) {
  Field q = Field::rational();
  Algebra d = Algebra::dual_numbers(q);
  EXPECT_EQ(d.dimension(), 2u);
  EXPECT_TRUE(std::all_of(d.multiply(d.basis_vector(1), d.basis_vector(1)).begin(),
                          d.multiply(d.basis_vector(1), d.basis_vector(1)).end(),
                          [](const Scalar& s) { return s.is_zero(); }));
  Algebra u = Algebra::upper_triangular(q);
  EXPECT_EQ(u.dimension(), 3u);
  // e11·e12 = e12, e12·e11 = 0.
  EXPECT_EQ(u.multiply(u.basis_vector(0), u.basis_vector(1)), u.basis_vector(1));
  EXPECT_EQ(u.multiply(u.basis_vector(1), u.basis_vector(0)), u.zero());
  EXPECT_EQ(Algebra::ground_field(q).dimension(), 1u);
}

TEST(Algebra, RejectsInvalidStructureConstants) {
  Field q = Field::rational();
  // Unit fails: 1·t = 0.
  EXPECT_THROW(Algebra(q, {"1", "t"}, {q.one(), q.zero()}, {{{0, 0}, {q.one(), q.zero()}}}), Error);
  // Non-associative: x·x = 1 + x with a unit is fine, x·x = y, y·x = 0, x·y = x is not.
  EXPECT_THROW(Algebra(q, {"1", "x", "y"}, {q.one(), q.zero(), q.zero()},
                       {{{0, 0}, {q.one(), q.zero(), q.zero()}},
                        {{0, 1}, {q.zero(), q.one(), q.zero()}},
                        {{1, 0}, {q.zero(), q.one(), q.zero()}},
                        {{0, 2}, {q.zero(), q.zero(), q.one()}},
                        {{2, 0}, {q.zero(), q.zero(), q.one()}},
                        {{1, 1}, {q.zero(), q.zero(), q.one()}},
                        {{1, 2}, {q.zero(), q.one(), q.zero()}}}),
               Error);
}

TEST(Algebra, QuotientKernelMatchesBlockOracle) {
  std::mt19937_64 rng(9);
  Algebra a = Algebra::upper_triangular(Field::rational());
  for (int n = 0; n < 40; ++n) {
    std::size_t size = 1 + rng() % 6;
    std::vector<std::string> s;
    for (std::size_t k = 0; k < size; ++k) s.push_back("s" + std::to_string(k));
    std::vector<std::pair<std::size_t, std::size_t>> gens;
    for (int m = 0; m < 3; ++m) gens.emplace_back(rng() % size, rng() % size);
    std::size_t blocks = oracles::block_count(size, gens);
    // Close the generators into an equivalence through the oracle's own reachability.
    std::vector<std::pair<std::string, std::string>> rel;
    for (std::size_t x = 0; x < size; ++x) {
      for (std::size_t y = 0; y < size; ++y) {
        auto with = gens;
        with.emplace_back(x, y);
        if (oracles::block_count(size, with) == blocks) rel.emplace_back(s[x], s[y]);
      }
    }
    FreeModuleQuotient fq = quotient_free_module(s, rel, a);
    EXPECT_EQ(fq.classes().size(), blocks);
    EXPECT_EQ(fq.kernel_dimension(), (size - blocks) * a.dimension());
    EXPECT_EQ(fq.relation_span_dimension(), fq.kernel_dimension());
  }
}

TEST(Algebra, QuotientRejectsNonEquivalence) {
  Algebra a = Algebra::ground_field(Field::rational());
  EXPECT_THROW(quotient_free_module({"p", "q"}, {{"p", "p"}, {"q", "q"}, {"p", "q"}}, a), Error);
}
