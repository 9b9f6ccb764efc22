#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grothcat/congruence.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace grothcat;

namespace {

std::vector<std::string> names(const std::vector<Path>& paths, PathStyle style = PathStyle::compact) {
  std::vector<std::string> out;
  for (const auto& p : paths) out.push_back(format_path(p, style));
  return out;
}

std::vector<std::string> class_names(const FinPresCategory& c, const VertexId& i, const VertexId& j) {
  std::vector<std::string> out;
  for (ClassId k : c.hom(i, j)) out.push_back(c.name(k));
  return out;
}

}  // namespace

TEST(Quiver, RejectsBadInput) {
  Quiver q;
  q.add_vertex("1");
  EXPECT_THROW(q.add_vertex("1"), Error);
  EXPECT_THROW(q.add_arrow("a", "1", "2"), Error);
  q.add_vertex("2");
  q.add_arrow("a", "1", "2");
  EXPECT_THROW(q.add_arrow("a", "2", "1"), Error);
  EXPECT_THROW(q.path({"a", "a"}), Error);
}

TEST(Quiver, PathNotationIsRightToLeft) {
  auto q = fixtures::square_quiver();
  Path ba = q.composite({"b", "a"});
  EXPECT_EQ(ba.tail(), "1");
  EXPECT_EQ(ba.head(), "5");
  EXPECT_EQ(ba.arrows(), (std::vector<ArrowId>{"a", "b"}));
  EXPECT_EQ(format_path(ba, PathStyle::compact), "ba");
  EXPECT_EQ(format_path(ba, PathStyle::joined), "b*a");
  EXPECT_EQ(format_path(Path::trivial("3")), "e_3");
  auto l = fixtures::loop_quiver();
  EXPECT_EQ(format_path(l.path({"g", "g", "g"}), PathStyle::compact), "g^3");
  EXPECT_THROW(compose_paths(q.path({"a"}), q.path({"a"})), Error);
}

TEST(Quiver, EnumeratesSquarePaths) {
  auto q = fixtures::square_quiver();
  EXPECT_EQ(names(enumerate_paths(q, "1", "5", 2)), (std::vector<std::string>{"ba", "dc", "fe"}));
  EXPECT_EQ(names(enumerate_paths(q, "1", "1", 0)), (std::vector<std::string>{"e_1"}));
  EXPECT_TRUE(enumerate_paths(q, "5", "1", 4).empty());
  auto l = fixtures::loop_quiver();
  EXPECT_EQ(enumerate_paths(l, "1", "1", 3).size(), 4u);
}

TEST(Quiver, PathOrderIsLengthFirst) {
  auto q = fixtures::square_quiver();
  auto all = enumerate_all_paths(q, 2);
  for (std::size_t k = 1; k < all.size(); ++k) {
    EXPECT_LE(all[k - 1].length(), all[k].length());
    EXPECT_TRUE(all[k - 1] < all[k]);
  }
}

TEST(Quiver, DotExportMarksDashedArrows) {
  auto q = fixtures::loop_quiver();
  DotOptions o;
  o.dashed.insert("g");
  EXPECT_EQ(export_dot(q, o), "digraph \"Q\" {\n  \"1\" [label=\"1\"];\n  \"1\" -> \"1\" [label=\"g\", style=dashed];\n}\n");
}

TEST(Congruence, LoopHasThreeClasses) {
  auto q = fixtures::loop_quiver();
  auto c = saturate(q, fixtures::loop_relations(q));
  EXPECT_EQ(class_names(c, "1", "1"), (std::vector<std::string>{"e_1", "g", "g^2"}));
  EXPECT_TRUE(are_equivalent(c, q.path({"g", "g", "g", "g", "g"}), q.path({"g", "g"})));
  EXPECT_FALSE(are_equivalent(c, q.path({"g"}), q.path({"g", "g"})));
  ClassId g = c.classify(q.path({"g"}));
  ClassId g2 = c.classify(q.path({"g", "g"}));
  EXPECT_EQ(c.compose(g, g), g2);
  EXPECT_EQ(c.compose(g2, g), g2);
  to_finite_category(c).validate();
}

TEST(Congruence, SquareIdentifiesBaAndDc) {
  auto q = fixtures::square_quiver();
  auto c = saturate(q, fixtures::square_relations(q));
  EXPECT_EQ(class_names(c, "1", "5"), (std::vector<std::string>{"ba", "fe"}));
  EXPECT_TRUE(are_equivalent(c, q.composite({"b", "a"}), q.composite({"d", "c"})));
  EXPECT_FALSE(are_equivalent(c, q.composite({"b", "a"}), q.composite({"f", "e"})));
  EXPECT_THROW(are_equivalent(c, q.path({"a"}), q.path({"c"})), Error);
  EXPECT_EQ(c.hom("1", "1").size(), 1u);
  EXPECT_TRUE(c.hom("5", "1").empty());
}

TEST(Congruence, FreeLoopDoesNotStabilize) {
  auto q = fixtures::loop_quiver();
  try {
    saturate(q, {}, 6);
    FAIL() << "expected non-stabilization";
  } catch (const NonStabilizationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::non_stabilization);
    EXPECT_EQ(e.bound(), 6u);
    EXPECT_FALSE(e.partial_classes().empty());
  }
}

TEST(Congruence, IdempotentLoop) {
  auto q = fixtures::loop_quiver();
  PairRelationSet r;
  r.add(q.path({"g", "g"}), q.path({"g"}));
  auto c = saturate(q, r);
  EXPECT_EQ(class_names(c, "1", "1"), (std::vector<std::string>{"e_1", "g"}));
}

TEST(Congruence, AgreesWithRewritingOracle) {
  std::mt19937_64 rng(7);
  std::size_t checked = 0;
  for (int n = 0; n < 60; ++n) {
    auto [q, r] = random_instances::random_presentation(rng);
    std::optional<FinPresCategory> c;
    try {
      c.emplace(saturate(q, r, 8));
    } catch (const NonStabilizationError&) {
      continue;
    }
    auto components = oracles::rewrite_components(q, r, c->bound() + 3);
    for (const auto& [p, comp] : components) {
      if (p.length() > c->bound()) continue;
      for (const auto& [p2, comp2] : components) {
        if (p2.length() > c->bound() || p.tail() != p2.tail() || p.head() != p2.head()) continue;
        ASSERT_EQ(comp == comp2, are_equivalent(*c, p, p2)) << format_path(p) << " vs " << format_path(p2);
      }
    }
    ++checked;
  }
  EXPECT_GE(checked, 30u);
}

TEST(Congruence, ClassesAreClosedUnderComposition) {
  std::mt19937_64 rng(11);
  for (int n = 0; n < 40; ++n) {
    auto [q, r] = random_instances::random_presentation(rng);
    std::optional<FinPresCategory> c;
    try {
      c.emplace(saturate(q, r, 8));
    } catch (const NonStabilizationError&) {
      continue;
    }
    // Congruence: equivalent paths stay equivalent after pre- and post-composition with an arrow.
    for (const auto& cls : c->classes()) {
      for (const auto& p : cls.members) {
        for (const Arrow* a : q.arrows_from(p.head())) {
          Path arrow = q.path({a->id});
          EXPECT_TRUE(are_equivalent(*c, compose_paths(arrow, p), compose_paths(arrow, cls.representative)));
        }
        for (const Arrow* a : q.arrows_to(p.tail())) {
          Path arrow = q.path({a->id});
          EXPECT_TRUE(are_equivalent(*c, compose_paths(p, arrow), compose_paths(cls.representative, arrow)));
        }
      }
    }
    to_finite_category(*c).validate();
  }
}

TEST(Congruence, PresentCategoryRoundTrip) {
  std::mt19937_64 rng(3);
  std::size_t checked = 0;
  for (int n = 0; n < 80 && checked < 25; ++n) {
    auto [q, r] = random_instances::random_presentation(rng);
    std::optional<FinPresCategory> c;
    try {
      c.emplace(saturate(q, r, 8));
    } catch (const NonStabilizationError&) {
      continue;
    }
    FiniteCategory cat = to_finite_category(*c);
    if (cat.morphisms.size() > 12) continue;
    auto [q2, r2] = present_category(cat);
    FiniteCategory again = to_finite_category(saturate(q2, r2));
    EXPECT_EQ(again.composition, cat.composition);
    EXPECT_EQ(again.identities, cat.identities);
    EXPECT_EQ(again.morphisms.size(), cat.morphisms.size());
    ++checked;
  }
  EXPECT_GE(checked, 10u);
}

TEST(Congruence, FactorsThroughQuotient) {
  auto q = fixtures::square_quiver();
  auto c = saturate(q, fixtures::square_relations(q));
  // Target: the poset 1 -> 5 through everything collapsed.
  FiniteCategory target;
  target.objects = {"p", "q"};
  target.morphisms = {{"ip", "p", "p"}, {"iq", "q", "q"}, {"m", "p", "q"}};
  target.identities = {{"p", "ip"}, {"q", "iq"}};
  target.composition = {{{"ip", "ip"}, "ip"}, {{"iq", "iq"}, "iq"}, {{"m", "ip"}, "m"}, {{"iq", "m"}, "m"}};
  GeneratorAssignment g;
  g.objects = {{"1", "p"}, {"2", "p"}, {"3", "p"}, {"4", "p"}, {"5", "q"}};
  g.arrows = {{"a", "ip"}, {"b", "m"}, {"c", "ip"}, {"d", "m"}, {"e", "ip"}, {"f", "m"}};
  auto f = factor_through_quotient(c, target, g);
  EXPECT_EQ(f.morphisms.at(c.classify(q.composite({"f", "e"}))), "m");

  // Sending d to an identity-incompatible morphism breaks (ba, dc).
  FiniteCategory two = target;
  two.objects.push_back("r");
  two.morphisms.push_back({"ir", "r", "r"});
  two.morphisms.push_back({"n", "p", "r"});
  two.morphisms.push_back({"s", "r", "q"});
  two.morphisms.push_back({"sn", "p", "q"});
  two.identities["r"] = "ir";
  two.composition[{"ir", "ir"}] = "ir";
  two.composition[{"n", "ip"}] = "n";
  two.composition[{"ir", "n"}] = "n";
  two.composition[{"s", "ir"}] = "s";
  two.composition[{"iq", "s"}] = "s";
  two.composition[{"s", "n"}] = "sn";
  two.composition[{"sn", "ip"}] = "sn";
  two.composition[{"iq", "sn"}] = "sn";
  two.validate();
  GeneratorAssignment bad = g;
  bad.objects["3"] = "r";
  bad.arrows["c"] = "n";
  bad.arrows["d"] = "s";
  try {
    factor_through_quotient(c, two, bad);
    FAIL() << "expected a factorization error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::factorization);
    EXPECT_NE(std::string(e.what()).find("(ba, dc)"), std::string::npos);
  }
}
