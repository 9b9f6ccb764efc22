#include <gtest/gtest.h>

#include <random>

#include "fixtures.hpp"
#include "grothcat/grothendieck.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

using namespace grothcat;

namespace {

bool fibers_are_free(const FunctorAssignment& x) {
  for (const auto& [i, f] : x.fibers) {
    if (!f.relations().relations.empty()) return false;
  }
  return true;
}

/// True when every arrow image is a single path with coefficient one.
bool actions_are_unscaled(const FunctorAssignment& x) {
  for (const auto& [a, act] : x.actions) {
    for (const auto& [alpha, image] : act.arrow_map) {
      if (image.terms().size() != 1 || !image.terms().begin()->second.is_one()) return false;
    }
  }
  return true;
}

/// Object image along a path, following the object maps arrow by arrow.
VertexId oracle_object(const FunctorAssignment& x, const Path& p, VertexId obj) {
  for (const auto& a : p.arrows()) obj = x.action(a).object_map.at(obj);
  return obj;
}

/// Fiber path image along an index path for vertex-map functors on free fibers.
Path oracle_path(const FunctorAssignment& x, const Quiver& index, const Path& over, Path p) {
  for (const auto& a : over.arrows()) {
    const Arrow& arrow = index.arrow(a);
    p = oracles::map_path(x.fiber(arrow.tail).quiver(), x.fiber(arrow.head).quiver(), x.action(a).object_map, p);
  }
  return p;
}

/// Σ over classes a: I(i, j) of the number of fiber paths a·s -> t.
std::size_t oracle_dimension(const FunctorAssignment& x, const FinPresCategory& c, const GrObject& s,
                             const GrObject& t) {
  std::size_t dim = 0;
  for (ClassId a : c.hom(s.index, t.index)) {
    VertexId moved = oracle_object(x, c.at(a).representative, s.fiber_object);
    const Quiver& q = x.fiber(t.index).quiver();
    dim += enumerate_paths(q, moved, t.fiber_object, q.vertices().size()).size();
  }
  return dim;
}

}  // namespace

TEST(FunctorModel, InducesArrowImagesFromVertexMaps) {
  auto inst = fixtures::instance("truncated_loop.json");
  const ArrowAction& g = inst.functor.action("g");
  EXPECT_EQ(g.arrow_map.at("alpha").to_string(), "beta");
  EXPECT_EQ(g.arrow_map.at("beta").to_string(), "e_3");

  auto four = fixtures::instance("converging_pair.json");
  for (const auto& [alpha, image] : four.functor.action("a").arrow_map) EXPECT_EQ(image.to_string(), "e_1") << alpha;
}

TEST(FunctorModel, InductionRejectsMissingArrow) {
  Field f = Field::rational();
  Quiver from;
  from.add_vertex("1");
  from.add_vertex("2");
  from.add_arrow("x", "1", "2");
  Quiver to;
  to.add_vertex("1");
  to.add_vertex("2");
  FiberPresentation src("1", from, {}, f), dst("2", to, {}, f);
  try {
    induce_from_vertex_map(src, dst, {{"1", "1"}, {"2", "2"}});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::induction);
  }
}

TEST(FunctorModel, ActsOnObjectsAndMorphisms) {
  auto inst = fixtures::instance("truncated_loop.json");
  const Quiver& iq = inst.index.quiver();
  const Quiver& fq = inst.functor.fiber("1").quiver();
  EXPECT_EQ(act_path_on_object(inst.functor, iq.path({"g", "g"}), "1"), "3");
  EXPECT_EQ(act_path_on_morphism(inst.functor, iq, iq.path({"g"}), fixtures::path_element(fq, {"alpha"})).to_string(),
            "beta");
  EXPECT_EQ(act_path_on_morphism(inst.functor, iq, iq.path({"g"}), fixtures::path_element(fq, {"beta", "alpha"}))
                .to_string(),
            "beta");
}

TEST(FunctorModel, ValidationReportsEachKind) {
  EXPECT_TRUE(validate_functor(fixtures::instance("square_of_fibers.json").functor,
                               fixtures::instance("square_of_fibers.json").index)
                  .ok());
  auto bad = fixtures::instance("invalid_functor.json");
  ValidationReport r = validate_functor(bad.functor, bad.index);
  ASSERT_FALSE(r.ok());
  EXPECT_EQ(r.violations.front().kind, Violation::Kind::coherence);
  EXPECT_NE(r.violations.front().message.find("(ba, dc)"), std::string::npos);

  auto inst = fixtures::instance("truncated_loop.json");
  FunctorAssignment missing = inst.functor;
  missing.actions.clear();
  EXPECT_EQ(validate_functor(missing, inst.index).violations.front().kind, Violation::Kind::coverage);

  FunctorAssignment wrong_end = inst.functor;
  wrong_end.actions.at("g").object_map["1"] = "1";
  EXPECT_EQ(validate_functor(wrong_end, inst.index).violations.front().kind, Violation::Kind::endpoint);

  // With beta*alpha = 0 in the fiber, g sends the relation to beta.
  FunctorAssignment killed = inst.functor;
  const Quiver& fq = inst.functor.fiber("1").quiver();
  LinearRelationSet zero_composite;
  zero_composite.relations.push_back(fixtures::path_element(fq, {"beta", "alpha"}));
  killed.fibers.insert_or_assign("1", FiberPresentation("1", fq, zero_composite, inst.functor.field));
  ValidationReport k = validate_functor(killed, inst.index);
  ASSERT_FALSE(k.ok());
  EXPECT_EQ(k.violations.front().kind, Violation::Kind::relation);
}

TEST(FunctorModel, ActionIsIndependentOfRepresentative) {
  std::mt19937_64 rng(21);
  for (int n = 0; n < 30; ++n) {
    auto [inst, draws] = random_instances::functor_instance(rng);
    const auto& c = inst.index;
    for (const auto& cls : c.classes()) {
      for (const auto& obj : inst.functor.fiber(cls.tail).quiver().vertices()) {
        VertexId expected = act_path_on_object(inst.functor, cls.representative, obj);
        for (const auto& p : cls.members) EXPECT_EQ(act_path_on_object(inst.functor, p, obj), expected);
      }
    }
  }
}

TEST(Grothendieck, HomDimensionsOnExamples) {
  auto three = fixtures::instance("truncated_loop.json");
  Grothendieck gr3(three.functor, three.index);
  EXPECT_EQ(gr3.dimension({"1", "1"}, {"1", "3"}), 3u);
  EXPECT_EQ(gr3.objects().size(), 3u);

  auto four = fixtures::instance("converging_pair.json");
  Grothendieck gr4(four.functor, four.index);
  EXPECT_EQ(gr4.dimension({"1", "1"}, {"2", "1"}), 1u);
  EXPECT_EQ(gr4.dimension({"2", "1"}, {"1", "1"}), 0u);
  EXPECT_THROW(gr4.require_object({"3", "1"}), Error);
}

TEST(Grothendieck, ComposesAcrossTheLoop) {
  auto inst = fixtures::instance("truncated_loop.json");
  Grothendieck gr(inst.functor, inst.index);
  ClassId g = inst.index.classify(inst.index.quiver().path({"g"}));
  ClassId g2 = inst.index.classify(inst.index.quiver().path({"g", "g"}));
  GrMorphism f = gr.zero({"1", "1"}, {"1", "2"});
  gr.add_component(f, g, LinComb(Path::trivial("2"), inst.functor.field.one()), inst.functor.field.one());
  GrMorphism h = gr.zero({"1", "2"}, {"1", "3"});
  gr.add_component(h, g, LinComb(Path::trivial("3"), inst.functor.field.one()), inst.functor.field.one());
  GrMorphism hf = gr.compose(h, f);
  ASSERT_EQ(hf.components.size(), 1u);
  EXPECT_EQ(hf.components.at(g2).to_string(), "e_3");
  EXPECT_THROW(gr.compose(f, f), Error);
}

TEST(Grothendieck, DimensionsMatchPathCountOracle) {
  std::mt19937_64 rng(33);
  std::size_t checked = 0;
  for (int n = 0; n < 200 && checked < 40; ++n) {
    auto [inst, draws] = random_instances::functor_instance(rng);
    if (!fibers_are_free(inst.functor)) continue;
    Grothendieck gr(inst.functor, inst.index);
    for (const auto& s : gr.objects()) {
      for (const auto& t : gr.objects()) {
        EXPECT_EQ(gr.dimension(s, t), oracle_dimension(inst.functor, inst.index, s, t));
      }
    }
    ++checked;
  }
  EXPECT_GE(checked, 20u);
}

TEST(Grothendieck, CompositionMatchesPathOracle) {
  std::mt19937_64 rng(34);
  std::size_t checked = 0;
  for (int n = 0; n < 300 && checked < 30; ++n) {
    auto [inst, draws] = random_instances::functor_instance(rng);
    if (!fibers_are_free(inst.functor) || !actions_are_unscaled(inst.functor)) continue;
    Grothendieck gr(inst.functor, inst.index);
    const Quiver& iq = inst.index.quiver();
    auto objs = gr.objects();
    for (const auto& s : objs) {
      for (const auto& m : objs) {
        for (const auto& t : objs) {
          for (const auto& f : gr.hom_basis(s, m)) {
            for (const auto& g : gr.hom_basis(m, t)) {
              auto [a, fa] = *f.components.begin();
              auto [b, gb] = *g.components.begin();
              Path moved = oracle_path(inst.functor, iq, inst.index.at(b).representative, fa.terms().begin()->first);
              Path expected = compose_paths(gb.terms().begin()->first, moved);
              GrMorphism gf = gr.compose(g, f);
              ASSERT_EQ(gf.components.size(), 1u);
              EXPECT_EQ(gf.components.begin()->first, inst.index.compose(b, a));
              EXPECT_EQ(gf.components.begin()->second.terms().begin()->first, expected);
            }
          }
        }
      }
    }
    ++checked;
  }
  EXPECT_GE(checked, 15u);
}

TEST(Grothendieck, CategoryAxiomsOnRandomInstances) {
  std::mt19937_64 rng(35);
  for (int n = 0; n < 25; ++n) {
    auto [inst, draws] = random_instances::functor_instance(rng);
    Grothendieck gr(inst.functor, inst.index);
    const Field& k = inst.functor.field;
    auto objs = gr.objects();
    for (int trial = 0; trial < 20; ++trial) {
      const GrObject& s = objs[random_instances::pick(rng, objs.size())];
      const GrObject& m = objs[random_instances::pick(rng, objs.size())];
      const GrObject& t = objs[random_instances::pick(rng, objs.size())];
      const GrObject& u = objs[random_instances::pick(rng, objs.size())];
      auto random_element = [&](const GrObject& x, const GrObject& y) {
        GrMorphism r = gr.zero(x, y);
        for (const auto& b : gr.hom_basis(x, y)) {
          r = gr.add(r, gr.scale(k.from_int(static_cast<long>(random_instances::pick(rng, 5)) - 2), b));
        }
        return r;
      };
      GrMorphism f = random_element(s, m), f2 = random_element(s, m);
      GrMorphism g = random_element(m, t), h = random_element(t, u);
      EXPECT_EQ(gr.compose(gr.identity(m), f), f);
      EXPECT_EQ(gr.compose(f, gr.identity(s)), f);
      EXPECT_EQ(gr.compose(h, gr.compose(g, f)), gr.compose(gr.compose(h, g), f));
      EXPECT_EQ(gr.compose(g, gr.add(f, f2)), gr.add(gr.compose(g, f), gr.compose(g, f2)));
      EXPECT_EQ(gr.from_coordinates(s, m, gr.coordinates(f)), f);
    }
  }
}

TEST(Diagonal, HomDimensionIsAlgebraTimesClasses) {
  auto pf = fixtures::load("diagonal_loop_upper_triangular_2x2.json");
  auto index = load_index(pf);
  Algebra a = load_algebra(pf);
  EXPECT_EQ(gr_diagonal_hom(a, index, "1", "1").dimension(), 9u);
}

TEST(Diagonal, PresentationText) {
  auto square = fixtures::square_quiver();
  EXPECT_EQ(diagonal_presentation(square, fixtures::square_relations(square)).text, "AQ/<ba-dc>");
  auto loop = fixtures::loop_quiver();
  EXPECT_EQ(diagonal_presentation(loop, fixtures::loop_relations(loop)).text, "A<g>/<g^2-g^3>");
  EXPECT_EQ(diagonal_presentation(square, {}).text, "AQ (no relations)");
}

TEST(Diagonal, VerifiesShippedAlgebras) {
  for (const char* name : {"diagonal_square_k.json", "diagonal_square_dual_numbers.json",
                           "diagonal_square_upper_triangular_2x2.json", "diagonal_loop_k.json",
                           "diagonal_loop_dual_numbers.json", "diagonal_loop_upper_triangular_2x2.json"}) {
    auto pf = fixtures::load(name);
    CheckReport r = verify_diagonal_iso(load_algebra(pf), load_index(pf), 50, 1);
    EXPECT_TRUE(r.ok()) << name << "\n" << r.to_string();
  }
}
