#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/algebra.hpp"
#include "grothcat/congruence.hpp"
#include "grothcat/error.hpp"
#include "grothcat/functor_model.hpp"
#include "grothcat/lincomb.hpp"
#include "grothcat/report.hpp"

namespace grothcat {

struct GrObject {
  VertexId index;
  VertexId fiber_object;

  friend auto operator<=>(const GrObject&, const GrObject&) = default;
};

inline std::string to_string(const GrObject& o) { return "(" + o.index + "," + o.fiber_object + ")"; }

/// A morphism (i,x) -> (j,y): one reduced component in X(j)(ax, y) per class a
/// of I(i,j). Zero components are omitted.
struct GrMorphism {
  GrObject source;
  GrObject target;
  std::map<ClassId, LinComb> components;

  bool is_zero() const { return components.empty(); }

  friend bool operator==(const GrMorphism&, const GrMorphism&) = default;
};

/// The Grothendieck construction of a validated functor, computed per hom pair.
/// Holds references: x and i_cat must outlive it.
class Grothendieck {
 public:
  Grothendieck(const FunctorAssignment& x, const FinPresCategory& i_cat) : x_(x), i_cat_(i_cat) {}

  const FunctorAssignment& functor() const { return x_; }
  const FinPresCategory& index() const { return i_cat_; }

  std::vector<GrObject> objects() const {
    std::vector<GrObject> result;
    for (const auto& i : i_cat_.quiver().vertices()) {
      for (const auto& v : x_.fiber(i).quiver().vertices()) result.push_back({i, v});
    }
    return result;
  }

  void require_object(const GrObject& o) const {
    i_cat_.quiver().require_vertex(o.index);
    x_.fiber(o.index).quiver().require_vertex(o.fiber_object);
  }

  /// Fiber hom space X(j)(ax, y) holding the component at class a.
  const HomBasis& component_space(const GrObject& s, const GrObject& t, ClassId a) const {
    VertexId ax = act_on_object(x_, i_cat_, a, s.fiber_object);
    return x_.fiber(t.index).category().hom(ax, t.fiber_object);
  }

  /// Concatenation over a ∈ I(i,j) of the fiber bases of X(j)(ax, y).
  std::vector<GrMorphism> hom_basis(const GrObject& s, const GrObject& t) const {
    require_object(s);
    require_object(t);
    std::vector<GrMorphism> basis;
    const Scalar one = x_.field.one();
    for (ClassId a : i_cat_.hom(s.index, t.index)) {
      for (const auto& p : component_space(s, t, a).basis()) {
        basis.push_back(GrMorphism{s, t, {{a, LinComb(p, one)}}});
      }
    }
    return basis;
  }

  std::size_t dimension(const GrObject& s, const GrObject& t) const {
    std::size_t d = 0;
    for (ClassId a : i_cat_.hom(s.index, t.index)) d += component_space(s, t, a).dimension();
    return d;
  }

  GrMorphism zero(const GrObject& s, const GrObject& t) const { return GrMorphism{s, t, {}}; }

  GrMorphism identity(const GrObject& s) const {
    require_object(s);
    ClassId e = i_cat_.identity(s.index);
    return GrMorphism{s, s, {{e, x_.fiber(s.index).category().identity(s.fiber_object)}}};
  }

  /// Adds c·v to the component at class a, reducing and dropping zeros.
  void add_component(GrMorphism& m, ClassId a, const LinComb& v, const Scalar& c) const {
    const QuotientPathCategory& fiber = x_.fiber(m.target.index).category();
    auto it = m.components.find(a);
    LinComb sum = it == m.components.end() ? LinComb(v.tail(), v.head()) : it->second;
    sum += lin_scale(c, v);
    sum = fiber.normal_form(sum);
    if (sum.is_zero()) {
      if (it != m.components.end()) m.components.erase(it);
    } else {
      m.components[a] = std::move(sum);
    }
  }

  GrMorphism add(const GrMorphism& f, const GrMorphism& g) const {
    if (!(f.source == g.source) || !(f.target == g.target)) fail(ErrorCode::composition, "cannot add morphisms of different hom spaces");
    GrMorphism result = f;
    for (const auto& [a, v] : g.components) add_component(result, a, v, x_.field.one());
    return result;
  }

  GrMorphism scale(const Scalar& c, const GrMorphism& f) const {
    GrMorphism result = zero(f.source, f.target);
    for (const auto& [a, v] : f.components) add_component(result, a, v, c);
    return result;
  }

  /// (g∘f)_c = Σ_{c = b∘a} g_b · X(b)(f_a).
  GrMorphism compose(const GrMorphism& g, const GrMorphism& f) const {
    if (!(f.target == g.source)) {
      fail(ErrorCode::composition, "cannot compose " + to_string(g.source) + "->" + to_string(g.target) + " after " +
                                       to_string(f.source) + "->" + to_string(f.target));
    }
    const QuotientPathCategory& fiber = x_.fiber(g.target.index).category();
    GrMorphism result = zero(f.source, g.target);
    for (const auto& [a, fa] : f.components) {
      for (const auto& [b, gb] : g.components) {
        ClassId c = i_cat_.compose(b, a);
        LinComb term = fiber.multiply(gb, act_on_morphism(x_, i_cat_, b, fa));
        add_component(result, c, term, x_.field.one());
      }
    }
    return result;
  }

  /// Coordinates with respect to hom_basis(m.source, m.target).
  std::vector<Scalar> coordinates(const GrMorphism& m) const {
    std::vector<Scalar> coords;
    for (ClassId a : i_cat_.hom(m.source.index, m.target.index)) {
      const HomBasis& space = component_space(m.source, m.target, a);
      auto it = m.components.find(a);
      std::vector<Scalar> part = it == m.components.end() ? std::vector<Scalar>(space.dimension(), x_.field.zero())
                                                          : space.coordinates(it->second);
      coords.insert(coords.end(), part.begin(), part.end());
    }
    return coords;
  }

  /// Inverse of coordinates().
  GrMorphism from_coordinates(const GrObject& s, const GrObject& t, const std::vector<Scalar>& coords) const {
    GrMorphism result = zero(s, t);
    std::size_t offset = 0;
    for (ClassId a : i_cat_.hom(s.index, t.index)) {
      const HomBasis& space = component_space(s, t, a);
      if (offset + space.dimension() > coords.size()) fail(ErrorCode::input, "coordinate vector is too short");
      std::vector<Scalar> part(coords.begin() + static_cast<std::ptrdiff_t>(offset),
                               coords.begin() + static_cast<std::ptrdiff_t>(offset + space.dimension()));
      add_component(result, a, space.expand(part), x_.field.one());
      offset += space.dimension();
    }
    if (offset != coords.size()) fail(ErrorCode::input, "coordinate vector is too long");
    return result;
  }

  std::string to_string(const GrMorphism& m) const {
    if (m.is_zero()) return "0";
    std::string out;
    for (const auto& [a, v] : m.components) {
      if (!out.empty()) out += " + ";
      out += "[" + i_cat_.name(a) + "] " + v.to_string();
    }
    return out;
  }

  static std::string to_string(const GrObject& o) { return grothcat::to_string(o); }

 private:
  const FunctorAssignment& x_;
  const FinPresCategory& i_cat_;
};

// ---------------------------------------------------------------------------
// The diagonal functor Δ(A): every fiber is the one-object category A.

/// Gr(Δ(A))((i,*),(j,*)) = A^(I(i,j)) with basis {(a, b_l)}.
struct DiagonalHom {
  std::vector<ClassId> classes;
  std::size_t algebra_dimension = 0;

  std::size_t dimension() const { return classes.size() * algebra_dimension; }
};

inline DiagonalHom gr_diagonal_hom(const Algebra& alg, const FinPresCategory& i_cat, const VertexId& i,
                                   const VertexId& j) {
  return DiagonalHom{i_cat.hom(i, j), alg.dimension()};
}

/// An element of Gr(Δ(A)): an A-coefficient per class.
using DiagonalMorphism = std::map<ClassId, AlgebraVector>;

/// (g∘f)_c = Σ_{c = b∘a} g_b f_a.
inline DiagonalMorphism diagonal_compose(const Algebra& alg, const FinPresCategory& i_cat, const DiagonalMorphism& g,
                                         const DiagonalMorphism& f) {
  DiagonalMorphism result;
  for (const auto& [a, fa] : f) {
    for (const auto& [b, gb] : g) {
      ClassId c = i_cat.compose(b, a);
      auto [it, inserted] = result.try_emplace(c, alg.zero());
      AlgebraVector prod = alg.multiply(gb, fa);
      for (std::size_t l = 0; l < prod.size(); ++l) it->second[l] += prod[l];
    }
  }
  return result;
}

struct DiagonalPresentation {
  Quiver quiver;
  std::vector<PairRelation> generators;  // each stands for g - h
  std::string text;
  std::string tensor_form;
};

/// AQ/⟨R⟩_A with ⟨R⟩_A generated by the differences g - h.
inline DiagonalPresentation diagonal_presentation(const Quiver& q, const PairRelationSet& r) {
  DiagonalPresentation out{q, r.relations(), {}, {}};
  const PathStyle style = style_for(q);
  std::string base = "AQ";
  std::string k_base = "kQ";
  if (q.vertices().size() == 1 && !q.arrows().empty()) {
    std::string gens;
    for (const auto& a : q.arrows()) gens += (gens.empty() ? "" : ",") + a.id;
    base = "A<" + gens + ">";
    k_base = "k<" + gens + ">";
  }
  if (r.empty()) {
    out.text = base + " (no relations)";
    out.tensor_form = "A (x)_k " + k_base;
    return out;
  }
  std::string ideal;
  for (const auto& rel : r.relations()) {
    ideal += (ideal.empty() ? "" : ", ") + format_path(rel.lhs, style) + "-" + format_path(rel.rhs, style);
  }
  out.text = base + "/<" + ideal + ">";
  out.tensor_form = "A (x)_k (" + k_base + "/<" + ideal + ">)";
  return out;
}

namespace detail {

/// Element of AQ(i,k): an A-coefficient per path.
using AlgebraPathSum = std::map<Path, AlgebraVector>;

inline void add_to(AlgebraPathSum& sum, const Path& p, const AlgebraVector& v) {
  auto [it, inserted] = sum.try_emplace(p, v);
  if (!inserted) {
    for (std::size_t l = 0; l < v.size(); ++l) it->second[l] += v[l];
  }
}

/// F((f_a)) = Σ f_a · a, with a realized by its representative path.
inline AlgebraPathSum diagonal_image(const FinPresCategory& i_cat, const DiagonalMorphism& f) {
  AlgebraPathSum out;
  for (const auto& [a, fa] : f) add_to(out, i_cat.at(a).representative, fa);
  return out;
}

inline AlgebraPathSum path_sum_product(const Algebra& alg, const AlgebraPathSum& later, const AlgebraPathSum& earlier) {
  AlgebraPathSum out;
  for (const auto& [p, u] : earlier) {
    for (const auto& [q, v] : later) add_to(out, compose_paths(q, p), alg.multiply(v, u));
  }
  return out;
}

/// Quotient of ⊕_{p∈S} A p by Σ A(p - q) over equivalent pairs within S.
inline FreeModuleQuotient equivalence_quotient(const Algebra& alg, const FinPresCategory& i_cat,
                                               const std::vector<Path>& paths) {
  std::vector<std::string> names;
  std::vector<ClassId> cls;
  for (const auto& p : paths) {
    names.push_back(format_path(p));
    cls.push_back(i_cat.classify(p));
  }
  std::vector<std::pair<std::string, std::string>> pairs;
  for (std::size_t m = 0; m < paths.size(); ++m) {
    for (std::size_t n = 0; n < paths.size(); ++n) {
      if (cls[m] == cls[n]) pairs.emplace_back(names[m], names[n]);
    }
  }
  return FreeModuleQuotient(names, pairs, alg);
}

inline std::map<std::string, AlgebraVector> by_name(const AlgebraPathSum& v) {
  std::map<std::string, AlgebraVector> out;
  for (const auto& [p, c] : v) out.emplace(format_path(p), c);
  return out;
}

inline AlgebraVector random_algebra_vector(const Algebra& alg, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> coef(-3, 3);
  AlgebraVector v = alg.zero();
  for (auto& s : v) s = alg.field().from_int(coef(rng));
  return v;
}

}  // namespace detail

/// Checks that (f_a) ↦ Σ f_a·a is an isomorphism Gr(Δ(A)) -> AQ/⟨R⟩_A:
/// unit law, multiplicativity on random composable pairs, and hom dimensions.
inline CheckReport verify_diagonal_iso(const Algebra& alg, const FinPresCategory& i_cat, std::size_t pairs = 50,
                                       std::uint64_t seed = 1) {
  CheckReport report;
  const Quiver& q = i_cat.quiver();

  {
    bool ok = true;
    std::string witness;
    for (const auto& i : q.vertices()) {
      ClassId e = i_cat.identity(i);
      auto image = detail::diagonal_image(i_cat, DiagonalMorphism{{e, alg.unit()}});
      detail::AlgebraPathSum expected{{Path::trivial(i), alg.unit()}};
      if (image != expected) {
        ok = false;
        witness = "identity of (" + i + ",*) does not map to 1_" + i;
        break;
      }
    }
    report.add("unit law", ok, witness);
  }

  {
    std::vector<std::tuple<VertexId, VertexId, VertexId>> triples;
    for (const auto& i : q.vertices()) {
      for (const auto& j : q.vertices()) {
        if (i_cat.hom(i, j).empty()) continue;
        for (const auto& k : q.vertices()) {
          if (!i_cat.hom(j, k).empty()) triples.emplace_back(i, j, k);
        }
      }
    }
    std::mt19937_64 rng(seed);
    bool ok = true;
    std::string witness;
    std::size_t tested = 0;
    for (std::size_t n = 0; n < pairs && !triples.empty() && ok; ++n) {
      const auto& [i, j, k] = triples[std::uniform_int_distribution<std::size_t>(0, triples.size() - 1)(rng)];
      DiagonalMorphism f, g;
      for (ClassId a : i_cat.hom(i, j)) f[a] = detail::random_algebra_vector(alg, rng);
      for (ClassId b : i_cat.hom(j, k)) g[b] = detail::random_algebra_vector(alg, rng);
      auto lhs = detail::diagonal_image(i_cat, diagonal_compose(alg, i_cat, g, f));
      auto rhs = detail::path_sum_product(alg, detail::diagonal_image(i_cat, g), detail::diagonal_image(i_cat, f));
      detail::AlgebraPathSum diff = rhs;
      std::vector<Path> support;
      for (auto& [p, v] : lhs) {
        AlgebraVector neg = alg.zero();
        for (std::size_t l = 0; l < v.size(); ++l) neg[l] = -v[l];
        detail::add_to(diff, p, neg);
      }
      for (const auto& [p, v] : diff) support.push_back(p);
      auto quotient = detail::equivalence_quotient(alg, i_cat, support);
      ++tested;
      if (!quotient.in_relation_span(detail::by_name(diff))) {
        ok = false;
        witness = "F(g o f) != F(g)F(f) modulo the relation span for a pair (" + i + ", " + j + ", " + k + ")";
      }
    }
    report.add("multiplicativity", ok, ok ? std::to_string(tested) + " pairs" : witness);
  }

  {
    bool ok = true;
    std::string witness;
    for (const auto& i : q.vertices()) {
      for (const auto& j : q.vertices()) {
        std::size_t gr_dim = gr_diagonal_hom(alg, i_cat, i, j).dimension();
        auto paths = enumerate_paths(q, i, j, i_cat.bound());
        std::size_t presented_dim = 0;
        if (!paths.empty()) {
          auto quotient = detail::equivalence_quotient(alg, i_cat, paths);
          presented_dim = paths.size() * alg.dimension() - quotient.relation_span_dimension();
        }
        if (gr_dim != presented_dim && ok) {
          ok = false;
          witness = "hom(" + i + "," + j + "): " + std::to_string(gr_dim) + " vs " + std::to_string(presented_dim);
        }
      }
    }
    report.add("dimension", ok, witness);
  }
  return report;
}

}  // namespace grothcat
