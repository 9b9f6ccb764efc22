#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/congruence.hpp"
#include "grothcat/echelon.hpp"
#include "grothcat/functor_model.hpp"
#include "grothcat/grothendieck.hpp"
#include "grothcat/lincomb.hpp"
#include "grothcat/path_algebra.hpp"
#include "grothcat/report.hpp"

namespace grothcat {

struct GrArrowInfo {
  enum class Kind { inner, connecting };
  Kind kind = Kind::inner;
  VertexId index;         // I-vertex the arrow starts over
  ArrowId fiber_arrow;    // inner: the fiber arrow
  ArrowId index_arrow;    // connecting: the I-arrow
  VertexId fiber_object;  // connecting: the transported object

  friend bool operator==(const GrArrowInfo&, const GrArrowInfo&) = default;
};

/// The quiver presenting Gr(X): one vertex per pair (i, x), inner arrows
/// copied from the fibers and connecting arrows (a, _i x): _i x -> _j (ax).
struct GrQuiver {
  Quiver quiver;
  std::map<VertexId, GrObject> vertex_info;
  std::map<ArrowId, GrArrowInfo> arrow_info;

  static VertexId vertex_id(const VertexId& i, const VertexId& x) { return "_" + i + ":" + x; }
  static ArrowId inner_id(const VertexId& i, const ArrowId& alpha) { return "_" + i + ":" + alpha; }
  static ArrowId connecting_id(const ArrowId& a, const VertexId& i, const VertexId& x) {
    return "(" + a + "," + vertex_id(i, x) + ")";
  }

  bool is_connecting(const ArrowId& id) const { return arrow_info.at(id).kind == GrArrowInfo::Kind::connecting; }

  std::set<ArrowId> connecting_arrows() const {
    std::set<ArrowId> out;
    for (const auto& [id, info] : arrow_info) {
      if (info.kind == GrArrowInfo::Kind::connecting) out.insert(id);
    }
    return out;
  }
};

/// Vertices in I-vertex then fiber order; inner arrows per I-vertex in fiber
/// arrow order, then connecting arrows per I-arrow in fiber vertex order.
inline GrQuiver build_qprime(const FunctorAssignment& x, const Quiver& index) {
  GrQuiver g;
  for (const auto& i : index.vertices()) {
    for (const auto& v : x.fiber(i).quiver().vertices()) {
      g.quiver.add_vertex(GrQuiver::vertex_id(i, v));
      g.vertex_info.emplace(GrQuiver::vertex_id(i, v), GrObject{i, v});
    }
  }
  for (const auto& i : index.vertices()) {
    for (const auto& alpha : x.fiber(i).quiver().arrows()) {
      ArrowId id = GrQuiver::inner_id(i, alpha.id);
      g.quiver.add_arrow(id, GrQuiver::vertex_id(i, alpha.tail), GrQuiver::vertex_id(i, alpha.head));
      g.arrow_info.emplace(id, GrArrowInfo{GrArrowInfo::Kind::inner, i, alpha.id, {}, {}});
    }
  }
  for (const auto& a : index.arrows()) {
    const ArrowAction& act = x.action(a.id);
    for (const auto& v : x.fiber(a.tail).quiver().vertices()) {
      // Objects are quiver vertices and never zero, so every (a, _i x) exists.
      ArrowId id = GrQuiver::connecting_id(a.id, a.tail, v);
      g.quiver.add_arrow(id, GrQuiver::vertex_id(a.tail, v), GrQuiver::vertex_id(a.head, act.object_map.at(v)));
      g.arrow_info.emplace(id, GrArrowInfo{GrArrowInfo::Kind::connecting, a.tail, {}, a.id, v});
    }
  }
  return g;
}

/// The chain of connecting arrows threading obj through the I-path p.
inline Path pi_path(const GrQuiver& g, const FunctorAssignment& x, const Path& p, const VertexId& obj) {
  if (p.is_trivial()) return g.quiver.trivial_path(GrQuiver::vertex_id(p.tail(), obj));
  std::vector<ArrowId> arrows;
  VertexId cur = obj;
  VertexId over = p.tail();
  for (const auto& a : p.arrows()) {
    arrows.push_back(GrQuiver::connecting_id(a, over, cur));
    const ArrowAction& act = x.action(a);
    cur = act.object_map.at(cur);
    over = g.vertex_info.at(g.quiver.arrow(arrows.back()).head).index;
  }
  return g.quiver.path(arrows);
}

/// Relabels a fiber element into kQ′.
inline LinComb sigma_embed(const GrQuiver& g, const VertexId& i, const LinComb& v) {
  LinComb out(GrQuiver::vertex_id(i, v.tail()), GrQuiver::vertex_id(i, v.head()));
  for (const auto& [p, c] : v.terms()) {
    if (p.is_trivial()) {
      out.add_term(g.quiver.trivial_path(GrQuiver::vertex_id(i, p.tail())), c);
      continue;
    }
    std::vector<ArrowId> arrows;
    for (const auto& alpha : p.arrows()) arrows.push_back(GrQuiver::inner_id(i, alpha));
    out.add_term(g.quiver.path(arrows), c);
  }
  return out;
}

/// A preimage of X(a)(α) in kQ^(j): its normal form.
inline LinComb choose_lift(const FunctorAssignment& x, const Quiver& index, const ArrowId& a, const ArrowId& alpha) {
  const Arrow& arrow = index.arrow(a);
  const FiberPresentation& src = x.fiber(arrow.tail);
  LinComb v(src.quiver().path({alpha}), x.field.one());
  return detail::apply_action(x.action(a), x.fiber(arrow.head), v);
}

using LiftFunction = std::function<LinComb(const ArrowId& a, const ArrowId& alpha)>;

struct GrRelation {
  enum class Family { fiber, index, square };
  Family family = Family::fiber;
  LinComb lhs;
  LinComb rhs;  // zero for fiber relations

  LinComb difference() const { return lhs - rhs; }

  std::string to_string() const {
    std::string out = lhs.to_string();
    if (rhs.is_zero()) return out;
    std::string r = rhs.to_string();
    if (rhs.terms().size() > 1) return out + " - (" + r + ")";
    if (r.front() == '-') return out + " + " + r.substr(1);
    return out + " - " + r;
  }
};

inline std::string to_string(GrRelation::Family f) {
  switch (f) {
    case GrRelation::Family::fiber: return "R1";
    case GrRelation::Family::index: return "R2";
    case GrRelation::Family::square: return "R3";
  }
  return "?";
}

/// R′1: embedded fiber relations; R′2: π(g) - π(h) for every relation (g, h)
/// of I and every object over its tail; R′3: (a,_i y)·_iα - _j(aα)·(a,_i x).
inline std::vector<GrRelation> build_relations(const GrQuiver& g, const FunctorAssignment& x,
                                               const FinPresCategory& i_cat, const LiftFunction& lift = {}) {
  const Quiver& index = i_cat.quiver();
  std::vector<GrRelation> out;
  for (const auto& i : index.vertices()) {
    for (const auto& mu : x.fiber(i).relations().relations) {
      LinComb s = sigma_embed(g, i, mu);
      out.push_back({GrRelation::Family::fiber, s, LinComb::zero(s.tail(), s.head())});
    }
  }
  const Scalar one = x.field.one();
  for (const auto& rel : i_cat.relations().relations()) {
    for (const auto& v : x.fiber(rel.lhs.tail()).quiver().vertices()) {
      out.push_back({GrRelation::Family::index, LinComb(pi_path(g, x, rel.lhs, v), one),
                     LinComb(pi_path(g, x, rel.rhs, v), one)});
    }
  }
  for (const auto& a : index.arrows()) {
    for (const auto& alpha : x.fiber(a.tail).quiver().arrows()) {
      LinComb lifted = lift ? lift(a.id, alpha.id) : choose_lift(x, index, a.id, alpha.id);
      Path before = g.quiver.path({GrQuiver::inner_id(a.tail, alpha.id), GrQuiver::connecting_id(a.id, a.tail, alpha.head)});
      LinComb after = lin_mul(sigma_embed(g, a.head, lifted),
                              LinComb(g.quiver.path({GrQuiver::connecting_id(a.id, a.tail, alpha.tail)}), one));
      out.push_back({GrRelation::Family::square, LinComb(before, one), after});
    }
  }
  return out;
}

inline LinearRelationSet relation_set(const std::vector<GrRelation>& relations) {
  LinearRelationSet out;
  for (const auto& r : relations) {
    LinComb d = r.difference();
    if (!d.is_zero()) out.relations.push_back(std::move(d));
  }
  return out;
}

/// Image of one Q′ arrow in Gr(X).
inline GrMorphism phi_arrow(const Grothendieck& gr, const GrQuiver& g, const ArrowId& id) {
  const GrArrowInfo& info = g.arrow_info.at(id);
  const FinPresCategory& i_cat = gr.index();
  const FunctorAssignment& x = gr.functor();
  const Arrow& arrow = g.quiver.arrow(id);
  GrObject s = g.vertex_info.at(arrow.tail);
  GrObject t = g.vertex_info.at(arrow.head);
  GrMorphism m{s, t, {}};
  if (info.kind == GrArrowInfo::Kind::inner) {
    const FiberPresentation& fiber = x.fiber(info.index);
    gr.add_component(m, i_cat.identity(info.index), LinComb(fiber.quiver().path({info.fiber_arrow}), x.field.one()),
                     x.field.one());
  } else {
    ClassId a = i_cat.classify(i_cat.quiver().path({info.index_arrow}));
    gr.add_component(m, a, x.fiber(t.index).category().identity(t.fiber_object), x.field.one());
  }
  return m;
}

/// The k-functor Φ: kQ′ -> Gr(X), extended multiplicatively and linearly.
inline GrMorphism phi_eval(const Grothendieck& gr, const GrQuiver& g, const LinComb& v) {
  GrObject s = g.vertex_info.at(v.tail());
  GrObject t = g.vertex_info.at(v.head());
  GrMorphism result = gr.zero(s, t);
  for (const auto& [p, c] : v.terms()) {
    GrMorphism m = gr.identity(s);
    for (const auto& id : p.arrows()) m = gr.compose(phi_arrow(gr, g, id), m);
    result = gr.add(result, gr.scale(c, m));
  }
  return result;
}

/// The basis {ν · π(a, _i x)} of (kQ′/⟨R′⟩)(s, t) as elements of kQ′, with ν
/// running over the standard fiber basis of X(j)(ax, y).
inline std::vector<LinComb> presented_hom_basis(const Grothendieck& gr, const GrQuiver& g, const VertexId& s,
                                                const VertexId& t) {
  GrObject so = g.vertex_info.at(s);
  GrObject to = g.vertex_info.at(t);
  const FinPresCategory& i_cat = gr.index();
  const Scalar one = gr.functor().field.one();
  std::vector<LinComb> out;
  for (ClassId a : i_cat.hom(so.index, to.index)) {
    Path pi = pi_path(g, gr.functor(), i_cat.at(a).representative, so.fiber_object);
    for (const auto& nu : gr.component_space(so, to, a).basis()) {
      out.push_back(lin_mul(sigma_embed(g, to.index, LinComb(nu, one)), LinComb(pi, one)));
    }
  }
  return out;
}

/// Largest saturation bound used for kQ′/⟨R′⟩.
inline std::size_t presentation_bound(const FunctorAssignment& x, const FinPresCategory& i_cat) {
  std::size_t fiber = 0;
  for (const auto& [i, f] : x.fibers) fiber = std::max(fiber, f.category().max_bound());
  return i_cat.bound() + fiber + 2;
}

namespace detail {

inline SparseVector flatten(const std::vector<Scalar>& v, std::size_t offset = 0) {
  SparseVector out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_zero()) out.emplace(offset + k, v[k]);
  }
  return out;
}

inline std::map<std::pair<VertexId, VertexId>, std::size_t> presented_dimensions(const QuotientPathCategory& q) {
  std::map<std::pair<VertexId, VertexId>, std::size_t> dims;
  for (const auto& s : q.quiver().vertices()) {
    for (const auto& t : q.quiver().vertices()) dims[{s, t}] = q.hom(s, t).dimension();
  }
  return dims;
}

/// A lift differing from the normal form by a random element of the ideal
/// component; nullopt when every relevant ideal component is zero.
inline std::optional<LiftFunction> perturbed_lift(const FunctorAssignment& x, const Quiver& index, std::uint64_t seed) {
  std::map<std::pair<ArrowId, ArrowId>, LinComb> lifts;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> coef(1, 3);
  bool perturbed = false;
  for (const auto& a : index.arrows()) {
    const ArrowAction& act = x.action(a.id);
    const QuotientPathCategory& target = x.fiber(a.head).category();
    for (const auto& alpha : x.fiber(a.tail).quiver().arrows()) {
      LinComb lift = choose_lift(x, index, a.id, alpha.id);
      const HomBasis& h = target.hom(act.object_map.at(alpha.tail), act.object_map.at(alpha.head));
      for (const auto& row : h.ideal_rows()) {
        lift += lin_scale(x.field.from_int(coef(rng)), row);
        perturbed = true;
      }
      lifts.emplace(std::make_pair(a.id, alpha.id), lift);
    }
  }
  if (!perturbed) return std::nullopt;
  return LiftFunction([lifts](const ArrowId& a, const ArrowId& alpha) { return lifts.at({a, alpha}); });
}

}  // namespace detail

struct PresentationOptions {
  LiftFunction lift;              // empty: choose_lift
  bool check_lift_independence = true;
  std::uint64_t seed = 1;
};

/// Checks that Φ induces an isomorphism kQ′/⟨R′⟩ -> Gr(X).
inline CheckReport verify_presentation(const FunctorAssignment& x, const FinPresCategory& i_cat,
                                       const PresentationOptions& options = {}) {
  CheckReport report;
  Grothendieck gr(x, i_cat);
  GrQuiver g = build_qprime(x, i_cat.quiver());
  std::vector<GrRelation> relations = build_relations(g, x, i_cat, options.lift);

  {
    bool ok = true;
    std::string witness;
    for (const auto& r : relations) {
      GrMorphism image = phi_eval(gr, g, r.difference());
      if (!image.is_zero()) {
        ok = false;
        witness = to_string(r.family) + " relation " + r.to_string() + " maps to " + gr.to_string(image);
        break;
      }
    }
    report.add("relations vanish", ok, ok ? std::to_string(relations.size()) + " relations" : witness);
  }

  {
    std::set<GrObject> seen;
    for (const auto& [v, o] : g.vertex_info) seen.insert(o);
    auto objs = gr.objects();
    bool ok = seen.size() == g.quiver.vertices().size() && seen == std::set<GrObject>(objs.begin(), objs.end());
    report.add("object bijection", ok, std::to_string(objs.size()) + " objects");
  }

  std::optional<QuotientPathCategory> presented;
  try {
    presented.emplace(g.quiver, relation_set(relations), x.field, presentation_bound(x, i_cat));
  } catch (const Error& e) {
    report.add("hom spaces", false, e.what());
    return report;
  }

  {
    bool ok = true;
    std::string witness;
    std::size_t pairs = 0;
    for (const auto& s : g.quiver.vertices()) {
      for (const auto& t : g.quiver.vertices()) {
        ++pairs;
        GrObject so = g.vertex_info.at(s), to = g.vertex_info.at(t);
        const HomBasis& h = presented->hom(s, t);
        std::size_t gr_dim = gr.dimension(so, to);
        std::string where = "hom(" + s + ", " + t + ")";
        if (h.dimension() != gr_dim) {
          ok = false;
          witness = where + ": presented dimension " + std::to_string(h.dimension()) + " vs " + std::to_string(gr_dim);
          break;
        }
        RowEchelon images;
        for (const auto& p : h.basis()) {
          images.insert(detail::flatten(gr.coordinates(phi_eval(gr, g, LinComb(p, x.field.one())))));
        }
        if (images.rank() != gr_dim) {
          ok = false;
          witness = where + ": images of the standard basis have rank " + std::to_string(images.rank()) + " of " +
                    std::to_string(gr_dim);
          break;
        }
        for (const auto& p : h.paths()) {
          LinComb mu(p, x.field.one());
          if (!(phi_eval(gr, g, mu) == phi_eval(gr, g, presented->normal_form(mu)))) {
            ok = false;
            witness = where + ": path " + format_path(p) + " and its normal form have different images";
            break;
          }
        }
        if (!ok) break;
        RowEchelon normal;
        for (const auto& m : presented_hom_basis(gr, g, s, t)) normal.insert(detail::flatten(presented->coordinates(m)));
        if (normal.rank() != gr_dim) {
          ok = false;
          witness = where + ": normal-form basis has rank " + std::to_string(normal.rank()) + " of " +
                    std::to_string(gr_dim);
          break;
        }
      }
      if (!ok) break;
    }
    report.add("hom spaces", ok, ok ? std::to_string(pairs) + " pairs" : witness);
  }

  if (options.check_lift_independence && !options.lift) {
    auto lift = detail::perturbed_lift(x, i_cat.quiver(), options.seed);
    if (!lift) {
      report.add("lift independence", true, "no nonzero ideal component at any lift target");
    } else {
      std::string witness;
      bool ok = true;
      try {
        QuotientPathCategory other(g.quiver, relation_set(build_relations(g, x, i_cat, *lift)), x.field,
                                   presentation_bound(x, i_cat));
        auto before = detail::presented_dimensions(*presented);
        auto after = detail::presented_dimensions(other);
        for (const auto& [key, d] : before) {
          if (after.at(key) != d) {
            ok = false;
            witness = "hom(" + key.first + ", " + key.second + "): " + std::to_string(d) + " vs " +
                      std::to_string(after.at(key));
            break;
          }
        }
      } catch (const Error& e) {
        ok = false;
        witness = e.what();
      }
      report.add("lift independence", ok, ok ? "perturbed lift gives the same dimensions" : witness);
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Arrow elimination.

struct SimplifiedPresentation {
  Quiver quiver;
  std::vector<LinComb> relations;
  std::vector<ArrowId> eliminated;
};

namespace detail {

inline bool mentions(const Path& p, const ArrowId& id) {
  return std::find(p.arrows().begin(), p.arrows().end(), id) != p.arrows().end();
}

/// Replaces every occurrence of `arrow` in v by `replacement`.
inline LinComb substitute(const Quiver& q, const LinComb& v, const ArrowId& arrow, const LinComb& replacement) {
  LinComb out(v.tail(), v.head());
  for (const auto& [p, c] : v.terms()) {
    if (!mentions(p, arrow)) {
      out.add_term(p, c);
      continue;
    }
    LinComb acc(Path::trivial(p.tail()), c);
    for (const auto& id : p.arrows()) {
      acc = lin_mul(id == arrow ? replacement : LinComb(q.path({id}), c.field().one()), acc);
    }
    out += acc;
  }
  return out;
}

inline Quiver without_arrow(const Quiver& q, const ArrowId& id) {
  Quiver out;
  for (const auto& v : q.vertices()) out.add_vertex(v);
  for (const auto& a : q.arrows()) {
    if (a.id != id) out.add_arrow(a.id, a.tail, a.head);
  }
  return out;
}

/// First arrow β of the relation appearing only as the length-one term.
inline std::optional<Path> eliminable_arrow(const LinComb& r) {
  for (const auto& [p, c] : r.terms()) {
    if (p.length() != 1) continue;
    const ArrowId& id = p.arrows().front();
    bool elsewhere = false;
    for (const auto& [q, d] : r.terms()) {
      if (!(q == p) && mentions(q, id)) elsewhere = true;
    }
    if (!elsewhere) return p;
  }
  return std::nullopt;
}

}  // namespace detail

/// Repeatedly uses a relation β - (expression without β) to delete the arrow β
/// and substitute the expression everywhere. Relations are scanned in order.
inline SimplifiedPresentation simplify_presentation(const Quiver& q, const std::vector<LinComb>& relations) {
  SimplifiedPresentation out{q, relations, {}};
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < out.relations.size(); ++k) {
      auto beta = detail::eliminable_arrow(out.relations[k]);
      if (!beta) continue;
      const LinComb& r = out.relations[k];
      Scalar c = r.coefficient(*beta, r.terms().begin()->second.field());
      LinComb rest = r;
      rest.add_term(*beta, -c);
      LinComb replacement = lin_scale(-(c.field().one() / c), rest);
      ArrowId id = beta->arrows().front();
      std::vector<LinComb> next;
      for (std::size_t m = 0; m < out.relations.size(); ++m) {
        if (m == k) continue;
        LinComb s = detail::substitute(out.quiver, out.relations[m], id, replacement);
        if (!s.is_zero()) next.push_back(std::move(s));
      }
      out.quiver = detail::without_arrow(out.quiver, id);
      out.relations = std::move(next);
      out.eliminated.push_back(id);
      changed = true;
      break;
    }
  }
  for (auto& r : out.relations) {
    const Scalar lead = r.terms().rbegin()->second;
    r = lin_scale(lead.field().one() / lead, r);
  }
  return out;
}

/// "leading - (rest)" for a relation scaled so its leading coefficient is one.
inline std::string format_relation(const LinComb& r) {
  if (r.is_zero()) return "0";
  const auto& [lead_path, lead] = *r.terms().rbegin();
  LinComb monic = lin_scale(lead.field().one() / lead, r);
  LinComb rest = monic;
  rest.add_term(lead_path, -lead.field().one());
  GrRelation split{GrRelation::Family::square, LinComb(lead_path, lead.field().one()), lin_scale(-lead.field().one(), rest)};
  return split.to_string();
}

}  // namespace grothcat
