#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/congruence.hpp"
#include "grothcat/error.hpp"
#include "grothcat/lincomb.hpp"
#include "grothcat/path_algebra.hpp"
#include "grothcat/quiver.hpp"
#include "grothcat/scalar.hpp"

namespace grothcat {

/// The fiber kQ/⟨R⟩ over one vertex of the index category.
class FiberPresentation {
 public:
  FiberPresentation(VertexId index, Quiver quiver, LinearRelationSet relations, Field field,
                    std::size_t max_bound = kDefaultMaxBound)
      : index_(std::move(index)),
        category_(std::make_shared<const QuotientPathCategory>(std::move(quiver), std::move(relations), field,
                                                               max_bound)) {
    for (const auto& x : category_->quiver().vertices()) {
      if (category_->normal_form(category_->identity(x)).is_zero()) {
        fail(ErrorCode::input, "fiber over '" + index_ + "': e_" + x + " lies in the ideal");
      }
    }
  }

  const VertexId& index() const { return index_; }
  const Quiver& quiver() const { return category_->quiver(); }
  const LinearRelationSet& relations() const { return category_->relations(); }
  const Field& field() const { return category_->field(); }
  const QuotientPathCategory& category() const { return *category_; }

 private:
  VertexId index_;
  std::shared_ptr<const QuotientPathCategory> category_;
};

/// X(a) for one arrow a of the index quiver, given on generators.
struct ArrowAction {
  std::map<VertexId, VertexId> object_map;
  std::map<ArrowId, LinComb> arrow_map;

  friend bool operator==(const ArrowAction&, const ArrowAction&) = default;
};

struct FunctorAssignment {
  Field field = Field::rational();
  std::map<VertexId, FiberPresentation> fibers;
  std::map<ArrowId, ArrowAction> actions;

  const FiberPresentation& fiber(const VertexId& i) const {
    auto it = fibers.find(i);
    if (it == fibers.end()) fail(ErrorCode::input, "no fiber over '" + i + "'");
    return it->second;
  }

  const ArrowAction& action(const ArrowId& a) const {
    auto it = actions.find(a);
    if (it == actions.end()) fail(ErrorCode::input, "no action for arrow '" + a + "'");
    return it->second;
  }
};

/// The k-functor induced by a vertex map between quivers without parallel
/// arrows or loops: an arrow x -> y goes to the unique arrow between the
/// images, or to the trivial path when the images coincide.
inline ArrowAction induce_from_vertex_map(const FiberPresentation& src, const FiberPresentation& dst,
                                          const std::map<VertexId, VertexId>& vmap) {
  const Quiver& from = src.quiver();
  const Quiver& to = dst.quiver();
  for (const Quiver* q : {&from, &to}) {
    if (q->has_parallel_arrows() || q->has_loops()) {
      fail(ErrorCode::induction, "quiver of fiber over '" + (q == &from ? src.index() : dst.index()) +
                                     "' has parallel arrows or loops");
    }
  }
  ArrowAction action;
  for (const auto& x : from.vertices()) {
    auto it = vmap.find(x);
    if (it == vmap.end()) fail(ErrorCode::induction, "vertex '" + x + "' has no image");
    to.require_vertex(it->second);
    action.object_map.emplace(x, it->second);
  }
  for (const auto& [x, y] : vmap) {
    if (!from.has_vertex(x)) fail(ErrorCode::induction, "vertex map mentions unknown vertex '" + x + "'");
  }
  const Scalar one = dst.field().one();
  for (const auto& alpha : from.arrows()) {
    const VertexId& fx = action.object_map.at(alpha.tail);
    const VertexId& fy = action.object_map.at(alpha.head);
    if (fx == fy) {
      action.arrow_map.emplace(alpha.id, LinComb(Path::trivial(fx), one));
      continue;
    }
    const Arrow* image = nullptr;
    for (const Arrow* b : to.arrows_from(fx)) {
      if (b->head == fy) image = b;
    }
    if (image == nullptr) {
      fail(ErrorCode::induction, "pair (" + alpha.tail + ", " + alpha.head + ") has an arrow but (" + fx + ", " + fy +
                                     ") has none");
    }
    action.arrow_map.emplace(alpha.id, LinComb(to.path({image->id}), one));
  }
  return action;
}

namespace detail {

/// Image of v under one arrow action, reduced in the target fiber.
inline LinComb apply_action(const ArrowAction& action, const FiberPresentation& target, const LinComb& v) {
  const QuotientPathCategory& cat = target.category();
  LinComb result(action.object_map.at(v.tail()), action.object_map.at(v.head()));
  for (const auto& [p, c] : v.terms()) {
    LinComb image = cat.identity(action.object_map.at(p.tail()));
    for (const auto& alpha : p.arrows()) image = cat.multiply(action.arrow_map.at(alpha), image);
    result += lin_scale(c, image);
  }
  return cat.normal_form(result);
}

}  // namespace detail

/// X(p)(obj) for a path p of the index quiver.
inline VertexId act_path_on_object(const FunctorAssignment& x, const Path& p, VertexId obj) {
  x.fiber(p.tail()).quiver().require_vertex(obj);
  for (const auto& a : p.arrows()) obj = x.action(a).object_map.at(obj);
  return obj;
}

/// X(p)(v) for a path p of the index quiver, reduced in the target fiber.
inline LinComb act_path_on_morphism(const FunctorAssignment& x, const Quiver& index, const Path& p, LinComb v) {
  v = x.fiber(p.tail()).category().normal_form(v);
  for (const auto& a : p.arrows()) v = detail::apply_action(x.action(a), x.fiber(index.arrow(a).head), v);
  return v;
}

inline VertexId act_on_object(const FunctorAssignment& x, const FinPresCategory& i_cat, ClassId a, const VertexId& obj) {
  return act_path_on_object(x, i_cat.at(a).representative, obj);
}

inline LinComb act_on_morphism(const FunctorAssignment& x, const FinPresCategory& i_cat, ClassId a, const LinComb& v) {
  return act_path_on_morphism(x, i_cat.quiver(), i_cat.at(a).representative, v);
}

struct Violation {
  enum class Kind { coverage, endpoint, relation, coherence };
  Kind kind;
  std::string message;
};

inline std::string to_string(Violation::Kind k) {
  switch (k) {
    case Violation::Kind::coverage: return "coverage";
    case Violation::Kind::endpoint: return "endpoint";
    case Violation::Kind::relation: return "relation preservation";
    case Violation::Kind::coherence: return "coherence";
  }
  return "unknown";
}

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }

  std::string to_string() const {
    std::string out;
    for (const auto& v : violations) out += grothcat::to_string(v.kind) + ": " + v.message + "\n";
    return out;
  }
};

namespace detail {

inline bool paths_belong_to(const Quiver& q, const LinComb& v) {
  if (!q.has_vertex(v.tail()) || !q.has_vertex(v.head())) return false;
  for (const auto& [p, c] : v.terms()) {
    if (p.is_trivial()) continue;
    for (const auto& a : p.arrows()) {
      if (!q.has_arrow(a)) return false;
    }
    if (!(q.path(p.arrows()) == p)) return false;
  }
  return true;
}

inline void check_structure(const FunctorAssignment& x, const Quiver& index, ValidationReport& report) {
  using K = Violation::Kind;
  for (const auto& i : index.vertices()) {
    if (!x.fibers.contains(i)) report.violations.push_back({K::coverage, "no fiber over '" + i + "'"});
  }
  for (const auto& [i, f] : x.fibers) {
    if (!index.has_vertex(i)) report.violations.push_back({K::coverage, "fiber over unknown vertex '" + i + "'"});
    if (!(f.field() == x.field)) report.violations.push_back({K::coverage, "fiber over '" + i + "' uses another field"});
  }
  for (const auto& [a, act] : x.actions) {
    if (!index.has_arrow(a)) report.violations.push_back({K::coverage, "action for unknown arrow '" + a + "'"});
  }
  for (const auto& arrow : index.arrows()) {
    auto it = x.actions.find(arrow.id);
    if (it == x.actions.end()) {
      report.violations.push_back({K::coverage, "no action for arrow '" + arrow.id + "'"});
      continue;
    }
    if (!x.fibers.contains(arrow.tail) || !x.fibers.contains(arrow.head)) continue;
    const ArrowAction& act = it->second;
    const Quiver& src = x.fiber(arrow.tail).quiver();
    const Quiver& dst = x.fiber(arrow.head).quiver();
    const std::string where = "action of '" + arrow.id + "'";
    for (const auto& v : src.vertices()) {
      auto m = act.object_map.find(v);
      if (m == act.object_map.end()) {
        report.violations.push_back({K::coverage, where + " has no image for vertex '" + v + "'"});
      } else if (!dst.has_vertex(m->second)) {
        report.violations.push_back({K::endpoint, where + " sends vertex '" + v + "' to unknown '" + m->second + "'"});
      }
    }
    for (const auto& [v, w] : act.object_map) {
      if (!src.has_vertex(v)) report.violations.push_back({K::coverage, where + " maps unknown vertex '" + v + "'"});
    }
    for (const auto& alpha : src.arrows()) {
      auto m = act.arrow_map.find(alpha.id);
      if (m == act.arrow_map.end()) {
        report.violations.push_back({K::coverage, where + " has no image for arrow '" + alpha.id + "'"});
        continue;
      }
      auto t = act.object_map.find(alpha.tail);
      auto h = act.object_map.find(alpha.head);
      if (t == act.object_map.end() || h == act.object_map.end()) continue;
      if (m->second.tail() != t->second || m->second.head() != h->second || !paths_belong_to(dst, m->second)) {
        report.violations.push_back({K::endpoint, where + " sends arrow '" + alpha.id + "' to " +
                                                       m->second.to_string() + ", not a combination of paths " +
                                                       t->second + " -> " + h->second});
      }
    }
    for (const auto& [alpha, image] : act.arrow_map) {
      if (!src.has_arrow(alpha)) report.violations.push_back({K::coverage, where + " maps unknown arrow '" + alpha + "'"});
    }
  }
}

}  // namespace detail

/// Checks that the assignment defines a functor from the presented category.
/// Relation and coherence checks run only when the structure is sound.
inline ValidationReport validate_functor(const FunctorAssignment& x, const FinPresCategory& i_cat) {
  using K = Violation::Kind;
  const Quiver& index = i_cat.quiver();
  ValidationReport report;
  detail::check_structure(x, index, report);
  if (!report.ok()) return report;

  for (const auto& arrow : index.arrows()) {
    const ArrowAction& act = x.action(arrow.id);
    const FiberPresentation& dst = x.fiber(arrow.head);
    for (const auto& rel : x.fiber(arrow.tail).relations().relations) {
      LinComb image = detail::apply_action(act, dst, rel);
      if (!image.is_zero()) {
        report.violations.push_back({K::relation, "action of '" + arrow.id + "' sends relation " + rel.to_string() +
                                                      " to " + image.to_string() + " != 0"});
      }
    }
  }

  const PathStyle style = style_for(index);
  for (const auto& rel : i_cat.relations().relations()) {
    const std::string name = "(" + format_path(rel.lhs, style) + ", " + format_path(rel.rhs, style) + ")";
    const FiberPresentation& src = x.fiber(rel.lhs.tail());
    for (const auto& obj : src.quiver().vertices()) {
      VertexId l = act_path_on_object(x, rel.lhs, obj);
      VertexId r = act_path_on_object(x, rel.rhs, obj);
      if (l != r) {
        report.violations.push_back({K::coherence, "relation " + name + " disagrees on object '" + obj + "': " + l +
                                                       " vs " + r});
      }
    }
    if (!report.ok()) continue;
    const Scalar one = x.field.one();
    for (const auto& alpha : src.quiver().arrows()) {
      LinComb v(src.quiver().path({alpha.id}), one);
      LinComb l = act_path_on_morphism(x, index, rel.lhs, v);
      LinComb r = act_path_on_morphism(x, index, rel.rhs, v);
      if (!(l == r)) {
        report.violations.push_back({K::coherence, "relation " + name + " disagrees on arrow '" + alpha.id + "': " +
                                                       l.to_string() + " vs " + r.to_string()});
      }
    }
  }
  return report;
}

}  // namespace grothcat
