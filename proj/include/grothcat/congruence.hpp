#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/error.hpp"
#include "grothcat/quiver.hpp"

namespace grothcat {

struct PairRelation {
  Path lhs;
  Path rhs;

  friend bool operator==(const PairRelation&, const PairRelation&) = default;
};

/// Relations of a category presentation: pairs of parallel paths.
class PairRelationSet {
 public:
  PairRelationSet() = default;
  PairRelationSet(std::initializer_list<PairRelation> relations) {
    for (const auto& r : relations) add(r.lhs, r.rhs);
  }

  void add(Path lhs, Path rhs) {
    if (lhs.tail() != rhs.tail() || lhs.head() != rhs.head()) {
      fail(ErrorCode::input, "relation (" + format_path(lhs) + ", " + format_path(rhs) + ") is not parallel");
    }
    relations_.push_back({std::move(lhs), std::move(rhs)});
  }

  const std::vector<PairRelation>& relations() const { return relations_; }
  bool empty() const { return relations_.empty(); }
  std::size_t size() const { return relations_.size(); }

  friend bool operator==(const PairRelationSet&, const PairRelationSet&) = default;

 private:
  std::vector<PairRelation> relations_;
};

/// Index of a morphism class of a finitely presented category.
struct ClassId {
  std::size_t value = 0;
  friend auto operator<=>(const ClassId&, const ClassId&) = default;
};

struct MorphismClass {
  VertexId tail;
  VertexId head;
  Path representative;        // order-minimal member
  std::vector<Path> members;  // all members within the saturation universe, sorted
};

namespace detail {

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  /// Keeps the smaller index as root so roots are order-minimal.
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
    return true;
  }

 private:
  std::vector<std::size_t> parent_;
};

/// Congruence closure of R restricted to the paths of length <= bound.
struct BoundedPartition {
  std::size_t bound = 0;
  std::vector<Path> universe;            // sorted by path order
  std::map<Path, std::size_t> index;     // path -> position in universe
  std::vector<std::size_t> root;         // position -> position of class minimum
};

inline BoundedPartition close_relations(const Quiver& q, const PairRelationSet& r, std::size_t bound) {
  BoundedPartition part;
  part.bound = bound;
  part.universe = enumerate_all_paths(q, bound);
  for (std::size_t k = 0; k < part.universe.size(); ++k) part.index.emplace(part.universe[k], k);

  std::map<VertexId, std::vector<std::size_t>> by_head;
  std::map<VertexId, std::vector<std::size_t>> by_tail;
  for (std::size_t k = 0; k < part.universe.size(); ++k) {
    by_head[part.universe[k].head()].push_back(k);
    by_tail[part.universe[k].tail()].push_back(k);
  }

  UnionFind uf(part.universe.size());
  auto lookup = [&](const Path& p) -> std::optional<std::size_t> {
    if (p.length() > bound) return std::nullopt;
    return part.index.at(p);
  };

  // Seed with every context d·(l, r)·c that fits in the universe.
  for (const auto& rel : r.relations()) {
    std::size_t len = std::max(rel.lhs.length(), rel.rhs.length());
    if (len > bound) continue;
    for (std::size_t ci : by_head[rel.lhs.tail()]) {
      const Path& c = part.universe[ci];
      if (c.length() + len > bound) continue;
      for (std::size_t di : by_tail[rel.lhs.head()]) {
        const Path& d = part.universe[di];
        if (c.length() + len + d.length() > bound) continue;
        auto a = lookup(compose_paths(d, compose_paths(rel.lhs, c)));
        auto b = lookup(compose_paths(d, compose_paths(rel.rhs, c)));
        uf.unite(*a, *b);
      }
    }
  }

  // Close under one-arrow extensions until the partition is a congruence on
  // the universe. Extending each (path, class minimum) pair is enough since
  // those pairs generate the equivalence.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::size_t k = 0; k < part.universe.size(); ++k) {
      std::size_t m = uf.find(k);
      if (m == k) continue;
      const Path& p = part.universe[k];
      const Path& rep = part.universe[m];
      if (p.length() + 1 > bound) continue;  // rep is no longer than p
      for (const Arrow* a : q.arrows_from(p.head())) {
        Path arrow = q.path({a->id});
        changed |= uf.unite(*lookup(compose_paths(arrow, p)), *lookup(compose_paths(arrow, rep)));
      }
      for (const Arrow* a : q.arrows_to(p.tail())) {
        Path arrow = q.path({a->id});
        changed |= uf.unite(*lookup(compose_paths(p, arrow)), *lookup(compose_paths(rep, arrow)));
      }
    }
  }

  part.root.resize(part.universe.size());
  for (std::size_t k = 0; k < part.universe.size(); ++k) part.root[k] = uf.find(k);
  return part;
}

/// Every path of length `bound` shares a class with a strictly shorter path.
inline bool length_reducible(const BoundedPartition& part) {
  for (std::size_t k = 0; k < part.universe.size(); ++k) {
    if (part.universe[k].length() == part.bound && part.universe[part.root[k]].length() == part.bound) return false;
  }
  return true;
}

/// Partition of `finer` restricted to the universe of `coarser` equals `coarser`.
inline bool same_partition(const BoundedPartition& coarser, const BoundedPartition& finer) {
  for (std::size_t k = 0; k < coarser.universe.size(); ++k) {
    const Path& rep_small = coarser.universe[coarser.root[k]];
    const Path& rep_large = finer.universe[finer.root[finer.index.at(coarser.universe[k])]];
    if (!(rep_small == rep_large)) return false;
  }
  return true;
}

inline std::vector<MorphismClass> classes_of(const BoundedPartition& part) {
  std::map<std::size_t, std::size_t> class_of_root;
  std::vector<MorphismClass> classes;
  for (std::size_t k = 0; k < part.universe.size(); ++k) {
    std::size_t root = part.root[k];
    auto [it, inserted] = class_of_root.try_emplace(root, classes.size());
    if (inserted) {
      const Path& rep = part.universe[root];
      classes.push_back(MorphismClass{rep.tail(), rep.head(), rep, {}});
    }
    classes[it->second].members.push_back(part.universe[k]);
  }
  return classes;
}

}  // namespace detail

/// Carries the last computed partition when saturation gives up.
class NonStabilizationError : public Error {
 public:
  NonStabilizationError(const std::string& message, std::size_t bound, std::vector<MorphismClass> partial)
      : Error(ErrorCode::non_stabilization, message), bound_(bound), partial_(std::move(partial)) {}

  std::size_t bound() const { return bound_; }
  const std::vector<MorphismClass>& partial_classes() const { return partial_; }

 private:
  std::size_t bound_;
  std::vector<MorphismClass> partial_;
};

/// The category ⟨Q | R⟩, realized on a saturated bounded path universe.
class FinPresCategory {
 public:
  FinPresCategory(Quiver quiver, PairRelationSet relations, detail::BoundedPartition partition)
      : quiver_(std::move(quiver)), relations_(std::move(relations)), bound_(partition.bound) {
    classes_ = detail::classes_of(partition);
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      for (const auto& p : classes_[c].members) class_of_.emplace(p, ClassId{c});
    }
    for (const auto& i : quiver_.vertices()) {
      for (const auto& j : quiver_.vertices()) homs_[{i, j}];
    }
    // classes_ is ordered by representative, so hom lists are too.
    for (std::size_t c = 0; c < classes_.size(); ++c) {
      homs_[{classes_[c].tail, classes_[c].head}].push_back(ClassId{c});
    }
    for (std::size_t f = 0; f < classes_.size(); ++f) {
      for (const auto& k : quiver_.vertices()) {
        for (ClassId g : homs_.at({classes_[f].head, k})) {
          table_[{g.value, f}] = classify(compose_paths(classes_[g.value].representative, classes_[f].representative));
        }
      }
    }
  }

  const Quiver& quiver() const { return quiver_; }
  const PairRelationSet& relations() const { return relations_; }
  std::size_t bound() const { return bound_; }
  const std::vector<MorphismClass>& classes() const { return classes_; }
  const MorphismClass& at(ClassId c) const { return classes_.at(c.value); }

  const std::vector<ClassId>& hom(const VertexId& i, const VertexId& j) const {
    quiver_.require_vertex(i);
    quiver_.require_vertex(j);
    return homs_.at({i, j});
  }

  /// Rewrites a path longer than the bound into an equivalent path inside the
  /// universe by repeatedly replacing its first `bound` arrows with their
  /// class representative, which is strictly shorter.
  Path shorten(Path p) const {
    while (p.length() > bound_) {
      Path head_part = quiver_.subpath(p, 0, bound_);
      Path rest = quiver_.subpath(p, bound_, p.length() - bound_);
      const Path& rep = classes_[class_of_.at(head_part).value].representative;
      p = compose_paths(rest, rep);
    }
    return p;
  }

  ClassId classify(const Path& p) const {
    auto it = class_of_.find(shorten(p));
    if (it == class_of_.end()) fail(ErrorCode::input, "path " + format_path(p) + " is not a path of the quiver");
    return it->second;
  }

  ClassId identity(const VertexId& v) const { return classify(quiver_.trivial_path(v)); }

  ClassId compose(ClassId g, ClassId f) const {
    if (at(g).tail != at(f).head) {
      fail(ErrorCode::composition, "cannot compose class " + format_path(at(g).representative) + " after " +
                                       format_path(at(f).representative));
    }
    return table_.at({g.value, f.value});
  }

  /// Replaces one entry of the composition table. Only meant for fault
  /// injection in verification tests; the result is no longer a category.
  void override_composition(ClassId g, ClassId f, ClassId result) { table_[{g.value, f.value}] = result; }

  std::string name(ClassId c) const { return format_path(at(c).representative, style_for(quiver_)); }

 private:
  Quiver quiver_;
  PairRelationSet relations_;
  std::size_t bound_;
  std::vector<MorphismClass> classes_;
  std::map<Path, ClassId> class_of_;
  std::map<std::pair<VertexId, VertexId>, std::vector<ClassId>> homs_;
  std::map<std::pair<std::size_t, std::size_t>, ClassId> table_;
};

inline constexpr std::size_t kDefaultMaxBound = 12;

/// Saturates the relations on growing bounded universes until the partition
/// stops changing and every maximal-length path is equivalent to a shorter one.
inline FinPresCategory saturate(const Quiver& q, const PairRelationSet& r, std::size_t max_bound = kDefaultMaxBound) {
  if (max_bound < 1) fail(ErrorCode::input, "max_bound must be positive");
  std::size_t longest = 0;
  for (const auto& rel : r.relations()) {
    q.require_vertex(rel.lhs.tail());
    longest = std::max({longest, rel.lhs.length(), rel.rhs.length()});
  }
  // Start one below the longest relation so the first accepted bound has seen
  // every relation at two consecutive bounds.
  std::size_t start = std::max<std::size_t>(1, longest + 1);
  detail::BoundedPartition previous = detail::close_relations(q, r, start - 1);
  for (std::size_t b = start; b <= max_bound; ++b) {
    detail::BoundedPartition current = detail::close_relations(q, r, b);
    bool stable = detail::same_partition(previous, current) && detail::length_reducible(current);
    if (stable) return FinPresCategory(q, r, std::move(current));
    previous = std::move(current);
  }
  throw NonStabilizationError("no stabilization up to bound " + std::to_string(max_bound), max_bound,
                              detail::classes_of(previous));
}

inline bool are_equivalent(const FinPresCategory& c, const Path& p, const Path& q) {
  if (p.tail() != q.tail() || p.head() != q.head()) {
    fail(ErrorCode::input, "paths " + format_path(p) + " and " + format_path(q) + " are not parallel");
  }
  return c.classify(p) == c.classify(q);
}

inline const std::vector<ClassId>& hom_set(const FinPresCategory& c, const VertexId& i, const VertexId& j) {
  return c.hom(i, j);
}

inline ClassId compose_classes(const FinPresCategory& c, ClassId g, ClassId f) { return c.compose(g, f); }

/// A finite category given by explicit tables.
struct FiniteCategory {
  struct Morphism {
    std::string name;
    std::string source;
    std::string target;
  };

  std::vector<std::string> objects;
  std::vector<Morphism> morphisms;
  std::map<std::string, std::string> identities;                            // object -> morphism
  std::map<std::pair<std::string, std::string>, std::string> composition;  // (g, f) -> g∘f

  const Morphism& morphism(const std::string& name) const {
    for (const auto& m : morphisms) {
      if (m.name == name) return m;
    }
    fail(ErrorCode::input, "unknown morphism '" + name + "'");
  }

  std::string compose(const std::string& g, const std::string& f) const {
    auto it = composition.find({g, f});
    if (it == composition.end()) fail(ErrorCode::composition, "no composite " + g + " o " + f);
    return it->second;
  }

  /// Throws unless the tables describe a category.
  void validate() const {
    std::set<std::string> objs(objects.begin(), objects.end());
    std::set<std::string> names;
    for (const auto& m : morphisms) {
      if (!names.insert(m.name).second) fail(ErrorCode::input, "duplicate morphism '" + m.name + "'");
      if (!objs.contains(m.source) || !objs.contains(m.target)) {
        fail(ErrorCode::input, "morphism '" + m.name + "' has unknown endpoints");
      }
    }
    for (const auto& o : objects) {
      auto it = identities.find(o);
      if (it == identities.end()) fail(ErrorCode::input, "object '" + o + "' has no identity");
      const auto& id = morphism(it->second);
      if (id.source != o || id.target != o) fail(ErrorCode::input, "identity of '" + o + "' is not an endomorphism");
    }
    for (const auto& f : morphisms) {
      for (const auto& g : morphisms) {
        if (g.source != f.target) continue;
        const auto& gf = morphism(compose(g.name, f.name));
        if (gf.source != f.source || gf.target != g.target) {
          fail(ErrorCode::input, "composite " + g.name + " o " + f.name + " has wrong endpoints");
        }
      }
      if (compose(identities.at(f.target), f.name) != f.name || compose(f.name, identities.at(f.source)) != f.name) {
        fail(ErrorCode::input, "unit law fails for '" + f.name + "'");
      }
    }
    for (const auto& f : morphisms) {
      for (const auto& g : morphisms) {
        if (g.source != f.target) continue;
        for (const auto& h : morphisms) {
          if (h.source != g.target) continue;
          if (compose(h.name, compose(g.name, f.name)) != compose(compose(h.name, g.name), f.name)) {
            fail(ErrorCode::input, "associativity fails for " + h.name + ", " + g.name + ", " + f.name);
          }
        }
      }
    }
  }
};

/// The category of a presentation as explicit tables, morphisms named by
/// their representatives.
inline FiniteCategory to_finite_category(const FinPresCategory& c) {
  FiniteCategory cat;
  cat.objects = c.quiver().vertices();
  for (std::size_t k = 0; k < c.classes().size(); ++k) {
    const auto& cls = c.classes()[k];
    cat.morphisms.push_back({c.name(ClassId{k}), cls.tail, cls.head});
  }
  for (const auto& v : cat.objects) cat.identities[v] = c.name(c.identity(v));
  for (std::size_t f = 0; f < c.classes().size(); ++f) {
    for (const auto& k : c.quiver().vertices()) {
      for (ClassId g : c.hom(c.classes()[f].head, k)) {
        cat.composition[{c.name(g), c.name(ClassId{f})}] = c.name(c.compose(g, ClassId{f}));
      }
    }
  }
  return cat;
}

/// Images of vertices and arrows of a presentation's quiver in a target category.
struct GeneratorAssignment {
  std::map<VertexId, std::string> objects;
  std::map<ArrowId, std::string> arrows;
};

/// A functor out of a presented category, given on morphism classes.
struct QuotientFunctor {
  std::map<VertexId, std::string> objects;
  std::map<ClassId, std::string> morphisms;
};

/// Image of a path under the functor ℙQ -> target determined by g.
inline std::string evaluate_path(const FiniteCategory& target, const GeneratorAssignment& g, const Path& p) {
  std::string result = target.identities.at(g.objects.at(p.tail()));
  for (const auto& a : p.arrows()) result = target.compose(g.arrows.at(a), result);
  return result;
}

/// The unique functor G' with G'∘F = G, where F is the quotient functor.
inline QuotientFunctor factor_through_quotient(const FinPresCategory& c, const FiniteCategory& target,
                                               const GeneratorAssignment& g) {
  const Quiver& q = c.quiver();
  for (const auto& v : q.vertices()) {
    auto it = g.objects.find(v);
    if (it == g.objects.end()) fail(ErrorCode::factorization, "vertex '" + v + "' has no image");
    if (!target.identities.contains(it->second)) {
      fail(ErrorCode::factorization, "image of vertex '" + v + "' is not an object");
    }
  }
  for (const auto& a : q.arrows()) {
    auto it = g.arrows.find(a.id);
    if (it == g.arrows.end()) fail(ErrorCode::factorization, "arrow '" + a.id + "' has no image");
    const auto& m = target.morphism(it->second);
    if (m.source != g.objects.at(a.tail) || m.target != g.objects.at(a.head)) {
      fail(ErrorCode::factorization, "image of arrow '" + a.id + "' has the wrong endpoints");
    }
  }
  for (const auto& rel : c.relations().relations()) {
    if (evaluate_path(target, g, rel.lhs) != evaluate_path(target, g, rel.rhs)) {
      fail(ErrorCode::factorization, "relation (" + format_path(rel.lhs, style_for(q)) + ", " +
                                         format_path(rel.rhs, style_for(q)) + ") is not respected");
    }
  }
  QuotientFunctor result;
  result.objects = g.objects;
  for (std::size_t k = 0; k < c.classes().size(); ++k) {
    result.morphisms[ClassId{k}] = evaluate_path(target, g, c.classes()[k].representative);
  }
  return result;
}

/// Quiver and relations presenting a finite category. Identities become
/// trivial paths; every other morphism becomes an arrow, and each length-two
/// path is related to its composite.
inline std::pair<Quiver, PairRelationSet> present_category(const FiniteCategory& cat) {
  cat.validate();
  std::set<std::string> identity_names;
  for (const auto& [obj, id] : cat.identities) identity_names.insert(id);

  Quiver q;
  for (const auto& o : cat.objects) q.add_vertex(o);
  for (const auto& m : cat.morphisms) {
    if (!identity_names.contains(m.name)) q.add_arrow(m.name, m.source, m.target);
  }
  auto as_path = [&](const std::string& name) {
    const auto& m = cat.morphism(name);
    return identity_names.contains(name) ? Path::trivial(m.source) : q.path({name});
  };

  PairRelationSet r;
  for (const auto& f : q.arrows()) {
    for (const Arrow* g : q.arrows_from(f.head)) {
      r.add(q.path({f.id, g->id}), as_path(cat.compose(g->id, f.id)));
    }
  }
  return {std::move(q), std::move(r)};
}

}  // namespace grothcat
