#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/congruence.hpp"
#include "grothcat/echelon.hpp"
#include "grothcat/lincomb.hpp"
#include "grothcat/quiver.hpp"
#include "grothcat/scalar.hpp"

namespace grothcat {

namespace detail {

inline std::size_t longest_relation(const LinearRelationSet& r) {
  std::size_t len = 0;
  for (const auto& rel : r.relations) len = std::max(len, rel.max_length());
  return len;
}

/// Products d·rel·c landing in (x, *) with every term of length <= bound,
/// grouped by head.
inline std::map<VertexId, std::vector<LinComb>> ideal_products_from(const Quiver& q, const LinearRelationSet& r,
                                                                    const VertexId& x, std::size_t bound) {
  std::map<VertexId, std::vector<LinComb>> result;
  std::map<VertexId, std::vector<Path>> from_x;
  for (auto& p : enumerate_paths_from(q, x, bound)) from_x[p.head()].push_back(std::move(p));
  std::map<VertexId, std::set<std::string>> seen;
  for (const auto& rel : r.relations) {
    std::size_t len = rel.max_length();
    if (len > bound) continue;
    const Scalar one = rel.terms().begin()->second.field().one();
    auto pre = from_x.find(rel.tail());
    if (pre == from_x.end()) continue;
    std::vector<Path> posts = enumerate_paths_from(q, rel.head(), bound - len);
    for (const Path& c : pre->second) {
      if (c.length() + len > bound) continue;
      LinComb rc = lin_mul(rel, LinComb(c, one));
      for (const Path& d : posts) {
        if (c.length() + len + d.length() > bound) continue;
        LinComb v = lin_mul(LinComb(d, one), rc);
        if (v.is_zero()) continue;
        if (seen[v.head()].insert(v.to_string()).second) result[v.head()].push_back(std::move(v));
      }
    }
  }
  return result;
}

}  // namespace detail

/// Spanning list of ⟨R⟩(x, y) restricted to products whose terms all have
/// length <= bound.
inline std::vector<LinComb> ideal_component(const Quiver& q, const LinearRelationSet& r, const VertexId& x,
                                            const VertexId& y, std::size_t bound) {
  q.require_vertex(y);
  auto all = detail::ideal_products_from(q, r, x, bound);
  auto it = all.find(y);
  return it == all.end() ? std::vector<LinComb>{} : it->second;
}

/// Basis of (kQ/⟨R⟩)(source, target) by standard paths: the paths of length
/// <= bound that are not leading terms of the echelonized ideal component.
class HomBasis {
 public:
  HomBasis(Field field, VertexId source, VertexId target, std::size_t bound, std::vector<Path> paths,
           const std::vector<LinComb>& ideal)
      : field_(field), source_(std::move(source)), target_(std::move(target)), bound_(bound), paths_(std::move(paths)) {
    for (std::size_t k = 0; k < paths_.size(); ++k) column_.emplace(paths_[k], k);
    for (const auto& v : ideal) echelon_.insert(to_vector(v));
    for (std::size_t k = 0; k < paths_.size(); ++k) {
      if (!echelon_.is_pivot(k)) {
        basis_index_.emplace(k, basis_.size());
        basis_.push_back(paths_[k]);
      }
    }
  }

  const Field& field() const { return field_; }
  const VertexId& source() const { return source_; }
  const VertexId& target() const { return target_; }
  std::size_t bound() const { return bound_; }
  std::size_t dimension() const { return basis_.size(); }

  /// All paths source -> target of length <= bound, in path order.
  const std::vector<Path>& paths() const { return paths_; }
  /// Standard paths, in path order.
  const std::vector<Path>& basis() const { return basis_; }

  /// Echelonized spanning set of the ideal component.
  std::vector<LinComb> ideal_rows() const {
    std::vector<LinComb> rows;
    for (const auto& [pivot, row] : echelon_.rows()) rows.push_back(to_lincomb(row));
    return rows;
  }

  std::size_t ideal_rank() const { return echelon_.rank(); }

  /// Reduced form: a combination of standard paths.
  LinComb normal_form(const LinComb& v) const { return to_lincomb(echelon_.reduce(to_vector(v))); }

  std::vector<Scalar> coordinates(const LinComb& v) const {
    std::vector<Scalar> coords(basis_.size(), field_.zero());
    for (const auto& [col, c] : echelon_.reduce(to_vector(v))) coords[basis_index_.at(col)] = c;
    return coords;
  }

  LinComb expand(const std::vector<Scalar>& coords) const {
    if (coords.size() != basis_.size()) fail(ErrorCode::input, "coordinate vector has the wrong dimension");
    LinComb v(source_, target_);
    for (std::size_t k = 0; k < coords.size(); ++k) v.add_term(basis_[k], coords[k]);
    return v;
  }

  bool in_bound(const Path& p) const { return p.length() <= bound_; }

 private:
  SparseVector to_vector(const LinComb& v) const {
    if (v.tail() != source_ || v.head() != target_) {
      fail(ErrorCode::input, "combination " + v.tail() + "->" + v.head() + " is not in hom(" + source_ + ", " +
                                 target_ + ")");
    }
    SparseVector out;
    for (const auto& [p, c] : v.terms()) {
      auto it = column_.find(p);
      if (it == column_.end()) {
        fail(ErrorCode::bound, "path " + format_path(p) + " is longer than bound " + std::to_string(bound_));
      }
      out.emplace(it->second, c);
    }
    return out;
  }

  LinComb to_lincomb(const SparseVector& v) const {
    LinComb out(source_, target_);
    for (const auto& [col, c] : v) out.add_term(paths_[col], c);
    return out;
  }

  Field field_;
  VertexId source_;
  VertexId target_;
  std::size_t bound_;
  std::vector<Path> paths_;
  std::map<Path, std::size_t> column_;
  RowEchelon echelon_;
  std::vector<Path> basis_;
  std::map<std::size_t, std::size_t> basis_index_;
};

namespace detail {

/// Hom bases out of one source at a fixed bound.
struct SourceSpaces {
  std::size_t bound = 0;
  std::map<VertexId, HomBasis> homs;
  bool certified = false;  // every path of length `bound` from the source is a leading term
};

inline SourceSpaces compute_source(const Quiver& q, const LinearRelationSet& r, const Field& field, const VertexId& x,
                                   std::size_t bound) {
  SourceSpaces s;
  s.bound = bound;
  std::map<VertexId, std::vector<Path>> from_x;
  for (auto& p : enumerate_paths_from(q, x, bound)) from_x[p.head()].push_back(std::move(p));
  auto ideal = ideal_products_from(q, r, x, bound);
  for (const auto& z : q.vertices()) {
    auto paths = from_x.contains(z) ? from_x.at(z) : std::vector<Path>{};
    auto gens = ideal.contains(z) ? ideal.at(z) : std::vector<LinComb>{};
    s.homs.emplace(z, HomBasis(field, x, z, bound, std::move(paths), gens));
  }
  s.certified = true;
  for (const auto& [z, h] : s.homs) {
    for (const auto& p : h.basis()) {
      if (p.length() == bound) s.certified = false;
    }
  }
  return s;
}

inline bool same_dimensions(const SourceSpaces& a, const SourceSpaces& b) {
  for (const auto& [z, h] : a.homs) {
    if (h.dimension() != b.homs.at(z).dimension()) return false;
  }
  return true;
}

inline SourceSpaces stabilize_source(const Quiver& q, const LinearRelationSet& r, const Field& field,
                                     const VertexId& x, std::size_t max_bound) {
  q.require_vertex(x);
  std::size_t start = std::max<std::size_t>(1, longest_relation(r));
  for (std::size_t b = start; b + 1 <= max_bound; ++b) {
    SourceSpaces current = compute_source(q, r, field, x, b);
    if (!current.certified) continue;
    SourceSpaces next = compute_source(q, r, field, x, b + 1);
    if (next.certified && same_dimensions(current, next)) return next;
  }
  fail(ErrorCode::infinite_dimension,
       "hom spaces out of '" + x + "' did not stabilize up to bound " + std::to_string(max_bound));
}

}  // namespace detail

/// kQ/⟨R⟩ with every hom space computed and certified finite-dimensional.
class QuotientPathCategory {
 public:
  QuotientPathCategory(Quiver q, LinearRelationSet r, Field field, std::size_t max_bound = kDefaultMaxBound)
      : quiver_(std::move(q)), relations_(std::move(r)), field_(field) {
    for (const auto& rel : relations_.relations) {
      if (rel.is_zero()) fail(ErrorCode::input, "zero relation");
      quiver_.require_vertex(rel.tail());
      quiver_.require_vertex(rel.head());
    }
    for (const auto& x : quiver_.vertices()) {
      sources_.emplace(x, detail::stabilize_source(quiver_, relations_, field_, x, max_bound));
    }
  }

  const Quiver& quiver() const { return quiver_; }
  const LinearRelationSet& relations() const { return relations_; }
  const Field& field() const { return field_; }

  std::size_t bound(const VertexId& x) const { return source(x).bound; }

  std::size_t max_bound() const {
    std::size_t b = 0;
    for (const auto& [x, s] : sources_) b = std::max(b, s.bound);
    return b;
  }

  const HomBasis& hom(const VertexId& x, const VertexId& y) const {
    quiver_.require_vertex(y);
    return source(x).homs.at(y);
  }

  /// Normal form of an element of any length. Paths longer than the bound
  /// have their first `bound` arrows rewritten by shorter standard paths.
  LinComb normal_form(const LinComb& v) const {
    const auto& s = source(v.tail());
    const HomBasis& h = s.homs.at(v.head());
    LinComb short_part(v.tail(), v.head());
    LinComb result(v.tail(), v.head());
    for (const auto& [p, c] : v.terms()) {
      if (p.length() <= s.bound) {
        short_part.add_term(p, c);
        continue;
      }
      Path prefix = quiver_.subpath(p, 0, s.bound);
      Path rest = quiver_.subpath(p, s.bound, p.length() - s.bound);
      LinComb reduced_prefix = s.homs.at(prefix.head()).normal_form(LinComb(prefix, c));
      result += normal_form(lin_mul(LinComb(rest, field_.one()), reduced_prefix));
    }
    result += h.normal_form(short_part);
    return result;
  }

  std::vector<Scalar> coordinates(const LinComb& v) const { return hom(v.tail(), v.head()).coordinates(normal_form(v)); }

  LinComb multiply(const LinComb& later, const LinComb& earlier) const { return normal_form(lin_mul(later, earlier)); }

  LinComb identity(const VertexId& x) const { return LinComb(quiver_.trivial_path(x), field_.one()); }

 private:
  const detail::SourceSpaces& source(const VertexId& x) const {
    auto it = sources_.find(x);
    if (it == sources_.end()) fail(ErrorCode::input, "unknown vertex '" + x + "'");
    return it->second;
  }

  Quiver quiver_;
  LinearRelationSet relations_;
  Field field_;
  std::map<VertexId, detail::SourceSpaces> sources_;
};

/// Certified basis of (kQ/⟨R⟩)(x, y), searching bounds up to max_bound.
inline HomBasis hom_basis(const Quiver& q, const LinearRelationSet& r, const VertexId& x, const VertexId& y,
                          std::size_t max_bound, const Field& field = Field::rational()) {
  q.require_vertex(y);
  return detail::stabilize_source(q, r, field, x, max_bound).homs.at(y);
}

/// Coordinates of v in the basis; paths beyond the basis bound are an error.
inline std::vector<Scalar> reduce(const HomBasis& b, const LinComb& v) { return b.coordinates(v); }

}  // namespace grothcat
