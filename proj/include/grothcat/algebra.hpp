#pragma once

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/echelon.hpp"
#include "grothcat/error.hpp"
#include "grothcat/scalar.hpp"

namespace grothcat {

using AlgebraVector = std::vector<Scalar>;

/// Finite-dimensional associative unital k-algebra given by structure constants.
class Algebra {
 public:
  /// products[{i, j}] holds the coordinates of b_i·b_j; missing entries are zero.
  Algebra(Field field, std::vector<std::string> labels, AlgebraVector unit,
          std::map<std::pair<std::size_t, std::size_t>, AlgebraVector> products)
      : field_(field), labels_(std::move(labels)), unit_(std::move(unit)) {
    const std::size_t n = labels_.size();
    if (n == 0) fail(ErrorCode::input, "algebra needs at least one basis element");
    if (unit_.size() != n) fail(ErrorCode::input, "unit has the wrong dimension");
    table_.assign(n * n, AlgebraVector(n, field_.zero()));
    for (auto& [key, coords] : products) {
      auto [i, j] = key;
      if (i >= n || j >= n || coords.size() != n) fail(ErrorCode::input, "malformed structure constant");
      table_[i * n + j] = std::move(coords);
    }
    validate();
  }

  static Algebra ground_field(const Field& f) { return Algebra(f, {"1"}, {f.one()}, {{{0, 0}, {f.one()}}}); }

  /// k[t]/(t^2).
  static Algebra dual_numbers(const Field& f) {
    auto o = f.one(), z = f.zero();
    return Algebra(f, {"1", "t"}, {o, z}, {{{0, 0}, {o, z}}, {{0, 1}, {z, o}}, {{1, 0}, {z, o}}});
  }

  /// Upper triangular 2x2 matrices with basis e11, e12, e22.
  static Algebra upper_triangular(const Field& f) {
    auto o = f.one(), z = f.zero();
    return Algebra(f, {"e11", "e12", "e22"}, {o, z, o},
                   {{{0, 0}, {o, z, z}}, {{0, 1}, {z, o, z}}, {{1, 2}, {z, o, z}}, {{2, 2}, {z, z, o}}});
  }

  const Field& field() const { return field_; }
  std::size_t dimension() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const AlgebraVector& unit() const { return unit_; }
  const AlgebraVector& product(std::size_t i, std::size_t j) const { return table_.at(i * dimension() + j); }

  AlgebraVector zero() const { return AlgebraVector(dimension(), field_.zero()); }

  AlgebraVector basis_vector(std::size_t i) const {
    AlgebraVector v = zero();
    v.at(i) = field_.one();
    return v;
  }

  AlgebraVector multiply(const AlgebraVector& u, const AlgebraVector& v) const {
    const std::size_t n = dimension();
    if (u.size() != n || v.size() != n) fail(ErrorCode::input, "vector dimension does not match the algebra");
    AlgebraVector out = zero();
    for (std::size_t i = 0; i < n; ++i) {
      if (u[i].is_zero()) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (v[j].is_zero()) continue;
        Scalar c = u[i] * v[j];
        const auto& p = product(i, j);
        for (std::size_t k = 0; k < n; ++k) out[k] += c * p[k];
      }
    }
    return out;
  }

 private:
  void validate() const {
    const std::size_t n = dimension();
    for (std::size_t i = 0; i < n; ++i) {
      auto b = basis_vector(i);
      if (multiply(unit_, b) != b || multiply(b, unit_) != b) {
        fail(ErrorCode::input, "unit law fails for basis element '" + labels_[i] + "'");
      }
      for (std::size_t j = 0; j < n; ++j) {
        for (std::size_t k = 0; k < n; ++k) {
          auto c = basis_vector(j), d = basis_vector(k);
          if (multiply(multiply(b, c), d) != multiply(b, multiply(c, d))) {
            fail(ErrorCode::input, "associativity fails for (" + labels_[i] + ", " + labels_[j] + ", " + labels_[k] + ")");
          }
        }
      }
    }
  }

  Field field_;
  std::vector<std::string> labels_;
  AlgebraVector unit_;
  std::vector<AlgebraVector> table_;
};

inline AlgebraVector algebra_mul(const Algebra& a, const AlgebraVector& u, const AlgebraVector& v) {
  return a.multiply(u, v);
}

/// (⊕_{x∈S} A x) / Σ_{(g,h)∈E} A(g − h) together with the projection x ↦ class(x).
///
/// Elements of ⊕ A x are maps from elements of S to A-coordinates. Flattened
/// k-coordinates use index (position of x) * dim A + (A-basis index).
class FreeModuleQuotient {
 public:
  FreeModuleQuotient(std::vector<std::string> elements, const std::vector<std::pair<std::string, std::string>>& relation,
                     const Algebra& algebra)
      : elements_(std::move(elements)), algebra_(algebra) {
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      if (!position_.emplace(elements_[k], k).second) fail(ErrorCode::input, "duplicate element '" + elements_[k] + "'");
    }
    std::set<std::pair<std::size_t, std::size_t>> pairs;
    for (const auto& [g, h] : relation) pairs.emplace(position(g), position(h));
    check_equivalence(pairs);

    class_of_.assign(elements_.size(), 0);
    std::vector<bool> assigned(elements_.size(), false);
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      if (assigned[k]) continue;
      std::vector<std::string> members;
      for (std::size_t m = k; m < elements_.size(); ++m) {
        if (pairs.contains({k, m})) {
          assigned[m] = true;
          class_of_[m] = classes_.size();
          members.push_back(elements_[m]);
        }
      }
      classes_.push_back(std::move(members));
    }

    const std::size_t d = algebra_.dimension();
    for (const auto& [g, h] : pairs) {
      if (g == h) continue;
      for (std::size_t l = 0; l < d; ++l) {
        SparseVector v;
        v.emplace(g * d + l, algebra_.field().one());
        v.emplace(h * d + l, -algebra_.field().one());
        kernel_span_.insert(std::move(v));
      }
    }
  }

  const std::vector<std::vector<std::string>>& classes() const { return classes_; }
  std::size_t class_of(const std::string& x) const { return class_of_.at(position(x)); }

  /// ε applied to an element of ⊕ A x.
  std::vector<AlgebraVector> project(const std::map<std::string, AlgebraVector>& v) const {
    std::vector<AlgebraVector> out(classes_.size(), algebra_.zero());
    for (const auto& [x, coords] : v) {
      auto& target = out[class_of(x)];
      for (std::size_t l = 0; l < coords.size(); ++l) target[l] += coords[l];
    }
    return out;
  }

  bool in_kernel(const std::map<std::string, AlgebraVector>& v) const {
    for (const auto& c : project(v)) {
      for (const auto& s : c) {
        if (!s.is_zero()) return false;
      }
    }
    return true;
  }

  /// Membership in the k-span of {b·(g − h)} for basis elements b of A.
  bool in_relation_span(const std::map<std::string, AlgebraVector>& v) const {
    return kernel_span_.reduce(flatten(v)).empty();
  }

  /// k-dimension of Σ A(g − h), computed from its spanning set.
  std::size_t relation_span_dimension() const { return kernel_span_.rank(); }

  /// k-dimension of ker ε by rank-nullity on the matrix of ε.
  std::size_t kernel_dimension() const {
    const std::size_t d = algebra_.dimension();
    // Rows of ε^T: the image of each flattened basis vector.
    RowEchelon image;
    for (std::size_t k = 0; k < elements_.size(); ++k) {
      for (std::size_t l = 0; l < d; ++l) {
        SparseVector row;
        row.emplace(class_of_[k] * d + l, algebra_.field().one());
        image.insert(std::move(row));
      }
    }
    return elements_.size() * d - image.rank();
  }

 private:
  std::size_t position(const std::string& x) const {
    auto it = position_.find(x);
    if (it == position_.end()) fail(ErrorCode::input, "unknown element '" + x + "'");
    return it->second;
  }

  void check_equivalence(const std::set<std::pair<std::size_t, std::size_t>>& pairs) const {
    const std::size_t n = elements_.size();
    for (std::size_t a = 0; a < n; ++a) {
      if (!pairs.contains({a, a})) fail(ErrorCode::input, "relation is not reflexive at '" + elements_[a] + "'");
    }
    for (const auto& [a, b] : pairs) {
      if (!pairs.contains({b, a})) fail(ErrorCode::input, "relation is not symmetric");
      for (std::size_t c = 0; c < n; ++c) {
        if (pairs.contains({b, c}) && !pairs.contains({a, c})) fail(ErrorCode::input, "relation is not transitive");
      }
    }
  }

  SparseVector flatten(const std::map<std::string, AlgebraVector>& v) const {
    const std::size_t d = algebra_.dimension();
    SparseVector out;
    for (const auto& [x, coords] : v) {
      std::size_t base = position(x) * d;
      for (std::size_t l = 0; l < coords.size(); ++l) {
        if (!coords[l].is_zero()) out.emplace(base + l, coords[l]);
      }
    }
    return out;
  }

  std::vector<std::string> elements_;
  Algebra algebra_;
  std::map<std::string, std::size_t> position_;
  std::vector<std::size_t> class_of_;
  std::vector<std::vector<std::string>> classes_;
  RowEchelon kernel_span_;
};

inline FreeModuleQuotient quotient_free_module(const std::vector<std::string>& s,
                                               const std::vector<std::pair<std::string, std::string>>& e,
                                               const Algebra& algebra) {
  return FreeModuleQuotient(s, e, algebra);
}

}  // namespace grothcat
