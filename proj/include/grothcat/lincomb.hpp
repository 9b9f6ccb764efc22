#pragma once

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/quiver.hpp"
#include "grothcat/scalar.hpp"

namespace grothcat {

/// Element of kQ(tail, head): a finite combination of parallel paths.
/// Zero coefficients are never stored; no terms means the zero element.
class LinComb {
 public:
  using Terms = std::map<Path, Scalar>;

  LinComb() = default;
  LinComb(VertexId tail, VertexId head) : tail_(std::move(tail)), head_(std::move(head)) {}

  LinComb(const Path& p, const Scalar& c) : tail_(p.tail()), head_(p.head()) { add_term(p, c); }

  static LinComb zero(VertexId tail, VertexId head) { return LinComb(std::move(tail), std::move(head)); }

  const VertexId& tail() const { return tail_; }
  const VertexId& head() const { return head_; }
  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  Scalar coefficient(const Path& p, const Field& field) const {
    auto it = terms_.find(p);
    return it == terms_.end() ? field.zero() : it->second;
  }

  /// Largest path under the global path order; the leading term.
  const Path& leading_path() const {
    if (terms_.empty()) fail(ErrorCode::input, "zero combination has no leading term");
    return terms_.rbegin()->first;
  }

  std::size_t max_length() const {
    std::size_t len = 0;
    for (const auto& [p, c] : terms_) len = std::max(len, p.length());
    return len;
  }

  void add_term(const Path& p, const Scalar& c) {
    if (p.tail() != tail_ || p.head() != head_) {
      fail(ErrorCode::input, "path " + format_path(p) + " is not parallel to " + tail_ + "->" + head_);
    }
    if (c.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(p, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) terms_.erase(it);
    }
  }

  LinComb& operator+=(const LinComb& o) {
    require_parallel(o);
    for (const auto& [p, c] : o.terms_) add_term(p, c);
    return *this;
  }

  LinComb& operator-=(const LinComb& o) {
    require_parallel(o);
    for (const auto& [p, c] : o.terms_) add_term(p, -c);
    return *this;
  }

  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }

  friend bool operator==(const LinComb& a, const LinComb& b) {
    return a.tail_ == b.tail_ && a.head_ == b.head_ && a.terms_ == b.terms_;
  }

  std::string to_string(PathStyle style = PathStyle::joined) const {
    if (terms_.empty()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [p, c] : terms_) {
      bool negative = c.field().is_rational() && c.value() < 0;
      Scalar mag = negative ? -c : c;
      if (first) {
        if (negative) out << '-';
      } else {
        out << (negative ? " - " : " + ");
      }
      if (!mag.is_one()) out << mag << '*';
      out << format_path(p, style);
      first = false;
    }
    return out.str();
  }

 private:
  void require_parallel(const LinComb& o) const {
    if (o.tail_ != tail_ || o.head_ != head_) {
      fail(ErrorCode::input, "cannot add combinations " + tail_ + "->" + head_ + " and " + o.tail_ + "->" + o.head_);
    }
  }

  VertexId tail_;
  VertexId head_;
  Terms terms_;
};

inline LinComb lin_add(const LinComb& x, const LinComb& y) { return x + y; }

inline LinComb lin_scale(const Scalar& c, const LinComb& x) {
  LinComb result(x.tail(), x.head());
  for (const auto& [p, a] : x.terms()) result.add_term(p, c * a);
  return result;
}

/// later · earlier, bilinear extension of path composition.
inline LinComb lin_mul(const LinComb& later, const LinComb& earlier) {
  if (later.tail() != earlier.head()) {
    fail(ErrorCode::composition, "cannot multiply " + later.tail() + "->" + later.head() + " after " +
                                     earlier.tail() + "->" + earlier.head());
  }
  LinComb result(earlier.tail(), later.head());
  for (const auto& [q, b] : later.terms()) {
    for (const auto& [p, a] : earlier.terms()) result.add_term(compose_paths(q, p), b * a);
  }
  return result;
}

/// Homogeneous, nonzero generators of a two-sided ideal of kQ.
struct LinearRelationSet {
  std::vector<LinComb> relations;

  friend bool operator==(const LinearRelationSet&, const LinearRelationSet&) = default;
};

/// Splits an arbitrary sum of paths into its homogeneous components and drops
/// zero components.
inline std::vector<LinComb> split_homogeneous(const std::vector<std::pair<Path, Scalar>>& terms) {
  std::map<std::pair<VertexId, VertexId>, LinComb> parts;
  for (const auto& [p, c] : terms) {
    auto key = std::make_pair(p.tail(), p.head());
    auto it = parts.try_emplace(key, p.tail(), p.head()).first;
    it->second.add_term(p, c);
  }
  std::vector<LinComb> result;
  for (auto& [key, v] : parts) {
    if (!v.is_zero()) result.push_back(std::move(v));
  }
  return result;
}

}  // namespace grothcat
