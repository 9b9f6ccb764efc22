#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "grothcat/error.hpp"

namespace grothcat {

using VertexId = std::string;
using ArrowId = std::string;

struct Arrow {
  ArrowId id;
  VertexId tail;
  VertexId head;

  friend bool operator==(const Arrow&, const Arrow&) = default;
};

/// A composable arrow sequence.
///
/// Arrows are stored in traversal order: arrows()[0] leaves tail(), the last
/// arrow enters head(). Written in composition notation the path reads
/// right-to-left, so the path stored as {a, b} is written "ba".
class Path {
 public:
  Path() = default;

  static Path trivial(VertexId vertex) { return Path(vertex, vertex, {}); }

  /// Unchecked constructor; use Quiver::path() to validate against a quiver.
  Path(VertexId tail, VertexId head, std::vector<ArrowId> arrows)
      : tail_(std::move(tail)), head_(std::move(head)), arrows_(std::move(arrows)) {}

  const VertexId& tail() const { return tail_; }
  const VertexId& head() const { return head_; }
  const std::vector<ArrowId>& arrows() const { return arrows_; }
  std::size_t length() const { return arrows_.size(); }
  bool is_trivial() const { return arrows_.empty(); }

  /// The sub-path made of arrows [first, first + count) in traversal order.
  /// Endpoints are supplied by the caller; see Quiver::subpath().
  Path slice(std::size_t first, std::size_t count, VertexId tail, VertexId head) const {
    std::vector<ArrowId> part(arrows_.begin() + static_cast<std::ptrdiff_t>(first),
                              arrows_.begin() + static_cast<std::ptrdiff_t>(first + count));
    return Path(std::move(tail), std::move(head), std::move(part));
  }

  /// Global path order: length first, then lexicographic on the arrow ids in
  /// traversal order, then endpoints (only relevant for trivial paths).
  friend std::strong_ordering operator<=>(const Path& a, const Path& b) {
    if (auto c = a.length() <=> b.length(); c != 0) return c;
    if (auto c = a.arrows_ <=> b.arrows_; c != 0) return c;
    if (auto c = a.tail_ <=> b.tail_; c != 0) return c;
    return a.head_ <=> b.head_;
  }
  friend bool operator==(const Path& a, const Path& b) = default;

 private:
  VertexId tail_;
  VertexId head_;
  std::vector<ArrowId> arrows_;
};

/// later ∘ earlier.
inline Path compose_paths(const Path& later, const Path& earlier) {
  if (later.tail() != earlier.head()) {
    fail(ErrorCode::composition,
         "cannot compose: head of earlier path is '" + earlier.head() + "' but tail of later path is '" +
             later.tail() + "'");
  }
  std::vector<ArrowId> arrows = earlier.arrows();
  arrows.insert(arrows.end(), later.arrows().begin(), later.arrows().end());
  return Path(earlier.tail(), later.head(), std::move(arrows));
}

class Quiver {
 public:
  void add_vertex(const VertexId& v) {
    if (vertex_set_.contains(v)) fail(ErrorCode::input, "duplicate vertex '" + v + "'");
    vertex_set_.insert(v);
    vertices_.push_back(v);
  }

  void add_arrow(const ArrowId& id, const VertexId& tail, const VertexId& head) {
    if (arrow_index_.contains(id)) fail(ErrorCode::input, "duplicate arrow '" + id + "'");
    if (!has_vertex(tail)) fail(ErrorCode::input, "arrow '" + id + "' has undeclared tail '" + tail + "'");
    if (!has_vertex(head)) fail(ErrorCode::input, "arrow '" + id + "' has undeclared head '" + head + "'");
    arrow_index_.emplace(id, arrows_.size());
    out_[tail].push_back(arrows_.size());
    in_[head].push_back(arrows_.size());
    arrows_.push_back(Arrow{id, tail, head});
  }

  const std::vector<VertexId>& vertices() const { return vertices_; }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  bool has_vertex(const VertexId& v) const { return vertex_set_.contains(v); }
  bool has_arrow(const ArrowId& id) const { return arrow_index_.contains(id); }

  const Arrow& arrow(const ArrowId& id) const {
    auto it = arrow_index_.find(id);
    if (it == arrow_index_.end()) fail(ErrorCode::input, "unknown arrow '" + id + "'");
    return arrows_[it->second];
  }

  /// Arrows leaving v, in declaration order.
  std::vector<const Arrow*> arrows_from(const VertexId& v) const { return collect(out_, v); }
  /// Arrows entering v, in declaration order.
  std::vector<const Arrow*> arrows_to(const VertexId& v) const { return collect(in_, v); }

  void require_vertex(const VertexId& v) const {
    if (!has_vertex(v)) fail(ErrorCode::input, "unknown vertex '" + v + "'");
  }

  /// Builds a path from arrows listed in traversal order.
  Path path(const std::vector<ArrowId>& traversal) const {
    if (traversal.empty()) fail(ErrorCode::input, "empty arrow list needs an explicit vertex");
    VertexId tail = arrow(traversal.front()).tail;
    VertexId cur = tail;
    for (const auto& id : traversal) {
      const Arrow& a = arrow(id);
      if (a.tail != cur) {
        fail(ErrorCode::input, "arrow '" + id + "' does not start at '" + cur + "'");
      }
      cur = a.head;
    }
    return Path(tail, cur, traversal);
  }

  /// Builds a path from arrows written in composition order (right-to-left).
  Path composite(std::vector<ArrowId> written) const {
    std::reverse(written.begin(), written.end());
    return path(written);
  }

  Path trivial_path(const VertexId& v) const {
    require_vertex(v);
    return Path::trivial(v);
  }

  /// True if some pair of vertices carries two arrows in the same direction.
  bool has_parallel_arrows() const {
    std::set<std::pair<VertexId, VertexId>> seen;
    for (const auto& a : arrows_) {
      if (!seen.insert({a.tail, a.head}).second) return true;
    }
    return false;
  }

  bool has_loops() const {
    return std::any_of(arrows_.begin(), arrows_.end(), [](const Arrow& a) { return a.tail == a.head; });
  }

  /// The vertex reached after the first `count` arrows of p.
  VertexId vertex_after(const Path& p, std::size_t count) const {
    if (count == 0) return p.tail();
    return arrow(p.arrows()[count - 1]).head;
  }

  Path subpath(const Path& p, std::size_t first, std::size_t count) const {
    return p.slice(first, count, vertex_after(p, first), vertex_after(p, first + count));
  }

  friend bool operator==(const Quiver& a, const Quiver& b) {
    return a.vertices_ == b.vertices_ && a.arrows_ == b.arrows_;
  }

 private:
  std::vector<const Arrow*> collect(const std::map<VertexId, std::vector<std::size_t>>& adj,
                                    const VertexId& v) const {
    std::vector<const Arrow*> result;
    if (auto it = adj.find(v); it != adj.end()) {
      for (std::size_t i : it->second) result.push_back(&arrows_[i]);
    }
    return result;
  }

  std::vector<VertexId> vertices_;
  std::set<VertexId> vertex_set_;
  std::vector<Arrow> arrows_;
  std::map<ArrowId, std::size_t> arrow_index_;
  std::map<VertexId, std::vector<std::size_t>> out_;
  std::map<VertexId, std::vector<std::size_t>> in_;
};

/// All paths starting at `from` with length <= max_len, sorted by path order.
inline std::vector<Path> enumerate_paths_from(const Quiver& q, const VertexId& from, std::size_t max_len) {
  q.require_vertex(from);
  std::vector<Path> result{Path::trivial(from)};
  std::vector<Path> frontier{Path::trivial(from)};
  for (std::size_t len = 1; len <= max_len && !frontier.empty(); ++len) {
    std::vector<Path> next;
    for (const auto& p : frontier) {
      for (const Arrow* a : q.arrows_from(p.head())) {
        std::vector<ArrowId> arrows = p.arrows();
        arrows.push_back(a->id);
        next.emplace_back(from, a->head, std::move(arrows));
      }
    }
    result.insert(result.end(), next.begin(), next.end());
    frontier = std::move(next);
  }
  std::sort(result.begin(), result.end());
  return result;
}

inline std::vector<Path> enumerate_paths(const Quiver& q, const VertexId& from, const VertexId& to,
                                         std::size_t max_len) {
  q.require_vertex(to);
  std::vector<Path> all = enumerate_paths_from(q, from, max_len);
  std::vector<Path> result;
  std::copy_if(all.begin(), all.end(), std::back_inserter(result), [&](const Path& p) { return p.head() == to; });
  return result;
}

/// All paths of the quiver with length <= max_len, sorted by path order.
inline std::vector<Path> enumerate_all_paths(const Quiver& q, std::size_t max_len) {
  std::vector<Path> result;
  for (const auto& v : q.vertices()) {
    auto part = enumerate_paths_from(q, v, max_len);
    result.insert(result.end(), part.begin(), part.end());
  }
  std::sort(result.begin(), result.end());
  return result;
}

enum class PathStyle {
  compact,  // "ba", "g^2": arrow ids concatenated right-to-left with powers
  joined,   // "b*a": arrow ids joined by '*' right-to-left
};

/// Compact style is only unambiguous when every arrow id is one character.
inline PathStyle style_for(const Quiver& q) {
  bool single = std::all_of(q.arrows().begin(), q.arrows().end(), [](const Arrow& a) { return a.id.size() == 1; });
  return single ? PathStyle::compact : PathStyle::joined;
}

inline std::string format_path(const Path& p, PathStyle style = PathStyle::joined) {
  if (p.is_trivial()) return "e_" + p.tail();
  std::ostringstream out;
  const auto& arrows = p.arrows();
  bool first = true;
  for (std::size_t k = arrows.size(); k > 0;) {
    std::size_t run = 1;
    if (style == PathStyle::compact) {
      while (run < k && arrows[k - 1 - run] == arrows[k - 1]) ++run;
    }
    if (!first && style == PathStyle::joined) out << '*';
    out << arrows[k - 1];
    if (run > 1) out << '^' << run;
    first = false;
    k -= run;
  }
  return out.str();
}

struct DotOptions {
  std::string graph_name = "Q";
  std::map<VertexId, std::string> vertex_labels;
  std::map<ArrowId, std::string> arrow_labels;
  std::set<ArrowId> dashed;
};

namespace detail {
inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + '"';
}
}  // namespace detail

/// Graphviz rendering; vertices then arrows, both in declaration order.
inline std::string export_dot(const Quiver& q, const DotOptions& options = {}) {
  std::ostringstream out;
  out << "digraph " << detail::dot_quote(options.graph_name) << " {\n";
  for (const auto& v : q.vertices()) {
    auto it = options.vertex_labels.find(v);
    out << "  " << detail::dot_quote(v) << " [label=" << detail::dot_quote(it == options.vertex_labels.end() ? v : it->second)
        << "];\n";
  }
  for (const auto& a : q.arrows()) {
    auto it = options.arrow_labels.find(a.id);
    out << "  " << detail::dot_quote(a.tail) << " -> " << detail::dot_quote(a.head)
        << " [label=" << detail::dot_quote(it == options.arrow_labels.end() ? a.id : it->second);
    if (options.dashed.contains(a.id)) out << ", style=dashed";
    out << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace grothcat
