#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "grothcat/algebra.hpp"
#include "grothcat/congruence.hpp"
#include "grothcat/error.hpp"
#include "grothcat/functor_model.hpp"
#include "grothcat/lincomb.hpp"
#include "grothcat/presentation.hpp"
#include "grothcat/quiver.hpp"
#include "grothcat/scalar.hpp"

namespace grothcat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatTag = "grothcat/1";

struct FiberSpec {
  Quiver quiver;
  LinearRelationSet relations;

  friend bool operator==(const FiberSpec&, const FiberSpec&) = default;
};

/// An I-arrow action as written: either a vertex map to be induced, or
/// explicit object and arrow maps.
struct ActionSpec {
  std::optional<std::map<VertexId, VertexId>> vertex_map;
  ArrowAction explicit_action;

  friend bool operator==(const ActionSpec&, const ActionSpec&) = default;
};

struct AlgebraSpec {
  std::string preset;  // empty when explicit
  std::vector<std::string> basis;
  AlgebraVector unit;
  std::map<std::pair<std::size_t, std::size_t>, AlgebraVector> products;

  friend bool operator==(const AlgebraSpec&, const AlgebraSpec&) = default;
};

/// Replacement for the default lift of one (I-arrow, fiber arrow) pair.
struct LiftSpec {
  ArrowId arrow;
  ArrowId fiber_arrow;
  LinComb value;

  friend bool operator==(const LiftSpec&, const LiftSpec&) = default;
};

struct ProblemFile {
  Field field = Field::rational();
  std::optional<std::size_t> index_bound;
  std::optional<std::size_t> fiber_bound;
  Quiver index_quiver;
  PairRelationSet index_relations;
  std::map<VertexId, FiberSpec> fibers;
  std::map<ArrowId, ActionSpec> actions;
  std::optional<AlgebraSpec> algebra;
  std::vector<LiftSpec> lifts;

  bool has_functor() const { return !fibers.empty(); }

  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

namespace detail {

[[noreturn]] inline void schema_error(const std::string& where, const std::string& msg) {
  fail(ErrorCode::parse, where + ": " + msg);
}

inline const Json& member(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) schema_error(where, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) schema_error(where, std::string("missing '") + key + "'");
  return *it;
}

inline std::string as_id(const Json& j, const std::string& where) {
  if (!j.is_string()) schema_error(where, "expected a string id");
  return j.get<std::string>();
}

inline Scalar parse_coefficient(const Json& j, const Field& field, const std::string& where) {
  try {
    if (j.is_number_integer()) return field.from_int(j.get<long>());
    if (j.is_string()) return field.parse_scalar(j.get<std::string>());
  } catch (const Error& e) {
    schema_error(where, e.what());
  }
  schema_error(where, "coefficient must be an integer or a string \"n/d\"");
}

inline Json coefficient_json(const Scalar& c) {
  const mpq_class& v = c.value();
  if (v.get_den() == 1 && v.get_num().fits_slong_p()) return v.get_num().get_si();
  return c.to_string();
}

/// A path written right to left as arrow ids, or {"e": vertex}.
inline Path parse_path(const Json& j, const Quiver& q, const std::string& where) {
  if (j.is_object()) {
    VertexId v = as_id(member(j, "e", where), where + ".e");
    if (!q.has_vertex(v)) schema_error(where, "unknown vertex '" + v + "'");
    return Path::trivial(v);
  }
  if (!j.is_array() || j.empty()) schema_error(where, "path must be a nonempty array of arrow ids or {\"e\": vertex}");
  std::vector<ArrowId> written;
  for (std::size_t k = 0; k < j.size(); ++k) {
    ArrowId a = as_id(j[k], where + "[" + std::to_string(k) + "]");
    if (!q.has_arrow(a)) schema_error(where, "unknown arrow '" + a + "'");
    written.push_back(a);
  }
  try {
    return q.composite(written);
  } catch (const Error& e) {
    schema_error(where, e.what());
  }
}

inline Json path_json(const Path& p) {
  if (p.is_trivial()) return Json{{"e", p.tail()}};
  Json out = Json::array();
  for (auto it = p.arrows().rbegin(); it != p.arrows().rend(); ++it) out.push_back(*it);
  return out;
}

/// Terms [[coefficient, path], ...]; endpoints are given when known so that
/// an empty list denotes zero.
inline LinComb parse_lincomb(const Json& j, const Quiver& q, const Field& field, const std::string& where,
                             std::optional<std::pair<VertexId, VertexId>> endpoints = std::nullopt) {
  if (!j.is_array()) schema_error(where, "expected a list of [coefficient, path] terms");
  std::optional<LinComb> out;
  if (endpoints) out.emplace(endpoints->first, endpoints->second);
  for (std::size_t k = 0; k < j.size(); ++k) {
    std::string at = where + "[" + std::to_string(k) + "]";
    if (!j[k].is_array() || j[k].size() != 2) schema_error(at, "term must be [coefficient, path]");
    Scalar c = parse_coefficient(j[k][0], field, at + "[0]");
    Path p = parse_path(j[k][1], q, at + "[1]");
    if (!out) out.emplace(p.tail(), p.head());
    if (p.tail() != out->tail() || p.head() != out->head()) {
      schema_error(at, "path " + format_path(p) + " is not parallel to the other terms");
    }
    out->add_term(p, c);
  }
  if (!out) schema_error(where, "needs at least one term");
  return *out;
}

inline Json lincomb_json(const LinComb& v) {
  Json out = Json::array();
  for (const auto& [p, c] : v.terms()) out.push_back(Json::array({coefficient_json(c), path_json(p)}));
  return out;
}

inline Quiver parse_quiver(const Json& j, const std::string& where) {
  Quiver q;
  const Json& vs = member(j, "vertices", where);
  if (!vs.is_array()) schema_error(where + ".vertices", "expected an array");
  try {
    for (std::size_t k = 0; k < vs.size(); ++k) q.add_vertex(as_id(vs[k], where + ".vertices[" + std::to_string(k) + "]"));
    if (j.contains("arrows")) {
      const Json& as = j.at("arrows");
      if (!as.is_array()) schema_error(where + ".arrows", "expected an array");
      for (std::size_t k = 0; k < as.size(); ++k) {
        std::string at = where + ".arrows[" + std::to_string(k) + "]";
        q.add_arrow(as_id(member(as[k], "id", at), at + ".id"), as_id(member(as[k], "tail", at), at + ".tail"),
                    as_id(member(as[k], "head", at), at + ".head"));
      }
    }
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    schema_error(where, e.what());
  }
  return q;
}

inline Json quiver_json(const Quiver& q) {
  Json arrows = Json::array();
  for (const auto& a : q.arrows()) arrows.push_back(Json{{"id", a.id}, {"tail", a.tail}, {"head", a.head}});
  return Json{{"vertices", q.vertices()}, {"arrows", arrows}};
}

inline std::pair<std::size_t, std::size_t> line_column(const std::string& text, std::size_t offset) {
  std::size_t line = 1, column = 1;
  for (std::size_t k = 0; k < offset && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

inline AlgebraSpec parse_algebra(const Json& j, const Field& field) {
  AlgebraSpec spec;
  if (j.contains("preset")) {
    spec.preset = as_id(j.at("preset"), "algebra.preset");
    if (spec.preset != "k" && spec.preset != "dual_numbers" && spec.preset != "upper_triangular_2x2") {
      schema_error("algebra.preset", "unknown preset '" + spec.preset + "'");
    }
    return spec;
  }
  const Json& basis = member(j, "basis", "algebra");
  if (!basis.is_array()) schema_error("algebra.basis", "expected an array");
  std::map<std::string, std::size_t> pos;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    spec.basis.push_back(as_id(basis[k], "algebra.basis"));
    pos.emplace(spec.basis.back(), k);
  }
  auto vector_of = [&](const Json& v, const std::string& where) {
    if (!v.is_array() || v.size() != spec.basis.size()) schema_error(where, "expected a coordinate vector");
    AlgebraVector out;
    for (std::size_t k = 0; k < v.size(); ++k) out.push_back(parse_coefficient(v[k], field, where));
    return out;
  };
  spec.unit = vector_of(member(j, "unit", "algebra"), "algebra.unit");
  const Json& products = member(j, "products", "algebra");
  if (!products.is_array()) schema_error("algebra.products", "expected an array");
  for (std::size_t k = 0; k < products.size(); ++k) {
    std::string at = "algebra.products[" + std::to_string(k) + "]";
    auto index_of = [&](const char* key) {
      std::string name = as_id(member(products[k], key, at), at + "." + key);
      auto it = pos.find(name);
      if (it == pos.end()) schema_error(at, "unknown basis element '" + name + "'");
      return it->second;
    };
    spec.products[{index_of("left"), index_of("right")}] = vector_of(member(products[k], "value", at), at + ".value");
  }
  return spec;
}

inline Json algebra_json(const AlgebraSpec& spec) {
  if (!spec.preset.empty()) return Json{{"preset", spec.preset}};
  Json unit = Json::array();
  for (const auto& c : spec.unit) unit.push_back(coefficient_json(c));
  Json products = Json::array();
  for (const auto& [key, value] : spec.products) {
    Json v = Json::array();
    for (const auto& c : value) v.push_back(coefficient_json(c));
    products.push_back(Json{{"left", spec.basis.at(key.first)}, {"right", spec.basis.at(key.second)}, {"value", v}});
  }
  return Json{{"basis", spec.basis}, {"unit", unit}, {"products", products}};
}

inline std::optional<std::size_t> parse_bound(const Json& bounds, const char* key) {
  if (!bounds.contains(key)) return std::nullopt;
  const Json& v = bounds.at(key);
  if (!v.is_number_unsigned() || v.get<std::size_t>() == 0) {
    schema_error(std::string("bounds.") + key, "expected a positive integer");
  }
  return v.get<std::size_t>();
}

}  // namespace detail

/// Parses a problem document. `field_override` replaces the document's field.
inline ProblemFile parse_problem(const std::string& text, std::optional<Field> field_override = std::nullopt) {
  using namespace detail;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, column] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    fail(ErrorCode::parse, "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                               std::string(e.what()).substr(std::string(e.what()).find(':') + 2));
  }
  if (!j.is_object()) schema_error("document", "expected an object");
  if (j.contains("format") && j.at("format") != kFormatTag) {
    schema_error("format", "unsupported format, expected " + std::string(kFormatTag));
  }

  ProblemFile pf;
  try {
    pf.field = j.contains("field") ? Field::parse(as_id(j.at("field"), "field")) : Field::rational();
  } catch (const Error& e) {
    if (e.code() == ErrorCode::parse) throw;
    schema_error("field", e.what());
  }
  if (field_override) pf.field = *field_override;
  if (j.contains("bounds")) {
    pf.index_bound = parse_bound(j.at("bounds"), "index");
    pf.fiber_bound = parse_bound(j.at("bounds"), "fiber");
  }

  const Json& index = member(j, "index", "document");
  pf.index_quiver = parse_quiver(member(index, "quiver", "index"), "index.quiver");
  if (index.contains("relations")) {
    const Json& rels = index.at("relations");
    if (!rels.is_array()) schema_error("index.relations", "expected an array");
    for (std::size_t k = 0; k < rels.size(); ++k) {
      std::string at = "index.relations[" + std::to_string(k) + "]";
      Path lhs = parse_path(member(rels[k], "lhs", at), pf.index_quiver, at + ".lhs");
      Path rhs = parse_path(member(rels[k], "rhs", at), pf.index_quiver, at + ".rhs");
      if (lhs.tail() != rhs.tail() || lhs.head() != rhs.head()) schema_error(at, "sides are not parallel");
      pf.index_relations.add(lhs, rhs);
    }
  }

  if (j.contains("fibers")) {
    const Json& fibers = j.at("fibers");
    if (!fibers.is_object()) schema_error("fibers", "expected an object keyed by index vertex");
    for (const auto& [i, f] : fibers.items()) {
      std::string at = "fibers." + i;
      if (!pf.index_quiver.has_vertex(i)) schema_error(at, "unknown index vertex");
      FiberSpec spec;
      spec.quiver = parse_quiver(member(f, "quiver", at), at + ".quiver");
      if (f.contains("relations")) {
        const Json& rels = f.at("relations");
        if (!rels.is_array()) schema_error(at + ".relations", "expected an array");
        for (std::size_t k = 0; k < rels.size(); ++k) {
          spec.relations.relations.push_back(
              parse_lincomb(rels[k], spec.quiver, pf.field, at + ".relations[" + std::to_string(k) + "]"));
        }
      }
      pf.fibers.emplace(i, std::move(spec));
    }
  }

  if (j.contains("actions")) {
    const Json& actions = j.at("actions");
    if (!actions.is_object()) schema_error("actions", "expected an object keyed by index arrow");
    for (const auto& [a, act] : actions.items()) {
      std::string at = "actions." + a;
      if (!pf.index_quiver.has_arrow(a)) schema_error(at, "unknown index arrow");
      const Arrow& arrow = pf.index_quiver.arrow(a);
      if (!pf.fibers.contains(arrow.tail) || !pf.fibers.contains(arrow.head)) schema_error(at, "fiber missing");
      const Quiver& src = pf.fibers.at(arrow.tail).quiver;
      const Quiver& dst = pf.fibers.at(arrow.head).quiver;
      ActionSpec spec;
      auto read_map = [&](const char* key) {
        std::map<VertexId, VertexId> m;
        const Json& mj = member(act, key, at);
        if (!mj.is_object()) schema_error(at + "." + key, "expected an object");
        for (const auto& [from, to] : mj.items()) {
          if (!src.has_vertex(from)) schema_error(at + "." + key, "unknown source vertex '" + from + "'");
          std::string target = as_id(to, at + "." + key + "." + from);
          if (!dst.has_vertex(target)) schema_error(at + "." + key, "unknown target vertex '" + target + "'");
          m.emplace(from, target);
        }
        return m;
      };
      if (act.contains("vertex_map")) {
        spec.vertex_map = read_map("vertex_map");
      } else {
        spec.explicit_action.object_map = read_map("object_map");
        const Json& am = member(act, "arrow_map", at);
        if (!am.is_object()) schema_error(at + ".arrow_map", "expected an object");
        for (const auto& [alpha, image] : am.items()) {
          std::string where = at + ".arrow_map." + alpha;
          if (!src.has_arrow(alpha)) schema_error(where, "unknown fiber arrow");
          const Arrow& fa = src.arrow(alpha);
          const auto& om = spec.explicit_action.object_map;
          if (!om.contains(fa.tail) || !om.contains(fa.head)) schema_error(where, "endpoints have no image");
          spec.explicit_action.arrow_map.emplace(
              alpha, parse_lincomb(image, dst, pf.field, where, std::make_pair(om.at(fa.tail), om.at(fa.head))));
        }
      }
      pf.actions.emplace(a, std::move(spec));
    }
  }

  if (j.contains("algebra")) pf.algebra = parse_algebra(j.at("algebra"), pf.field);

  if (j.contains("lifts")) {
    const Json& lifts = j.at("lifts");
    if (!lifts.is_array()) schema_error("lifts", "expected an array");
    for (std::size_t k = 0; k < lifts.size(); ++k) {
      std::string at = "lifts[" + std::to_string(k) + "]";
      LiftSpec spec;
      spec.arrow = as_id(member(lifts[k], "arrow", at), at + ".arrow");
      spec.fiber_arrow = as_id(member(lifts[k], "fiber_arrow", at), at + ".fiber_arrow");
      if (!pf.index_quiver.has_arrow(spec.arrow)) schema_error(at, "unknown index arrow");
      const Arrow& arrow = pf.index_quiver.arrow(spec.arrow);
      if (!pf.fibers.contains(arrow.tail) || !pf.fibers.contains(arrow.head)) schema_error(at, "fiber missing");
      if (!pf.fibers.at(arrow.tail).quiver.has_arrow(spec.fiber_arrow)) schema_error(at, "unknown fiber arrow");
      spec.value = parse_lincomb(member(lifts[k], "value", at), pf.fibers.at(arrow.head).quiver, pf.field, at + ".value");
      pf.lifts.push_back(std::move(spec));
    }
  }
  return pf;
}

inline Json problem_json(const ProblemFile& pf) {
  using namespace detail;
  Json j;
  j["format"] = kFormatTag;
  j["field"] = pf.field.to_string();
  if (pf.index_bound || pf.fiber_bound) {
    Json b = Json::object();
    if (pf.index_bound) b["index"] = *pf.index_bound;
    if (pf.fiber_bound) b["fiber"] = *pf.fiber_bound;
    j["bounds"] = b;
  }
  Json rels = Json::array();
  for (const auto& r : pf.index_relations.relations()) rels.push_back(Json{{"lhs", path_json(r.lhs)}, {"rhs", path_json(r.rhs)}});
  j["index"] = Json{{"quiver", quiver_json(pf.index_quiver)}, {"relations", rels}};
  if (!pf.fibers.empty()) {
    Json fibers = Json::object();
    for (const auto& [i, f] : pf.fibers) {
      Json fr = Json::array();
      for (const auto& r : f.relations.relations) fr.push_back(lincomb_json(r));
      fibers[i] = Json{{"quiver", quiver_json(f.quiver)}, {"relations", fr}};
    }
    j["fibers"] = fibers;
    Json actions = Json::object();
    for (const auto& [a, spec] : pf.actions) {
      if (spec.vertex_map) {
        actions[a] = Json{{"vertex_map", *spec.vertex_map}};
        continue;
      }
      Json am = Json::object();
      for (const auto& [alpha, image] : spec.explicit_action.arrow_map) am[alpha] = lincomb_json(image);
      actions[a] = Json{{"object_map", spec.explicit_action.object_map}, {"arrow_map", am}};
    }
    j["actions"] = actions;
  }
  if (pf.algebra) j["algebra"] = algebra_json(*pf.algebra);
  if (!pf.lifts.empty()) {
    Json lifts = Json::array();
    for (const auto& l : pf.lifts) {
      lifts.push_back(Json{{"arrow", l.arrow}, {"fiber_arrow", l.fiber_arrow}, {"value", lincomb_json(l.value)}});
    }
    j["lifts"] = lifts;
  }
  return j;
}

inline std::string serialize_problem(const ProblemFile& pf) { return problem_json(pf).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// Building the mathematical objects.

inline FinPresCategory load_index(const ProblemFile& pf, std::optional<std::size_t> bound = std::nullopt) {
  return saturate(pf.index_quiver, pf.index_relations, bound.value_or(pf.index_bound.value_or(kDefaultMaxBound)));
}

/// Fibers and actions; vertex maps are induced. Validation is left to the caller.
inline FunctorAssignment load_functor(const ProblemFile& pf, std::optional<std::size_t> bound = std::nullopt) {
  if (!pf.has_functor()) fail(ErrorCode::input, "document has no fibers section");
  FunctorAssignment x;
  x.field = pf.field;
  std::size_t max_bound = bound.value_or(pf.fiber_bound.value_or(kDefaultMaxBound));
  for (const auto& [i, f] : pf.fibers) x.fibers.emplace(i, FiberPresentation(i, f.quiver, f.relations, pf.field, max_bound));
  for (const auto& [a, spec] : pf.actions) {
    if (!spec.vertex_map) {
      x.actions.emplace(a, spec.explicit_action);
      continue;
    }
    const Arrow& arrow = pf.index_quiver.arrow(a);
    x.actions.emplace(a, induce_from_vertex_map(x.fiber(arrow.tail), x.fiber(arrow.head), *spec.vertex_map));
  }
  return x;
}

inline Algebra load_algebra(const ProblemFile& pf) {
  if (!pf.algebra) return Algebra::ground_field(pf.field);
  const AlgebraSpec& s = *pf.algebra;
  if (s.preset == "k") return Algebra::ground_field(pf.field);
  if (s.preset == "dual_numbers") return Algebra::dual_numbers(pf.field);
  if (s.preset == "upper_triangular_2x2") return Algebra::upper_triangular(pf.field);
  return Algebra(pf.field, s.basis, s.unit, s.products);
}

/// Lift function honoring the document's overrides, or empty when there are none.
inline LiftFunction load_lifts(const ProblemFile& pf, const FunctorAssignment& x) {
  if (pf.lifts.empty()) return {};
  std::map<std::pair<ArrowId, ArrowId>, LinComb> overrides;
  for (const auto& l : pf.lifts) overrides.insert_or_assign({l.arrow, l.fiber_arrow}, l.value);
  Quiver index = pf.index_quiver;
  return [overrides, index, &x](const ArrowId& a, const ArrowId& alpha) {
    auto it = overrides.find({a, alpha});
    return it != overrides.end() ? it->second : choose_lift(x, index, a, alpha);
  };
}

}  // namespace grothcat
