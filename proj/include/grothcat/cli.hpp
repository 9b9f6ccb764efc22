#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "grothcat/congruence.hpp"
#include "grothcat/error.hpp"
#include "grothcat/functor_model.hpp"
#include "grothcat/grothendieck.hpp"
#include "grothcat/presentation.hpp"
#include "grothcat/problem_io.hpp"

namespace grothcat {

enum ExitCode : int { kExitOk = 0, kExitParse = 1, kExitInfinite = 2, kExitInvalidFunctor = 3, kExitVerification = 4 };

inline int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::non_stabilization:
    case ErrorCode::infinite_dimension:
    case ErrorCode::bound:
      return kExitInfinite;
    case ErrorCode::induction:
    case ErrorCode::validation:
      return kExitInvalidFunctor;
    case ErrorCode::verification:
      return kExitVerification;
    default:
      return kExitParse;
  }
}

struct CliOptions {
  std::string input;
  std::optional<std::size_t> bound;
  std::optional<std::string> field;
  std::string format = "text";
  bool simplify = false;
  bool with_diagonal = false;
  std::uint64_t seed = 1;
  std::size_t pairs = 50;
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::input, "cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ProblemFile load_problem(const CliOptions& o) {
  std::optional<Field> field;
  if (o.field) field = Field::parse(*o.field);
  return parse_problem(read_file(o.input), field);
}

/// Class names as printed in hom listings: the identity is "e".
inline std::string hom_name(const FinPresCategory& c, ClassId id) {
  return c.at(id).representative.is_trivial() ? "e" : c.name(id);
}

inline void print_classes(std::ostream& out, const FinPresCategory& c) {
  for (const auto& i : c.quiver().vertices()) {
    for (const auto& j : c.quiver().vertices()) {
      const auto& hom = c.hom(i, j);
      if (hom.empty()) continue;
      out << "I(" << i << "," << j << "): ";
      for (std::size_t k = 0; k < hom.size(); ++k) out << (k ? ", " : "") << hom_name(c, hom[k]);
      out << " (" << hom.size() << (hom.size() == 1 ? " class)" : " classes)") << "\n";
    }
  }
}

inline int cmd_quotient(const CliOptions& o, std::ostream& out, std::ostream& err) {
  ProblemFile pf = load_problem(o);
  try {
    FinPresCategory c = load_index(pf, o.bound);
    out << "saturation bound: " << c.bound() << "\n";
    out << "classes: " << c.classes().size() << "\n";
    print_classes(out, c);
    out << "composition:\n";
    for (std::size_t f = 0; f < c.classes().size(); ++f) {
      for (const auto& k : c.quiver().vertices()) {
        for (ClassId g : c.hom(c.classes()[f].head, k)) {
          out << "  " << hom_name(c, g) << " o " << hom_name(c, ClassId{f}) << " = "
              << hom_name(c, c.compose(g, ClassId{f})) << "\n";
        }
      }
    }
    return kExitOk;
  } catch (const NonStabilizationError& e) {
    err << e.what() << "\n";
    out << "partial classes at bound " << e.bound() << ":\n";
    PathStyle style = style_for(pf.index_quiver);
    for (const auto& cls : e.partial_classes()) {
      out << "  " << cls.tail << " -> " << cls.head << ": ";
      for (std::size_t k = 0; k < cls.members.size(); ++k) out << (k ? ", " : "") << format_path(cls.members[k], style);
      out << "\n";
    }
    return kExitInfinite;
  }
}

/// Loads I and X and validates X; writes the report and returns nullopt on failure.
struct LoadedFunctor {
  ProblemFile problem;
  FinPresCategory index;
  FunctorAssignment functor;
};

inline std::optional<LoadedFunctor> load_valid_functor(const CliOptions& o, std::ostream& err) {
  ProblemFile pf = load_problem(o);
  FinPresCategory index = load_index(pf, o.bound);
  FunctorAssignment x;
  try {
    x = load_functor(pf, o.bound);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::input) throw;
    fail(ErrorCode::validation, e.what());
  }
  ValidationReport report = validate_functor(x, index);
  if (!report.ok()) {
    err << "invalid functor:\n" << report.to_string();
    return std::nullopt;
  }
  return LoadedFunctor{std::move(pf), std::move(index), std::move(x)};
}

inline std::string family_label(const GrRelation& r) { return to_string(r.family); }

inline Json arrows_json(const Quiver& q, const GrQuiver& g) {
  Json arrows = Json::array();
  for (const auto& a : q.arrows()) {
    arrows.push_back(Json{{"id", a.id},
                          {"tail", a.tail},
                          {"head", a.head},
                          {"kind", g.is_connecting(a.id) ? "connecting" : "inner"}});
  }
  return arrows;
}

inline int cmd_gr_pres(const CliOptions& o, std::ostream& out, std::ostream& err) {
  if (o.format != "text" && o.format != "json" && o.format != "dot") {
    fail(ErrorCode::input, "unknown format '" + o.format + "'");
  }
  auto loaded = load_valid_functor(o, err);
  if (!loaded) return kExitInvalidFunctor;
  const auto& [pf, index, x] = *loaded;
  GrQuiver g = build_qprime(x, index.quiver());
  std::vector<GrRelation> relations = build_relations(g, x, index, load_lifts(pf, x));

  Quiver quiver = g.quiver;
  std::vector<std::pair<std::string, LinComb>> shown;  // (family label, relation)
  std::vector<std::string> text_relations;
  std::vector<ArrowId> eliminated;
  if (o.simplify) {
    SimplifiedPresentation s = simplify_presentation(g.quiver, relation_set(relations).relations);
    quiver = s.quiver;
    eliminated = s.eliminated;
    for (const auto& r : s.relations) {
      shown.emplace_back("", r);
      text_relations.push_back(format_relation(r));
    }
  } else {
    for (const auto& r : relations) {
      shown.emplace_back(family_label(r), r.difference());
      text_relations.push_back(family_label(r) + ": " + r.to_string());
    }
  }

  if (o.format == "dot") {
    DotOptions d;
    d.graph_name = "Gr";
    for (const auto& a : quiver.arrows()) {
      if (g.is_connecting(a.id)) d.dashed.insert(a.id);
    }
    out << export_dot(quiver, d);
  } else if (o.format == "json") {
    Json rels = Json::array();
    for (std::size_t k = 0; k < shown.size(); ++k) {
      Json r = Json::object();
      if (!o.simplify) {
        r["family"] = shown[k].first;
        r["lhs"] = lincomb_json(relations[k].lhs);
        r["rhs"] = lincomb_json(relations[k].rhs);
      } else {
        r["terms"] = lincomb_json(shown[k].second);
      }
      rels.push_back(r);
    }
    Json j{{"format", kFormatTag},
           {"field", x.field.to_string()},
           {"vertices", quiver.vertices()},
           {"arrows", arrows_json(quiver, g)},
           {"relations", rels}};
    if (o.simplify) j["eliminated"] = eliminated;
    out << j.dump(2) << "\n";
  } else {
    out << "vertices (" << quiver.vertices().size() << "):";
    for (const auto& v : quiver.vertices()) out << " " << v;
    out << "\narrows (" << quiver.arrows().size() << "):\n";
    for (const auto& a : quiver.arrows()) {
      out << "  " << a.id << ": " << a.tail << " -> " << a.head << (g.is_connecting(a.id) ? " [connecting]" : "")
          << "\n";
    }
    out << "relations (" << text_relations.size() << "):\n";
    for (const auto& r : text_relations) out << "  " << r << "\n";
    if (o.simplify) {
      out << "eliminated (" << eliminated.size() << "):";
      for (const auto& a : eliminated) out << " " << a;
      out << "\n";
    }
  }
  return kExitOk;
}

inline int cmd_gr_diag(const CliOptions& o, std::ostream& out, std::ostream&) {
  ProblemFile pf = load_problem(o);
  DiagonalPresentation d = diagonal_presentation(pf.index_quiver, pf.index_relations);
  out << d.text << "\n";
  out << "tensor form: " << d.tensor_form << "\n";
  if (pf.algebra) {
    Algebra a = load_algebra(pf);
    out << "algebra: " << (pf.algebra->preset.empty() ? "explicit" : pf.algebra->preset) << " (dimension "
        << a.dimension() << ")\n";
  }
  return kExitOk;
}

inline int cmd_verify(const CliOptions& o, std::ostream& out, std::ostream& err) {
  ProblemFile pf = load_problem(o);
  bool ok = true;
  if (pf.has_functor()) {
    auto loaded = load_valid_functor(o, err);
    if (!loaded) return kExitInvalidFunctor;
    PresentationOptions options;
    options.lift = load_lifts(loaded->problem, loaded->functor);
    options.seed = o.seed;
    CheckReport r = verify_presentation(loaded->functor, loaded->index, options);
    out << "presentation:\n" << r.to_string();
    ok = ok && r.ok();
  }
  if (o.with_diagonal || !pf.has_functor()) {
    FinPresCategory index = load_index(pf, o.bound);
    Algebra a = load_algebra(pf);
    CheckReport r = verify_diagonal_iso(a, index, o.pairs, o.seed);
    out << "diagonal (algebra dimension " << a.dimension() << "):\n" << r.to_string();
    ok = ok && r.ok();
  }
  out << (ok ? "verified\n" : "verification failed\n");
  return ok ? kExitOk : kExitVerification;
}

}  // namespace detail

/// Runs the command line; args excludes the program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Grothendieck constructions of functors into linear categories", "grothcat"};
  app.require_subcommand(1);
  CliOptions o;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", o.input, "problem file (JSON)")->required();
    sub->add_option("--bound", o.bound, "maximum saturation bound");
    sub->add_option("--field", o.field, "rational or fp:P, overriding the file");
  };
  auto* quotient = app.add_subcommand("quotient", "classes and composition table of the index category");
  add_common(quotient);
  auto* pres = app.add_subcommand("gr-pres", "quiver with relations presenting Gr(X)");
  add_common(pres);
  pres->add_option("--format", o.format, "text, json or dot")->check(CLI::IsMember({"text", "json", "dot"}));
  pres->add_flag("--simplify", o.simplify, "eliminate arrows defined by relations");
  auto* diag = app.add_subcommand("gr-diag", "presentation of Gr(Delta(A))");
  add_common(diag);
  auto* verify = app.add_subcommand("verify", "check the presentation isomorphisms");
  add_common(verify);
  verify->add_flag("--with-diagonal", o.with_diagonal, "also check the diagonal case");
  verify->add_option("--seed", o.seed, "random seed for sampled checks");
  verify->add_option("--pairs", o.pairs, "random pairs for the diagonal multiplicativity check");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitParse;
  }

  try {
    if (quotient->parsed()) return detail::cmd_quotient(o, out, err);
    if (pres->parsed()) return detail::cmd_gr_pres(o, out, err);
    if (diag->parsed()) return detail::cmd_gr_diag(o, out, err);
    return detail::cmd_verify(o, out, err);
  } catch (const Error& e) {
    err << e.what() << "\n";
    return exit_code_for(e.code());
  }
}

}  // namespace grothcat
