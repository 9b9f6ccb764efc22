#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "grothcat/congruence.hpp"
#include "grothcat/problem_io.hpp"
#include "grothcat/quiver.hpp"

namespace fixtures {

using namespace grothcat;

inline std::string problem_path(const std::string& name) { return std::string(GROTHCAT_PROBLEMS_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline ProblemFile load(const std::string& name) { return parse_problem(read_text(problem_path(name))); }

/// Commuting square with an extra parallel route: ba = dc, fe free.
inline Quiver square_quiver() {
  Quiver q;
  for (auto v : {"1", "2", "3", "4", "5"}) q.add_vertex(v);
  q.add_arrow("a", "1", "2");
  q.add_arrow("b", "2", "5");
  q.add_arrow("c", "1", "3");
  q.add_arrow("d", "3", "5");
  q.add_arrow("e", "1", "4");
  q.add_arrow("f", "4", "5");
  return q;
}

inline PairRelationSet square_relations(const Quiver& q) {
  PairRelationSet r;
  r.add(q.composite({"b", "a"}), q.composite({"d", "c"}));
  return r;
}

/// One loop g with g^2 = g^3.
inline Quiver loop_quiver() {
  Quiver q;
  q.add_vertex("1");
  q.add_arrow("g", "1", "1");
  return q;
}

inline PairRelationSet loop_relations(const Quiver& q) {
  PairRelationSet r;
  r.add(q.path({"g", "g"}), q.path({"g", "g", "g"}));
  return r;
}

/// Fully loaded instance from a shipped problem file.
struct Instance {
  ProblemFile problem;
  FinPresCategory index;
  FunctorAssignment functor;
};

inline Instance instance(const std::string& name) {
  ProblemFile pf = load(name);
  FinPresCategory index = load_index(pf);
  FunctorAssignment x = load_functor(pf);
  return {std::move(pf), std::move(index), std::move(x)};
}

inline LinComb path_element(const Quiver& q, std::vector<ArrowId> written) {
  return LinComb(q.composite(std::move(written)), Field::rational().one());
}

}  // namespace fixtures
