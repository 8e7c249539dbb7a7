#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jacalg/quiver.hpp"
#include "jacalg/surface.hpp"
#include "json.hpp"

namespace jacalg {

// Nonempty cyclically composable arrow sequence, stored as its
// lexicographically least rotation.
struct CyclicPath {
  std::vector<ArrowId> arrows;

  static CyclicPath canonical(const Quiver& q, std::vector<ArrowId> arrows) {
    if (arrows.empty()) throw PreconditionError("empty cyclic path");
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      const auto& cur = q.arrow(arrows[i]);
      const auto& next = q.arrow(arrows[(i + 1) % arrows.size()]);
      if (cur.target != next.source)
        throw PreconditionError("arrows '" + cur.name + "' and '" + next.name + "' do not compose in a cycle");
    }
    std::vector<ArrowId> best = arrows;
    std::vector<ArrowId> rot = arrows;
    for (std::size_t s = 1; s < arrows.size(); ++s) {
      std::rotate(rot.begin(), rot.begin() + 1, rot.end());
      if (rot < best) best = rot;
    }
    return CyclicPath{std::move(best)};
  }

  bool operator==(const CyclicPath&) const = default;
  auto operator<=>(const CyclicPath&) const = default;
};

class Potential {
 public:
  void add_term(const Quiver& q, std::vector<ArrowId> cycle, std::int64_t coef) {
    auto c = CyclicPath::canonical(q, std::move(cycle));
    auto& v = terms_[c];
    v += coef;
    if (v == 0) terms_.erase(c);
  }

  const std::map<CyclicPath, std::int64_t>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  bool operator==(const Potential&) const = default;

 private:
  std::map<CyclicPath, std::int64_t> terms_;
};

struct ArrowMaps {
  std::vector<ArrowId> f;
  std::vector<ArrowId> g;
};

// Cycles of a permutation, each listed from its smallest element forward.
inline std::vector<std::vector<ArrowId>> permutation_orbits(const std::vector<ArrowId>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<std::vector<ArrowId>> orbits;
  for (ArrowId a = 0; a < perm.size(); ++a) {
    if (seen[a]) continue;
    std::vector<ArrowId> orbit;
    for (ArrowId x = a; !seen[x]; x = perm[x]) {
      seen[x] = true;
      orbit.push_back(x);
    }
    orbits.push_back(std::move(orbit));
  }
  return orbits;
}

inline std::size_t orbit_length(const std::vector<ArrowId>& perm, ArrowId a) {
  std::size_t n = 1;
  for (ArrowId x = perm.at(a); x != a; x = perm.at(x)) ++n;
  return n;
}

inline ArrowId iterate(const std::vector<ArrowId>& perm, ArrowId a, std::size_t times) {
  for (std::size_t i = 0; i < times; ++i) a = perm.at(a);
  return a;
}

namespace detail {

inline const char kCornerNames[3] = {'a', 'b', 'c'};

inline void require_quiver_preconditions(const Triangulation& t) {
  auto report = validate_triangulation(t);
  if (!report.ok()) throw PreconditionError("invalid triangulation: " + report.violations.front().message);
  for (std::size_t k = 0; k < t.triangles.size(); ++k) {
    const auto& tri = t.triangles[k];
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
      throw PreconditionError("self-folded triangle " + std::to_string(k));
  }
  for (const auto& p : t.surface.punctures)
    if (valency(t, p) < 3) throw PreconditionError("valency < 3 puncture '" + p + "'");
}

// Common endpoints of the two sides meeting at corner c of triangle k.
inline std::set<std::string> corner_candidates(const Triangulation& t, std::size_t k, std::size_t c) {
  const Arc& x = t.arcs[*t.arc_index(t.triangles[k][c])];
  const Arc& y = t.arcs[*t.arc_index(t.triangles[k][(c + 1) % 3])];
  std::set<std::string> out;
  for (const auto& e : x.endpoints)
    if (e == y.endpoints[0] || e == y.endpoints[1]) out.insert(e);
  return out;
}

}  // namespace detail

// One vertex per arc and one 3-cycle per triangle: the corner between
// sides c and c+1 of triangle k is the arrow side_c -> side_{c+1}, with id
// 3k + c and name "t<k><a|b|c>".
inline Quiver build_quiver(const Triangulation& t) {
  detail::require_quiver_preconditions(t);
  Quiver q;
  for (const auto& a : t.arcs) q.add_vertex(a.id);
  for (std::size_t k = 0; k < t.triangles.size(); ++k) {
    for (std::size_t c = 0; c < 3; ++c) {
      q.add_arrow("t" + std::to_string(k) + detail::kCornerNames[c], t.triangles[k][c], t.triangles[k][(c + 1) % 3]);
    }
  }
  for (const auto& a : q.arrows()) {
    for (auto b : q.arrows_from(a.target)) {
      if (q.arrow(b).target == a.source)
        throw PreconditionError("2-cycle between arcs '" + q.vertex_name(a.source) + "' and '" +
                                q.vertex_name(a.target) + "'");
    }
  }
  return q;
}

// f follows a triangle's 3-cycle; g(a) is the arrow leaving the other
// triangle slot of a's target arc, so a.g(a) turns around one puncture and
// (a)(ga)...(g^{n-1}a) is a composable cycle.
inline ArrowMaps arrow_maps(const Triangulation& t, const Quiver& q) {
  detail::require_quiver_preconditions(t);
  if (q.arrow_count() != 3 * t.triangles.size() || q.vertex_count() != t.arcs.size())
    throw PreconditionError("quiver does not come from this triangulation");
  const std::size_t n = q.arrow_count();
  ArrowMaps m;
  m.f.resize(n);
  m.g.resize(n);
  std::map<std::string, std::vector<std::pair<std::size_t, std::size_t>>> slots;
  for (std::size_t k = 0; k < t.triangles.size(); ++k)
    for (std::size_t s = 0; s < 3; ++s) slots[t.triangles[k][s]].push_back({k, s});

  for (std::size_t k = 0; k < t.triangles.size(); ++k) {
    for (std::size_t c = 0; c < 3; ++c) {
      ArrowId a = static_cast<ArrowId>(3 * k + c);
      m.f[a] = static_cast<ArrowId>(3 * k + (c + 1) % 3);
      const std::string& target = t.triangles[k][(c + 1) % 3];
      std::vector<ArrowId> successors;
      for (auto [k2, s2] : slots[target])
        if (!(k2 == k && s2 == (c + 1) % 3)) successors.push_back(static_cast<ArrowId>(3 * k2 + s2));
      if (successors.size() != 1 || successors.front() / 3 == k)
        throw PreconditionError("no unique g-successor for arrow '" + q.arrow(a).name + "'");
      m.g[a] = successors.front();
    }
  }
  return m;
}

// Assigns each g-orbit the puncture it surrounds.
inline std::vector<std::string> orbit_punctures(const Triangulation& t, const ArrowMaps& maps,
                                                const std::vector<std::vector<ArrowId>>& orbits) {
  std::map<std::string, int> remaining;
  for (const auto& p : t.surface.punctures) remaining[p] = valency(t, p);
  std::vector<std::set<std::string>> candidates;
  for (const auto& orbit : orbits) {
    std::set<std::string> cand = detail::corner_candidates(t, orbit[0] / 3, orbit[0] % 3);
    for (auto a : orbit) {
      auto c = detail::corner_candidates(t, a / 3, a % 3);
      std::set<std::string> both;
      std::set_intersection(cand.begin(), cand.end(), c.begin(), c.end(), std::inserter(both, both.begin()));
      cand = std::move(both);
    }
    candidates.push_back(std::move(cand));
  }
  std::vector<std::string> out(orbits.size());
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    std::vector<std::string> fit;
    for (const auto& p : candidates[i])
      if (remaining[p] == static_cast<int>(orbits[i].size())) fit.push_back(p);
    if (fit.empty()) throw PreconditionError("g-orbit of '" + std::to_string(orbits[i][0]) + "' surrounds no puncture");
    out[i] = fit.front();
    remaining[fit.front()] = -1;
  }
  (void)maps;
  return out;
}

// Triangle cycles with coefficient +1 and one puncture cycle per puncture
// with coefficient -lambda_p (lambda_p defaults to 1).
inline Potential build_potential(const Triangulation& t, const Quiver& q,
                                 const std::map<std::string, std::int64_t>& puncture_scalars = {},
                                 bool default_scalars = true) {
  Potential w;
  for (std::size_t k = 0; k < t.triangles.size(); ++k) {
    ArrowId a = static_cast<ArrowId>(3 * k);
    w.add_term(q, {a, a + 1, a + 2}, 1);
  }
  ArrowMaps maps = arrow_maps(t, q);
  auto orbits = permutation_orbits(maps.g);
  auto punctures = orbit_punctures(t, maps, orbits);
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    std::int64_t lambda = 1;
    auto it = puncture_scalars.find(punctures[i]);
    if (it != puncture_scalars.end()) lambda = it->second;
    else if (!default_scalars) throw PreconditionError("no scalar supplied for puncture '" + punctures[i] + "'");
    if (lambda == 0) throw PreconditionError("puncture scalar for '" + punctures[i] + "' is zero");
    w.add_term(q, orbits[i], -lambda);
  }
  return w;
}

// Sum over occurrences of a in each cycle of the rotated remainder, which
// starts right after the removed occurrence.
inline PathCombination cyclic_derivative(const Quiver& q, const Potential& w, ArrowId a) {
  PathCombination out;
  for (const auto& [cycle, coef] : w.terms()) {
    const auto& l = cycle.arrows;
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (l[i] != a) continue;
      Path p{q.arrow(a).target, {}};
      for (std::size_t k = 1; k < l.size(); ++k) p.arrows.push_back(l[(i + k) % l.size()]);
      out.push_back({std::move(p), coef});
    }
  }
  return normalize(std::move(out));
}

inline RelationSet jacobian_relations(const Quiver& q, const Potential& w) {
  RelationSet rels;
  for (ArrowId a = 0; a < q.arrow_count(); ++a) {
    auto d = cyclic_derivative(q, w, a);
    if (!d.empty()) rels.push_back(std::move(d));
  }
  return rels;
}

namespace fixtures {

// Quiver of the sphere-with-five-punctures figure, with arrows a1..a3,
// b1..b6, c1..c6 on vertices 1..9.
inline Quiver sphere5_figure_quiver() {
  Quiver q;
  for (int v = 1; v <= 9; ++v) q.add_vertex(std::to_string(v));
  q.add_arrow("a1", "1", "4");
  q.add_arrow("a2", "7", "4");
  q.add_arrow("a3", "7", "1");
  q.add_arrow("b1", "4", "2");
  q.add_arrow("b2", "4", "3");
  q.add_arrow("b3", "4", "5");
  q.add_arrow("b4", "4", "6");
  q.add_arrow("b5", "1", "8");
  q.add_arrow("b6", "1", "9");
  q.add_arrow("c1", "2", "1");
  q.add_arrow("c2", "3", "1");
  q.add_arrow("c3", "5", "7");
  q.add_arrow("c4", "6", "7");
  q.add_arrow("c5", "8", "7");
  q.add_arrow("c6", "9", "7");
  return q;
}

// W' = b5 c5 a2 b1 c1 + a1 b4 c4 a3.
inline Potential sphere5_partial_potential(const Quiver& q) {
  Potential w;
  auto id = [&](const char* n) { return q.arrow_id(n); };
  w.add_term(q, {id("b5"), id("c5"), id("a2"), id("b1"), id("c1")}, 1);
  w.add_term(q, {id("a1"), id("b4"), id("c4"), id("a3")}, 1);
  return w;
}

// k[x]/(x^2): one vertex with a loop x.
inline Quiver dual_numbers_quiver() {
  Quiver q;
  q.add_vertex("1");
  q.add_arrow("x", "1", "1");
  return q;
}

inline RelationSet dual_numbers_relations() { return {{PathTerm{Path{0, {0, 0}}, 1}}}; }

}  // namespace fixtures

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const Quiver& q) {
  nlohmann::json j;
  j["vertices"] = q.vertex_names();
  j["arrows"] = nlohmann::json::array();
  for (const auto& a : q.arrows())
    j["arrows"].push_back({{"name", a.name}, {"source", q.vertex_name(a.source)}, {"target", q.vertex_name(a.target)}});
  return j;
}

inline Quiver quiver_from_json(const nlohmann::json& j) {
  detail::require_keys(j, "quiver", {"vertices", "arrows"}, {"vertices", "arrows"});
  Quiver q;
  for (const auto& v : j["vertices"]) q.add_vertex(detail::expect_string(v, "quiver.vertices"));
  for (const auto& a : j["arrows"]) {
    detail::require_keys(a, "quiver.arrows[]", {"name", "source", "target"}, {"name", "source", "target"});
    q.add_arrow(detail::expect_string(a["name"], "quiver.arrows[].name"),
                q.vertex(detail::expect_string(a["source"], "quiver.arrows[].source")),
                q.vertex(detail::expect_string(a["target"], "quiver.arrows[].target")));
  }
  return q;
}

inline nlohmann::json to_json(const Quiver& q, const Potential& w) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& [c, coef] : w.terms()) {
    std::vector<std::string> names;
    for (auto a : c.arrows) names.push_back(q.arrow(a).name);
    terms.push_back({{"cycle", names}, {"coef", coef}});
  }
  return {{"terms", terms}};
}

inline Potential potential_from_json(const Quiver& q, const nlohmann::json& j) {
  detail::require_keys(j, "potential", {"terms"}, {"terms"});
  Potential w;
  for (const auto& t : j["terms"]) {
    detail::require_keys(t, "potential.terms[]", {"cycle", "coef"}, {"cycle", "coef"});
    std::vector<ArrowId> cycle;
    for (const auto& n : t["cycle"]) cycle.push_back(q.arrow_id(detail::expect_string(n, "potential.terms[].cycle")));
    w.add_term(q, std::move(cycle), t["coef"].get<std::int64_t>());
  }
  return w;
}

inline nlohmann::json relations_to_json(const Quiver& q, const RelationSet& rels) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : rels) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : r) terms.push_back({{"path", format_path(q, t.path)}, {"coef", t.coef}});
    out.push_back(terms);
  }
  return out;
}

inline RelationSet relations_from_json(const Quiver& q, const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("relations: expected a list");
  RelationSet rels;
  for (const auto& r : j) {
    PathCombination c;
    for (const auto& t : r) {
      detail::require_keys(t, "relations[][]", {"path", "coef"}, {"path", "coef"});
      c.push_back({parse_path(q, detail::expect_string(t["path"], "relations[][].path")), t["coef"].get<std::int64_t>()});
    }
    rels.push_back(normalize(std::move(c)));
  }
  return rels;
}

// Graphviz export with vertices and arrows in id order.
inline std::string to_dot(const Quiver& q, std::string_view name = "Q") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (const auto& v : q.vertex_names()) os << "  \"" << v << "\";\n";
  for (const auto& a : q.arrows())
    os << "  \"" << q.vertex_name(a.source) << "\" -> \"" << q.vertex_name(a.target) << "\" [label=\"" << a.name
       << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace jacalg
