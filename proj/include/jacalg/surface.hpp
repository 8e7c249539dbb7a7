#pragma once

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "jacalg/field.hpp"
#include "json.hpp"

namespace jacalg {

struct MarkedSurface {
  int genus = 0;
  std::vector<std::string> punctures;

  bool operator==(const MarkedSurface&) const = default;
};

struct Arc {
  std::string id;
  std::array<std::string, 2> endpoints;

  bool is_loop() const { return endpoints[0] == endpoints[1]; }
  bool operator==(const Arc&) const = default;
};

// Ideal triangulation of a closed marked surface. Each triangle lists its
// three sides in clockwise order for the chosen orientation; the side pair
// (k, k+1 mod 3) meets at a corner.
struct Triangulation {
  MarkedSurface surface;
  std::vector<Arc> arcs;
  std::vector<std::array<std::string, 3>> triangles;

  bool operator==(const Triangulation&) const = default;

  std::optional<std::size_t> arc_index(std::string_view id) const {
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (arcs[i].id == id) return i;
    return std::nullopt;
  }
};

struct Violation {
  std::string code;
  std::string message;

  bool operator==(const Violation&) const = default;
};

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  bool has(std::string_view code) const {
    return std::any_of(violations.begin(), violations.end(), [&](const Violation& v) { return v.code == code; });
  }
  bool operator==(const ValidationReport&) const = default;
};

inline ValidationReport validate_triangulation(const Triangulation& t) {
  ValidationReport r;
  auto add = [&](std::string code, std::string msg) { r.violations.push_back({std::move(code), std::move(msg)}); };

  const auto& s = t.surface;
  if (s.genus < 0) add("negative genus", "genus " + std::to_string(s.genus) + " is negative");
  if (s.punctures.empty()) add("no punctures", "a closed marked surface needs at least one puncture");
  std::set<std::string> punctures;
  for (const auto& p : s.punctures) {
    if (p.empty()) add("empty puncture id", "puncture identifiers must be nonempty");
    else if (!punctures.insert(p).second) add("duplicate puncture", "puncture '" + p + "' listed twice");
  }

  std::map<std::string, int> slots;
  for (const auto& a : t.arcs) {
    if (a.id.empty()) {
      add("empty arc id", "arc identifiers must be nonempty");
      continue;
    }
    if (slots.count(a.id)) add("duplicate arc", "arc '" + a.id + "' listed twice");
    slots[a.id] = 0;
    for (const auto& e : a.endpoints)
      if (!punctures.count(e)) add("unknown puncture", "arc '" + a.id + "' ends at unknown puncture '" + e + "'");
  }

  const long expected_arcs = 6L * s.genus - 6 + 3L * static_cast<long>(s.punctures.size());
  if (static_cast<long>(t.arcs.size()) != expected_arcs)
    add("arc count", "expected 6g-6+3p = " + std::to_string(expected_arcs) + " arcs, found " +
                         std::to_string(t.arcs.size()));
  if (3 * t.triangles.size() != 2 * t.arcs.size())
    add("triangle count", "3 * #triangles = " + std::to_string(3 * t.triangles.size()) +
                              " but 2 * #arcs = " + std::to_string(2 * t.arcs.size()));

  for (std::size_t k = 0; k < t.triangles.size(); ++k) {
    for (const auto& side : t.triangles[k]) {
      auto it = slots.find(side);
      if (it == slots.end()) add("unknown arc", "triangle " + std::to_string(k) + " references unknown arc '" + side + "'");
      else ++it->second;
    }
  }
  for (const auto& [id, n] : slots)
    if (n != 2) add("arc slots", "arc '" + id + "' fills " + std::to_string(n) + " triangle slots instead of 2");
  return r;
}

inline bool has_puncture(const MarkedSurface& s, std::string_view p) {
  return std::find(s.punctures.begin(), s.punctures.end(), p) != s.punctures.end();
}

// Arc-end incidences at p; a loop at p counts twice.
inline int valency(const Triangulation& t, std::string_view p) {
  if (!has_puncture(t.surface, p)) throw PreconditionError("unknown puncture '" + std::string(p) + "'");
  int v = 0;
  for (const auto& a : t.arcs)
    for (const auto& e : a.endpoints)
      if (e == p) ++v;
  return v;
}

inline int min_valency(const Triangulation& t) {
  int m = -1;
  for (const auto& p : t.surface.punctures) {
    int v = valency(t, p);
    if (m < 0 || v < m) m = v;
  }
  return m < 0 ? 0 : m;
}

inline bool has_self_folded(const Triangulation& t) {
  for (const auto& tri : t.triangles)
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) return true;
  return false;
}

// Spheres with at most four punctures lie outside the growth and
// periodicity statements this library certifies.
inline bool is_excluded_surface(const MarkedSurface& s) { return s.genus == 0 && s.punctures.size() <= 4; }

namespace fixtures {

// Square with opposite sides glued and one diagonal; both triangles read
// (z, y, x) clockwise, so the quiver is the Markov quiver.
inline Triangulation once_punctured_torus() {
  Triangulation t;
  t.surface = {1, {"p"}};
  t.arcs = {{"x", {"p", "p"}}, {"y", {"p", "p"}}, {"z", {"p", "p"}}};
  t.triangles = {{"z", "y", "x"}, {"z", "y", "x"}};
  return t;
}

// Octagon a b a^-1 b^-1 c d c^-1 d^-1 fanned from one corner by the
// diagonals d2..d6; all eight corners become the single puncture.
inline Triangulation genus2_one_puncture() {
  Triangulation t;
  t.surface = {2, {"p"}};
  for (const char* id : {"a", "b", "c", "d", "d2", "d3", "d4", "d5", "d6"}) t.arcs.push_back({id, {"p", "p"}});
  t.triangles = {{"d2", "b", "a"},  {"d3", "a", "d2"}, {"d4", "b", "d3"},
                 {"d5", "c", "d4"}, {"d6", "d", "d5"}, {"d", "c", "d6"}};
  return t;
}

// Sphere with five punctures: three arcs p4-p5, and three self-folded
// triangles enclosing p1, p3 (loops at p4) and p2 (loop at p5).
inline Triangulation sphere5() {
  Triangulation t;
  t.surface = {0, {"p1", "p2", "p3", "p4", "p5"}};
  t.arcs = {{"r1", {"p4", "p1"}}, {"l1", {"p4", "p4"}}, {"r3", {"p4", "p3"}},
            {"l3", {"p4", "p4"}}, {"r2", {"p5", "p2"}}, {"l2", {"p5", "p5"}},
            {"e1", {"p4", "p5"}}, {"e2", {"p4", "p5"}}, {"e3", {"p4", "p5"}}};
  t.triangles = {{"l1", "r1", "r1"}, {"l3", "r3", "r3"}, {"l2", "r2", "r2"},
                 {"e1", "e2", "l1"}, {"e2", "e3", "l2"}, {"e3", "e1", "l3"}};
  return t;
}

// Boundary of a tetrahedron: sphere with four punctures of valency 3.
inline Triangulation tetrahedron_sphere4() {
  Triangulation t;
  t.surface = {0, {"v1", "v2", "v3", "v4"}};
  t.arcs = {{"e12", {"v1", "v2"}}, {"e13", {"v1", "v3"}}, {"e14", {"v1", "v4"}},
            {"e23", {"v2", "v3"}}, {"e24", {"v2", "v4"}}, {"e34", {"v3", "v4"}}};
  t.triangles = {{"e23", "e34", "e24"}, {"e14", "e34", "e13"}, {"e12", "e24", "e14"}, {"e13", "e23", "e12"}};
  return t;
}

}  // namespace fixtures

// ---------------------------------------------------------------------------
// Triangulation file format (JSON):
//   { "genus": int, "punctures": [str...],
//     "arcs": [ {"id": str, "endpoints": [str, str]} ... ],
//     "triangles": [ [arcId, arcId, arcId] ... ] }
// Unknown fields are rejected.

inline nlohmann::json to_json(const Triangulation& t) {
  nlohmann::json j;
  j["genus"] = t.surface.genus;
  j["punctures"] = t.surface.punctures;
  j["arcs"] = nlohmann::json::array();
  for (const auto& a : t.arcs) j["arcs"].push_back({{"id", a.id}, {"endpoints", {a.endpoints[0], a.endpoints[1]}}});
  j["triangles"] = nlohmann::json::array();
  for (const auto& tri : t.triangles) j["triangles"].push_back({tri[0], tri[1], tri[2]});
  return j;
}

namespace detail {

inline void require_keys(const nlohmann::json& j, std::string_view where, std::initializer_list<std::string_view> allowed,
                         std::initializer_list<std::string_view> required) {
  if (!j.is_object()) throw ParseError(std::string(where) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ParseError(std::string(where) + ": unknown field '" + it.key() + "'");
  }
  for (auto key : required)
    if (!j.contains(std::string(key))) throw ParseError(std::string(where) + ": missing field '" + std::string(key) + "'");
}

inline std::string expect_string(const nlohmann::json& j, const std::string& where) {
  if (!j.is_string()) throw ParseError(where + ": expected a string");
  return j.get<std::string>();
}

}  // namespace detail

inline Triangulation triangulation_from_json(const nlohmann::json& j) {
  detail::require_keys(j, "triangulation", {"genus", "punctures", "arcs", "triangles"},
                       {"genus", "punctures", "arcs", "triangles"});
  Triangulation t;
  if (!j["genus"].is_number_integer()) throw ParseError("genus: expected an integer");
  t.surface.genus = j["genus"].get<int>();
  if (!j["punctures"].is_array()) throw ParseError("punctures: expected a list");
  for (const auto& p : j["punctures"]) t.surface.punctures.push_back(detail::expect_string(p, "punctures"));
  if (!j["arcs"].is_array()) throw ParseError("arcs: expected a list");
  for (const auto& a : j["arcs"]) {
    detail::require_keys(a, "arcs[]", {"id", "endpoints"}, {"id", "endpoints"});
    const auto& e = a["endpoints"];
    if (!e.is_array() || e.size() != 2) throw ParseError("arcs[].endpoints: expected two puncture ids");
    t.arcs.push_back({detail::expect_string(a["id"], "arcs[].id"),
                      {detail::expect_string(e[0], "arcs[].endpoints"), detail::expect_string(e[1], "arcs[].endpoints")}});
  }
  if (!j["triangles"].is_array()) throw ParseError("triangles: expected a list");
  for (const auto& tri : j["triangles"]) {
    if (!tri.is_array() || tri.size() != 3) throw ParseError("triangles[]: expected three arc ids");
    t.triangles.push_back({detail::expect_string(tri[0], "triangles[]"), detail::expect_string(tri[1], "triangles[]"),
                           detail::expect_string(tri[2], "triangles[]")});
  }
  return t;
}

inline Triangulation parse_triangulation(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("triangulation: malformed JSON: ") + e.what());
  }
  return triangulation_from_json(j);
}

}  // namespace jacalg
