#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "jacalg/field.hpp"

namespace jacalg {

using VertexId = std::uint32_t;
using ArrowId = std::uint32_t;

struct Arrow {
  std::string name;
  VertexId source = 0;
  VertexId target = 0;

  bool operator==(const Arrow&) const = default;
};

// Finite quiver with named vertices and arrows. Ids are insertion indices.
class Quiver {
 public:
  VertexId add_vertex(std::string name) {
    if (name.empty()) throw PreconditionError("empty vertex name");
    if (vertex_index_.count(name)) throw PreconditionError("duplicate vertex '" + name + "'");
    VertexId id = static_cast<VertexId>(vertices_.size());
    vertex_index_.emplace(name, id);
    vertices_.push_back(std::move(name));
    out_.emplace_back();
    in_.emplace_back();
    return id;
  }

  ArrowId add_arrow(std::string name, VertexId source, VertexId target) {
    if (name.empty()) throw PreconditionError("empty arrow name");
    if (source >= vertices_.size() || target >= vertices_.size())
      throw PreconditionError("arrow '" + name + "' has an endpoint outside the quiver");
    if (arrow_index_.count(name)) throw PreconditionError("duplicate arrow '" + name + "'");
    ArrowId id = static_cast<ArrowId>(arrows_.size());
    arrow_index_.emplace(name, id);
    arrows_.push_back({std::move(name), source, target});
    out_[source].push_back(id);
    in_[target].push_back(id);
    return id;
  }

  ArrowId add_arrow(std::string name, std::string_view source, std::string_view target) {
    return add_arrow(std::move(name), vertex(source), vertex(target));
  }

  std::size_t vertex_count() const { return vertices_.size(); }
  std::size_t arrow_count() const { return arrows_.size(); }

  const std::string& vertex_name(VertexId v) const { return vertices_.at(v); }
  const Arrow& arrow(ArrowId a) const { return arrows_.at(a); }
  const std::vector<Arrow>& arrows() const { return arrows_; }
  const std::vector<std::string>& vertex_names() const { return vertices_; }

  std::optional<VertexId> find_vertex(std::string_view name) const {
    auto it = vertex_index_.find(std::string(name));
    if (it == vertex_index_.end()) return std::nullopt;
    return it->second;
  }
  std::optional<ArrowId> find_arrow(std::string_view name) const {
    auto it = arrow_index_.find(std::string(name));
    if (it == arrow_index_.end()) return std::nullopt;
    return it->second;
  }
  VertexId vertex(std::string_view name) const {
    auto v = find_vertex(name);
    if (!v) throw PreconditionError("unknown vertex '" + std::string(name) + "'");
    return *v;
  }
  ArrowId arrow_id(std::string_view name) const {
    auto a = find_arrow(name);
    if (!a) throw PreconditionError("unknown arrow '" + std::string(name) + "'");
    return *a;
  }

  const std::vector<ArrowId>& arrows_from(VertexId v) const { return out_.at(v); }
  const std::vector<ArrowId>& arrows_to(VertexId v) const { return in_.at(v); }

  bool operator==(const Quiver& o) const { return vertices_ == o.vertices_ && arrows_ == o.arrows_; }

 private:
  std::vector<std::string> vertices_;
  std::vector<Arrow> arrows_;
  std::vector<std::vector<ArrowId>> out_;
  std::vector<std::vector<ArrowId>> in_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, ArrowId> arrow_index_;
};

// A path read left to right: the target of arrows[i] is the source of
// arrows[i+1]. A trivial path e_v has no arrows and start == v.
struct Path {
  VertexId start = 0;
  std::vector<ArrowId> arrows;

  std::size_t length() const { return arrows.size(); }
  bool trivial() const { return arrows.empty(); }

  bool operator==(const Path&) const = default;
};

// Length-lexicographic by arrow id; trivial paths ordered by vertex.
inline bool path_less(const Path& a, const Path& b) {
  if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
  if (a.arrows != b.arrows) return a.arrows < b.arrows;
  return a.start < b.start;
}

struct PathLess {
  bool operator()(const Path& a, const Path& b) const { return path_less(a, b); }
};

struct PathHash {
  std::size_t operator()(const Path& p) const {
    std::uint64_t h = 1469598103934665603ull ^ p.start;
    for (auto a : p.arrows) {
      h ^= a + 0x9e3779b97f4a7c15ull;
      h *= 1099511628211ull;
    }
    return static_cast<std::size_t>(h ^ (p.arrows.size() << 1));
  }
};

inline bool is_composable(const Quiver& q, const Path& p) {
  if (p.start >= q.vertex_count()) return false;
  VertexId at = p.start;
  for (auto a : p.arrows) {
    if (a >= q.arrow_count() || q.arrow(a).source != at) return false;
    at = q.arrow(a).target;
  }
  return true;
}

inline VertexId path_end(const Quiver& q, const Path& p) {
  return p.arrows.empty() ? p.start : q.arrow(p.arrows.back()).target;
}

inline Path arrow_path(const Quiver& q, ArrowId a) { return Path{q.arrow(a).source, {a}}; }

inline Path concat(const Quiver& q, const Path& a, const Path& b) {
  if (path_end(q, a) != b.start) throw Error("concatenating non-composable paths");
  Path r{a.start, a.arrows};
  r.arrows.insert(r.arrows.end(), b.arrows.begin(), b.arrows.end());
  return r;
}

// "e_v" for trivial paths, otherwise arrow names joined by dots.
inline std::string format_path(const Quiver& q, const Path& p) {
  if (p.trivial()) return "e_" + q.vertex_name(p.start);
  std::string s;
  for (std::size_t i = 0; i < p.arrows.size(); ++i) {
    if (i) s += '.';
    s += q.arrow(p.arrows[i]).name;
  }
  return s;
}

inline Path parse_path(const Quiver& q, std::string_view text) {
  if (text.starts_with("e_")) return Path{q.vertex(text.substr(2)), {}};
  Path p;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    auto name = text.substr(pos, dot - pos);
    if (name.empty()) throw ParseError("empty arrow name in path '" + std::string(text) + "'");
    p.arrows.push_back(q.arrow_id(name));
    pos = dot + 1;
  }
  p.start = q.arrow(p.arrows.front()).source;
  if (!is_composable(q, p)) throw ParseError("path '" + std::string(text) + "' is not composable");
  return p;
}

struct PathTerm {
  Path path;
  std::int64_t coef = 0;

  bool operator==(const PathTerm&) const = default;
};

// Integer linear combination of paths, kept sorted by path order with
// repeated paths merged and zero coefficients dropped.
using PathCombination = std::vector<PathTerm>;

inline PathCombination normalize(PathCombination c) {
  std::map<Path, std::int64_t, PathLess> acc;
  for (auto& t : c) acc[t.path] += t.coef;
  PathCombination out;
  for (auto& [p, v] : acc)
    if (v != 0) out.push_back({p, v});
  return out;
}

inline std::string format_combination(const Quiver& q, const PathCombination& c) {
  if (c.empty()) return "0";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    std::int64_t v = c[i].coef;
    if (i) s += v < 0 ? " - " : " + ";
    else if (v < 0) s += "-";
    std::int64_t mag = v < 0 ? -v : v;
    if (mag != 1) s += std::to_string(mag) + "*";
    s += format_path(q, c[i].path);
  }
  return s;
}

using RelationSet = std::vector<PathCombination>;

}  // namespace jacalg
