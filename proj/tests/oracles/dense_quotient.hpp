#pragma once

// Brute-force truncated quotient: every path of length <= D is a column,
// every product u r v (terms longer than D dropped) is a row, and a plain
// dense elimination with the smallest path as pivot counts the surviving
// paths per length. Shares nothing with the library beyond the Quiver and
// relation types.

#include <algorithm>
#include <cstdint>
#include <map>
#include <vector>

#include "jacalg/quiver.hpp"

namespace oracle {

using jacalg::ArrowId;
using jacalg::Quiver;
using jacalg::RelationSet;
using jacalg::VertexId;

struct DensePath {
  VertexId start;
  std::vector<ArrowId> arrows;
};

inline std::vector<DensePath> all_paths(const Quiver& q, std::size_t max_len) {
  std::vector<DensePath> out;
  for (VertexId v = 0; v < q.vertex_count(); ++v) out.push_back({v, {}});
  std::size_t begin = 0;
  for (std::size_t len = 1; len <= max_len; ++len) {
    std::size_t end = out.size();
    for (std::size_t i = begin; i < end; ++i) {
      VertexId at = out[i].arrows.empty() ? out[i].start : q.arrow(out[i].arrows.back()).target;
      for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        if (q.arrow(a).source != at) continue;
        DensePath p = out[i];
        p.arrows.push_back(a);
        out.push_back(std::move(p));
      }
    }
    begin = end;
  }
  // Length first, then arrow ids, then start vertex.
  std::stable_sort(out.begin(), out.end(), [](const DensePath& a, const DensePath& b) {
    if (a.arrows.size() != b.arrows.size()) return a.arrows.size() < b.arrows.size();
    if (a.arrows != b.arrows) return a.arrows < b.arrows;
    return a.start < b.start;
  });
  return out;
}

inline std::vector<std::size_t> dense_graded_dims(const Quiver& q, const RelationSet& rels, std::uint64_t p, std::size_t D) {
  auto paths = all_paths(q, D);
  std::map<std::pair<VertexId, std::vector<ArrowId>>, std::size_t> col;
  for (std::size_t i = 0; i < paths.size(); ++i) col[{paths[i].start, paths[i].arrows}] = i;
  const std::size_t n = paths.size();
  auto end_of = [&](const DensePath& x) { return x.arrows.empty() ? x.start : q.arrow(x.arrows.back()).target; };

  std::vector<std::vector<std::uint64_t>> pivots(n);
  auto reduce_insert = [&](std::vector<std::uint64_t> row) {
    for (std::size_t c = 0; c < n; ++c) {
      if (row[c] == 0) continue;
      if (pivots[c].empty()) {
        // Normalize so the pivot entry is 1.
        std::uint64_t inv = 1, base = row[c], e = p - 2;
        while (e) {
          if (e & 1) inv = inv * base % p;
          base = base * base % p;
          e >>= 1;
        }
        for (auto& x : row) x = x * inv % p;
        pivots[c] = std::move(row);
        return;
      }
      std::uint64_t f = row[c];
      const auto& pr = pivots[c];
      for (std::size_t k = c; k < n; ++k)
        if (pr[k]) row[k] = (row[k] + (p - f) * pr[k]) % p;
    }
  };

  for (const auto& r : rels) {
    if (r.empty()) continue;
    VertexId s = r.front().path.start;
    VertexId t = r.front().path.arrows.empty() ? s : q.arrow(r.front().path.arrows.back()).target;
    std::size_t shortest = D + 1;
    for (const auto& term : r) shortest = std::min(shortest, term.path.arrows.size());
    for (const auto& u : paths) {
      if (end_of(u) != s || u.arrows.size() + shortest > D) continue;
      for (const auto& v : paths) {
        if (v.start != t || u.arrows.size() + shortest + v.arrows.size() > D) continue;
        std::vector<std::uint64_t> row(n, 0);
        bool any = false;
        for (const auto& term : r) {
          std::vector<ArrowId> w = u.arrows;
          w.insert(w.end(), term.path.arrows.begin(), term.path.arrows.end());
          w.insert(w.end(), v.arrows.begin(), v.arrows.end());
          if (w.size() > D) continue;
          VertexId start = u.arrows.empty() ? s : u.start;
          auto it = col.find({start, w});
          std::int64_t c = term.coef % static_cast<std::int64_t>(p);
          if (c < 0) c += static_cast<std::int64_t>(p);
          row[it->second] = (row[it->second] + static_cast<std::uint64_t>(c)) % p;
          any = true;
        }
        if (any) reduce_insert(std::move(row));
      }
    }
  }
  std::vector<std::size_t> dims(D + 1, 0);
  for (std::size_t c = 0; c < n; ++c)
    if (pivots[c].empty()) ++dims[paths[c].arrows.size()];
  return dims;
}

}  // namespace oracle
