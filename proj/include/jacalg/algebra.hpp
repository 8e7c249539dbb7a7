#pragma once

#include <array>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "jacalg/field.hpp"
#include "jacalg/qp.hpp"
#include "jacalg/quiver.hpp"
#include "json.hpp"

namespace jacalg {

// Sparse vector over F_p: (index, value) pairs sorted by index, no zeros.
using SparseVec = std::vector<std::pair<std::uint32_t, std::uint32_t>>;

// compute_basis reached maxDeg (or its path budget) while normal forms of
// the top degree still survived.
class NonStabilization : public Error {
 public:
  NonStabilization(std::size_t max_deg, const std::string& reason)
      : Error("NonStabilization(" + std::to_string(max_deg) + "): " + reason), max_deg_(max_deg) {}
  std::size_t max_deg() const { return max_deg_; }

 private:
  std::size_t max_deg_;
};

struct BasisOptions {
  std::size_t max_deg = 40;
  // Upper bound on the number of paths of length <= D kept in memory.
  std::size_t path_limit = 400000;
};

namespace detail {

// All paths of length <= D, in length-lexicographic order.
class PathSpace {
 public:
  PathSpace(const Quiver& q, std::size_t max_len, std::size_t limit) : max_len_(max_len) {
    const std::size_t nv = q.vertex_count();
    starting_at_.assign(nv, std::vector<std::vector<std::uint32_t>>(max_len + 1));
    ending_at_.assign(nv, std::vector<std::vector<std::uint32_t>>(max_len + 1));
    std::vector<Path> level;
    for (VertexId v = 0; v < nv; ++v) level.push_back(Path{v, {}});
    for (std::size_t d = 0; d <= max_len; ++d) {
      std::sort(level.begin(), level.end(), path_less);
      degree_begin_.push_back(paths_.size());
      for (auto& p : level) {
        auto id = static_cast<std::uint32_t>(paths_.size());
        index_.emplace(p, id);
        starting_at_[p.start][d].push_back(id);
        ending_at_[path_end(q, p)][d].push_back(id);
        paths_.push_back(p);
        if (paths_.size() > limit) throw NonStabilization(d, "path budget of " + std::to_string(limit) + " exceeded");
      }
      if (d == max_len) break;
      std::vector<Path> next;
      for (const auto& p : level) {
        for (auto a : q.arrows_from(path_end(q, p))) {
          Path e = p;
          e.arrows.push_back(a);
          next.push_back(std::move(e));
        }
      }
      level = std::move(next);
    }
    degree_begin_.push_back(paths_.size());
  }

  std::size_t size() const { return paths_.size(); }
  std::size_t max_len() const { return max_len_; }
  const Path& path(std::uint32_t i) const { return paths_[i]; }
  std::size_t degree_count(std::size_t d) const { return degree_begin_[d + 1] - degree_begin_[d]; }
  std::size_t degree_of(std::uint32_t i) const { return paths_[i].length(); }
  std::optional<std::uint32_t> find(const Path& p) const {
    auto it = index_.find(p);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }
  const std::vector<std::uint32_t>& starting_at(VertexId v, std::size_t d) const { return starting_at_[v][d]; }
  const std::vector<std::uint32_t>& ending_at(VertexId v, std::size_t d) const { return ending_at_[v][d]; }

 private:
  std::size_t max_len_;
  std::vector<Path> paths_;
  std::vector<std::size_t> degree_begin_;
  std::unordered_map<Path, std::uint32_t, PathHash> index_;
  std::vector<std::vector<std::vector<std::uint32_t>>> starting_at_;
  std::vector<std::vector<std::vector<std::uint32_t>>> ending_at_;
};

// Echelon basis of a subspace of F_p^n; every stored row has leading
// coefficient 1 at its pivot column and the lowest column is the pivot.
class SparseEchelon {
 public:
  SparseEchelon(const PrimeField& F, std::size_t ncols) : F_(F), rows_(ncols) , has_(ncols, false) {}

  void insert(SparseVec row) {
    while (!row.empty()) {
      auto lead = row.front().first;
      if (!has_[lead]) {
        std::uint32_t s = F_.inv(row.front().second);
        for (auto& e : row) e.second = F_.mul(e.second, s);
        rows_[lead] = std::move(row);
        has_[lead] = true;
        ++rank_;
        return;
      }
      row = axpy(row, F_.neg(row.front().second), rows_[lead]);
    }
  }

  bool is_pivot(std::uint32_t col) const { return has_[col]; }
  std::size_t rank() const { return rank_; }

  // Fully reduced representative of v modulo the row space.
  SparseVec reduce(const SparseVec& v) const {
    std::map<std::uint32_t, std::uint32_t> work(v.begin(), v.end());
    std::uint32_t cur = 0;
    while (true) {
      auto it = work.lower_bound(cur);
      if (it == work.end()) break;
      auto col = it->first;
      if (has_[col]) {
        auto c = it->second;
        work.erase(it);
        const auto& r = rows_[col];
        for (std::size_t k = 1; k < r.size(); ++k) {
          auto& slot = work[r[k].first];
          slot = F_.sub(slot, F_.mul(c, r[k].second));
          if (slot == 0) work.erase(r[k].first);
        }
      }
      cur = col + 1;
    }
    return SparseVec(work.begin(), work.end());
  }

 private:
  // x + c * y
  SparseVec axpy(const SparseVec& x, std::uint32_t c, const SparseVec& y) const {
    SparseVec out;
    out.reserve(x.size() + y.size());
    std::size_t i = 0, j = 0;
    while (i < x.size() || j < y.size()) {
      if (j == y.size() || (i < x.size() && x[i].first < y[j].first)) {
        out.push_back(x[i++]);
      } else if (i == x.size() || y[j].first < x[i].first) {
        out.push_back({y[j].first, F_.mul(c, y[j].second)});
        ++j;
      } else {
        auto v = F_.add(x[i].second, F_.mul(c, y[j].second));
        if (v) out.push_back({x[i].first, v});
        ++i;
        ++j;
      }
    }
    return out;
  }

  PrimeField F_;
  std::vector<SparseVec> rows_;
  std::vector<bool> has_;
  std::size_t rank_ = 0;
};

struct FpTerm {
  Path path;
  std::uint32_t coef;
};

// Relations reduced mod p and split into e_s r e_t components.
inline std::vector<std::vector<FpTerm>> relation_components(const Quiver& q, const RelationSet& rels,
                                                            const PrimeField& F) {
  std::vector<std::vector<FpTerm>> out;
  for (const auto& r : rels) {
    std::map<std::pair<VertexId, VertexId>, std::vector<FpTerm>> parts;
    for (const auto& t : r) {
      if (!is_composable(q, t.path)) throw PreconditionError("relation term " + format_path(q, t.path) + " is not a path");
      auto c = F.from_int(t.coef);
      if (c) parts[{t.path.start, path_end(q, t.path)}].push_back({t.path, c});
    }
    for (auto& [key, terms] : parts) out.push_back(std::move(terms));
  }
  return out;
}

// Quotient of kQ / R^{D+1} by the image of the two-sided ideal generated
// by the relations: every product u r v is inserted, truncated at length D.
struct Truncation {
  std::shared_ptr<const PathSpace> space;
  std::shared_ptr<SparseEchelon> echelon;
  std::vector<std::size_t> graded_dims;
};

inline Truncation truncate(const Quiver& q, const RelationSet& rels, const PrimeField& F, std::size_t D,
                           std::size_t path_limit) {
  auto space = std::make_shared<PathSpace>(q, D, path_limit);
  auto ech = std::make_shared<SparseEchelon>(F, space->size());
  for (const auto& rel : relation_components(q, rels, F)) {
    std::size_t low = rel.front().path.length();
    for (const auto& t : rel) low = std::min(low, t.path.length());
    if (low > D) continue;
    VertexId s = rel.front().path.start;
    VertexId t = path_end(q, rel.front().path);
    for (std::size_t du = 0; du + low <= D; ++du) {
      for (auto ui : space->ending_at(s, du)) {
        const Path& u = space->path(ui);
        for (std::size_t dv = 0; du + low + dv <= D; ++dv) {
          for (auto vi : space->starting_at(t, dv)) {
            const Path& v = space->path(vi);
            SparseVec row;
            for (const auto& term : rel) {
              if (du + term.path.length() + dv > D) continue;
              Path p{u.start, u.arrows};
              p.arrows.insert(p.arrows.end(), term.path.arrows.begin(), term.path.arrows.end());
              p.arrows.insert(p.arrows.end(), v.arrows.begin(), v.arrows.end());
              row.push_back({*space->find(p), term.coef});
            }
            std::sort(row.begin(), row.end());
            SparseVec merged;
            for (auto& e : row) {
              if (!merged.empty() && merged.back().first == e.first) merged.back().second = F.add(merged.back().second, e.second);
              else merged.push_back(e);
            }
            std::erase_if(merged, [](const auto& e) { return e.second == 0; });
            if (!merged.empty()) ech->insert(std::move(merged));
          }
        }
      }
    }
  }
  std::vector<std::size_t> dims(D + 1, 0);
  for (std::uint32_t i = 0; i < space->size(); ++i)
    if (!ech->is_pivot(i)) ++dims[space->degree_of(i)];
  return {std::move(space), std::move(ech), std::move(dims)};
}

}  // namespace detail

// Graded dimensions of kQ / (I + R^{D+1}) for the filtration by path
// length; entry d counts normal-form paths of length d.
inline std::vector<std::size_t> truncated_graded_dims(const Quiver& q, const RelationSet& rels, std::uint32_t p,
                                                      std::size_t D, std::size_t path_limit = 400000) {
  return detail::truncate(q, rels, PrimeField(p), D, path_limit).graded_dims;
}

class FDAlgebra;
FDAlgebra compute_basis(const Quiver& q, const RelationSet& rels, std::uint32_t p, const BasisOptions& opts);

// Finite-dimensional quotient of the path algebra over F_p with a basis of
// normal-form paths and a full multiplication table. Immutable.
class FDAlgebra {
 public:
  const Quiver& quiver() const { return quiver_; }
  const PrimeField& field() const { return field_; }
  const RelationSet& relations() const { return relations_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<Path>& basis() const { return basis_; }
  const Path& basis_path(std::size_t i) const { return basis_.at(i); }
  VertexId source(std::size_t i) const { return basis_[i].start; }
  VertexId target(std::size_t i) const { return path_end(quiver_, basis_[i]); }
  const std::vector<std::size_t>& graded_dims() const { return graded_dims_; }
  // First length d with no normal-form paths; all paths of length >= d vanish.
  std::size_t stabilization_degree() const { return stabilization_degree_; }

  std::optional<std::size_t> basis_index(const Path& p) const {
    auto it = basis_index_.find(p);
    if (it == basis_index_.end()) return std::nullopt;
    return it->second;
  }

  // b_i * b_j in the basis.
  const SparseVec& product(std::size_t i, std::size_t j) const { return mult_[i * dim() + j]; }
  // b_i * a for an arrow a.
  const SparseVec& right_arrow(std::size_t i, ArrowId a) const { return arrow_action_[i * quiver_.arrow_count() + a]; }

  SparseVec normal_form(const Path& p) const {
    if (p.length() > space_->max_len()) return {};
    auto col = space_->find(p);
    if (!col) throw PreconditionError("normal_form: not a path of the quiver");
    SparseVec out;
    for (auto [c, v] : echelon_->reduce({{*col, 1}})) out.push_back({column_to_basis_.at(c), v});
    std::sort(out.begin(), out.end());
    return out;
  }

  SparseVec multiply(const SparseVec& x, const SparseVec& y) const {
    std::map<std::uint32_t, std::uint32_t> acc;
    for (auto [i, a] : x)
      for (auto [j, b] : y)
        for (auto [k, c] : product(i, j)) {
          auto& s = acc[k];
          s = field_.add(s, field_.mul(field_.mul(a, b), c));
        }
    SparseVec out;
    for (auto [k, v] : acc)
      if (v) out.push_back({k, v});
    return out;
  }

 private:
  friend FDAlgebra compute_basis(const Quiver&, const RelationSet&, std::uint32_t, const BasisOptions&);
  FDAlgebra(Quiver q, RelationSet rels, PrimeField F) : quiver_(std::move(q)), field_(F), relations_(std::move(rels)) {}

  Quiver quiver_;
  PrimeField field_;
  RelationSet relations_;
  std::vector<Path> basis_;
  std::unordered_map<Path, std::size_t, PathHash> basis_index_;
  std::unordered_map<std::uint32_t, std::uint32_t> column_to_basis_;
  std::vector<std::size_t> graded_dims_;
  std::size_t stabilization_degree_ = 0;
  std::vector<SparseVec> mult_;
  std::vector<SparseVec> arrow_action_;
  std::shared_ptr<const detail::PathSpace> space_;
  std::shared_ptr<const detail::SparseEchelon> echelon_;
};

// Degreewise elimination: for D = 1, 2, ... the quotient kQ / (I + R^{D+1})
// is row reduced with lower path lengths as pivots. At the first D whose
// paths are all pivots, R^D lies in the closure of I and the truncated
// quotient is the algebra itself.
inline FDAlgebra compute_basis(const Quiver& q, const RelationSet& rels, std::uint32_t p, const BasisOptions& opts = {}) {
  if (opts.max_deg < 1) throw PreconditionError("maxDeg must be at least 1");
  PrimeField F(p);
  for (std::size_t D = 1; D <= opts.max_deg; ++D) {
    auto tr = detail::truncate(q, rels, F, D, opts.path_limit);
    if (tr.graded_dims[D] != 0) continue;

    FDAlgebra A(q, rels, F);
    A.space_ = tr.space;
    A.echelon_ = tr.echelon;
    A.stabilization_degree_ = D;
    A.graded_dims_.assign(tr.graded_dims.begin(), tr.graded_dims.end() - 1);
    while (!A.graded_dims_.empty() && A.graded_dims_.back() == 0) A.graded_dims_.pop_back();
    for (std::uint32_t c = 0; c < tr.space->size(); ++c) {
      if (tr.echelon->is_pivot(c)) continue;
      A.column_to_basis_[c] = static_cast<std::uint32_t>(A.basis_.size());
      A.basis_index_[tr.space->path(c)] = A.basis_.size();
      A.basis_.push_back(tr.space->path(c));
    }
    const std::size_t n = A.dim();
    A.mult_.assign(n * n, {});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (A.target(i) == A.source(j)) A.mult_[i * n + j] = A.normal_form(concat(q, A.basis_[i], A.basis_[j]));
    A.arrow_action_.assign(n * q.arrow_count(), {});
    for (std::size_t i = 0; i < n; ++i)
      for (ArrowId a = 0; a < q.arrow_count(); ++a)
        if (A.target(i) == q.arrow(a).source)
          A.arrow_action_[i * q.arrow_count() + a] = A.normal_form(concat(q, A.basis_[i], arrow_path(q, a)));
    return A;
  }
  throw NonStabilization(opts.max_deg, "normal forms of length " + std::to_string(opts.max_deg) + " persist");
}

struct CartanMatrix {
  std::vector<std::vector<std::int64_t>> entries;

  std::int64_t determinant() const { return integer_determinant(entries); }
  bool operator==(const CartanMatrix&) const = default;
};

// Entry (i, j) counts basis paths from vertex i to vertex j.
inline CartanMatrix cartan_matrix(const FDAlgebra& a) {
  const std::size_t n = a.quiver().vertex_count();
  CartanMatrix c{std::vector<std::vector<std::int64_t>>(n, std::vector<std::int64_t>(n, 0))};
  for (std::size_t i = 0; i < a.dim(); ++i) ++c.entries[a.source(i)][a.target(i)];
  return c;
}

struct SocleInfo {
  VertexId vertex = 0;
  std::size_t socle_dim = 0;
  std::vector<VertexId> support;
};

struct WeakSymmetryReport {
  bool weakly_symmetric = false;
  std::vector<SocleInfo> socles;
};

// Indices of basis paths starting at v; they span the projective e_v A.
inline std::vector<std::size_t> projective_basis(const FDAlgebra& a, VertexId v) {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < a.dim(); ++i)
    if (a.source(i) == v) idx.push_back(i);
  return idx;
}

// Weakly symmetric: the socle of each e_i A (elements killed by every
// arrow on the right) is one-dimensional and lives at vertex i.
inline WeakSymmetryReport check_weakly_symmetric(const FDAlgebra& a) {
  const auto& q = a.quiver();
  const auto& F = a.field();
  WeakSymmetryReport rep{true, {}};
  for (VertexId v = 0; v < q.vertex_count(); ++v) {
    auto idx = projective_basis(a, v);
    std::unordered_map<std::size_t, std::size_t> local;
    for (std::size_t k = 0; k < idx.size(); ++k) local[idx[k]] = k;
    Matrix act(idx.size(), idx.size() * q.arrow_count());
    for (std::size_t k = 0; k < idx.size(); ++k)
      for (ArrowId x = 0; x < q.arrow_count(); ++x)
        for (auto [c, val] : a.right_arrow(idx[k], x)) act(k, x * idx.size() + local.at(c)) = val;
    Matrix soc = left_nullspace(F, act);
    SocleInfo info{v, soc.rows(), {}};
    std::vector<bool> seen(q.vertex_count(), false);
    for (std::size_t r = 0; r < soc.rows(); ++r)
      for (std::size_t k = 0; k < idx.size(); ++k)
        if (soc(r, k)) seen[a.target(idx[k])] = true;
    for (VertexId w = 0; w < q.vertex_count(); ++w)
      if (seen[w]) info.support.push_back(w);
    if (info.socle_dim != 1 || info.support != std::vector<VertexId>{v}) rep.weakly_symmetric = false;
    rep.socles.push_back(std::move(info));
  }
  return rep;
}

// First (i, j, k) with (b_i b_j) b_k != b_i (b_j b_k), if any.
inline std::optional<std::array<std::size_t, 3>> find_associativity_failure(const FDAlgebra& a) {
  const std::size_t n = a.dim();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (a.target(i) != a.source(j)) continue;
      for (std::size_t k = 0; k < n; ++k) {
        if (a.target(j) != a.source(k)) continue;
        auto left = a.multiply(a.product(i, j), {{static_cast<std::uint32_t>(k), 1}});
        auto right = a.multiply({{static_cast<std::uint32_t>(i), 1}}, a.product(j, k));
        if (left != right) return std::array<std::size_t, 3>{i, j, k};
      }
    }
  return std::nullopt;
}

inline nlohmann::json to_json(const FDAlgebra& a) {
  const auto& q = a.quiver();
  nlohmann::json j;
  j["field"] = a.field().modulus();
  j["quiver"] = to_json(q);
  j["relations"] = relations_to_json(q, a.relations());
  j["graded_dims"] = a.graded_dims();
  j["dim"] = a.dim();
  std::vector<std::string> basis;
  for (const auto& p : a.basis()) basis.push_back(format_path(q, p));
  j["basis"] = basis;
  j["cartan"] = cartan_matrix(a).entries;
  nlohmann::json mult = nlohmann::json::array();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t k = 0; k < a.dim(); ++k) {
      const auto& prod = a.product(i, k);
      if (prod.empty()) continue;
      nlohmann::json terms = nlohmann::json::array();
      for (auto [c, v] : prod) terms.push_back({c, v});
      mult.push_back({i, k, terms});
    }
  j["mult"] = mult;
  return j;
}

}  // namespace jacalg
