#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "jacalg/algebra.hpp"
#include "jacalg/field.hpp"
#include "json.hpp"

namespace jacalg {

// Right module over an FDAlgebra given as a representation: a space of
// dimension dims[v] per vertex and, for each arrow a: s -> t, a
// dims[s] x dims[t] matrix acting on row vectors. A path acts by the
// product of its arrow matrices in path order.
class FDModule {
 public:
  FDModule(std::shared_ptr<const FDAlgebra> algebra, std::vector<std::size_t> dims, std::vector<Matrix> arrows)
      : algebra_(std::move(algebra)), dims_(std::move(dims)), arrows_(std::move(arrows)) {
    const auto& q = algebra_->quiver();
    if (dims_.size() != q.vertex_count()) throw PreconditionError("module: dimension vector has wrong length");
    if (arrows_.size() != q.arrow_count()) throw PreconditionError("module: wrong number of arrow matrices");
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
      const auto& arr = q.arrow(a);
      if (arrows_[a].rows() != dims_[arr.source] || arrows_[a].cols() != dims_[arr.target])
        throw PreconditionError("module: matrix of arrow '" + arr.name + "' has the wrong shape");
    }
  }

  const std::shared_ptr<const FDAlgebra>& algebra_ptr() const { return algebra_; }
  const FDAlgebra& algebra() const { return *algebra_; }
  const std::vector<std::size_t>& dims() const { return dims_; }
  const Matrix& arrow_matrix(ArrowId a) const { return arrows_.at(a); }
  const std::vector<Matrix>& arrow_matrices() const { return arrows_; }

  std::size_t total_dim() const {
    std::size_t n = 0;
    for (auto d : dims_) n += d;
    return n;
  }
  bool is_zero() const { return total_dim() == 0; }

  Matrix path_action(const Path& p) const {
    const auto& F = algebra_->field();
    Matrix m = Matrix::identity(dims_[p.start]);
    for (auto a : p.arrows) m = multiply(F, m, arrows_[a]);
    return m;
  }

 private:
  std::shared_ptr<const FDAlgebra> algebra_;
  std::vector<std::size_t> dims_;
  std::vector<Matrix> arrows_;
};

// Dimension vectors of M R^k for k = 0, 1, ... until the layer vanishes.
// Returns an empty vector when the arrows do not act nilpotently.
inline std::vector<std::vector<std::size_t>> radical_layers(const FDModule& m) {
  const auto& q = m.algebra().quiver();
  const auto& F = m.algebra().field();
  std::vector<Matrix> layer;
  for (auto d : m.dims()) layer.push_back(Matrix::identity(d));
  std::vector<std::vector<std::size_t>> out;
  for (std::size_t k = 0; k <= m.total_dim() + 1; ++k) {
    std::vector<std::size_t> dv;
    std::size_t total = 0;
    for (const auto& l : layer) {
      dv.push_back(l.rows());
      total += l.rows();
    }
    out.push_back(dv);
    if (total == 0) return out;
    std::vector<Matrix> next(q.vertex_count());
    for (VertexId v = 0; v < q.vertex_count(); ++v) next[v] = Matrix(0, m.dims()[v]);
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
      const auto& arr = q.arrow(a);
      if (layer[arr.source].rows() == 0) continue;
      next[arr.target] = vstack(next[arr.target], multiply(F, layer[arr.source], m.arrow_matrix(a)));
    }
    for (VertexId v = 0; v < q.vertex_count(); ++v) {
      auto e = rref(F, next[v]);
      layer[v] = e.reduced.rows() ? e.reduced : Matrix(0, m.dims()[v]);
    }
  }
  return {};
}

// Every relation generator acts as zero and the arrows act nilpotently.
inline bool satisfies_relations(const FDModule& m) {
  const auto& q = m.algebra().quiver();
  const auto& F = m.algebra().field();
  for (const auto& rel : m.algebra().relations()) {
    if (rel.empty()) continue;
    std::map<std::pair<VertexId, VertexId>, Matrix> sums;
    for (const auto& t : rel) {
      VertexId s = t.path.start, e = path_end(q, t.path);
      auto it = sums.try_emplace({s, e}, Matrix(m.dims()[s], m.dims()[e])).first;
      Matrix act = m.path_action(t.path);
      auto c = F.from_int(t.coef);
      for (std::size_t i = 0; i < act.rows(); ++i)
        for (std::size_t j = 0; j < act.cols(); ++j) it->second(i, j) = F.add(it->second(i, j), F.mul(c, act(i, j)));
    }
    for (const auto& [k, mat] : sums)
      if (!mat.is_zero()) return false;
  }
  return !radical_layers(m).empty();
}

inline FDModule simple_module(std::shared_ptr<const FDAlgebra> a, VertexId v) {
  const auto& q = a->quiver();
  if (v >= q.vertex_count()) throw PreconditionError("simple_module: unknown vertex " + std::to_string(v));
  std::vector<std::size_t> dims(q.vertex_count(), 0);
  dims[v] = 1;
  std::vector<Matrix> arrows;
  for (const auto& arr : q.arrows()) arrows.emplace_back(dims[arr.source], dims[arr.target]);
  return FDModule(std::move(a), std::move(dims), std::move(arrows));
}

// e_v A, spanned by the basis paths starting at v; arrows act by right
// multiplication.
inline FDModule projective_module(std::shared_ptr<const FDAlgebra> a, VertexId v) {
  const auto& q = a->quiver();
  if (v >= q.vertex_count()) throw PreconditionError("projective_module: unknown vertex " + std::to_string(v));
  auto idx = projective_basis(*a, v);
  std::vector<std::size_t> dims(q.vertex_count(), 0);
  std::unordered_map<std::size_t, std::size_t> local;
  for (auto i : idx) local[i] = dims[a->target(i)]++;
  std::vector<Matrix> arrows;
  for (ArrowId x = 0; x < q.arrow_count(); ++x) {
    const auto& arr = q.arrow(x);
    Matrix m(dims[arr.source], dims[arr.target]);
    for (auto i : idx) {
      if (a->target(i) != arr.source) continue;
      for (auto [c, val] : a->right_arrow(i, x)) m(local.at(i), local.at(c)) = val;
    }
    arrows.push_back(std::move(m));
  }
  return FDModule(std::move(a), std::move(dims), std::move(arrows));
}

struct ProjectiveCover {
  FDModule cover;
  // Per vertex, a dim(P_v) x dim(M_v) matrix of the surjection P -> M.
  std::vector<Matrix> epi;
  // (vertex, top vector) for each projective summand, in summand order.
  std::vector<std::pair<VertexId, std::vector<std::uint32_t>>> tops;
};

// P = sum over top(M) = M / M R of the projectives at the top's vertices;
// the summand for top vector t maps a basis path b to t b.
inline ProjectiveCover projective_cover(const FDModule& m) {
  if (m.is_zero()) throw PreconditionError("projective_cover: zero module");
  const auto& A = m.algebra();
  const auto& q = A.quiver();
  const auto& F = A.field();
  const std::size_t nv = q.vertex_count();

  std::vector<std::pair<VertexId, std::vector<std::uint32_t>>> tops;
  for (VertexId v = 0; v < nv; ++v) {
    Matrix rad(0, m.dims()[v]);
    for (auto a : q.arrows_to(v)) rad = vstack(rad, m.arrow_matrix(a));
    auto e = rref(F, rad);
    std::vector<bool> pivot(m.dims()[v], false);
    for (auto c : e.pivots) pivot[c] = true;
    for (std::size_t c = 0; c < m.dims()[v]; ++c) {
      if (pivot[c]) continue;
      std::vector<std::uint32_t> t(m.dims()[v], 0);
      t[c] = 1;
      tops.push_back({v, std::move(t)});
    }
  }

  // Summand layout: for each vertex w, the basis paths ending at w of each
  // summand, summands in order.
  std::vector<std::size_t> dims(nv, 0);
  struct Slot {
    std::size_t summand;
    std::size_t basis;
  };
  std::vector<std::vector<Slot>> slots(nv);
  std::vector<std::unordered_map<std::size_t, std::size_t>> local(tops.size());
  for (std::size_t s = 0; s < tops.size(); ++s) {
    for (auto i : projective_basis(A, tops[s].first)) {
      VertexId w = A.target(i);
      local[s][i] = dims[w]++;
      slots[w].push_back({s, i});
    }
  }

  std::vector<Matrix> arrows;
  for (ArrowId x = 0; x < q.arrow_count(); ++x) {
    const auto& arr = q.arrow(x);
    Matrix mat(dims[arr.source], dims[arr.target]);
    for (const auto& sl : slots[arr.source])
      for (auto [c, val] : A.right_arrow(sl.basis, x)) mat(local[sl.summand].at(sl.basis), local[sl.summand].at(c)) = val;
    arrows.push_back(std::move(mat));
  }

  std::vector<Matrix> epi;
  for (VertexId w = 0; w < nv; ++w) {
    Matrix e(dims[w], m.dims()[w]);
    for (const auto& sl : slots[w]) {
      const auto& top = tops[sl.summand].second;
      Matrix row(1, top.size());
      for (std::size_t c = 0; c < top.size(); ++c) row(0, c) = top[c];
      for (auto a : A.basis_path(sl.basis).arrows) row = multiply(F, row, m.arrow_matrix(a));
      auto r = local[sl.summand].at(sl.basis);
      for (std::size_t c = 0; c < row.cols(); ++c) e(r, c) = row(0, c);
    }
    epi.push_back(std::move(e));
  }
  return {FDModule(m.algebra_ptr(), std::move(dims), std::move(arrows)), std::move(epi), std::move(tops)};
}

// Kernel of the projective cover, as a representation.
inline FDModule syzygy(const FDModule& m) {
  auto pc = projective_cover(m);
  const auto& q = m.algebra().quiver();
  const auto& F = m.algebra().field();
  std::vector<Matrix> kernel;
  std::vector<std::size_t> dims;
  for (VertexId w = 0; w < q.vertex_count(); ++w) {
    Matrix k = pc.epi[w].rows() ? left_nullspace(F, pc.epi[w]) : Matrix(0, 0);
    dims.push_back(k.rows());
    kernel.push_back(std::move(k));
  }
  std::vector<Matrix> arrows;
  for (ArrowId x = 0; x < q.arrow_count(); ++x) {
    const auto& arr = q.arrow(x);
    if (dims[arr.source] == 0 || dims[arr.target] == 0) {
      arrows.emplace_back(dims[arr.source], dims[arr.target]);
      continue;
    }
    Matrix image = multiply(F, kernel[arr.source], pc.cover.arrow_matrix(x));
    arrows.push_back(solve_left(F, kernel[arr.target], image));
  }
  return FDModule(m.algebra_ptr(), std::move(dims), std::move(arrows));
}

inline FDModule syzygy_power(const FDModule& m, std::size_t k) {
  FDModule cur = m;
  for (std::size_t i = 0; i < k && !cur.is_zero(); ++i) cur = syzygy(cur);
  return cur;
}

// A module homomorphism: one matrix per vertex.
using ModuleMap = std::vector<Matrix>;

inline bool is_homomorphism(const FDModule& m, const FDModule& n, const ModuleMap& phi) {
  const auto& q = m.algebra().quiver();
  const auto& F = m.algebra().field();
  if (phi.size() != q.vertex_count()) return false;
  for (VertexId v = 0; v < q.vertex_count(); ++v)
    if (phi[v].rows() != m.dims()[v] || phi[v].cols() != n.dims()[v]) return false;
  for (ArrowId a = 0; a < q.arrow_count(); ++a) {
    const auto& arr = q.arrow(a);
    if (multiply(F, m.arrow_matrix(a), phi[arr.target]) != multiply(F, phi[arr.source], n.arrow_matrix(a))) return false;
  }
  return true;
}

// Basis of Hom(M, N): solutions of M_a phi_t = phi_s N_a for every arrow.
inline std::vector<ModuleMap> hom_space(const FDModule& m, const FDModule& n) {
  const auto& q = m.algebra().quiver();
  const auto& F = m.algebra().field();
  const std::size_t nv = q.vertex_count();
  std::vector<std::size_t> offset(nv + 1, 0);
  for (VertexId v = 0; v < nv; ++v) offset[v + 1] = offset[v] + m.dims()[v] * n.dims()[v];
  const std::size_t unknowns = offset[nv];
  auto var = [&](VertexId v, std::size_t r, std::size_t c) { return offset[v] + r * n.dims()[v] + c; };

  std::size_t equations = 0;
  for (const auto& arr : q.arrows()) equations += m.dims()[arr.source] * n.dims()[arr.target];
  Matrix sys(equations, unknowns);
  std::size_t row = 0;
  for (ArrowId a = 0; a < q.arrow_count(); ++a) {
    const auto& arr = q.arrow(a);
    const VertexId s = arr.source, t = arr.target;
    const Matrix& ma = m.arrow_matrix(a);
    const Matrix& na = n.arrow_matrix(a);
    for (std::size_t r = 0; r < m.dims()[s]; ++r) {
      for (std::size_t c = 0; c < n.dims()[t]; ++c, ++row) {
        for (std::size_t k = 0; k < m.dims()[t]; ++k)
          if (ma(r, k)) sys(row, var(t, k, c)) = F.add(sys(row, var(t, k, c)), ma(r, k));
        for (std::size_t k = 0; k < n.dims()[s]; ++k)
          if (na(k, c)) sys(row, var(s, r, k)) = F.sub(sys(row, var(s, r, k)), na(k, c));
      }
    }
  }
  Matrix null = unknowns ? nullspace(F, sys) : Matrix(0, 0);
  std::vector<ModuleMap> basis;
  for (std::size_t b = 0; b < null.rows(); ++b) {
    ModuleMap phi;
    for (VertexId v = 0; v < nv; ++v) {
      Matrix mv(m.dims()[v], n.dims()[v]);
      for (std::size_t r = 0; r < mv.rows(); ++r)
        for (std::size_t c = 0; c < mv.cols(); ++c) mv(r, c) = null(b, var(v, r, c));
      phi.push_back(std::move(mv));
    }
    basis.push_back(std::move(phi));
  }
  return basis;
}

enum class IsoVerdict { kIso, kNoIso, kInconclusive };

inline const char* to_string(IsoVerdict v) {
  switch (v) {
    case IsoVerdict::kIso: return "iso";
    case IsoVerdict::kNoIso: return "no-iso";
    case IsoVerdict::kInconclusive: return "inconclusive";
  }
  return "?";
}

struct IsoResult {
  IsoVerdict verdict = IsoVerdict::kInconclusive;
  std::string reason;
  ModuleMap witness;  // an isomorphism M -> N when verdict is iso
};

// Invariant mismatches give a seed-independent no-iso. Otherwise random
// elements of Hom(M, N) are tried for invertibility.
inline IsoResult iso_check(const FDModule& m, const FDModule& n, int trials = 20, std::uint64_t seed = 1) {
  if (m.algebra_ptr() != n.algebra_ptr()) throw PreconditionError("iso_check: modules over different algebras");
  if (m.dims() != n.dims()) return {IsoVerdict::kNoIso, "dimension vectors differ", {}};
  if (radical_layers(m) != radical_layers(n)) return {IsoVerdict::kNoIso, "radical series differ", {}};
  auto hom_mn = hom_space(m, n);
  auto hom_nm = hom_space(n, m);
  if (hom_mn.size() != hom_nm.size())
    return {IsoVerdict::kNoIso,
            "dim Hom(M,N) = " + std::to_string(hom_mn.size()) + " != dim Hom(N,M) = " + std::to_string(hom_nm.size()),
            {}};
  if (m.is_zero()) return {IsoVerdict::kIso, "both modules are zero", ModuleMap(m.dims().size())};
  if (hom_mn.empty()) return {IsoVerdict::kNoIso, "Hom(M,N) = 0", {}};

  const auto& F = m.algebra().field();
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::uint32_t> coef(0, F.modulus() - 1);
  for (int t = 0; t < trials; ++t) {
    ModuleMap phi;
    for (std::size_t v = 0; v < m.dims().size(); ++v) phi.emplace_back(m.dims()[v], n.dims()[v]);
    for (const auto& h : hom_mn) {
      auto c = coef(rng);
      for (std::size_t v = 0; v < phi.size(); ++v)
        for (std::size_t r = 0; r < phi[v].rows(); ++r)
          for (std::size_t k = 0; k < phi[v].cols(); ++k) phi[v](r, k) = F.add(phi[v](r, k), F.mul(c, h[v](r, k)));
    }
    bool invertible = true;
    for (const auto& mv : phi)
      if (mv.rows() && !inverse(F, mv)) {
        invertible = false;
        break;
      }
    if (invertible) return {IsoVerdict::kIso, "invertible homomorphism found on trial " + std::to_string(t + 1), phi};
  }
  return {IsoVerdict::kInconclusive, "no invertible element in " + std::to_string(trials) + " trials", {}};
}

struct PeriodicityReport {
  std::size_t period = 0;
  // Dimension vectors of Omega^k(M) for k = 0..period.
  std::vector<std::vector<std::size_t>> orbit_dims;
  IsoResult result;
  FDModule last;  // Omega^period(M)

  bool periodic() const { return result.verdict == IsoVerdict::kIso; }
};

inline PeriodicityReport check_periodicity(const FDModule& m, std::size_t period, int trials = 20, std::uint64_t seed = 1) {
  if (m.is_zero()) throw PreconditionError("check_periodicity: zero module");
  if (period == 0) throw PreconditionError("check_periodicity: period must be positive");
  std::vector<std::vector<std::size_t>> dims{m.dims()};
  FDModule cur = m;
  for (std::size_t k = 1; k <= period; ++k) {
    cur = syzygy(cur);
    if (cur.is_zero())
      throw PreconditionError(k == 1 ? "check_periodicity: projective input" : "check_periodicity: Omega-orbit reaches a projective");
    dims.push_back(cur.dims());
  }
  auto res = iso_check(cur, m, trials, seed);
  return {period, std::move(dims), std::move(res), std::move(cur)};
}

// tau = Omega^2, valid on the weakly symmetric algebras this library targets.
inline FDModule ar_translate(const FDModule& m) {
  if (!check_weakly_symmetric(m.algebra()).weakly_symmetric)
    throw PreconditionError("ar_translate: algebra is not weakly symmetric");
  if (m.is_zero()) throw PreconditionError("ar_translate: zero module");
  FDModule om = syzygy(m);
  if (om.is_zero()) throw PreconditionError("ar_translate: projective input");
  return syzygy(om);
}

// ---------------------------------------------------------------------------
// Module file format: { "dims": {vertex: n}, "arrows": {arrow: [[...], ...]} }
// Arrows whose source or target space is zero may be omitted.

inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto row = m.row(r);
    rows.push_back(std::vector<std::uint32_t>(row.begin(), row.end()));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j, std::size_t rows, std::size_t cols, const PrimeField& F,
                               const std::string& where) {
  Matrix m(rows, cols);
  if (rows == 0 || cols == 0) return m;
  if (!j.is_array() || j.size() != rows) throw ParseError(where + ": expected " + std::to_string(rows) + " rows");
  for (std::size_t r = 0; r < rows; ++r) {
    if (!j[r].is_array() || j[r].size() != cols) throw ParseError(where + ": expected " + std::to_string(cols) + " columns");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = F.from_int(j[r][c].get<std::int64_t>());
  }
  return m;
}

inline nlohmann::json to_json(const FDModule& m) {
  const auto& q = m.algebra().quiver();
  nlohmann::json dims = nlohmann::json::object();
  for (VertexId v = 0; v < q.vertex_count(); ++v) dims[q.vertex_name(v)] = m.dims()[v];
  nlohmann::json arrows = nlohmann::json::object();
  for (ArrowId a = 0; a < q.arrow_count(); ++a)
    if (m.arrow_matrix(a).rows() && m.arrow_matrix(a).cols()) arrows[q.arrow(a).name] = matrix_to_json(m.arrow_matrix(a));
  return {{"dims", dims}, {"arrows", arrows}};
}

inline FDModule module_from_json(std::shared_ptr<const FDAlgebra> a, const nlohmann::json& j) {
  detail::require_keys(j, "module", {"dims", "arrows"}, {"dims"});
  const auto& q = a->quiver();
  std::vector<std::size_t> dims(q.vertex_count(), 0);
  if (!j["dims"].is_object()) throw ParseError("module.dims: expected an object keyed by vertex");
  for (auto it = j["dims"].begin(); it != j["dims"].end(); ++it) {
    auto v = q.find_vertex(it.key());
    if (!v) throw ParseError("module.dims: unknown vertex '" + it.key() + "'");
    dims[*v] = it.value().get<std::size_t>();
  }
  std::vector<Matrix> arrows;
  for (ArrowId x = 0; x < q.arrow_count(); ++x) arrows.emplace_back(dims[q.arrow(x).source], dims[q.arrow(x).target]);
  if (j.contains("arrows")) {
    for (auto it = j["arrows"].begin(); it != j["arrows"].end(); ++it) {
      auto x = q.find_arrow(it.key());
      if (!x) throw ParseError("module.arrows: unknown arrow '" + it.key() + "'");
      arrows[*x] = matrix_from_json(it.value(), dims[q.arrow(*x).source], dims[q.arrow(*x).target], a->field(),
                                    "module.arrows." + it.key());
    }
  }
  return FDModule(std::move(a), std::move(dims), std::move(arrows));
}

}  // namespace jacalg
