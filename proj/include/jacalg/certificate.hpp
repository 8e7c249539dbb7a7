#pragma once

#include <memory>
#include <string>
#include <vector>

#include "jacalg/algebra.hpp"
#include "jacalg/homology.hpp"
#include "jacalg/strings.hpp"
#include "json.hpp"

namespace jacalg {

// Self-contained documents that `verify` can audit without repeating the
// searches that produced them.

struct VerifyResult {
  std::vector<std::string> failures;
  std::size_t checks = 0;

  bool ok() const { return failures.empty(); }
  void expect(bool cond, std::string what) {
    ++checks;
    if (!cond) failures.push_back(std::move(what));
  }
};

// ---------------------------------------------------------------------------
// Growth certificates

inline constexpr const char* kGrowthScope =
    "bands of the given word presentation; growth of the Jacobian algebra follows because it has this algebra as a quotient";

inline nlohmann::json growth_certificate(const WordPresentation& p, const Word& w1, const Word& w2,
                                         const ComposabilityResult& r, const std::string& label) {
  nlohmann::json j;
  j["kind"] = "growth-certificate";
  j["label"] = label;
  j["scope"] = kGrowthScope;
  j["presentation"] = to_json(p);
  j["w1"] = format_word(p, w1);
  j["w2"] = format_word(p, w2);
  j["depth"] = r.depth;
  j["certified"] = r.certified;
  j["junctions"] = nlohmann::json::array();
  for (const auto& jc : r.junctions) j["junctions"].push_back({{"type", jc.type}, {"ok", jc.ok}, {"detail", jc.detail}});
  j["window"] = {{"blocks", r.window_blocks}, {"sequences", r.window_sequences}};
  j["necklaces_checked"] = r.necklaces_checked;
  if (!r.certified) {
    j["counterexample"] = {{"blocks", r.counterexample},
                           {"condition", r.failure.condition},
                           {"position", r.failure.position},
                           {"detail", r.failure.detail}};
  }
  return j;
}

inline void attach_band_counts(nlohmann::json& cert, const BandEnumeration& e, const GrowthReport& g) {
  cert["band_counts"] = {{"max_len", e.max_len}, {"raw", e.raw}, {"paired", e.paired}};
  cert["growth"] = {{"rate", g.rate},
                    {"half_ratio_rate", g.half_ratio_rate},
                    {"lower_max", g.lower_max},
                    {"upper_max", g.upper_max},
                    {"exponential", g.exponential},
                    {"note", g.note}};
}

inline VerifyResult verify_growth_certificate(const nlohmann::json& j) {
  VerifyResult v;
  auto p = presentation_from_json(j.at("presentation"));
  Word w1 = parse_word(p, j.at("w1").get<std::string>());
  Word w2 = parse_word(p, j.at("w2").get<std::string>());
  const auto depth = j.at("depth").get<std::size_t>();
  v.expect(j.at("certified").get<bool>(), "certificate does not claim free composability");
  v.expect(is_band(p, w1).ok, "w1 is not a band");
  v.expect(is_band(p, w2).ok, "w2 is not a band");
  v.expect(!w1.empty() && !w2.empty() && p.start(w1.front()) == p.start(w2.front()), "w1 and w2 have different basepoints");
  if (!v.ok()) return v;

  // Recompute the junction and window checks and compare with the claims.
  auto r = free_composability(p, w1, w2, 0);
  const auto& claimed = j.at("junctions");
  v.expect(claimed.size() == r.junctions.size(), "junction list has the wrong length");
  for (std::size_t i = 0; i < std::min(claimed.size(), r.junctions.size()); ++i) {
    v.expect(claimed[i].at("type") == r.junctions[i].type, "junction " + std::to_string(i) + " has the wrong type");
    v.expect(claimed[i].at("ok").get<bool>() && r.junctions[i].ok, "junction " + r.junctions[i].type + " fails");
  }
  const auto blocks = j.at("window").at("blocks").get<std::size_t>();
  v.expect(blocks >= r.window_blocks, "window sweep is shorter than the longest forbidden word requires");
  v.expect(r.certified, "window sweep finds a non-string composition");

  std::size_t necklaces = 0;
  for (const auto& u : binary_lyndon_words(depth)) {
    ++necklaces;
    if (!is_band(p, blocks_to_word(w1, w2, u)).ok) {
      std::string s;
      for (int b : u) s += b ? "w2" : "w1";
      v.expect(false, "composition " + s + " is not a band");
    }
  }
  v.expect(necklaces == j.at("necklaces_checked").get<std::size_t>(), "necklace count does not match the depth");
  return v;
}

// ---------------------------------------------------------------------------
// Periodicity reports

struct SimplePeriodicity {
  VertexId vertex = 0;
  std::vector<std::vector<std::size_t>> orbit_dims;  // Omega^k(S), k = 0..4
  IsoResult omega2, omega4;
  FDModule module2, module4;

  int tube_rank() const {
    if (omega2.verdict == IsoVerdict::kIso) return 1;
    if (omega4.verdict == IsoVerdict::kIso) return 2;
    return 0;
  }
};

inline SimplePeriodicity simple_periodicity(const std::shared_ptr<const FDAlgebra>& a, VertexId v, int trials, std::uint64_t seed) {
  auto s = simple_module(a, v);
  auto r4 = check_periodicity(s, 4, trials, seed);
  FDModule m2 = syzygy_power(s, 2);
  auto i2 = iso_check(m2, s, trials, seed);
  return {v, r4.orbit_dims, std::move(i2), std::move(r4.result), std::move(m2), std::move(r4.last)};
}

inline nlohmann::json iso_to_json(const FDModule& m, const IsoResult& r) {
  nlohmann::json j{{"verdict", to_string(r.verdict)}, {"reason", r.reason}, {"module", to_json(m)}};
  if (r.verdict == IsoVerdict::kIso) {
    const auto& q = m.algebra().quiver();
    nlohmann::json w = nlohmann::json::object();
    for (VertexId v = 0; v < q.vertex_count(); ++v)
      if (r.witness[v].rows()) w[q.vertex_name(v)] = matrix_to_json(r.witness[v]);
    j["witness"] = w;
  }
  return j;
}

inline nlohmann::json periodicity_report(const FDAlgebra& a, const std::vector<SimplePeriodicity>& entries, bool weakly_symmetric) {
  const auto& q = a.quiver();
  nlohmann::json j;
  j["kind"] = "periodicity-report";
  j["field"] = a.field().modulus();
  j["quiver"] = to_json(q);
  j["relations"] = relations_to_json(q, a.relations());
  j["dim"] = a.dim();
  j["weakly_symmetric"] = weakly_symmetric;
  j["note"] = "tau is computed as Omega^2; only weak symmetry is machine-checked";
  j["simples"] = nlohmann::json::array();
  for (const auto& e : entries) {
    nlohmann::json s;
    s["vertex"] = q.vertex_name(e.vertex);
    s["orbit_dims"] = e.orbit_dims;
    s["omega2"] = iso_to_json(e.module2, e.omega2);
    s["omega4"] = iso_to_json(e.module4, e.omega4);
    s["tau2_iso"] = e.omega4.verdict == IsoVerdict::kIso;
    s["tube_rank"] = e.tube_rank();
    j["simples"].push_back(std::move(s));
  }
  return j;
}

inline VerifyResult verify_periodicity_report(const nlohmann::json& j, const BasisOptions& opts = {}) {
  VerifyResult v;
  auto q = quiver_from_json(j.at("quiver"));
  auto rels = relations_from_json(q, j.at("relations"));
  auto a = std::make_shared<const FDAlgebra>(compute_basis(q, rels, j.at("field").get<std::uint32_t>(), opts));
  v.expect(a->dim() == j.at("dim").get<std::size_t>(), "algebra dimension differs");
  const auto& F = a->field();
  for (const auto& s : j.at("simples")) {
    const auto name = s.at("vertex").get<std::string>();
    const VertexId vx = q.vertex(name);
    auto simple = simple_module(a, vx);
    int rank = 0;
    for (const auto* key : {"omega2", "omega4"}) {
      const auto& e = s.at(key);
      if (e.at("verdict") != "iso") continue;
      auto m = module_from_json(a, e.at("module"));
      v.expect(satisfies_relations(m), name + " " + key + ": module violates the relations");
      v.expect(m.dims() == simple.dims(), name + " " + key + ": dimension vector differs from the simple");
      ModuleMap phi;
      for (VertexId u = 0; u < q.vertex_count(); ++u) {
        const auto& w = e.at("witness");
        phi.push_back(w.contains(q.vertex_name(u))
                          ? matrix_from_json(w.at(q.vertex_name(u)), m.dims()[u], simple.dims()[u], F, "witness")
                          : Matrix(m.dims()[u], simple.dims()[u]));
      }
      v.expect(is_homomorphism(m, simple, phi), name + " " + key + ": witness is not a homomorphism");
      bool invertible = true;
      for (const auto& blk : phi)
        if (blk.rows() && !inverse(F, blk)) invertible = false;
      v.expect(invertible, name + " " + key + ": witness is not invertible");
      if (!rank) rank = std::string(key) == "omega2" ? 1 : 2;
    }
    v.expect(rank == s.at("tube_rank").get<int>(), name + ": tube rank does not match the witnesses");
    v.expect(rank == 1 || rank == 2, name + ": no periodicity witness");
  }
  return v;
}

inline VerifyResult verify_document(const nlohmann::json& j, const BasisOptions& opts = {}) {
  if (!j.is_object() || !j.contains("kind")) throw ParseError("document has no 'kind' field");
  const auto kind = j["kind"].get<std::string>();
  try {
    if (kind == "growth-certificate") return verify_growth_certificate(j);
    if (kind == "periodicity-report") return verify_periodicity_report(j, opts);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed ") + kind + ": " + e.what());
  }
  throw ParseError("unknown document kind '" + kind + "'");
}

}  // namespace jacalg
