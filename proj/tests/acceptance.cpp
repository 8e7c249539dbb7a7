// Acceptance run: one line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <set>
#include <string>

#include "jacalg/jacalg.hpp"
#include "oracles/dense_quotient.hpp"
#include "oracles/naive_words.hpp"

using namespace jacalg;

namespace {

struct Outcome {
  bool pass = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && pass) {
      pass = false;
      note = what;
    }
  }
};

int failures = 0;

void run(const char* id, const char* title, double limit_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.note = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0 && secs >= limit_s) o.require(false, "took " + std::to_string(secs) + " s, limit " + std::to_string(limit_s) + " s");
  if (!o.pass) ++failures;
  std::printf("%s %s  %s  (%.2f s)%s%s\n", id, o.pass ? "PASS" : "FAIL", title, secs, o.note.empty() ? "" : "  ",
              o.note.c_str());
  std::fflush(stdout);
}

struct Quotient {
  Triangulation t;
  Quiver q;
  ArrowMaps maps;
  WordPresentation p;
};

Quotient quotient(Triangulation t) {
  auto q = build_quiver(t);
  auto maps = arrow_maps(t, q);
  auto p = string_quotient(q, maps);
  return {std::move(t), std::move(q), std::move(maps), std::move(p)};
}

Word random_word(const WordPresentation& p, std::mt19937_64& rng) {
  auto letters = p.letters();
  std::uniform_int_distribution<std::size_t> len(1, 14), pick(0, letters.size() - 1);
  const std::size_t n = len(rng);
  Word w{letters[pick(rng)]};
  const bool walk = rng() % 2;
  while (w.size() < n) {
    if (!walk) {
      w.push_back(letters[pick(rng)]);
      continue;
    }
    std::vector<Letter> next;
    for (auto l : letters)
      if (p.start(l) == p.end(w.back())) next.push_back(l);
    if (next.empty()) break;
    w.push_back(next[rng() % next.size()]);
  }
  return w;
}

}  // namespace

int main() {
  const auto s5 = sphere5_presentation();
  const Word alpha = parse_word(s5, "a1.a2'.a3");
  const Word beta = parse_word(s5, "a1.b2.e2*.c2.c3'.e3*.b3'");

  run("AC1", "sphere-5 bands and free composability", 5, [&](Outcome& o) {
    o.require(is_band(s5, alpha).ok, "alpha is not a band");
    o.require(is_band(s5, beta).ok, "beta is not a band");
    o.require(is_band(s5, compose(s5, alpha, beta)).ok, "alpha beta is not a band");
    o.require(is_band(s5, compose(s5, beta, alpha)).ok, "beta alpha is not a band");
    auto r = free_composability(s5, alpha, beta, 6);
    o.require(r.certified, "no certificate: " + r.failure.condition + " " + r.failure.detail);
    o.require(r.necklaces_checked == binary_lyndon_words(6).size(), "necklace count");
    o.require(verify_document(growth_certificate(s5, alpha, beta, r, "sphere5")).ok(), "certificate does not verify");
  });

  run("AC2", "sphere-5 band growth and enumeration oracle", 60, [&](Outcome& o) {
    const std::size_t n = 20;
    auto e = enumerate_bands(s5, n, {n, 0});
    auto g = growth_report(e.raw);
    o.require(g.rate > 1.05, "rate " + std::to_string(g.rate) + " <= 1.05");
    o.require(g.exponential, "growth estimate is not exponential");
    // Every Lyndon composition of alpha and beta is a distinct listed band.
    auto family = necklace_family_counts(alpha.size(), beta.size(), n);
    std::set<Word> listed(e.bands.begin(), e.bands.end()), images;
    for (const auto& u : binary_lyndon_words(n / alpha.size())) {
      auto w = blocks_to_word(alpha, beta, u);
      if (w.size() > n) continue;
      auto c = canonical_band(s5, w);
      o.require(listed.count(c) == 1, "composition " + format_word(s5, w) + " missing from the enumeration");
      images.insert(c);
    }
    std::uint64_t family_total = 0;
    for (std::size_t d = 1; d <= n; ++d) {
      family_total += family[d];
      o.require(e.raw[d] >= family[d], "b(" + std::to_string(d) + ") below the necklace family");
    }
    o.require(images.size() == family_total, "necklace compositions are not injective");
    auto small = enumerate_bands(s5, 8, {8, 0});
    auto naive = oracle::naive_band_counts(s5, 8);
    o.require(small.raw == naive.raw && small.paired == naive.paired, "counts differ from the naive oracle");
    std::set<oracle::NaiveWord> mine;
    for (const auto& w : small.bands) mine.insert(oracle::from_word(w));
    o.require(mine == naive.classes, "band list differs from the naive oracle");
  });

  const auto g2 = quotient(fixtures::genus2_one_puncture());
  run("AC3", "genus-2 xi and eta bands, free composability", 30, [&](Outcome& o) {
    o.require(valency(g2.t, g2.t.surface.punctures.front()) == 18, "valency is not 18");
    o.require(!has_self_folded(g2.t), "fixture has a self-folded triangle");
    for (ArrowId a = 0; a < g2.q.arrow_count(); ++a) {
      const auto name = g2.q.arrow(a).name;
      auto parts = xi_parts(g2.maps, a);
      auto eta = build_eta(g2.p, g2.maps, a);
      o.require(is_band(g2.p, parts.xi).ok, "xi(" + name + ") is not a band");
      o.require(is_band(g2.p, eta).ok, "eta(" + name + ") is not a band");
      std::vector<ArrowId> expect;
      for (std::size_t k = 0; k + 3 <= orbit_length(g2.maps.g, a); ++k) expect.push_back(iterate(g2.maps.g, a, k));
      o.require(xi_parts(g2.maps, g2.maps.g[parts.beta]).rho2 == direct_word(expect), "rho2(g beta) for " + name);
      auto r = free_composability(g2.p, parts.xi, eta, 6);
      o.require(r.certified, "xi, eta for " + name + ": " + r.failure.condition + " " + r.failure.detail);
    }
  });

  run("AC4", "f and g orbit structure", 0, [&](Outcome& o) {
    for (const auto& t : {fixtures::once_punctured_torus(), fixtures::genus2_one_puncture()}) {
      auto q = build_quiver(t);
      auto maps = arrow_maps(t, q);
      for (ArrowId a = 0; a < q.arrow_count(); ++a) {
        o.require(iterate(maps.f, a, 3) == a, "f^3 is not the identity");
        o.require(q.arrow(a).target == q.arrow(maps.f[a]).source, "f does not compose");
        o.require(q.arrow(a).target == q.arrow(maps.g[a]).source, "g does not compose");
      }
      auto forbits = permutation_orbits(maps.f);
      o.require(forbits.size() == t.triangles.size(), "f-orbit count differs from the triangle count");
      for (const auto& orbit : forbits) {
        std::set<ArrowId> got(orbit.begin(), orbit.end()), want{orbit[0], orbit[0] + 1, orbit[0] + 2};
        o.require(orbit.size() == 3 && orbit[0] % 3 == 0 && got == want, "f-orbit is not a triangle 3-cycle");
      }
      std::multiset<std::size_t> lengths, valencies;
      auto gorbits = permutation_orbits(maps.g);
      for (const auto& orbit : gorbits) {
        lengths.insert(orbit.size());
        o.require(is_composable(q, Path{q.arrow(orbit[0]).source, orbit}), "g-orbit is not a path");
        o.require(q.arrow(orbit.back()).target == q.arrow(orbit.front()).source, "g-orbit does not close");
      }
      for (const auto& p : t.surface.punctures) valencies.insert(static_cast<std::size_t>(valency(t, p)));
      o.require(lengths == valencies, "g-orbit lengths differ from the valencies");
    }
  });

  auto torus_t = fixtures::once_punctured_torus();
  auto torus_q = build_quiver(torus_t);
  auto torus_rels = jacobian_relations(torus_q, build_potential(torus_t, torus_q));
  std::shared_ptr<const FDAlgebra> torus;

  run("AC5", "torus algebra facts and simple counts", 0, [&](Outcome& o) {
    torus = std::make_shared<const FDAlgebra>(compute_basis(torus_q, torus_rels, kDefaultModulus, {40, 400000}));
    o.require(torus->stabilization_degree() <= 40, "no stabilization within degree 40");
    o.require(cartan_matrix(*torus).determinant() == 0, "Cartan determinant is nonzero");
    o.require(check_weakly_symmetric(*torus).weakly_symmetric, "not weakly symmetric");
    for (const auto& t : {torus_t, fixtures::genus2_one_puncture()}) {
      const auto expect = 6 * (t.surface.genus - 1) + 3 * static_cast<int>(t.surface.punctures.size());
      o.require(static_cast<int>(build_quiver(t).vertex_count()) == expect, "simple count differs from 6(g-1)+3p");
    }
    o.require(torus->quiver().vertex_count() == 3, "torus has other than 3 simples");
  });

  run("AC6", "torus simples are Omega-periodic of period dividing 4", 60, [&](Outcome& o) {
    if (!torus) torus = std::make_shared<const FDAlgebra>(compute_basis(torus_q, torus_rels, kDefaultModulus));
    std::vector<SimplePeriodicity> entries;
    for (VertexId v = 0; v < torus->quiver().vertex_count(); ++v) {
      entries.push_back(simple_periodicity(torus, v, 20, 1));
      const auto& e = entries.back();
      o.require(e.omega4.verdict == IsoVerdict::kIso, "Omega^4 of simple " + torus->quiver().vertex_name(v) + " is " +
                                                          to_string(e.omega4.verdict));
      o.require(e.tube_rank() == 1 || e.tube_rank() == 2, "tube rank outside {1, 2}");
    }
    auto report = periodicity_report(*torus, entries, true);
    o.require(verify_document(report).ok(), "periodicity report does not verify");
  });

  run("AC7", "oracle suites", 0, [&](Outcome& o) {
    struct Case {
      std::string name;
      Quiver q;
      RelationSet rels;
    };
    std::vector<Case> cases;
    for (auto [name, t] : {std::pair{"torus", fixtures::once_punctured_torus()}, {"genus2", fixtures::genus2_one_puncture()},
                           {"tetrahedron", fixtures::tetrahedron_sphere4()}}) {
      auto q = build_quiver(t);
      cases.push_back({name, q, jacobian_relations(q, build_potential(t, q))});
    }
    auto fig = fixtures::sphere5_figure_quiver();
    cases.push_back({"sphere5-figure", fig, jacobian_relations(fig, fixtures::sphere5_partial_potential(fig))});
    cases.push_back({"dual-numbers", fixtures::dual_numbers_quiver(), fixtures::dual_numbers_relations()});
    for (const auto& c : cases)
      for (std::size_t D = 1; D <= 6; ++D)
        o.require(truncated_graded_dims(c.q, c.rels, kDefaultModulus, D) == oracle::dense_graded_dims(c.q, c.rels, kDefaultModulus, D),
                  c.name + ": graded dimensions differ from the dense quotient at D=" + std::to_string(D));

    std::mt19937_64 rng(20240601);
    const auto torus_quotient = quotient(fixtures::once_punctured_torus());
    for (const WordPresentation* p : {&s5, &g2.p, &torus_quotient.p})
      for (int i = 0; i < 10000; ++i) {
        auto w = random_word(*p, rng);
        auto fast = is_string(*p, w);
        o.require((fast.ok ? std::string() : fast.condition) == oracle::string_violation(*p, oracle::from_word(w)),
                  "is_string disagrees on " + format_word(*p, w));
      }

    std::size_t audited = 0;
    for (const auto& c : cases) {
      try {
        auto a = compute_basis(c.q, c.rels, kDefaultModulus);
        if (a.dim() > 200) continue;
        o.require(!find_associativity_failure(a).has_value(), c.name + ": multiplication is not associative");
        ++audited;
      } catch (const NonStabilization&) {
      }
    }
    o.require(audited >= 2, "fewer than two algebras audited for associativity");
  });

  return failures ? 1 : 0;
}
