#include <gtest/gtest.h>

#include <algorithm>

#include "jacalg/qp.hpp"

using namespace jacalg;

namespace {

Triangulation sphere3() {
  Triangulation t;
  t.surface = {0, {"p1", "p2", "p3"}};
  t.arcs = {{"a", {"p1", "p2"}}, {"b", {"p2", "p3"}}, {"c", {"p3", "p1"}}};
  t.triangles = {{"a", "b", "c"}, {"a", "c", "b"}};
  return t;
}

std::vector<Triangulation> quiver_fixtures() {
  return {fixtures::once_punctured_torus(), fixtures::genus2_one_puncture(), fixtures::tetrahedron_sphere4()};
}

Path P(const Quiver& q, const char* text) { return parse_path(q, text); }

}  // namespace

TEST(BuildQuiver, Torus) {
  auto q = build_quiver(fixtures::once_punctured_torus());
  EXPECT_EQ(q.vertex_count(), 3u);
  EXPECT_EQ(q.arrow_count(), 6u);
  // Around the triangle x, y, z: two parallel arrows on each side, one orientation.
  std::map<std::pair<VertexId, VertexId>, int> count;
  for (const auto& a : q.arrows()) ++count[{a.source, a.target}];
  EXPECT_EQ(count.size(), 3u);
  for (const auto& [k, n] : count) EXPECT_EQ(n, 2);
}

TEST(BuildQuiver, Genus2) {
  auto q = build_quiver(fixtures::genus2_one_puncture());
  EXPECT_EQ(q.vertex_count(), 9u);
  EXPECT_EQ(q.arrow_count(), 18u);
}

TEST(BuildQuiver, TwoInTwoOutAndNoTwoCycles) {
  for (const auto& t : quiver_fixtures()) {
    auto q = build_quiver(t);
    for (const auto& a : q.arrows()) {
      EXPECT_EQ(q.arrows_from(a.target).size(), 2u);
      EXPECT_EQ(q.arrows_to(a.target).size(), 2u);
      for (auto b : q.arrows_from(a.target)) EXPECT_NE(q.arrow(b).target, a.source);
    }
  }
}

TEST(BuildQuiver, RejectsSelfFolded) {
  try {
    build_quiver(fixtures::sphere5());
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("self-folded triangle 0"), std::string::npos);
  }
}

TEST(BuildQuiver, RejectsLowValency) {
  auto t = sphere3();
  ASSERT_TRUE(validate_triangulation(t).ok());
  try {
    build_quiver(t);
    FAIL();
  } catch (const PreconditionError& e) {
    EXPECT_NE(std::string(e.what()).find("valency < 3 puncture 'p1'"), std::string::npos);
  }
}

TEST(BuildQuiver, RejectsInvalid) {
  auto t = fixtures::once_punctured_torus();
  t.arcs.pop_back();
  EXPECT_THROW(build_quiver(t), PreconditionError);
}

TEST(Sphere5Figure, ShapeAndPartialPotential) {
  auto q = fixtures::sphere5_figure_quiver();
  EXPECT_EQ(q.vertex_count(), 9u);
  EXPECT_EQ(q.arrow_count(), 15u);
  auto w = fixtures::sphere5_partial_potential(q);
  EXPECT_EQ(w.size(), 2u);
  auto d = cyclic_derivative(q, w, q.arrow_id("a1"));
  ASSERT_EQ(d.size(), 1u);
  EXPECT_EQ(format_combination(q, d), "b4.c4.a3");
}

TEST(Potential, TorusTerms) {
  auto t = fixtures::once_punctured_torus();
  auto q = build_quiver(t);
  auto w = build_potential(t, q);
  ASSERT_EQ(w.size(), 3u);
  int triangles = 0, punctures = 0;
  for (const auto& [c, coef] : w.terms()) {
    if (c.arrows.size() == 3) {
      EXPECT_EQ(coef, 1);
      ++triangles;
    } else {
      EXPECT_EQ(c.arrows.size(), 6u);
      EXPECT_EQ(coef, -1);
      ++punctures;
    }
  }
  EXPECT_EQ(triangles, 2);
  EXPECT_EQ(punctures, 1);
}

TEST(Potential, Genus2Terms) {
  auto t = fixtures::genus2_one_puncture();
  auto q = build_quiver(t);
  auto w = build_potential(t, q);
  std::map<std::size_t, int> by_len;
  for (const auto& [c, coef] : w.terms()) ++by_len[c.arrows.size()];
  EXPECT_EQ(by_len[3], 6);
  EXPECT_EQ(by_len[18], 1);
  EXPECT_EQ(by_len.size(), 2u);
}

TEST(Potential, DefaultScalars) {
  auto t = fixtures::tetrahedron_sphere4();
  auto q = build_quiver(t);
  std::map<std::string, std::int64_t> ones{{"v1", 1}, {"v2", 1}, {"v3", 1}, {"v4", 1}};
  EXPECT_EQ(build_potential(t, q), build_potential(t, q, ones, false));
  EXPECT_THROW(build_potential(t, q, {{"v1", 1}}, false), PreconditionError);
  auto scaled = build_potential(t, q, {{"v2", 5}});
  int fives = 0;
  for (const auto& [c, coef] : scaled.terms()) fives += coef == -5;
  EXPECT_EQ(fives, 1);
}

TEST(ArrowMaps, FIsOrderThreeOnTriangles) {
  for (const auto& t : quiver_fixtures()) {
    auto q = build_quiver(t);
    auto m = arrow_maps(t, q);
    for (ArrowId a = 0; a < q.arrow_count(); ++a) {
      EXPECT_EQ(iterate(m.f, a, 3), a);
      EXPECT_NE(m.f[a], a);
      EXPECT_EQ(q.arrow(a).target, q.arrow(m.f[a]).source);
      EXPECT_EQ(m.f[a] / 3, a / 3);
    }
  }
}

TEST(ArrowMaps, GOrbitsMatchValencies) {
  for (const auto& t : quiver_fixtures()) {
    auto q = build_quiver(t);
    auto m = arrow_maps(t, q);
    std::vector<std::size_t> lens, vals;
    std::size_t total = 0;
    for (const auto& o : permutation_orbits(m.g)) {
      lens.push_back(o.size());
      total += o.size();
      for (std::size_t i = 0; i < o.size(); ++i)
        EXPECT_EQ(q.arrow(o[i]).target, q.arrow(o[(i + 1) % o.size()]).source);
    }
    for (const auto& p : t.surface.punctures) vals.push_back(static_cast<std::size_t>(valency(t, p)));
    std::sort(lens.begin(), lens.end());
    std::sort(vals.begin(), vals.end());
    EXPECT_EQ(lens, vals);
    EXPECT_EQ(total, q.arrow_count());
  }
}

TEST(ArrowMaps, TorusAndGenus2OrbitShapes) {
  auto t = fixtures::once_punctured_torus();
  auto m = arrow_maps(t, build_quiver(t));
  EXPECT_EQ(permutation_orbits(m.f).size(), 2u);
  ASSERT_EQ(permutation_orbits(m.g).size(), 1u);
  EXPECT_EQ(permutation_orbits(m.g)[0].size(), 6u);
  auto u = fixtures::genus2_one_puncture();
  auto n = arrow_maps(u, build_quiver(u));
  EXPECT_EQ(permutation_orbits(n.f).size(), 6u);
  ASSERT_EQ(permutation_orbits(n.g).size(), 1u);
  EXPECT_EQ(permutation_orbits(n.g)[0].size(), 18u);
}

TEST(ArrowMaps, GAgreesWithPotentialCycles) {
  for (const auto& t : quiver_fixtures()) {
    auto q = build_quiver(t);
    auto m = arrow_maps(t, q);
    auto w = build_potential(t, q);
    for (const auto& o : permutation_orbits(m.g)) {
      auto c = CyclicPath::canonical(q, o);
      ASSERT_TRUE(w.terms().count(c));
      EXPECT_EQ(w.terms().at(c), -1);
    }
  }
}

TEST(CyclicDerivative, SingleOccurrence) {
  Quiver q;
  for (const char* v : {"1", "2", "3"}) q.add_vertex(v);
  q.add_arrow("a", "1", "2");
  q.add_arrow("b", "2", "3");
  q.add_arrow("c", "3", "1");
  Potential w;
  w.add_term(q, {0, 1, 2}, 1);
  EXPECT_EQ(format_combination(q, cyclic_derivative(q, w, 0)), "b.c");
  auto rels = jacobian_relations(q, w);
  ASSERT_EQ(rels.size(), 3u);
  EXPECT_EQ(format_combination(q, rels[0]), "b.c");
  EXPECT_EQ(format_combination(q, rels[1]), "c.a");
  EXPECT_EQ(format_combination(q, rels[2]), "a.b");
}

TEST(CyclicDerivative, RepeatedLoop) {
  auto q = fixtures::dual_numbers_quiver();
  Potential w;
  w.add_term(q, {0, 0}, 1);
  EXPECT_EQ(format_combination(q, cyclic_derivative(q, w, 0)), "2*x");
}

TEST(CyclicDerivative, ZeroPotential) {
  auto q = fixtures::dual_numbers_quiver();
  EXPECT_TRUE(jacobian_relations(q, Potential{}).empty());
}

TEST(CyclicDerivative, RotationInvariance) {
  auto t = fixtures::genus2_one_puncture();
  auto q = build_quiver(t);
  auto w = build_potential(t, q);
  for (const auto& [c, coef] : w.terms()) {
    for (std::size_t r = 0; r < c.arrows.size(); ++r) {
      std::vector<ArrowId> rot(c.arrows.begin() + static_cast<std::ptrdiff_t>(r), c.arrows.end());
      rot.insert(rot.end(), c.arrows.begin(), c.arrows.begin() + static_cast<std::ptrdiff_t>(r));
      Potential a, b;
      a.add_term(q, c.arrows, coef);
      b.add_term(q, rot, coef);
      for (ArrowId x = 0; x < q.arrow_count(); ++x) EXPECT_EQ(cyclic_derivative(q, a, x), cyclic_derivative(q, b, x));
    }
  }
}

TEST(CyclicDerivative, Linearity) {
  auto t = fixtures::once_punctured_torus();
  auto q = build_quiver(t);
  auto w = build_potential(t, q);
  Potential twice;
  for (const auto& [c, coef] : w.terms()) twice.add_term(q, c.arrows, 2 * coef);
  for (ArrowId a = 0; a < q.arrow_count(); ++a) {
    auto d = cyclic_derivative(q, w, a);
    for (auto& term : d) term.coef *= 2;
    EXPECT_EQ(cyclic_derivative(q, twice, a), d);
  }
}

TEST(JacobianRelations, TorusShape) {
  auto t = fixtures::once_punctured_torus();
  auto q = build_quiver(t);
  auto rels = jacobian_relations(q, build_potential(t, q));
  ASSERT_EQ(rels.size(), 6u);
  for (const auto& r : rels) {
    ASSERT_EQ(r.size(), 2u);
    EXPECT_EQ(r[0].path.length(), 2u);
    EXPECT_EQ(r[0].coef, 1);
    EXPECT_EQ(r[1].path.length(), 5u);
    EXPECT_EQ(r[1].coef, -1);
    EXPECT_TRUE(is_composable(q, r[0].path));
    EXPECT_TRUE(is_composable(q, r[1].path));
    EXPECT_EQ(path_end(q, r[0].path), path_end(q, r[1].path));
  }
}

TEST(Serialization, RoundTrips) {
  auto t = fixtures::genus2_one_puncture();
  auto q = build_quiver(t);
  auto w = build_potential(t, q);
  auto q2 = quiver_from_json(to_json(q));
  EXPECT_EQ(q2, q);
  EXPECT_EQ(potential_from_json(q2, to_json(q, w)), w);
  auto rels = jacobian_relations(q, w);
  EXPECT_EQ(relations_from_json(q2, relations_to_json(q, rels)), rels);
}

TEST(Serialization, RejectsUnknownFields) {
  auto j = to_json(fixtures::dual_numbers_quiver());
  j["extra"] = 1;
  EXPECT_THROW(quiver_from_json(j), ParseError);
}

TEST(Dot, StableOrdering) {
  auto t = fixtures::once_punctured_torus();
  auto dot = to_dot(build_quiver(t));
  EXPECT_EQ(dot, to_dot(build_quiver(t)));
  EXPECT_EQ(dot.rfind("digraph Q {\n", 0), 0u);
  EXPECT_LT(dot.find("\"x\";"), dot.find("\"y\";"));
  EXPECT_LT(dot.find("t0a"), dot.find("t1c"));
}

TEST(Paths, ParseAndFormat) {
  auto q = fixtures::sphere5_figure_quiver();
  EXPECT_EQ(format_path(q, P(q, "a1.b4.c4")), "a1.b4.c4");
  EXPECT_EQ(format_path(q, P(q, "e_3")), "e_3");
  EXPECT_THROW(P(q, "a1.a1"), ParseError);
  EXPECT_THROW(P(q, "a1..b1"), ParseError);
}
