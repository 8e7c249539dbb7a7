#include <gtest/gtest.h>

#include "jacalg/certificate.hpp"
#include "jacalg/qp.hpp"

using namespace jacalg;

namespace {

nlohmann::json sphere5_certificate() {
  auto p = sphere5_presentation();
  auto a = parse_word(p, "a1.a2'.a3"), b = parse_word(p, "a1.b2.e2*.c2.c3'.e3*.b3'");
  return growth_certificate(p, a, b, free_composability(p, a, b, 6), "sphere5");
}

std::shared_ptr<const FDAlgebra> torus_algebra() {
  auto t = fixtures::once_punctured_torus();
  auto q = build_quiver(t);
  return std::make_shared<const FDAlgebra>(compute_basis(q, jacobian_relations(q, build_potential(t, q)), kDefaultModulus));
}

nlohmann::json torus_report() {
  static const auto j = [] {
    auto a = torus_algebra();
    std::vector<SimplePeriodicity> entries;
    for (VertexId v = 0; v < 3; ++v) entries.push_back(simple_periodicity(a, v, 20, 1));
    return periodicity_report(*a, entries, check_weakly_symmetric(*a).weakly_symmetric);
  }();
  return j;
}

bool rejected(const nlohmann::json& j) {
  try {
    return !verify_document(j).ok();
  } catch (const ParseError&) {
    return true;
  }
}

}  // namespace

TEST(GrowthCertificate, Sphere5Verifies) {
  auto j = sphere5_certificate();
  EXPECT_TRUE(j["certified"].get<bool>());
  EXPECT_EQ(j["necklaces_checked"], 23);
  auto v = verify_document(j);
  EXPECT_TRUE(v.ok()) << (v.failures.empty() ? "" : v.failures.front());
  EXPECT_GT(v.checks, 4u);
}

TEST(GrowthCertificate, SurvivesSerialization) {
  auto j = nlohmann::json::parse(sphere5_certificate().dump(2));
  EXPECT_TRUE(verify_document(j).ok());
}

TEST(GrowthCertificate, TamperedWordRejected) {
  auto j = sphere5_certificate();
  j["w2"] = "a1.a2'.a3";
  EXPECT_FALSE(verify_document(j).ok());
}

TEST(GrowthCertificate, TamperedPresentationRejected) {
  auto j = sphere5_certificate();
  // Forbidding the first junction of alpha beta breaks the composition.
  j["presentation"]["forbidden"].push_back("a3.a1");
  EXPECT_FALSE(verify_document(j).ok());
}

TEST(GrowthCertificate, TamperedCountsRejected) {
  auto j = sphere5_certificate();
  j["necklaces_checked"] = 24;
  EXPECT_FALSE(verify_document(j).ok());
  j = sphere5_certificate();
  j["certified"] = false;
  EXPECT_FALSE(verify_document(j).ok());
}

TEST(GrowthCertificate, CounterexampleRecorded) {
  auto p = sphere5_presentation();
  auto a = parse_word(p, "a1.a2'.a3");
  auto j = growth_certificate(p, a, a, free_composability(p, a, a, 6), "self");
  EXPECT_FALSE(j["certified"].get<bool>());
  EXPECT_EQ(j["counterexample"]["condition"], "primitive");
  EXPECT_FALSE(verify_document(j).ok());
}

TEST(PeriodicityReport, TorusVerifies) {
  auto j = torus_report();
  ASSERT_EQ(j["simples"].size(), 3u);
  for (const auto& s : j["simples"]) {
    EXPECT_EQ(s["tube_rank"], 2);
    EXPECT_EQ(s["omega4"]["verdict"], "iso");
    EXPECT_EQ(s["omega2"]["verdict"], "no-iso");
    EXPECT_EQ(s["orbit_dims"].size(), 5u);
  }
  auto v = verify_document(j);
  EXPECT_TRUE(v.ok()) << (v.failures.empty() ? "" : v.failures.front());
}

TEST(PeriodicityReport, TamperedWitnessRejected) {
  auto j = torus_report();
  auto& w = j["simples"][0]["omega4"]["witness"];
  w[w.begin().key()] = nlohmann::json::array({nlohmann::json::array({0})});
  EXPECT_FALSE(verify_document(j).ok());
}

TEST(PeriodicityReport, TamperedRankRejected) {
  auto j = torus_report();
  j["simples"][1]["tube_rank"] = 1;
  EXPECT_FALSE(verify_document(j).ok());
}

TEST(PeriodicityReport, TamperedModuleRejected) {
  auto j = torus_report();
  // A genuine module, but not the one the witness is for.
  j["simples"][2]["omega4"]["module"] = to_json(syzygy_power(simple_module(torus_algebra(), 2), 2));
  EXPECT_TRUE(rejected(j));
}

TEST(VerifyDocument, UnknownKind) {
  EXPECT_THROW(verify_document(nlohmann::json{{"kind", "poem"}}), ParseError);
  EXPECT_THROW(verify_document(nlohmann::json::array()), ParseError);
  EXPECT_THROW(verify_document(nlohmann::json{{"kind", "growth-certificate"}}), ParseError);
}
