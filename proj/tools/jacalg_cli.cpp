// jacalg: triangulation -> quiver with potential -> Jacobian algebra ->
// growth certificates and periodicity reports.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "jacalg/jacalg.hpp"

namespace {

using namespace jacalg;
namespace fs = std::filesystem;

struct RunConfig {
  std::string input;
  std::string builtin;
  std::uint32_t field = kDefaultModulus;
  std::size_t max_deg = 40;
  std::size_t max_len = 20;
  std::size_t depth = 6;
  std::uint64_t seed = 1;
  int trials = 20;
  unsigned threads = 0;
  std::string format = "text";
  std::string out;
};

const std::vector<std::string> kBuiltins{"torus", "genus2", "sphere5", "tetrahedron", "dual-numbers"};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::string& path) {
  try {
    return nlohmann::json::parse(read_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(path + ": malformed JSON: " + e.what());
  }
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.out);
  if (!out) throw Error("cannot write '" + cfg.out + "'");
  out << text;
}

void emit_json(const RunConfig& cfg, const nlohmann::json& j) { emit(cfg, j.dump(2) + "\n"); }

Triangulation builtin_triangulation(const std::string& name) {
  if (name == "torus") return fixtures::once_punctured_torus();
  if (name == "genus2") return fixtures::genus2_one_puncture();
  if (name == "sphere5") return fixtures::sphere5();
  if (name == "tetrahedron") return fixtures::tetrahedron_sphere4();
  throw PreconditionError("builtin '" + name + "' is not a triangulation");
}

Triangulation load_triangulation(const RunConfig& cfg) {
  if (!cfg.builtin.empty()) return builtin_triangulation(cfg.builtin);
  if (cfg.input.empty()) throw PreconditionError("give an input file or --builtin");
  return parse_triangulation(read_file(cfg.input));
}

Triangulation load_valid(const RunConfig& cfg) {
  auto t = load_triangulation(cfg);
  auto report = validate_triangulation(t);
  if (!report.ok()) throw PreconditionError("invalid triangulation: " + report.violations.front().code + ": " + report.violations.front().message);
  return t;
}

struct AlgebraInput {
  Quiver quiver;
  RelationSet relations;
};

AlgebraInput load_algebra_input(const RunConfig& cfg) {
  if (cfg.builtin == "dual-numbers") return {fixtures::dual_numbers_quiver(), fixtures::dual_numbers_relations()};
  auto t = load_valid(cfg);
  auto q = build_quiver(t);
  auto w = build_potential(t, q);
  return {q, jacobian_relations(q, w)};
}

std::shared_ptr<const FDAlgebra> load_algebra(const RunConfig& cfg) {
  auto in = load_algebra_input(cfg);
  BasisOptions opts;
  opts.max_deg = cfg.max_deg;
  return std::make_shared<const FDAlgebra>(compute_basis(in.quiver, in.relations, cfg.field, opts));
}

std::string join(const std::vector<std::size_t>& v, const char* sep = " ") {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
  return s;
}

// ---------------------------------------------------------------------------

int cmd_build(const RunConfig& cfg) {
  Quiver q;
  Potential w;
  nlohmann::json orbits = nlohmann::json::array();
  if (cfg.builtin == "sphere5") {
    // Self-folded triangles: ship the reduced quiver of the figure instead.
    validate_triangulation(fixtures::sphere5());
    q = fixtures::sphere5_figure_quiver();
    w = fixtures::sphere5_partial_potential(q);
  } else {
    auto t = load_valid(cfg);
    q = build_quiver(t);
    w = build_potential(t, q);
    auto maps = arrow_maps(t, q);
    auto g_orbits = permutation_orbits(maps.g);
    auto names = orbit_punctures(t, maps, g_orbits);
    for (const auto& o : permutation_orbits(maps.f)) {
      nlohmann::json arr = nlohmann::json::array();
      for (auto a : o) arr.push_back(q.arrow(a).name);
      orbits.push_back({{"map", "f"}, {"arrows", arr}});
    }
    for (std::size_t i = 0; i < g_orbits.size(); ++i) {
      nlohmann::json arr = nlohmann::json::array();
      for (auto a : g_orbits[i]) arr.push_back(q.arrow(a).name);
      orbits.push_back({{"map", "g"}, {"puncture", names[i]}, {"arrows", arr}});
    }
  }

  if (!cfg.out.empty()) {
    fs::create_directories(cfg.out);
    std::ofstream(fs::path(cfg.out) / "quiver.json") << to_json(q).dump(2) << "\n";
    std::ofstream(fs::path(cfg.out) / "quiver.dot") << to_dot(q);
    std::ofstream(fs::path(cfg.out) / "potential.json") << to_json(q, w).dump(2) << "\n";
    std::ofstream(fs::path(cfg.out) / "orbits.json") << orbits.dump(2) << "\n";
  }
  if (cfg.format == "dot") {
    std::cout << to_dot(q);
  } else if (cfg.format == "json") {
    std::cout << nlohmann::json{{"quiver", to_json(q)}, {"potential", to_json(q, w)}, {"orbits", orbits}}.dump(2) << "\n";
  } else {
    std::cout << "vertices " << q.vertex_count() << "\narrows " << q.arrow_count() << "\npotential terms " << w.size() << "\n";
    for (const auto& [c, coef] : w.terms()) {
      std::cout << "  " << (coef < 0 ? "-" : "+") << (std::abs(coef) == 1 ? "" : std::to_string(std::abs(coef)) + "*")
                << format_path(q, Path{q.arrow(c.arrows.front()).source, c.arrows}) << "\n";
    }
    for (const auto& o : orbits) {
      std::cout << o["map"].get<std::string>() << "-orbit";
      if (o.contains("puncture")) std::cout << " (" << o["puncture"].get<std::string>() << ")";
      std::cout << ":";
      for (const auto& a : o["arrows"]) std::cout << " " << a.get<std::string>();
      std::cout << "\n";
    }
  }
  return 0;
}

int cmd_algebra(const RunConfig& cfg) {
  auto a = load_algebra(cfg);
  auto cartan = cartan_matrix(*a);
  auto ws = check_weakly_symmetric(*a);
  if (cfg.format == "json") {
    auto j = to_json(*a);
    j["weakly_symmetric"] = ws.weakly_symmetric;
    j["cartan_determinant"] = cartan.determinant();
    emit_json(cfg, j);
    return 0;
  }
  std::ostringstream os;
  const auto& q = a->quiver();
  os << "field F_" << a->field().modulus() << "\ndim " << a->dim() << "\nstabilizes at length " << a->stabilization_degree()
     << "\n\n  length  dim\n";
  for (std::size_t d = 0; d < a->graded_dims().size(); ++d)
    os << "  " << std::setw(6) << d << "  " << a->graded_dims()[d] << "\n";
  os << "\ncartan\n";
  for (const auto& row : cartan.entries) {
    os << " ";
    for (auto x : row) os << " " << std::setw(3) << x;
    os << "\n";
  }
  os << "cartan determinant " << cartan.determinant() << "\nweakly symmetric " << (ws.weakly_symmetric ? "yes" : "no") << "\n";
  for (const auto& s : ws.socles) {
    os << "  socle of P(" << q.vertex_name(s.vertex) << "): dim " << s.socle_dim << " at";
    for (auto v : s.support) os << " " << q.vertex_name(v);
    os << "\n";
  }
  emit(cfg, os.str());
  return 0;
}

struct GrowthInput {
  WordPresentation presentation;
  Word w1, w2;
  std::string label;
};

GrowthInput growth_input(const RunConfig& cfg, const std::string& arrow) {
  if (cfg.builtin == "sphere5") {
    auto p = sphere5_presentation();
    Word alpha = parse_word(p, "a1.a2'.a3");
    Word beta = parse_word(p, "a1.b2.e2*.c2.c3'.e3*.b3'");
    return {std::move(p), std::move(alpha), std::move(beta), "sphere5: alpha, beta"};
  }
  auto t = load_valid(cfg);
  if (is_excluded_surface(t.surface)) throw PreconditionError("excluded surface: sphere with at most four punctures");
  if (has_self_folded(t)) throw PreconditionError("triangulation has a self-folded triangle");
  if (min_valency(t) < 4) throw PreconditionError("valency < 4 puncture");
  auto q = build_quiver(t);
  auto maps = arrow_maps(t, q);
  auto p = string_quotient(q, maps);
  ArrowId a = arrow.empty() ? 0 : q.arrow_id(arrow);
  Word xi = build_xi(p, maps, a);
  Word eta = build_eta(p, maps, a);
  return {std::move(p), std::move(xi), std::move(eta), "xi(" + q.arrow(a).name + "), eta"};
}

WordPresentation bands_presentation(const RunConfig& cfg, const std::string& presentation_file) {
  if (!presentation_file.empty()) return presentation_from_json(read_json(presentation_file));
  if (cfg.builtin == "sphere5") return sphere5_presentation();
  auto t = load_valid(cfg);
  auto q = build_quiver(t);
  return string_quotient(q, arrow_maps(t, q));
}

std::string counts_table(const BandEnumeration& e) {
  std::ostringstream os;
  os << "  length       raw    paired\n";
  for (std::size_t d = 1; d <= e.max_len; ++d)
    os << "  " << std::setw(6) << d << "  " << std::setw(8) << e.raw[d] << "  " << std::setw(8) << e.paired[d] << "\n";
  return os.str();
}

std::string growth_text(const GrowthReport& g) {
  std::ostringstream os;
  os << "rate max b(d)^(1/d) = " << std::fixed << std::setprecision(4) << g.rate << "\nhalf-range rate = " << g.half_ratio_rate
     << "\nexponential (estimate) " << (g.exponential ? "yes" : "no") << "\n";
  return os.str();
}

int cmd_bands(const RunConfig& cfg, const std::string& presentation_file, std::size_t list_len) {
  auto p = bands_presentation(cfg, presentation_file);
  auto e = enumerate_bands(p, cfg.max_len, {list_len, cfg.threads});
  auto g = growth_report(e.raw);
  if (cfg.format == "json") {
    nlohmann::json j{{"max_len", e.max_len}, {"raw", e.raw}, {"paired", e.paired}};
    j["bands"] = nlohmann::json::array();
    for (const auto& w : e.bands) j["bands"].push_back(format_word(p, w));
    j["growth"] = {{"rate", g.rate}, {"half_ratio_rate", g.half_ratio_rate}, {"exponential", g.exponential}, {"note", g.note}};
    emit_json(cfg, j);
    return 0;
  }
  std::string text = counts_table(e) + "\n" + growth_text(g);
  for (const auto& w : e.bands) text += "  " + format_word(p, w) + "\n";
  emit(cfg, text);
  return 0;
}

int cmd_certify_growth(const RunConfig& cfg, const std::string& arrow) {
  auto in = growth_input(cfg, arrow);
  auto r = free_composability(in.presentation, in.w1, in.w2, cfg.depth);
  auto cert = growth_certificate(in.presentation, in.w1, in.w2, r, in.label);
  auto e = enumerate_bands(in.presentation, cfg.max_len, {0, cfg.threads});
  auto g = growth_report(e.raw);
  attach_band_counts(cert, e, g);
  if (!r.certified) {
    std::cerr << "certificate refused: " << r.failure.condition << ": " << r.failure.detail << "\n";
    if (cfg.format == "json") emit_json(cfg, cert);
    return 1;
  }
  if (cfg.format == "json" || !cfg.out.empty()) {
    emit_json(cfg, cert);
    if (cfg.format == "json") return 0;
  }
  std::cout << in.label << "\nw1 = " << format_word(in.presentation, in.w1) << "\nw2 = " << format_word(in.presentation, in.w2)
            << "\nfree composability to depth " << cfg.depth << ": certified (" << r.necklaces_checked << " necklaces, "
            << r.window_sequences << " windows of " << r.window_blocks << " blocks)\nscope: " << kGrowthScope << "\n\n"
            << counts_table(e) << "\n" << growth_text(g);
  return 0;
}

int cmd_xi(const RunConfig& cfg, const std::string& arrow, const std::string& labeling) {
  auto t = load_valid(cfg);
  auto q = build_quiver(t);
  auto maps = arrow_maps(t, q);
  auto p = string_quotient(q, maps);
  auto lab = labeling == "swapped" ? XiLabeling::kSwapped : XiLabeling::kStandard;
  std::vector<ArrowId> arrows;
  if (arrow.empty())
    for (ArrowId a = 0; a < q.arrow_count(); ++a) arrows.push_back(a);
  else
    arrows.push_back(q.arrow_id(arrow));
  nlohmann::json out = nlohmann::json::array();
  bool all_bands = true;
  for (auto a : arrows) {
    auto parts = xi_parts(maps, a, lab);
    Word eta = build_eta(p, maps, a, lab);
    auto bx = is_band(p, parts.xi), be = is_band(p, eta);
    all_bands = all_bands && bx.ok && be.ok;
    out.push_back({{"alpha", q.arrow(a).name},
                   {"beta", q.arrow(parts.beta).name},
                   {"gamma", q.arrow(parts.gamma).name},
                   {"delta", q.arrow(parts.delta).name},
                   {"rho1", format_word(p, parts.rho1)},
                   {"rho2", format_word(p, parts.rho2)},
                   {"xi", format_word(p, parts.xi)},
                   {"eta", format_word(p, eta)},
                   {"xi_band", bx.ok},
                   {"eta_band", be.ok}});
  }
  if (cfg.format == "json") {
    emit_json(cfg, out);
  } else {
    std::ostringstream os;
    for (const auto& e : out) {
      os << "alpha " << e["alpha"].get<std::string>() << "  beta " << e["beta"].get<std::string>() << "  gamma "
         << e["gamma"].get<std::string>() << "  delta " << e["delta"].get<std::string>() << "\n  xi  = "
         << e["xi"].get<std::string>() << (e["xi_band"].get<bool>() ? "  [band]" : "  [not a band]") << "\n  eta = "
         << e["eta"].get<std::string>() << (e["eta_band"].get<bool>() ? "  [band]" : "  [not a band]") << "\n";
    }
    emit(cfg, os.str());
  }
  return all_bands ? 0 : 1;
}

int cmd_periodicity(const RunConfig& cfg, const std::string& simple, std::size_t period) {
  auto a = load_algebra(cfg);
  const auto& q = a->quiver();
  bool ws = check_weakly_symmetric(*a).weakly_symmetric;
  std::vector<VertexId> vertices;
  if (simple.empty())
    for (VertexId v = 0; v < q.vertex_count(); ++v) vertices.push_back(v);
  else
    vertices.push_back(q.vertex(simple));

  if (period != 4) {
    // Plain periodicity query for a single period.
    std::ostringstream os;
    bool all = true;
    for (auto v : vertices) {
      auto r = check_periodicity(simple_module(a, v), period, cfg.trials, cfg.seed);
      all = all && r.periodic();
      os << "S(" << q.vertex_name(v) << ") Omega^" << period << ": " << to_string(r.result.verdict) << " (" << r.result.reason << ")\n";
    }
    emit(cfg, os.str());
    return all ? 0 : 1;
  }

  std::vector<SimplePeriodicity> entries;
  for (auto v : vertices) entries.push_back(simple_periodicity(a, v, cfg.trials, cfg.seed));
  bool ok = true;
  for (const auto& e : entries) ok = ok && (e.tube_rank() == 1 || e.tube_rank() == 2);
  if (cfg.format == "json" || !cfg.out.empty()) {
    emit_json(cfg, periodicity_report(*a, entries, ws));
    if (cfg.format == "json") return ok ? 0 : 1;
  }
  std::cout << "algebra dim " << a->dim() << ", weakly symmetric " << (ws ? "yes" : "no")
            << " (tau computed as Omega^2)\n";
  for (const auto& e : entries) {
    std::cout << "S(" << q.vertex_name(e.vertex) << ")\n  Omega-orbit:";
    for (const auto& d : e.orbit_dims) std::cout << " (" << join(d, ",") << ")";
    std::cout << "\n  Omega^2 ~ S: " << to_string(e.omega2.verdict) << "\n  Omega^4 ~ S: " << to_string(e.omega4.verdict)
              << "\n  tau^2 ~ S: " << to_string(e.omega4.verdict) << "\n  tube rank: " << e.tube_rank() << "\n";
  }
  return ok ? 0 : 1;
}

int cmd_syzygy(const RunConfig& cfg, const std::string& module_file, std::size_t power) {
  auto a = load_algebra(cfg);
  auto m = module_from_json(a, read_json(module_file));
  if (!satisfies_relations(m)) throw PreconditionError("module does not satisfy the relations of the algebra");
  auto om = syzygy_power(m, power);
  if (cfg.format == "json") {
    emit_json(cfg, to_json(om));
  } else {
    emit(cfg, "Omega^" + std::to_string(power) + ": dims (" + join(om.dims(), ",") + "), total " + std::to_string(om.total_dim()) + "\n");
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& file) {
  BasisOptions opts;
  opts.max_deg = cfg.max_deg;
  auto r = verify_document(read_json(file), opts);
  for (const auto& f : r.failures) std::cerr << "FAIL " << f << "\n";
  std::cout << (r.ok() ? "verified" : "rejected") << " (" << r.checks << " checks, " << r.failures.size() << " failures)\n";
  return r.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quivers with potential from surface triangulations: Jacobian algebras, band growth, periodicity"};
  app.require_subcommand(1);
  RunConfig cfg;

  app.add_option("--field", cfg.field, "Prime modulus of the ground field")->envname("JACALG_FIELD")->capture_default_str();
  app.add_option("--max-deg", cfg.max_deg, "Largest path length tried when computing a basis")
      ->envname("JACALG_MAX_DEG")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--max-len", cfg.max_len, "Longest band enumerated")
      ->envname("JACALG_MAX_LEN")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--depth", cfg.depth, "Block depth for free composability")
      ->envname("JACALG_DEPTH")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "Seed for randomized isomorphism tests")->envname("JACALG_SEED")->capture_default_str();
  app.add_option("--trials", cfg.trials, "Random trials per isomorphism test")
      ->envname("JACALG_TRIALS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app.add_option("--threads", cfg.threads, "Worker threads for enumeration (0: all cores)")->envname("JACALG_THREADS");
  app.add_option("--format", cfg.format, "Output format")
      ->envname("JACALG_FORMAT")
      ->check(CLI::IsMember({"text", "json", "dot"}))
      ->capture_default_str();

  auto add_input = [&](CLI::App* sub) {
    sub->add_option("input", cfg.input, "Triangulation file");
    sub->add_option("--builtin", cfg.builtin, "Bundled fixture")->check(CLI::IsMember(kBuiltins));
    sub->add_option("-o,--out", cfg.out, "Write output here instead of stdout");
  };

  auto* build = app.add_subcommand("build", "Quiver, potential and f/g orbits of a triangulation");
  add_input(build);

  auto* algebra = app.add_subcommand("algebra", "Basis, graded dimensions and Cartan matrix of the Jacobian algebra");
  add_input(algebra);

  std::string presentation_file;
  std::size_t list_len = 0;
  auto* bands = app.add_subcommand("bands", "Count bands by length");
  add_input(bands);
  bands->add_option("--presentation", presentation_file, "Word presentation file");
  bands->add_option("--list", list_len, "Also list canonical bands up to this length");

  std::string arrow;
  auto* certify = app.add_subcommand("certify-growth", "Certificate of two freely composable bands");
  add_input(certify);
  certify->add_option("--arrow", arrow, "Arrow alpha for xi(alpha) and eta");

  std::string labeling = "standard";
  auto* xi = app.add_subcommand("xi", "The words xi(alpha) and eta on the string quotient");
  add_input(xi);
  xi->add_option("--arrow", arrow, "Arrow alpha (default: all arrows)");
  xi->add_option("--labeling", labeling, "beta/gamma assignment")->check(CLI::IsMember({"standard", "swapped"}));

  std::string simple;
  std::size_t period = 4;
  auto* periodicity = app.add_subcommand("periodicity", "Omega-periodicity of simple modules and tube ranks");
  add_input(periodicity);
  periodicity->add_option("--simple", simple, "Only this vertex");
  periodicity->add_option("--period", period, "Syzygy power")->check(CLI::PositiveNumber);

  std::string module_file;
  std::size_t power = 1;
  auto* syz = app.add_subcommand("syzygy", "Syzygy of a module over the Jacobian algebra");
  add_input(syz);
  syz->add_option("--module", module_file, "Module file")->required();
  syz->add_option("--power", power, "Number of syzygies");

  std::string verify_file;
  auto* verify = app.add_subcommand("verify", "Audit a certificate or periodicity report");
  verify->add_option("file", verify_file, "Document to check")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (!is_prime(cfg.field) || cfg.field >= (1u << 31)) throw PreconditionError("--field must be a prime below 2^31");
    if (*build) return cmd_build(cfg);
    if (*algebra) return cmd_algebra(cfg);
    if (*bands) return cmd_bands(cfg, presentation_file, list_len);
    if (*certify) return cmd_certify_growth(cfg, arrow);
    if (*xi) return cmd_xi(cfg, arrow, labeling);
    if (*periodicity) return cmd_periodicity(cfg, simple, period);
    if (*syz) return cmd_syzygy(cfg, module_file, power);
    if (*verify) return cmd_verify(cfg, verify_file);
  } catch (const NonStabilization& e) {
    std::cerr << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
