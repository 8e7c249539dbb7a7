#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "jacalg/field.hpp"
#include "jacalg/qp.hpp"
#include "jacalg/quiver.hpp"
#include "json.hpp"

namespace jacalg {

enum class LetterKind : std::uint8_t { kDirect = 0, kInverse = 1, kSpecial = 2 };

// A letter of a word: an arrow, a formal inverse, or a special loop
// written e* which is its own inverse.
struct Letter {
  ArrowId arrow = 0;
  LetterKind kind = LetterKind::kDirect;

  // Total order used for canonical rotations.
  std::uint32_t index() const { return 3 * arrow + static_cast<std::uint32_t>(kind); }
  static Letter from_index(std::uint32_t i) { return {i / 3, static_cast<LetterKind>(i % 3)}; }

  auto operator<=>(const Letter& o) const { return index() <=> o.index(); }
  bool operator==(const Letter& o) const { return index() == o.index(); }
};

using Word = std::vector<Letter>;

inline Letter inverse(Letter l) {
  switch (l.kind) {
    case LetterKind::kDirect: return {l.arrow, LetterKind::kInverse};
    case LetterKind::kInverse: return {l.arrow, LetterKind::kDirect};
    case LetterKind::kSpecial: return l;
  }
  return l;
}

inline Word inverse(const Word& w) {
  Word r;
  r.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) r.push_back(inverse(*it));
  return r;
}

// Quiver with special loops, monomial forbidden words and a clan
// comparability relation. Forbidden words are arrow paths; a special
// letter e* never matches the arrow e inside a forbidden word.
// Comparability pairs are stored in left-to-right reading: (x, y) relates
// two letters with the same start vertex, and a word may not contain
// l_i l_{i+1} with (l_i^-1, l_{i+1}) comparable.
struct WordPresentation {
  Quiver quiver;
  std::vector<bool> special;  // per arrow
  std::vector<std::vector<ArrowId>> forbidden;
  bool quadratic_special = false;  // e^2 - e relations; forbids e* e* (already excluded by W1)
  std::set<std::pair<std::uint32_t, std::uint32_t>> comparable;

  bool is_special(ArrowId a) const { return a < special.size() && special[a]; }

  VertexId start(Letter l) const {
    const auto& a = quiver.arrow(l.arrow);
    return l.kind == LetterKind::kInverse ? a.target : a.source;
  }
  VertexId end(Letter l) const {
    const auto& a = quiver.arrow(l.arrow);
    return l.kind == LetterKind::kInverse ? a.source : a.target;
  }

  bool is_letter(Letter l) const {
    if (l.arrow >= quiver.arrow_count()) return false;
    return is_special(l.arrow) == (l.kind == LetterKind::kSpecial);
  }

  std::vector<Letter> letters() const {
    std::vector<Letter> out;
    for (ArrowId a = 0; a < quiver.arrow_count(); ++a) {
      if (is_special(a)) out.push_back({a, LetterKind::kSpecial});
      else {
        out.push_back({a, LetterKind::kDirect});
        out.push_back({a, LetterKind::kInverse});
      }
    }
    return out;
  }

  bool are_comparable(Letter x, Letter y) const {
    return comparable.count({x.index(), y.index()}) || comparable.count({y.index(), x.index()});
  }

  void add_comparable(Letter x, Letter y) {
    if (!is_letter(x) || !is_letter(y)) throw PreconditionError("comparability pair uses an unknown letter");
    if (start(x) != start(y)) throw PreconditionError("comparable letters must share a start vertex");
    comparable.insert({x.index(), y.index()});
  }

  std::size_t max_forbidden_length() const {
    std::size_t m = 0;
    for (const auto& f : forbidden) m = std::max(m, f.size());
    return m;
  }
};

inline void validate_presentation(const WordPresentation& p) {
  const auto& q = p.quiver;
  if (p.special.size() != q.arrow_count()) throw PreconditionError("presentation: special flags do not match arrows");
  for (ArrowId a = 0; a < q.arrow_count(); ++a)
    if (p.special[a] && q.arrow(a).source != q.arrow(a).target)
      throw PreconditionError("presentation: special arrow '" + q.arrow(a).name + "' is not a loop");
  for (const auto& f : p.forbidden) {
    if (f.empty()) throw PreconditionError("presentation: empty forbidden word");
    if (!is_composable(q, Path{q.arrow(f.front()).source, f}))
      throw PreconditionError("presentation: forbidden word is not composable");
  }
  for (auto [x, y] : p.comparable) {
    auto lx = Letter::from_index(x), ly = Letter::from_index(y);
    if (!p.is_letter(lx) || !p.is_letter(ly) || p.start(lx) != p.start(ly))
      throw PreconditionError("presentation: invalid comparability pair");
  }
}

// ---------------------------------------------------------------------------
// Text syntax: letters joined by '.', inverse as name', special as name*.

inline std::string format_letter(const WordPresentation& p, Letter l) {
  const auto& name = p.quiver.arrow(l.arrow).name;
  switch (l.kind) {
    case LetterKind::kDirect: return name;
    case LetterKind::kInverse: return name + "'";
    case LetterKind::kSpecial: return name + "*";
  }
  return name;
}

inline std::string format_word(const WordPresentation& p, const Word& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += '.';
    s += format_letter(p, w[i]);
  }
  return s;
}

inline Letter parse_letter(const WordPresentation& p, std::string_view tok) {
  LetterKind kind = LetterKind::kDirect;
  if (tok.ends_with("'")) {
    kind = LetterKind::kInverse;
    tok.remove_suffix(1);
  } else if (tok.ends_with("*")) {
    kind = LetterKind::kSpecial;
    tok.remove_suffix(1);
  }
  auto a = p.quiver.find_arrow(tok);
  if (!a) throw ParseError("unknown letter '" + std::string(tok) + "'");
  Letter l{*a, kind};
  if (!p.is_letter(l)) {
    if (p.is_special(*a)) throw ParseError("special loop '" + std::string(tok) + "' must be written " + std::string(tok) + "*");
    throw ParseError("'" + std::string(tok) + "' is not a special loop");
  }
  return l;
}

inline Word parse_word(const WordPresentation& p, std::string_view text) {
  Word w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto dot = text.find('.', pos);
    if (dot == std::string_view::npos) dot = text.size();
    auto tok = text.substr(pos, dot - pos);
    if (tok.empty()) throw ParseError("empty letter in word '" + std::string(text) + "'");
    w.push_back(parse_letter(p, tok));
    pos = dot + 1;
  }
  return w;
}

// ---------------------------------------------------------------------------
// Strings and bands

struct WordCheck {
  bool ok = true;
  std::string condition;  // "W1", "W2", "W3", "clan", "empty", "closed", "primitive"
  std::size_t position = 0;  // 1-based, 0 when not positional
  std::string detail;

  explicit operator bool() const { return ok; }
};

namespace detail {

// Forbidden words and their inverses as letter sequences.
inline std::vector<Word> forbidden_patterns(const WordPresentation& p) {
  std::vector<Word> out;
  for (const auto& f : p.forbidden) {
    Word w;
    for (auto a : f) w.push_back({a, LetterKind::kDirect});
    out.push_back(w);
    out.push_back(inverse(w));
  }
  return out;
}

inline bool matches_at(const Word& w, std::size_t i, const Word& pat) {
  if (i + pat.size() > w.size()) return false;
  return std::equal(pat.begin(), pat.end(), w.begin() + static_cast<std::ptrdiff_t>(i));
}

}  // namespace detail

inline WordCheck is_string(const WordPresentation& p, const Word& w) {
  for (auto l : w)
    if (!p.is_letter(l)) throw PreconditionError("is_string: letter outside the presentation");
  if (w.empty()) return {false, "empty", 0, "words are nonempty"};
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (inverse(w[i]) == w[i + 1])
      return {false, "W1", i + 1, format_letter(p, w[i]) + " is followed by its inverse"};
  const auto pats = detail::forbidden_patterns(p);
  for (std::size_t i = 0; i < w.size(); ++i)
    for (std::size_t k = 0; k < pats.size(); ++k)
      if (detail::matches_at(w, i, pats[k]))
        return {false, "W2", i + 1, "factor " + format_word(p, pats[k]) + (k % 2 ? " is an inverse forbidden word" : " is forbidden")};
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (p.end(w[i]) != p.start(w[i + 1]))
      return {false, "W3", i + 1, format_letter(p, w[i]) + " and " + format_letter(p, w[i + 1]) + " do not compose"};
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (p.are_comparable(inverse(w[i]), w[i + 1]))
      return {false, "clan", i + 1,
              format_letter(p, inverse(w[i])) + " and " + format_letter(p, w[i + 1]) + " are comparable"};
  return {};
}

inline bool is_primitive(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d) continue;
    bool period = true;
    for (std::size_t i = d; i < n && period; ++i) period = w[i] == w[i - d];
    if (period) return false;
  }
  return true;
}

// Number of copies of w that expose every junction and forbidden factor.
inline std::size_t power_window(const WordPresentation& p, std::size_t len) {
  std::size_t m = p.max_forbidden_length();
  return std::max<std::size_t>(2, (m + len - 1) / len + 1);
}

inline WordCheck is_band(const WordPresentation& p, const Word& w) {
  for (auto l : w)
    if (!p.is_letter(l)) throw PreconditionError("is_band: letter outside the presentation");
  if (w.empty()) return {false, "empty", 0, "words are nonempty"};
  if (p.end(w.back()) != p.start(w.front())) return {false, "closed", 0, "word does not return to its start vertex"};
  Word power;
  for (std::size_t k = power_window(p, w.size()); k > 0; --k) power.insert(power.end(), w.begin(), w.end());
  auto r = is_string(p, power);
  if (!r.ok) {
    r.detail = "in a power: " + r.detail;
    r.position = (r.position - 1) % w.size() + 1;
    return r;
  }
  if (!is_primitive(w)) return {false, "primitive", 0, "word is a proper power"};
  return {};
}

inline Word least_rotation(const Word& w) {
  Word best = w;
  for (std::size_t r = 1; r < w.size(); ++r) {
    Word rot(w.begin() + static_cast<std::ptrdiff_t>(r), w.end());
    rot.insert(rot.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r));
    if (rot < best) best = std::move(rot);
  }
  return best;
}

inline Word canonical_band(const WordPresentation& p, const Word& w) {
  auto r = is_band(p, w);
  if (!r.ok) throw PreconditionError("canonical_band: not a band (" + r.condition + ": " + r.detail + ")");
  return least_rotation(w);
}

inline Word rotate(const Word& w, std::size_t r) {
  Word out(w.begin() + static_cast<std::ptrdiff_t>(r % w.size()), w.end());
  out.insert(out.end(), w.begin(), w.begin() + static_cast<std::ptrdiff_t>(r % w.size()));
  return out;
}

// Concatenation at a common basepoint; w2 is rotated first, then w1.
inline Word compose(const WordPresentation& p, const Word& w1, const Word& w2) {
  if (w1.empty() || w2.empty()) throw PreconditionError("compose: empty word");
  for (std::size_t i = 0; i < w1.size(); ++i) {
    Word a = rotate(w1, i);
    for (std::size_t j = 0; j < w2.size(); ++j) {
      if (p.start(w2[j]) != p.start(a.front())) continue;
      Word out = a;
      Word b = rotate(w2, j);
      out.insert(out.end(), b.begin(), b.end());
      return out;
    }
  }
  throw PreconditionError("compose: no common basepoint");
}

// ---------------------------------------------------------------------------
// Presentations

// The skewed-gentle quotient for the sphere with five punctures: vertices
// 1..6, special loops e1, e2, e3 at 4, 5, 6.
inline WordPresentation sphere5_presentation() {
  WordPresentation p;
  auto& q = p.quiver;
  for (int v = 1; v <= 6; ++v) q.add_vertex(std::to_string(v));
  q.add_arrow("a1", "1", "2");
  q.add_arrow("a2", "3", "2");
  q.add_arrow("a3", "3", "1");
  q.add_arrow("b1", "2", "4");
  q.add_arrow("b2", "2", "5");
  q.add_arrow("b3", "1", "6");
  q.add_arrow("c1", "4", "1");
  q.add_arrow("c2", "5", "3");
  q.add_arrow("c3", "6", "3");
  q.add_arrow("e1", "4", "4");
  q.add_arrow("e2", "5", "5");
  q.add_arrow("e3", "6", "6");
  p.special.assign(q.arrow_count(), false);
  for (const char* e : {"e1", "e2", "e3"}) p.special[q.arrow_id(e)] = true;
  p.quadratic_special = true;

  auto path = [&](std::string_view text) { return parse_path(q, text).arrows; };
  for (const char* i : {"1", "2", "3"}) {
    std::string s(i);
    p.forbidden.push_back(path("a" + s + ".b" + s));
    p.forbidden.push_back(path("b" + s + ".c" + s));
    p.forbidden.push_back(path("c" + s + ".a" + s));
  }
  for (const char* w : {"b2.e2.c2.a3", "e2.c2.a3.a1", "c2.a3.a1.b2", "a1.b2.e2.c2", "e3.c3.a2.b1.e1.c1",
                        "c3.a2.b1.e1.c1.b3", "a2.b1.e1.c1.b3.e3", "b1.e1.c1.b3.e3.c3", "e1.c1.b3.e3.c3.a2",
                        "c1.b3.e3.c3.a2.b1", "b3.e3.c3.a2.b1.e1"})
    p.forbidden.push_back(path(w));

  // a_i < b_i^-1, b_i < c_i^-1, c_i < a_i^-1, read left to right.
  for (const char* i : {"1", "2", "3"}) {
    std::string s(i);
    auto L = [&](const std::string& name, LetterKind k) { return Letter{q.arrow_id(name), k}; };
    p.add_comparable(L("a" + s, LetterKind::kInverse), L("b" + s, LetterKind::kDirect));
    p.add_comparable(L("b" + s, LetterKind::kInverse), L("c" + s, LetterKind::kDirect));
    p.add_comparable(L("c" + s, LetterKind::kInverse), L("a" + s, LetterKind::kDirect));
  }
  validate_presentation(p);
  return p;
}

// Quotient of the Jacobian algebra by all alpha f(alpha). Each puncture
// relation then leaves the g-path of length n_p - 1 as a zero relation, so
// those monomials are forbidden as well.
inline WordPresentation string_quotient(const Quiver& q, const ArrowMaps& maps) {
  if (maps.f.size() != q.arrow_count() || maps.g.size() != q.arrow_count())
    throw PreconditionError("string_quotient: arrow maps do not match the quiver");
  WordPresentation p;
  p.quiver = q;
  p.special.assign(q.arrow_count(), false);
  for (ArrowId a = 0; a < q.arrow_count(); ++a) {
    if (orbit_length(maps.g, a) < 4)
      throw PreconditionError("string_quotient: puncture of valency < 4 at arrow '" + q.arrow(a).name + "'");
    p.forbidden.push_back({a, maps.f[a]});
  }
  for (ArrowId a = 0; a < q.arrow_count(); ++a) {
    std::vector<ArrowId> run{a};
    for (std::size_t k = 1; k + 1 < orbit_length(maps.g, a); ++k) run.push_back(iterate(maps.g, a, k));
    p.forbidden.push_back(std::move(run));
  }
  validate_presentation(p);
  return p;
}

// ---------------------------------------------------------------------------
// The words xi(alpha) and eta

enum class XiLabeling {
  kStandard,  // gamma = f(alpha), beta = f^2(alpha)
  kSwapped,   // gamma = f^2(alpha), beta = f(alpha)
};

struct XiParts {
  ArrowId alpha = 0, beta = 0, gamma = 0, delta = 0;
  Word rho1, rho2;  // as direct paths
  Word xi;
};

inline Word direct_word(const std::vector<ArrowId>& arrows) {
  Word w;
  for (auto a : arrows) w.push_back({a, LetterKind::kDirect});
  return w;
}

// xi(alpha) = (alpha) rho1^-1 (delta) rho2^-1 with
// rho1 = (g^2 gamma) ... (g^{n-1} gamma), rho2 = (g beta) ... (g^{n-2} beta)
// and delta = f(g gamma).
inline XiParts xi_parts(const ArrowMaps& maps, ArrowId alpha, XiLabeling labeling = XiLabeling::kStandard) {
  if (alpha >= maps.f.size()) throw PreconditionError("xi: unknown arrow");
  XiParts r;
  r.alpha = alpha;
  r.gamma = labeling == XiLabeling::kStandard ? maps.f[alpha] : maps.f[maps.f[alpha]];
  r.beta = labeling == XiLabeling::kStandard ? maps.f[maps.f[alpha]] : maps.f[alpha];
  const std::size_t ng = orbit_length(maps.g, r.gamma), nb = orbit_length(maps.g, r.beta);
  if (ng < 3 || nb < 3) throw PreconditionError("xi: puncture orbit too short");
  std::vector<ArrowId> rho1, rho2;
  for (std::size_t k = 2; k < ng; ++k) rho1.push_back(iterate(maps.g, r.gamma, k));
  for (std::size_t k = 1; k + 1 < nb; ++k) rho2.push_back(iterate(maps.g, r.beta, k));
  r.delta = maps.f[maps.g[r.gamma]];
  r.rho1 = direct_word(rho1);
  r.rho2 = direct_word(rho2);
  r.xi.push_back({alpha, LetterKind::kDirect});
  auto inv1 = inverse(r.rho1);
  r.xi.insert(r.xi.end(), inv1.begin(), inv1.end());
  r.xi.push_back({r.delta, LetterKind::kDirect});
  auto inv2 = inverse(r.rho2);
  r.xi.insert(r.xi.end(), inv2.begin(), inv2.end());
  return r;
}

inline Word build_xi(const WordPresentation& p, const ArrowMaps& maps, ArrowId alpha,
                     XiLabeling labeling = XiLabeling::kStandard) {
  if (maps.f.size() != p.quiver.arrow_count()) throw PreconditionError("xi: arrow maps do not match the presentation");
  return xi_parts(maps, alpha, labeling).xi;
}

// eta = xi(g beta)^-1, a closed word at the source of alpha.
inline Word build_eta(const WordPresentation& p, const ArrowMaps& maps, ArrowId alpha,
                      XiLabeling labeling = XiLabeling::kStandard) {
  auto parts = xi_parts(maps, alpha, labeling);
  return inverse(build_xi(p, maps, maps.g[parts.beta], labeling));
}

// ---------------------------------------------------------------------------
// Free composability of two bands

// Lyndon words over {0, 1} of length 1..depth (one per primitive necklace).
inline std::vector<std::vector<int>> binary_lyndon_words(std::size_t depth) {
  std::vector<std::vector<int>> out;
  if (depth == 0) return out;
  // Duval's generation in lexicographic order.
  std::vector<int> w{0};
  while (!w.empty()) {
    out.push_back(w);
    std::vector<int> next;
    for (std::size_t i = 0; next.size() < depth; ++i) next.push_back(w[i % w.size()]);
    while (!next.empty() && next.back() == 1) next.pop_back();
    if (next.empty()) break;
    next.back() = 1;
    w = std::move(next);
  }
  std::sort(out.begin(), out.end(), [](const auto& x, const auto& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

struct JunctionCheck {
  std::string type;  // "w1w1", "w1w2", "w2w1", "w2w2"
  bool ok = true;
  std::string detail;
};

struct ComposabilityResult {
  bool certified = false;
  std::size_t depth = 0;
  std::vector<JunctionCheck> junctions;
  std::size_t window_blocks = 0;     // block sequences of this length were swept
  std::size_t window_sequences = 0;  // number of sequences checked
  std::size_t necklaces_checked = 0;
  // Counterexample, if any: block sequence and the failing check.
  std::vector<int> counterexample;
  WordCheck failure;
};

inline Word blocks_to_word(const Word& w1, const Word& w2, const std::vector<int>& blocks) {
  Word out;
  for (int b : blocks) {
    const Word& w = b ? w2 : w1;
    out.insert(out.end(), w.begin(), w.end());
  }
  return out;
}

namespace detail {

// String conditions on the factors of `word` that straddle the boundary at
// offset `cut`, within `radius` letters on each side.
inline WordCheck junction_check(const WordPresentation& p, const Word& word, std::size_t cut, std::size_t radius) {
  std::size_t lo = cut > radius ? cut - radius : 0;
  std::size_t hi = std::min(word.size(), cut + radius);
  Word window(word.begin() + static_cast<std::ptrdiff_t>(lo), word.begin() + static_cast<std::ptrdiff_t>(hi));
  return is_string(p, window);
}

}  // namespace detail

// Every word in w1, w2 of block length <= depth that is a Lyndon word in
// the blocks must be a band. The certificate also sweeps all block
// sequences long enough to contain any forbidden factor, which shows every
// composition is a string.
inline ComposabilityResult free_composability(const WordPresentation& p, const Word& w1, const Word& w2, std::size_t depth) {
  ComposabilityResult r;
  r.depth = depth;
  for (const Word* w : {&w1, &w2}) {
    auto b = is_band(p, *w);
    if (!b.ok) {
      r.counterexample = {w == &w1 ? 0 : 1};
      r.failure = b;
      return r;
    }
  }
  if (p.start(w1.front()) != p.start(w2.front())) {
    r.failure = {false, "basepoint", 0, "bands are not based at a common vertex"};
    return r;
  }

  const std::size_t radius = std::max<std::size_t>(p.max_forbidden_length(), 2);
  const Word* ws[2] = {&w1, &w2};
  bool junctions_ok = true;
  for (int x = 0; x < 2; ++x) {
    for (int y = 0; y < 2; ++y) {
      // Pad both sides with powers so the window sees `radius` letters.
      Word left, right;
      while (left.size() < radius) left.insert(left.begin(), ws[x]->begin(), ws[x]->end());
      while (right.size() < radius) right.insert(right.end(), ws[y]->begin(), ws[y]->end());
      Word joined = left;
      joined.insert(joined.end(), right.begin(), right.end());
      auto c = detail::junction_check(p, joined, left.size(), radius);
      JunctionCheck j{std::string("w") + char('1' + x) + "w" + char('1' + y), c.ok, c.ok ? "" : c.condition + ": " + c.detail};
      junctions_ok = junctions_ok && c.ok;
      r.junctions.push_back(std::move(j));
    }
  }
  if (!junctions_ok) {
    for (const auto& j : r.junctions)
      if (!j.ok) {
        r.failure = {false, "junction", 0, j.type + " " + j.detail};
        break;
      }
    return r;
  }

  const std::size_t shortest = std::min(w1.size(), w2.size());
  r.window_blocks = (radius + shortest - 1) / shortest + 2;
  for (std::size_t mask = 0; mask < (std::size_t{1} << r.window_blocks); ++mask) {
    std::vector<int> blocks;
    for (std::size_t i = 0; i < r.window_blocks; ++i) blocks.push_back(static_cast<int>((mask >> i) & 1));
    ++r.window_sequences;
    auto c = is_string(p, blocks_to_word(w1, w2, blocks));
    if (!c.ok) {
      r.counterexample = blocks;
      r.failure = c;
      return r;
    }
  }

  for (const auto& u : binary_lyndon_words(depth)) {
    ++r.necklaces_checked;
    auto c = is_band(p, blocks_to_word(w1, w2, u));
    if (!c.ok) {
      r.counterexample = u;
      r.failure = c;
      return r;
    }
  }
  r.certified = true;
  return r;
}

// ---------------------------------------------------------------------------
// Band enumeration

struct BandEnumeration {
  std::size_t max_len = 0;
  std::vector<std::uint64_t> raw;     // raw[d]: rotation classes of bands of length d
  std::vector<std::uint64_t> paired;  // paired[d]: classes up to inversion as well
  std::vector<Word> bands;            // canonical words up to list_max_len, by length then letters
};

struct EnumerateOptions {
  std::size_t list_max_len = 0;
  unsigned threads = 0;  // 0: hardware concurrency
};

namespace detail {

class BandSearch {
 public:
  BandSearch(const WordPresentation& p, std::size_t max_len, std::size_t list_max_len)
      : p_(p), max_len_(max_len), list_max_len_(list_max_len) {
    for (auto l : p.letters()) letters_.push_back(l.index());
    const std::uint32_t n = 3 * static_cast<std::uint32_t>(p.quiver.arrow_count());
    next_.resize(n);
    for (auto x : letters_)
      for (auto y : letters_) {
        Letter lx = Letter::from_index(x), ly = Letter::from_index(y);
        if (p.end(lx) == p.start(ly) && inverse(lx) != ly && !p.are_comparable(inverse(lx), ly)) next_[x].push_back(y);
      }
    for (const auto& w : forbidden_patterns(p)) {
      std::vector<std::uint32_t> pat;
      for (auto l : w) pat.push_back(l.index());
      patterns_.push_back(std::move(pat));
    }
    window_extra_ = p.max_forbidden_length();
  }

  const std::vector<std::uint32_t>& letters() const { return letters_; }

  void run_from(std::uint32_t first, std::vector<std::uint64_t>& raw, std::vector<std::uint64_t>& paired,
                std::vector<Word>& list) {
    raw_ = &raw;
    paired_ = &paired;
    list_ = &list;
    a_.assign(max_len_ + 1, 0);
    a_[1] = first;
    if (!ends_forbidden(1)) visit(1, 1);
  }

 private:
  // a_[1..t] is a prenecklace with period p.
  void visit(std::size_t t, std::size_t p) {
    if (p == t) consider(t);
    if (t == max_len_) return;
    const std::uint32_t floor = a_[t + 1 - p];
    for (auto y : next_[a_[t]]) {
      if (y < floor) continue;
      a_[t + 1] = y;
      if (ends_forbidden(t + 1)) continue;
      visit(t + 1, y == floor ? p : t + 1);
    }
  }

  bool suffix_matches(const std::vector<std::uint32_t>& w, std::size_t end) const {
    for (const auto& pat : patterns_) {
      if (pat.size() > end) continue;
      if (std::equal(pat.begin(), pat.end(), w.begin() + static_cast<std::ptrdiff_t>(end - pat.size()))) return true;
    }
    return false;
  }

  bool ends_forbidden(std::size_t t) const {
    for (const auto& pat : patterns_) {
      if (pat.size() > t) continue;
      if (std::equal(pat.begin(), pat.end(), a_.begin() + static_cast<std::ptrdiff_t>(t + 1 - pat.size()))) return true;
    }
    return false;
  }

  // a_[1..t] is a Lyndon word and a string; check the cyclic junction.
  void consider(std::size_t t) {
    const std::uint32_t last = a_[t], first = a_[1];
    const auto& nx = next_[last];
    if (std::find(nx.begin(), nx.end(), first) == nx.end()) return;
    if (!patterns_.empty()) {
      const std::size_t total = t + window_extra_;
      buf_.clear();
      for (std::size_t i = 0; i < total; ++i) buf_.push_back(a_[1 + i % t]);
      for (std::size_t e = t + 1; e <= total; ++e)
        if (suffix_matches(buf_, e)) return;
    }
    ++(*raw_)[t];
    Word w;
    for (std::size_t i = 1; i <= t; ++i) w.push_back(Letter::from_index(a_[i]));
    if (!(least_rotation(inverse(w)) < w)) ++(*paired_)[t];
    if (t <= list_max_len_) list_->push_back(std::move(w));
  }

  const WordPresentation& p_;
  std::size_t max_len_;
  std::size_t list_max_len_;
  std::vector<std::uint32_t> letters_;
  std::vector<std::vector<std::uint32_t>> next_;
  std::vector<std::vector<std::uint32_t>> patterns_;
  std::size_t window_extra_ = 0;
  std::vector<std::uint32_t> a_;
  std::vector<std::uint32_t> buf_;
  std::vector<std::uint64_t>* raw_ = nullptr;
  std::vector<std::uint64_t>* paired_ = nullptr;
  std::vector<Word>* list_ = nullptr;
};

}  // namespace detail

// Counts bands by length via a depth-first search over Lyndon words
// (least rotations), pruned by the string conditions. Branches by first
// letter run in parallel; results are merged in letter order.
inline BandEnumeration enumerate_bands(const WordPresentation& p, std::size_t max_len, const EnumerateOptions& opts = {}) {
  if (max_len < 1) throw PreconditionError("enumerate_bands: maxLen must be at least 1");
  detail::BandSearch proto(p, max_len, opts.list_max_len);
  const auto& firsts = proto.letters();
  struct Branch {
    std::vector<std::uint64_t> raw, paired;
    std::vector<Word> list;
  };
  std::vector<Branch> branches(firsts.size());
  for (auto& b : branches) {
    b.raw.assign(max_len + 1, 0);
    b.paired.assign(max_len + 1, 0);
  }
  unsigned threads = opts.threads ? opts.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(firsts.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    detail::BandSearch search(p, max_len, opts.list_max_len);
    for (std::size_t i; (i = next.fetch_add(1)) < firsts.size();)
      search.run_from(firsts[i], branches[i].raw, branches[i].paired, branches[i].list);
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  BandEnumeration out;
  out.max_len = max_len;
  out.raw.assign(max_len + 1, 0);
  out.paired.assign(max_len + 1, 0);
  for (auto& b : branches) {
    for (std::size_t d = 0; d <= max_len; ++d) {
      out.raw[d] += b.raw[d];
      out.paired[d] += b.paired[d];
    }
    out.bands.insert(out.bands.end(), std::make_move_iterator(b.list.begin()), std::make_move_iterator(b.list.end()));
  }
  std::sort(out.bands.begin(), out.bands.end(), [](const Word& x, const Word& y) {
    return x.size() != y.size() ? x.size() < y.size() : x < y;
  });
  return out;
}

// ---------------------------------------------------------------------------
// Growth estimate

struct GrowthReport {
  double rate = 0;             // max_d b(d)^(1/d)
  double half_ratio_rate = 0;  // (M2 / M1)^(1 / h) for the two halves of the range
  std::uint64_t lower_max = 0, upper_max = 0;
  bool exponential = false;
  std::string note = "estimate from band counts over a finite range, not a proof";
};

// Exponential when rate > 1 and the maximum count over the upper half of
// the range is at least twice the maximum over the lower half.
inline GrowthReport growth_report(const std::vector<std::uint64_t>& counts) {
  GrowthReport g;
  const std::size_t n = counts.empty() ? 0 : counts.size() - 1;
  for (std::size_t d = 1; d <= n; ++d)
    if (counts[d]) g.rate = std::max(g.rate, std::pow(static_cast<double>(counts[d]), 1.0 / static_cast<double>(d)));
  const std::size_t h = n / 2;
  for (std::size_t d = 1; d <= n; ++d) (d <= h ? g.lower_max : g.upper_max) = std::max(d <= h ? g.lower_max : g.upper_max, counts[d]);
  if (g.lower_max && h)
    g.half_ratio_rate = std::pow(static_cast<double>(g.upper_max) / static_cast<double>(g.lower_max), 1.0 / static_cast<double>(h));
  g.exponential = g.rate > 1.0 && g.lower_max >= 1 && g.upper_max >= 2 * g.lower_max;
  return g;
}

// Number of Lyndon words over {w1, w2} of each letter length up to max_len;
// by free composability each one is a distinct band class.
inline std::vector<std::uint64_t> necklace_family_counts(std::size_t len1, std::size_t len2, std::size_t max_len) {
  std::vector<std::uint64_t> out(max_len + 1, 0);
  std::size_t depth = max_len / std::min(len1, len2);
  for (const auto& u : binary_lyndon_words(depth)) {
    std::size_t len = 0;
    for (int b : u) len += b ? len2 : len1;
    if (len <= max_len) ++out[len];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Serialization

inline nlohmann::json to_json(const WordPresentation& p) {
  nlohmann::json j;
  j["quiver"] = to_json(p.quiver);
  j["special"] = nlohmann::json::array();
  for (ArrowId a = 0; a < p.quiver.arrow_count(); ++a)
    if (p.is_special(a)) j["special"].push_back(p.quiver.arrow(a).name);
  j["forbidden"] = nlohmann::json::array();
  for (const auto& f : p.forbidden) j["forbidden"].push_back(format_path(p.quiver, Path{p.quiver.arrow(f.front()).source, f}));
  j["quadratic_special"] = p.quadratic_special;
  j["comparable"] = nlohmann::json::array();
  for (auto [x, y] : p.comparable)
    j["comparable"].push_back({format_letter(p, Letter::from_index(x)), format_letter(p, Letter::from_index(y))});
  return j;
}

inline WordPresentation presentation_from_json(const nlohmann::json& j) {
  detail::require_keys(j, "presentation", {"quiver", "special", "forbidden", "quadratic_special", "comparable"},
                       {"quiver", "forbidden"});
  WordPresentation p;
  p.quiver = quiver_from_json(j["quiver"]);
  p.special.assign(p.quiver.arrow_count(), false);
  if (j.contains("special"))
    for (const auto& s : j["special"]) p.special[p.quiver.arrow_id(detail::expect_string(s, "special[]"))] = true;
  for (const auto& f : j["forbidden"]) p.forbidden.push_back(parse_path(p.quiver, detail::expect_string(f, "forbidden[]")).arrows);
  if (j.contains("quadratic_special")) p.quadratic_special = j["quadratic_special"].get<bool>();
  if (j.contains("comparable"))
    for (const auto& c : j["comparable"]) {
      if (!c.is_array() || c.size() != 2) throw ParseError("comparable[]: expected a pair of letters");
      p.add_comparable(parse_letter(p, detail::expect_string(c[0], "comparable[]")),
                       parse_letter(p, detail::expect_string(c[1], "comparable[]")));
    }
  validate_presentation(p);
  return p;
}

}  // namespace jacalg
