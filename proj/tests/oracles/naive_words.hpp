#pragma once

// Direct, unoptimized readings of the string and band conditions, and a
// generate-then-filter band counter. Only the raw presentation data is
// used; none of the library's checking code.

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "jacalg/strings.hpp"

namespace oracle {

struct NaiveLetter {
  std::uint32_t arrow;
  int kind;  // 0 direct, 1 inverse, 2 special

  bool operator==(const NaiveLetter&) const = default;
  bool operator<(const NaiveLetter& o) const { return arrow != o.arrow ? arrow < o.arrow : kind < o.kind; }
};

using NaiveWord = std::vector<NaiveLetter>;

inline NaiveWord from_word(const jacalg::Word& w) {
  NaiveWord out;
  for (auto l : w) out.push_back({l.arrow, static_cast<int>(l.kind)});
  return out;
}

inline jacalg::Word to_word(const NaiveWord& w) {
  jacalg::Word out;
  for (auto l : w) out.push_back({l.arrow, static_cast<jacalg::LetterKind>(l.kind)});
  return out;
}

inline NaiveLetter inv(NaiveLetter l) {
  if (l.kind == 2) return l;
  return {l.arrow, 1 - l.kind};
}

inline NaiveWord inv(const NaiveWord& w) {
  NaiveWord out;
  for (std::size_t i = w.size(); i-- > 0;) out.push_back(inv(w[i]));
  return out;
}

inline std::uint32_t src(const jacalg::WordPresentation& p, NaiveLetter l) {
  return l.kind == 1 ? p.quiver.arrow(l.arrow).target : p.quiver.arrow(l.arrow).source;
}
inline std::uint32_t tgt(const jacalg::WordPresentation& p, NaiveLetter l) {
  return l.kind == 1 ? p.quiver.arrow(l.arrow).source : p.quiver.arrow(l.arrow).target;
}

inline bool comparable(const jacalg::WordPresentation& p, NaiveLetter x, NaiveLetter y) {
  for (auto [a, b] : p.comparable) {
    NaiveLetter la{a / 3, static_cast<int>(a % 3)}, lb{b / 3, static_cast<int>(b % 3)};
    if ((la == x && lb == y) || (la == y && lb == x)) return true;
  }
  return false;
}

// True when some factor of w equals the forbidden arrow sequence f.
inline bool has_factor(const NaiveWord& w, const std::vector<std::uint32_t>& f) {
  for (std::size_t i = 0; i + f.size() <= w.size(); ++i) {
    bool all = true;
    for (std::size_t k = 0; k < f.size(); ++k)
      if (!(w[i + k].kind == 0 && w[i + k].arrow == f[k])) all = false;
    if (all) return true;
  }
  return false;
}

// First failing condition, "" when w is a string.
inline std::string string_violation(const jacalg::WordPresentation& p, const NaiveWord& w) {
  if (w.empty()) return "empty";
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (inv(w[i]) == w[i + 1]) return "W1";
  for (const auto& f : p.forbidden)
    if (has_factor(w, f) || has_factor(inv(w), f)) return "W2";
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (tgt(p, w[i]) != src(p, w[i + 1])) return "W3";
  for (std::size_t i = 0; i + 1 < w.size(); ++i)
    if (comparable(p, inv(w[i]), w[i + 1])) return "clan";
  return "";
}

inline bool naive_is_band(const jacalg::WordPresentation& p, const NaiveWord& w) {
  if (w.empty() || tgt(p, w.back()) != src(p, w.front())) return false;
  // Three copies of w plus enough extra to cover the longest forbidden word.
  std::size_t longest = 0;
  for (const auto& f : p.forbidden) longest = std::max(longest, f.size());
  NaiveWord power;
  while (power.size() < 2 * w.size() + longest) power.insert(power.end(), w.begin(), w.end());
  if (!string_violation(p, power).empty()) return false;
  for (std::size_t d = 1; d < w.size(); ++d) {
    if (w.size() % d) continue;
    bool periodic = true;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (!(w[i] == w[i % d])) periodic = false;
    if (periodic) return false;
  }
  return true;
}

inline NaiveWord min_rotation(const NaiveWord& w) {
  NaiveWord best = w;
  for (std::size_t r = 1; r < w.size(); ++r) {
    NaiveWord rot;
    for (std::size_t i = 0; i < w.size(); ++i) rot.push_back(w[(r + i) % w.size()]);
    if (std::lexicographical_compare(rot.begin(), rot.end(), best.begin(), best.end())) best = rot;
  }
  return best;
}

inline std::vector<NaiveLetter> all_letters(const jacalg::WordPresentation& p) {
  std::vector<NaiveLetter> out;
  for (std::uint32_t a = 0; a < p.quiver.arrow_count(); ++a) {
    if (p.special[a]) out.push_back({a, 2});
    else {
      out.push_back({a, 0});
      out.push_back({a, 1});
    }
  }
  return out;
}

struct NaiveCounts {
  std::vector<std::uint64_t> raw, paired;
  std::set<NaiveWord> classes;
};

// All closed walks of each length, filtered by naive_is_band and
// collected by least rotation.
inline NaiveCounts naive_band_counts(const jacalg::WordPresentation& p, std::size_t max_len) {
  NaiveCounts out;
  out.raw.assign(max_len + 1, 0);
  out.paired.assign(max_len + 1, 0);
  auto letters = all_letters(p);
  NaiveWord w;
  auto rec = [&](auto&& self) -> void {
    if (!w.empty() && naive_is_band(p, w)) out.classes.insert(min_rotation(w));
    if (w.size() == max_len) return;
    for (auto l : letters) {
      if (!w.empty() && tgt(p, w.back()) != src(p, l)) continue;
      w.push_back(l);
      self(self);
      w.pop_back();
    }
  };
  rec(rec);
  std::set<NaiveWord> pairs;
  for (const auto& c : out.classes) {
    ++out.raw[c.size()];
    auto ic = min_rotation(inv(c));
    pairs.insert(std::min(c, ic));
  }
  for (const auto& c : pairs) ++out.paired[c.size()];
  return out;
}

}  // namespace oracle
