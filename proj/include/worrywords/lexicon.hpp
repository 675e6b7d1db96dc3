// Copyright 2026 The worrywords-engine Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Scored lexicon: the [-3, 3] score scale, the 7-class ordinal mapping,
// equal-width class schemes and TSV I/O.

#include <algorithm>
#include <concepts>
#include <array>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <system_error>
#include <unordered_map>
#include <vector>

#include "worrywords/errors.hpp"
#include "worrywords/text.hpp"

namespace worrywords {

inline constexpr double kMinScore = -3.0;
inline constexpr double kMaxScore = 3.0;

class AnxietyScore {
 public:
  explicit AnxietyScore(double value) : value_(value) {
    if (!(value >= kMinScore && value <= kMaxScore))
      throw RangeError("anxiety score " + std::to_string(value) +
                       " outside [-3, 3]");
  }
  double value() const noexcept { return value_; }
  auto operator<=>(const AnxietyScore&) const = default;

 private:
  double value_;
};

enum class OrdinalClass : std::int8_t {
  high_calmness = -3,
  moderate_calmness = -2,
  slight_calmness = -1,
  neither = 0,
  slight_anxiety = 1,
  moderate_anxiety = 2,
  high_anxiety = 3,
};

/// Calm-to-anxious order.
inline constexpr std::array<OrdinalClass, 7> kAllClasses = {
    OrdinalClass::high_calmness,  OrdinalClass::moderate_calmness,
    OrdinalClass::slight_calmness, OrdinalClass::neither,
    OrdinalClass::slight_anxiety,  OrdinalClass::moderate_anxiety,
    OrdinalClass::high_anxiety,
};

constexpr int class_index(OrdinalClass c) noexcept { return static_cast<int>(c); }

/// Position 0..6 in kAllClasses.
constexpr std::size_t class_slot(OrdinalClass c) noexcept {
  return static_cast<std::size_t>(class_index(c) + 3);
}

constexpr std::string_view class_label(OrdinalClass c) noexcept {
  switch (c) {
    case OrdinalClass::high_calmness: return "high_calmness";
    case OrdinalClass::moderate_calmness: return "moderate_calmness";
    case OrdinalClass::slight_calmness: return "slight_calmness";
    case OrdinalClass::neither: return "neither";
    case OrdinalClass::slight_anxiety: return "slight_anxiety";
    case OrdinalClass::moderate_anxiety: return "moderate_anxiety";
    case OrdinalClass::high_anxiety: return "high_anxiety";
  }
  return "neither";
}

constexpr bool is_anxiety(OrdinalClass c) noexcept { return class_index(c) > 0; }
constexpr bool is_calmness(OrdinalClass c) noexcept { return class_index(c) < 0; }

/// Anxiety side is lower-inclusive, calm side mirrors it (upper-inclusive),
/// so -0.5 is slight_calmness and 0.5 is slight_anxiety.
constexpr OrdinalClass score_to_class7(double v) noexcept {
  if (v >= 2.5) return OrdinalClass::high_anxiety;
  if (v >= 1.5) return OrdinalClass::moderate_anxiety;
  if (v >= 0.5) return OrdinalClass::slight_anxiety;
  if (v > -0.5) return OrdinalClass::neither;
  if (v > -1.5) return OrdinalClass::slight_calmness;
  if (v > -2.5) return OrdinalClass::moderate_calmness;
  return OrdinalClass::high_calmness;
}

inline OrdinalClass score_to_class7(AnxietyScore s) noexcept {
  return score_to_class7(s.value());
}

/// `n_bins` equal-width bins over [-3, 3].
class ClassScheme {
 public:
  explicit ClassScheme(std::size_t n_bins) : n_bins_(n_bins) {
    if (n_bins == 0) throw ValidationError("class scheme needs at least one bin");
    boundaries_.reserve(n_bins - 1);
    for (std::size_t i = 1; i < n_bins; ++i)
      boundaries_.push_back(kMinScore + (kMaxScore - kMinScore) *
                                            static_cast<double>(i) /
                                            static_cast<double>(n_bins));
  }

  std::size_t n_bins() const noexcept { return n_bins_; }
  double bin_width() const noexcept {
    return (kMaxScore - kMinScore) / static_cast<double>(n_bins_);
  }
  /// The n_bins - 1 interior cut points, ascending.
  const std::vector<double>& boundaries() const noexcept { return boundaries_; }

  /// Lower-inclusive, upper-exclusive; the top bin also holds +3.
  std::size_t bin_of(double score) const noexcept {
    return static_cast<std::size_t>(
        std::upper_bound(boundaries_.begin(), boundaries_.end(), score) -
        boundaries_.begin());
  }

 private:
  std::size_t n_bins_;
  std::vector<double> boundaries_;
};

inline std::size_t score_to_bin(AnxietyScore score, const ClassScheme& scheme) {
  return scheme.bin_of(score.value());
}

struct LexiconEntry {
  std::string term;
  AnxietyScore score;

  OrdinalClass ordinal_class() const noexcept { return score_to_class7(score); }
  bool operator==(const LexiconEntry& o) const {
    return term == o.term && score == o.score;
  }
};

/// Immutable once built; concurrent reads are safe.
class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(std::string name) : name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return entries_.size(); }
  bool empty() const noexcept { return entries_.empty(); }

  /// Normalizes `term`; throws DuplicateError if already present.
  void add(std::string_view term, double score) {
    std::string key = text::normalize_term(term);
    if (key.empty()) throw ValidationError("empty term");
    AnxietyScore s(score);
    auto [it, inserted] = entries_.try_emplace(key, LexiconEntry{key, s});
    if (!inserted) throw DuplicateError(key);
  }

  /// Exact lookup of an already-normalized term; nullptr on a miss.
  const LexiconEntry* find(std::string_view term) const {
    auto it = entries_.find(std::string(term));
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::optional<double> score(std::string_view term) const {
    const auto* e = find(term);
    return e ? std::optional<double>(e->score.value()) : std::nullopt;
  }

  /// Entries ordered by term.
  std::vector<const LexiconEntry*> sorted_entries() const {
    std::vector<const LexiconEntry*> out;
    out.reserve(entries_.size());
    for (const auto& [k, e] : entries_) out.push_back(&e);
    std::sort(out.begin(), out.end(),
              [](const auto* a, const auto* b) { return a->term < b->term; });
    return out;
  }

  const std::unordered_map<std::string, LexiconEntry>& entries() const noexcept {
    return entries_;
  }

  bool operator==(const Lexicon& o) const { return entries_ == o.entries_; }

 private:
  std::string name_;
  std::unordered_map<std::string, LexiconEntry> entries_;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    return std::nullopt;
  return v;
}

/// Shortest text that reads back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

/// '#' lines are comments, except hashtag terms: '#' followed by a
/// non-space character on a line that holds a tab-separated score.
inline bool is_comment_line(std::string_view line) {
  if (line.empty() || line.front() != '#') return false;
  if (line.size() == 1 || line[1] == ' ' || line[1] == '\t' || line[1] == '#')
    return true;
  const auto tab = line.find('\t');
  if (tab == std::string_view::npos) return true;
  return !parse_double(line.substr(tab + 1)).has_value();
}

}  // namespace detail

/// Reads `term<TAB>score` rows. Blank lines and comments are skipped; a
/// first data row whose score field is not numeric is taken as a header.
inline Lexicon load_lexicon(std::istream& in, std::string name) {
  Lexicon lex(std::move(name));
  std::string line;
  std::size_t row = 0;
  bool seen_data = false;
  while (std::getline(in, line)) {
    ++row;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    if (detail::trim(v).empty() || detail::is_comment_line(v)) continue;
    const auto tab = v.find('\t');
    if (tab == std::string_view::npos)
      throw ParseError("expected term<TAB>score", row);
    const std::string_view term = v.substr(0, tab);
    const std::string_view field = v.substr(tab + 1);
    if (field.find('\t') != std::string_view::npos)
      throw ParseError("expected exactly two columns", row);
    const auto score = detail::parse_double(field);
    if (!score) {
      if (!seen_data) {
        seen_data = true;
        continue;
      }
      throw ParseError("score '" + std::string(field) + "' is not a number", row);
    }
    seen_data = true;
    if (!(*score >= kMinScore && *score <= kMaxScore))
      throw RangeError("row " + std::to_string(row) + ": score " +
                       std::string(detail::trim(field)) + " outside [-3, 3]");
    if (text::normalize_term(term).empty()) throw ParseError("empty term", row);
    lex.add(term, *score);
  }
  return lex;
}

inline void save_lexicon(std::ostream& out, const Lexicon& lex) {
  for (const auto* e : lex.sorted_entries())
    out << e->term << '\t' << detail::format_double(e->score.value()) << '\n';
}

struct ClassDistribution {
  std::array<std::size_t, 7> counts{};
  std::array<double, 7> percentages{};
  std::size_t total = 0;

  std::size_t count(OrdinalClass c) const { return counts[class_slot(c)]; }
  double percentage(OrdinalClass c) const { return percentages[class_slot(c)]; }
  double anxiety_percentage() const {
    return percentages[4] + percentages[5] + percentages[6];
  }
  double calmness_percentage() const {
    return percentages[0] + percentages[1] + percentages[2];
  }
};

inline ClassDistribution class_distribution(const Lexicon& lex) {
  if (lex.empty()) throw ValidationError("class distribution of an empty lexicon");
  ClassDistribution d;
  for (const auto& [term, e] : lex.entries()) ++d.counts[class_slot(e.ordinal_class())];
  d.total = lex.size();
  for (std::size_t i = 0; i < 7; ++i)
    d.percentages[i] =
        100.0 * static_cast<double>(d.counts[i]) / static_cast<double>(d.total);
  return d;
}

}  // namespace worrywords

namespace worrywords {

/// Any term -> real resource usable for scoring text (anxiety lexicon,
/// valence/arousal/dominance norms, emotion intensities).
template <typename T>
concept ScoreLookup = requires(const T& t, std::string_view term) {
  { t.score(term) } -> std::same_as<std::optional<double>>;
  { t.empty() } -> std::convertible_to<bool>;
  { t.name() } -> std::convertible_to<std::string>;
};

/// Unconstrained term -> real map, e.g. one column of a VAD lexicon.
class ScoreTable {
 public:
  ScoreTable() = default;
  explicit ScoreTable(std::string name) : name_(std::move(name)) {}

  static ScoreTable from_lexicon(const Lexicon& lex) {
    ScoreTable t(lex.name());
    for (const auto& [term, e] : lex.entries()) t.values_.emplace(term, e.score.value());
    return t;
  }

  const std::string& name() const noexcept { return name_; }
  std::size_t size() const noexcept { return values_.size(); }
  bool empty() const noexcept { return values_.empty(); }

  void add(std::string_view term, double value) {
    std::string key = text::normalize_term(term);
    if (key.empty()) throw ValidationError("empty term");
    if (!std::isfinite(value)) throw RangeError("non-finite value for '" + key + "'");
    if (!values_.emplace(key, value).second) throw DuplicateError(key);
  }

  std::optional<double> score(std::string_view term) const {
    auto it = values_.find(std::string(term));
    return it == values_.end() ? std::nullopt : std::optional<double>(it->second);
  }

  const std::unordered_map<std::string, double>& values() const noexcept { return values_; }

 private:
  std::string name_;
  std::unordered_map<std::string, double> values_;
};

static_assert(ScoreLookup<Lexicon>);
static_assert(ScoreLookup<ScoreTable>);

/// Reads column `column` (0-based, term is column 0) of a tab-separated
/// table. When `column_name` is non-empty the first data row is a header and
/// the column is looked up by name instead.
inline ScoreTable load_score_table(std::istream& in, std::string name, std::size_t column = 1,
                                   std::string_view column_name = {}) {
  ScoreTable table(std::move(name));
  std::string line;
  std::size_t row = 0;
  bool header_pending = true;
  auto split = [](std::string_view v) {
    std::vector<std::string_view> f;
    std::size_t pos = 0;
    while (true) {
      const auto tab = v.find('\t', pos);
      f.push_back(v.substr(pos, tab == std::string_view::npos ? std::string_view::npos : tab - pos));
      if (tab == std::string_view::npos) break;
      pos = tab + 1;
    }
    return f;
  };
  while (std::getline(in, line)) {
    ++row;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    if (detail::trim(v).empty() || detail::is_comment_line(v)) continue;
    const auto fields = split(v);
    if (header_pending) {
      header_pending = false;
      if (!column_name.empty()) {
        auto it = std::find_if(fields.begin(), fields.end(), [&](std::string_view f) {
          return text::normalize_term(f) == text::normalize_term(column_name);
        });
        if (it == fields.end())
          throw ParseError("no column named '" + std::string(column_name) + "'", row);
        column = static_cast<std::size_t>(it - fields.begin());
        continue;
      }
      if (fields.size() > column && !detail::parse_double(fields[column])) continue;
    }
    if (fields.size() <= column) throw ParseError("missing column " + std::to_string(column), row);
    const auto value = detail::parse_double(fields[column]);
    if (!value) throw ParseError("'" + std::string(fields[column]) + "' is not a number", row);
    if (text::normalize_term(fields[0]).empty()) throw ParseError("empty term", row);
    table.add(fields[0], *value);
  }
  return table;
}

}  // namespace worrywords
