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

// Cross-resource analyses: term joins, correlation matrices, affect-space
// quadrant tallies and age-of-acquisition breakdowns.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "worrywords/csv.hpp"
#include "worrywords/errors.hpp"
#include "worrywords/lexicon.hpp"
#include "worrywords/stats.hpp"
#include "worrywords/text.hpp"

namespace worrywords::analysis {

struct TermJoin {
  std::string term;
  std::vector<double> values;  // one per resource, in resource order
};

struct JoinTable {
  std::vector<std::string> names;
  std::vector<TermJoin> rows;  // sorted by term

  std::vector<double> column(std::size_t c) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.values[c]);
    return out;
  }

  std::size_t index_of(std::string_view name) const {
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw ValidationError("no resource named '" + std::string(name) + "'");
    return static_cast<std::size_t>(it - names.begin());
  }
};

/// Inner join on normalized terms.
inline JoinTable join_lexicons(std::span<const ScoreTable> resources) {
  if (resources.size() < 2) throw ValidationError("join needs at least 2 resources");
  JoinTable out;
  for (const auto& r : resources) out.names.push_back(r.name());
  // Probe from the smallest resource.
  std::size_t smallest = 0;
  for (std::size_t i = 1; i < resources.size(); ++i)
    if (resources[i].size() < resources[smallest].size()) smallest = i;
  for (const auto& [term, v] : resources[smallest].values()) {
    TermJoin row{term, std::vector<double>(resources.size())};
    bool everywhere = true;
    for (std::size_t i = 0; i < resources.size() && everywhere; ++i) {
      const auto val = resources[i].score(term);
      if (val)
        row.values[i] = *val;
      else
        everywhere = false;
    }
    if (everywhere) out.rows.push_back(std::move(row));
  }
  if (out.rows.empty()) throw ValidationError("resources share no terms");
  std::sort(out.rows.begin(), out.rows.end(),
            [](const TermJoin& a, const TermJoin& b) { return a.term < b.term; });
  return out;
}

enum class Method { spearman, pearson };

struct CorrelationMatrix {
  std::vector<std::string> names;
  std::vector<std::vector<double>> values;
};

inline CorrelationMatrix correlation_matrix(const JoinTable& join, Method method) {
  if (join.rows.size() < 2) throw ValidationError("correlation needs at least 2 joined terms");
  const std::size_t n = join.names.size();
  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < n; ++c) {
    auto col = join.column(c);
    if (std::all_of(col.begin(), col.end(), [&](double v) { return v == col.front(); }))
      throw DegenerateError("resource '" + join.names[c] + "' is constant over the join");
    cols.push_back(method == Method::spearman ? stats::ranks(col) : std::move(col));
  }
  CorrelationMatrix m{join.names, std::vector<std::vector<double>>(n, std::vector<double>(n, 1.0))};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      m.values[i][j] = m.values[j][i] = stats::pearson(cols[i], cols[j]);
  return m;
}

/// Long-format `term<TAB>emotion<TAB>score` rows (one resource per
/// emotion), as in emotion-intensity lexicons.
inline std::map<std::string, ScoreTable> load_long_format(std::istream& in) {
  std::map<std::string, ScoreTable> out;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    std::string_view v = line;
    if (!v.empty() && v.back() == '\r') v.remove_suffix(1);
    if (worrywords::detail::trim(v).empty() || worrywords::detail::is_comment_line(v)) continue;
    const auto t1 = v.find('\t');
    const auto t2 = t1 == std::string_view::npos ? t1 : v.find('\t', t1 + 1);
    if (t2 == std::string_view::npos) throw ParseError("expected term<TAB>emotion<TAB>score", row);
    const auto value = worrywords::detail::parse_double(v.substr(t2 + 1));
    if (!value) {
      if (row == 1) continue;  // header
      throw ParseError("score is not a number", row);
    }
    const std::string emotion = text::normalize_term(v.substr(t1 + 1, t2 - t1 - 1));
    auto it = out.try_emplace(emotion, ScoreTable(emotion)).first;
    it->second.add(v.substr(0, t1), *value);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Affect space

enum class Quadrant { low_low, low_high, high_low, high_high };

/// Name like "low_v_high_a"; the first dimension is valence.
inline std::string quadrant_label(Quadrant q, char first, char second) {
  const bool hi1 = q == Quadrant::high_low || q == Quadrant::high_high;
  const bool hi2 = q == Quadrant::low_high || q == Quadrant::high_high;
  std::string s = hi1 ? "high_" : "low_";
  s += first;
  s += hi2 ? "_high_" : "_low_";
  s += second;
  return s;
}

/// Values exactly at the midpoint go to the upper half.
constexpr Quadrant quadrant_of(double x, double y, double mid_x, double mid_y) noexcept {
  const bool hx = x >= mid_x, hy = y >= mid_y;
  return hx ? (hy ? Quadrant::high_high : Quadrant::high_low)
            : (hy ? Quadrant::low_high : Quadrant::low_low);
}

enum class AffectClass { calm, neutral, anxious };

inline std::string_view affect_class_label(AffectClass c) {
  switch (c) {
    case AffectClass::calm: return "calm";
    case AffectClass::anxious: return "anxious";
    default: return "neutral";
  }
}

struct AffectOptions {
  std::string anxiety = "anxiety";
  std::string valence = "valence";
  std::string arousal = "arousal";
  std::string dominance = "dominance";
  double midpoint = 0.5;           // VAD scale midpoint
  double anxious_above = 0.5;
  double calm_below = -0.5;
};

struct AffectPoint {
  std::string term;
  double v = 0, a = 0, d = 0, anxiety = 0;
  Quadrant va = Quadrant::low_low;
  Quadrant vd = Quadrant::low_low;
  AffectClass cls = AffectClass::neutral;
};

struct AffectSpace {
  std::vector<AffectPoint> points;
  // [quadrant][class]
  std::array<std::array<std::size_t, 3>, 4> va_counts{};
  std::array<std::array<std::size_t, 3>, 4> vd_counts{};

  std::size_t va_count(Quadrant q, AffectClass c) const {
    return va_counts[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)];
  }
  std::size_t vd_count(Quadrant q, AffectClass c) const {
    return vd_counts[static_cast<std::size_t>(q)][static_cast<std::size_t>(c)];
  }
};

inline AffectSpace affect_space_points(const JoinTable& join, const AffectOptions& opt = {}) {
  const std::size_t ix = join.index_of(opt.anxiety), iv = join.index_of(opt.valence),
                    ia = join.index_of(opt.arousal), id = join.index_of(opt.dominance);
  AffectSpace out;
  out.points.reserve(join.rows.size());
  for (const auto& row : join.rows) {
    AffectPoint p{row.term, row.values[iv], row.values[ia], row.values[id], row.values[ix]};
    p.va = quadrant_of(p.v, p.a, opt.midpoint, opt.midpoint);
    p.vd = quadrant_of(p.v, p.d, opt.midpoint, opt.midpoint);
    p.cls = p.anxiety > opt.anxious_above ? AffectClass::anxious
            : p.anxiety < opt.calm_below  ? AffectClass::calm
                                          : AffectClass::neutral;
    ++out.va_counts[static_cast<std::size_t>(p.va)][static_cast<std::size_t>(p.cls)];
    ++out.vd_counts[static_cast<std::size_t>(p.vd)][static_cast<std::size_t>(p.cls)];
    out.points.push_back(std::move(p));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Age of acquisition

struct AoaRecord {
  std::string term;
  double aoa_years = 0.0;
};

/// Nearest whole year, halves rounded up.
inline int aoa_year(double years) { return static_cast<int>(std::floor(years + 0.5)); }

/// CSV `term,aoa_years`. Rows whose age is empty or "NA" are skipped.
inline std::vector<AoaRecord> read_aoa_csv(std::istream& in, std::size_t* skipped = nullptr) {
  std::vector<AoaRecord> out;
  bool first = true;
  std::size_t n_skipped = 0;
  csv::for_each_record(in, [&](const std::vector<std::string>& f, std::size_t row) {
    if (f.size() < 2) throw ParseError("expected term,aoa_years", row);
    const auto v = worrywords::detail::parse_double(f[1]);
    if (first) {
      first = false;
      if (!v && f[1] != "NA" && !worrywords::detail::trim(f[1]).empty()) return;  // header
    }
    if (!v) {
      const auto t = worrywords::detail::trim(f[1]);
      if (t.empty() || t == "NA" || t == "#N/A") {
        ++n_skipped;
        return;
      }
      throw ParseError("'" + f[1] + "' is not a number", row);
    }
    if (!(*v > 0.0)) throw RangeError("row " + std::to_string(row) + ": aoa_years must be > 0");
    out.push_back({f[0], *v});
  });
  if (skipped) *skipped = n_skipped;
  return out;
}

namespace detail {

/// (year, class) for every lexicon term that has an AoA record.
inline std::vector<std::pair<int, OrdinalClass>> join_aoa(const Lexicon& lex,
                                                          std::span<const AoaRecord> aoa) {
  std::unordered_map<std::string, double> ages;
  for (const auto& r : aoa) {
    if (!(r.aoa_years > 0.0)) throw RangeError("aoa_years must be > 0 for '" + r.term + "'");
    const std::string key = text::normalize_term(r.term);
    if (!ages.emplace(key, r.aoa_years).second) throw DuplicateError(key);
  }
  std::vector<std::pair<int, OrdinalClass>> out;
  for (const auto& [term, e] : lex.entries()) {
    auto it = ages.find(term);
    if (it != ages.end()) out.emplace_back(aoa_year(it->second), e.ordinal_class());
  }
  if (out.empty()) throw ValidationError("lexicon and AoA norms share no terms");
  return out;
}

}  // namespace detail

struct AoaCell {
  int age = 0;
  OrdinalClass cls = OrdinalClass::neither;
  double percentage = 0.0;
};

struct AoaDistribution {
  std::size_t n_joined = 0;
  std::vector<AoaCell> cells;           // every class for every observed age
  std::map<int, double> age_totals;     // percent of all joined terms per age
};

/// Percent of all joined terms per (age, class); everything sums to 100.
inline AoaDistribution aoa_distribution(const Lexicon& lex, std::span<const AoaRecord> aoa) {
  const auto joined = detail::join_aoa(lex, aoa);
  std::map<int, std::array<std::size_t, 7>> counts;
  for (const auto& [age, cls] : joined) ++counts[age][class_slot(cls)];
  AoaDistribution out;
  out.n_joined = joined.size();
  const auto total = static_cast<double>(joined.size());
  for (const auto& [age, row] : counts) {
    std::size_t age_total = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      out.cells.push_back({age, kAllClasses[i], 100.0 * static_cast<double>(row[i]) / total});
      age_total += row[i];
    }
    out.age_totals[age] = 100.0 * static_cast<double>(age_total) / total;
  }
  return out;
}

/// The six non-neutral classes, calm to anxious.
inline constexpr std::array<OrdinalClass, 6> kNonNeutralClasses = {
    OrdinalClass::high_calmness,  OrdinalClass::moderate_calmness, OrdinalClass::slight_calmness,
    OrdinalClass::slight_anxiety, OrdinalClass::moderate_anxiety,  OrdinalClass::high_anxiety,
};

struct AoaShareRow {
  int age = 0;
  std::size_t n_terms = 0;
  std::array<double, 6> shares{};  // order of kNonNeutralClasses; sums to 100
};

/// Per age, the split of non-neutral terms over the six classes.
inline std::vector<AoaShareRow> aoa_class_shares(const Lexicon& lex, std::span<const AoaRecord> aoa) {
  const auto joined = detail::join_aoa(lex, aoa);
  std::map<int, std::array<std::size_t, 6>> counts;
  for (const auto& [age, cls] : joined) {
    if (cls == OrdinalClass::neither) continue;
    const auto slot = class_slot(cls);
    ++counts[age][slot < 3 ? slot : slot - 1];
  }
  std::vector<AoaShareRow> out;
  for (const auto& [age, row] : counts) {
    AoaShareRow r{age, 0, {}};
    for (auto c : row) r.n_terms += c;
    for (std::size_t i = 0; i < 6; ++i)
      r.shares[i] = 100.0 * static_cast<double>(row[i]) / static_cast<double>(r.n_terms);
    out.push_back(r);
  }
  return out;
}

}  // namespace worrywords::analysis
