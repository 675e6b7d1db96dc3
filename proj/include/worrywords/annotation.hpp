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

// From raw annotator responses to a scored lexicon: questionnaire option
// mapping, gold-question accuracy, annotator filtering and mean aggregation.

#include <algorithm>
#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "worrywords/csv.hpp"
#include "worrywords/errors.hpp"
#include "worrywords/lexicon.hpp"
#include "worrywords/text.hpp"

namespace worrywords {

struct ResponseRecord {
  std::string term;
  std::string annotator;
  int rating = 0;

  bool operator==(const ResponseRecord&) const = default;
};

/// Normalizes the term and range-checks the rating.
inline ResponseRecord make_response(std::string_view term, std::string annotator,
                                    int rating) {
  if (rating < -3 || rating > 3)
    throw RangeError("rating " + std::to_string(rating) + " outside -3..3");
  std::string key = text::normalize_term(term);
  if (key.empty()) throw ValidationError("response with empty term");
  return {std::move(key), std::move(annotator), rating};
}

struct GoldItem {
  std::string term;
  int expected = 0;
  bool popup = false;
};

/// Gold questions keyed by normalized term. Popup and no-popup sets are
/// disjoint; a term may appear only once.
class GoldSet {
 public:
  GoldSet() = default;
  explicit GoldSet(std::span<const GoldItem> items) {
    for (const auto& g : items) add(g);
  }

  void add(GoldItem g) {
    if (g.expected < -3 || g.expected > 3)
      throw RangeError("gold rating " + std::to_string(g.expected) + " outside -3..3");
    g.term = text::normalize_term(g.term);
    auto it = items_.find(g.term);
    if (it != items_.end()) {
      if (it->second.popup != g.popup)
        throw ValidationError("gold term '" + g.term +
                              "' is both popup and no-popup");
      throw DuplicateError(g.term);
    }
    items_.emplace(g.term, std::move(g));
  }

  const GoldItem* find(const std::string& term) const {
    auto it = items_.find(term);
    return it == items_.end() ? nullptr : &it->second;
  }
  std::size_t size() const noexcept { return items_.size(); }
  bool empty() const noexcept { return items_.empty(); }

 private:
  std::unordered_map<std::string, GoldItem> items_;
};

struct PipelineConfig {
  double gold_accuracy_threshold = 0.80;
  int gold_tolerance = 1;
  bool exclude_gold_from_aggregation = true;

  void validate() const {
    if (!(gold_accuracy_threshold > 0.0 && gold_accuracy_threshold <= 1.0))
      throw ValidationError("gold accuracy threshold must be in (0, 1]");
    if (gold_tolerance < 0) throw ValidationError("gold tolerance must be >= 0");
  }
};

struct AnnotatorStats {
  std::string annotator;
  std::size_t n_responses = 0;
  std::size_t n_gold_seen = 0;
  std::size_t n_gold_correct = 0;
  std::size_t n_popup_seen = 0;
  std::size_t n_popup_correct = 0;
  double accuracy = 1.0;  // meaningful only when n_gold_seen > 0
  bool no_gold = true;
  bool discarded = false;
};

struct QcResult {
  std::vector<ResponseRecord> kept;
  std::vector<AnnotatorStats> annotators;  // sorted by id

  std::size_t n_discarded() const {
    return static_cast<std::size_t>(std::count_if(
        annotators.begin(), annotators.end(),
        [](const AnnotatorStats& a) { return a.discarded; }));
  }
};

struct AggregationSummary {
  std::size_t n_terms = 0;
  std::size_t n_annotators_kept = 0;
  std::size_t n_annotators_discarded = 0;
  std::size_t n_annotations_kept = 0;
  double mean_annotations_per_term = 0.0;
  // Before filtering, gold responses excluded; 0 when not computed.
  std::size_t n_annotations_raw = 0;
  std::size_t n_terms_raw = 0;
  double mean_annotations_per_term_raw = 0.0;
};

struct AggregationResult {
  Lexicon lexicon;
  AggregationSummary summary;
};

/// Questionnaire option text to rating. Accepts the bare option text or the
/// "<n>: <text>" form, case-insensitively.
inline int map_option(std::string_view option) {
  static constexpr std::array<std::pair<std::string_view, int>, 7> kOptions{{
      {"very anxious", 3},
      {"moderately anxious", 2},
      {"slightly anxious", 1},
      {"not associated with feeling anxious or calm", 0},
      {"slightly calm", -1},
      {"moderately calm", -2},
      {"very calm", -3},
  }};
  std::string key = text::normalize_term(option);
  std::optional<int> prefix;
  if (auto colon = key.find(':'); colon != std::string::npos) {
    try {
      std::size_t used = 0;
      const std::string head(detail::trim(key.substr(0, colon)));
      const int n = std::stoi(head, &used);
      if (used == head.size()) prefix = n;
    } catch (const std::exception&) {
    }
    if (prefix) key = std::string(detail::trim(key.substr(colon + 1)));
  }
  for (const auto& [text, value] : kOptions) {
    if (key == text) {
      if (prefix && *prefix != value)
        throw ValidationError("option '" + std::string(option) +
                              "' has a mismatched numeric prefix");
      return value;
    }
  }
  throw ValidationError("unknown questionnaire option '" + std::string(option) + "'");
}

/// Drops every response of annotators whose gold accuracy falls below the
/// threshold. Annotators with no gold answers are kept and flagged.
inline QcResult qc_filter(std::span<const ResponseRecord> responses,
                          const GoldSet& golds, const PipelineConfig& cfg = {}) {
  cfg.validate();
  std::map<std::string, AnnotatorStats> stats;
  for (const auto& r : responses) {
    auto& s = stats[r.annotator];
    s.annotator = r.annotator;
    ++s.n_responses;
    if (const auto* g = golds.find(r.term)) {
      const bool correct = std::abs(r.rating - g->expected) <= cfg.gold_tolerance;
      ++s.n_gold_seen;
      s.n_gold_correct += correct;
      if (g->popup) {
        ++s.n_popup_seen;
        s.n_popup_correct += correct;
      }
    }
  }
  for (auto& [id, s] : stats) {
    s.no_gold = s.n_gold_seen == 0;
    if (!s.no_gold) {
      s.accuracy = static_cast<double>(s.n_gold_correct) /
                   static_cast<double>(s.n_gold_seen);
      s.discarded = s.accuracy < cfg.gold_accuracy_threshold;
    }
  }
  QcResult out;
  for (const auto& r : responses) {
    if (stats.at(r.annotator).discarded) continue;
    if (cfg.exclude_gold_from_aggregation && golds.find(r.term)) continue;
    out.kept.push_back(r);
  }
  out.annotators.reserve(stats.size());
  for (auto& [id, s] : stats) out.annotators.push_back(std::move(s));
  return out;
}

/// Per-term arithmetic mean of ratings.
inline AggregationResult aggregate(std::span<const ResponseRecord> kept,
                                   std::string lexicon_name = "anxiety") {
  std::map<std::string, std::pair<long, std::size_t>> sums;
  std::set<std::string> annotators;
  for (const auto& r : kept) {
    auto& [sum, n] = sums[r.term];
    sum += r.rating;
    ++n;
    annotators.insert(r.annotator);
  }
  AggregationResult out{Lexicon(std::move(lexicon_name)), {}};
  for (const auto& [term, acc] : sums)
    out.lexicon.add(term, static_cast<double>(acc.first) /
                              static_cast<double>(acc.second));
  auto& s = out.summary;
  s.n_terms = sums.size();
  s.n_annotators_kept = annotators.size();
  s.n_annotations_kept = kept.size();
  s.mean_annotations_per_term =
      s.n_terms ? static_cast<double>(s.n_annotations_kept) /
                      static_cast<double>(s.n_terms)
                : 0.0;
  return out;
}

struct PipelineResult {
  AggregationResult aggregation;
  QcResult qc;
};

/// qc_filter followed by aggregate, with before/after-filter counts.
inline PipelineResult run_pipeline(std::span<const ResponseRecord> responses,
                                   const GoldSet& golds,
                                   const PipelineConfig& cfg = {},
                                   std::string lexicon_name = "anxiety") {
  PipelineResult out{{}, qc_filter(responses, golds, cfg)};
  out.aggregation = aggregate(out.qc.kept, std::move(lexicon_name));
  auto& s = out.aggregation.summary;
  s.n_annotators_discarded = out.qc.n_discarded();
  std::set<std::string> raw_terms;
  for (const auto& r : responses) {
    if (cfg.exclude_gold_from_aggregation && golds.find(r.term)) continue;
    ++s.n_annotations_raw;
    raw_terms.insert(r.term);
  }
  s.n_terms_raw = raw_terms.size();
  s.mean_annotations_per_term_raw =
      s.n_terms_raw ? static_cast<double>(s.n_annotations_raw) /
                          static_cast<double>(s.n_terms_raw)
                    : 0.0;
  return out;
}

// ---------------------------------------------------------------------------
// CSV input and JSON output

namespace detail {

inline int parse_rating(std::string_view field, std::size_t row) {
  const auto v = worrywords::detail::parse_double(field);
  if (!v || *v != static_cast<double>(static_cast<long>(*v)))
    throw ParseError("rating '" + std::string(field) + "' is not an integer", row);
  if (*v < -3 || *v > 3)
    throw RangeError("row " + std::to_string(row) + ": rating outside -3..3");
  return static_cast<int>(*v);
}

inline bool parse_bool(std::string_view field, std::size_t row) {
  const std::string v = text::normalize_term(field);
  if (v == "1" || v == "true" || v == "yes" || v == "popup") return true;
  if (v == "0" || v == "false" || v == "no" || v == "no-popup" || v == "nopopup")
    return false;
  throw ParseError("'" + std::string(field) + "' is not a boolean", row);
}

}  // namespace detail

/// `term,annotator_id,rating`; a non-numeric first-row rating marks a header.
/// The rating column may also hold questionnaire option text.
inline std::vector<ResponseRecord> read_responses_csv(std::istream& in) {
  std::vector<ResponseRecord> out;
  bool first = true;
  csv::for_each_record(in, [&](const std::vector<std::string>& f, std::size_t row) {
    if (f.size() != 3) throw ParseError("expected term,annotator_id,rating", row);
    const bool numeric = worrywords::detail::parse_double(f[2]).has_value();
    if (first && !numeric) {
      bool is_option = true;
      try {
        map_option(f[2]);
      } catch (const ValidationError&) {
        is_option = false;
      }
      if (!is_option) {
        first = false;
        return;
      }
    }
    first = false;
    const int rating = numeric ? detail::parse_rating(f[2], row) : map_option(f[2]);
    if (text::normalize_term(f[0]).empty()) throw ParseError("empty term", row);
    out.push_back(make_response(f[0], f[1], rating));
  });
  return out;
}

/// `term,expected,popup`.
inline std::vector<GoldItem> read_golds_csv(std::istream& in) {
  std::vector<GoldItem> out;
  bool first = true;
  csv::for_each_record(in, [&](const std::vector<std::string>& f, std::size_t row) {
    if (f.size() != 3) throw ParseError("expected term,expected,popup", row);
    if (first && !worrywords::detail::parse_double(f[1])) {
      first = false;
      return;
    }
    first = false;
    out.push_back({f[0], detail::parse_rating(f[1], row), detail::parse_bool(f[2], row)});
  });
  return out;
}

inline nlohmann::ordered_json to_json(const AggregationSummary& s) {
  return {
      {"n_terms", s.n_terms},
      {"n_annotators_kept", s.n_annotators_kept},
      {"n_annotators_discarded", s.n_annotators_discarded},
      {"n_annotations_kept", s.n_annotations_kept},
      {"mean_annotations_per_term", s.mean_annotations_per_term},
      {"n_terms_raw", s.n_terms_raw},
      {"n_annotations_raw", s.n_annotations_raw},
      {"mean_annotations_per_term_raw", s.mean_annotations_per_term_raw},
  };
}

inline nlohmann::ordered_json to_json(const AnnotatorStats& a) {
  nlohmann::ordered_json j = {
      {"annotator", a.annotator},
      {"n_responses", a.n_responses},
      {"n_gold_seen", a.n_gold_seen},
      {"n_gold_correct", a.n_gold_correct},
      {"n_popup_seen", a.n_popup_seen},
      {"n_popup_correct", a.n_popup_correct},
  };
  j["accuracy"] = a.no_gold ? nlohmann::ordered_json(nullptr)
                            : nlohmann::ordered_json(a.accuracy);
  j["no_gold"] = a.no_gold;
  j["discarded"] = a.discarded;
  return j;
}

}  // namespace worrywords
