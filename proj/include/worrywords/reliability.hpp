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

// Split-half reliability: every trial splits each term's ratings at random
// into two halves, aggregates each half by mean, and compares the two
// resulting score sets by correlation (SHR), same-bin rate (SHCMP) and
// closeness rate (SHCloseP).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "worrywords/annotation.hpp"
#include "worrywords/errors.hpp"
#include "worrywords/lexicon.hpp"
#include "worrywords/parallel.hpp"
#include "worrywords/random.hpp"
#include "worrywords/stats.hpp"

namespace worrywords::reliability {

/// Ratings grouped by term, terms in sorted order. Terms with fewer than
/// two ratings cannot be split and are listed in `excluded`.
struct RatingsByTerm {
  std::vector<std::string> terms;
  std::vector<std::vector<int>> ratings;
  std::vector<std::string> excluded;

  std::size_t size() const noexcept { return terms.size(); }
};

inline RatingsByTerm group_by_term(std::span<const ResponseRecord> responses) {
  std::map<std::string, std::vector<int>> grouped;
  for (const auto& r : responses) grouped[r.term].push_back(r.rating);
  RatingsByTerm out;
  for (auto& [term, ratings] : grouped) {
    if (ratings.size() < 2) {
      out.excluded.push_back(term);
      continue;
    }
    out.terms.push_back(term);
    out.ratings.push_back(std::move(ratings));
  }
  return out;
}

/// Ratings of one term divided into halves of size ceil(n/2) and floor(n/2).
struct SplitHalves {
  std::vector<std::vector<int>> half_a;
  std::vector<std::vector<int>> half_b;
};

namespace detail {

inline double mean_of(std::span<const int> v) {
  long s = 0;
  for (int x : v) s += x;
  return static_cast<double>(s) / static_cast<double>(v.size());
}

/// Shuffles `scratch` (a copy of `ratings`) and returns the split point.
inline std::size_t shuffle_split(std::span<const int> ratings,
                                 std::vector<int>& scratch, Rng& rng) {
  scratch.assign(ratings.begin(), ratings.end());
  rng.shuffle(std::span<int>(scratch));
  return (scratch.size() + 1) / 2;
}

}  // namespace detail

inline SplitHalves split_half(const RatingsByTerm& grouped, Rng& rng) {
  if (grouped.size() == 0)
    throw ValidationError("split-half needs at least one term with 2+ ratings");
  SplitHalves out;
  out.half_a.reserve(grouped.size());
  out.half_b.reserve(grouped.size());
  std::vector<int> scratch;
  for (const auto& ratings : grouped.ratings) {
    const std::size_t cut = detail::shuffle_split(ratings, scratch, rng);
    out.half_a.emplace_back(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(cut));
    out.half_b.emplace_back(scratch.begin() + static_cast<std::ptrdiff_t>(cut), scratch.end());
  }
  return out;
}

struct SplitTrialResult {
  std::size_t trial = 0;
  double spearman = 0.0;
  double pearson = 0.0;
  std::vector<std::pair<double, double>> scores;  // (half A, half B) per term
};

/// One seeded trial. Consumes the RNG exactly as split_half does.
inline SplitTrialResult split_trial(const RatingsByTerm& grouped, std::size_t trial,
                                    std::uint64_t master_seed,
                                    bool with_correlations = true) {
  Rng rng(derive_seed(master_seed, trial));
  SplitTrialResult out;
  out.trial = trial;
  out.scores.reserve(grouped.size());
  std::vector<int> scratch;
  for (const auto& ratings : grouped.ratings) {
    const std::size_t cut = detail::shuffle_split(ratings, scratch, rng);
    const std::span<const int> all(scratch);
    out.scores.emplace_back(detail::mean_of(all.first(cut)),
                            detail::mean_of(all.subspan(cut)));
  }
  if (with_correlations) {
    std::vector<double> a, b;
    a.reserve(out.scores.size());
    b.reserve(out.scores.size());
    for (const auto& [x, y] : out.scores) {
      a.push_back(x);
      b.push_back(y);
    }
    out.spearman = stats::spearman(a, b);
    out.pearson = stats::pearson(a, b);
  }
  return out;
}

struct ReliabilityConfig {
  std::size_t n_trials = 1000;
  std::uint64_t seed = 0;
  std::vector<std::size_t> schemes = {10, 7, 5, 4, 3, 2};
  std::vector<double> thresholds;  // extra SHCloseP thresholds
  bool with_correlations = true;
  std::size_t jobs = 1;
};

struct SchemeRow {
  std::size_t n_bins = 0;
  double bin_width = 0.0;
  double random_shcmp = 0.0;
  double shcmp = 0.0;     // percent
  double shclosep = 0.0;  // percent, threshold = bin_width
};

struct ThresholdRow {
  double threshold = 0.0;
  double shclosep = 0.0;
};

struct ReliabilityReport {
  std::size_t n_trials = 0;
  std::size_t n_terms = 0;
  std::size_t n_excluded = 0;
  std::uint64_t seed = 0;
  double shr_spearman = 0.0;
  double shr_pearson = 0.0;
  std::vector<SchemeRow> rows;
  std::vector<ThresholdRow> thresholds;
};

inline double random_baseline_shcmp(const ClassScheme& scheme) {
  return 100.0 / static_cast<double>(scheme.n_bins());
}

/// Monte-Carlo estimate: each trial gives `n_terms` terms two independent
/// uniform scores on [-3, 3]; percent of (term, trial) pairs in the same bin.
inline double random_baseline_shcmp_mc(const ClassScheme& scheme, std::size_t n_trials,
                                       std::size_t n_terms, std::uint64_t seed) {
  if (n_trials == 0 || n_terms == 0) throw ValidationError("no Monte-Carlo samples");
  std::size_t matches = 0;
  for (std::size_t t = 0; t < n_trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (std::size_t i = 0; i < n_terms; ++i) {
      const double a = rng.uniform(kMinScore, kMaxScore);
      const double b = rng.uniform(kMinScore, kMaxScore);
      matches += scheme.bin_of(a) == scheme.bin_of(b);
    }
  }
  return 100.0 * static_cast<double>(matches) /
         (static_cast<double>(n_trials) * static_cast<double>(n_terms));
}

/// Runs every trial once and derives all metrics from the same splits.
/// Output depends only on (data, config), never on `jobs`.
inline ReliabilityReport run_split_half(const RatingsByTerm& grouped,
                                        const ReliabilityConfig& cfg) {
  if (cfg.n_trials == 0) throw ValidationError("n_trials must be positive");
  if (cfg.with_correlations && grouped.size() < 2)
    throw ValidationError("split-half correlation needs at least 2 terms with 2+ ratings");
  if (grouped.size() == 0)
    throw ValidationError("split-half needs at least one term with 2+ ratings");
  for (double t : cfg.thresholds)
    if (!(t > 0.0)) throw ValidationError("closeness threshold must be > 0");

  std::vector<ClassScheme> schemes;
  for (auto n : cfg.schemes) schemes.emplace_back(n);

  struct TrialCounts {
    double spearman = 0.0, pearson = 0.0;
    std::vector<std::size_t> same_bin, close_row, close_custom;
  };
  std::vector<TrialCounts> per_trial(cfg.n_trials);

  parallel_for(cfg.n_trials, cfg.jobs, [&](std::size_t t) {
    const auto trial = split_trial(grouped, t, cfg.seed, cfg.with_correlations);
    TrialCounts c;
    c.spearman = trial.spearman;
    c.pearson = trial.pearson;
    c.same_bin.assign(schemes.size(), 0);
    c.close_row.assign(schemes.size(), 0);
    c.close_custom.assign(cfg.thresholds.size(), 0);
    for (const auto& [a, b] : trial.scores) {
      const double gap = std::fabs(a - b);
      for (std::size_t s = 0; s < schemes.size(); ++s) {
        c.same_bin[s] += schemes[s].bin_of(a) == schemes[s].bin_of(b);
        c.close_row[s] += gap < schemes[s].bin_width();
      }
      for (std::size_t k = 0; k < cfg.thresholds.size(); ++k)
        c.close_custom[k] += gap < cfg.thresholds[k];
    }
    per_trial[t] = std::move(c);
  });

  ReliabilityReport rep;
  rep.n_trials = cfg.n_trials;
  rep.n_terms = grouped.size();
  rep.n_excluded = grouped.excluded.size();
  rep.seed = cfg.seed;
  stats::CompensatedSum rho, r;
  std::vector<std::size_t> same(schemes.size(), 0), close(schemes.size(), 0),
      custom(cfg.thresholds.size(), 0);
  for (const auto& c : per_trial) {
    rho.add(c.spearman);
    r.add(c.pearson);
    for (std::size_t s = 0; s < schemes.size(); ++s) {
      same[s] += c.same_bin[s];
      close[s] += c.close_row[s];
    }
    for (std::size_t k = 0; k < custom.size(); ++k) custom[k] += c.close_custom[k];
  }
  const auto trials = static_cast<long double>(cfg.n_trials);
  const double pairs = static_cast<double>(cfg.n_trials) * static_cast<double>(grouped.size());
  rep.shr_spearman = static_cast<double>(rho.value() / trials);
  rep.shr_pearson = static_cast<double>(r.value() / trials);
  for (std::size_t s = 0; s < schemes.size(); ++s)
    rep.rows.push_back({schemes[s].n_bins(), schemes[s].bin_width(),
                        random_baseline_shcmp(schemes[s]),
                        100.0 * static_cast<double>(same[s]) / pairs,
                        100.0 * static_cast<double>(close[s]) / pairs});
  for (std::size_t k = 0; k < custom.size(); ++k)
    rep.thresholds.push_back(
        {cfg.thresholds[k], 100.0 * static_cast<double>(custom[k]) / pairs});
  return rep;
}

/// Mean split-half Spearman and Pearson correlation.
inline ReliabilityReport shr(const RatingsByTerm& grouped, std::size_t n_trials,
                             std::uint64_t seed, std::size_t jobs = 1) {
  ReliabilityConfig cfg;
  cfg.n_trials = n_trials;
  cfg.seed = seed;
  cfg.schemes.clear();
  cfg.jobs = jobs;
  return run_split_half(grouped, cfg);
}

/// Percent of (term, trial) pairs whose half scores share a bin.
inline double shcmp(const RatingsByTerm& grouped, const ClassScheme& scheme,
                    std::size_t n_trials, std::uint64_t seed) {
  ReliabilityConfig cfg;
  cfg.n_trials = n_trials;
  cfg.seed = seed;
  cfg.schemes = {scheme.n_bins()};
  cfg.with_correlations = false;
  return run_split_half(grouped, cfg).rows.front().shcmp;
}

/// Percent of (term, trial) pairs with |A - B| < threshold.
inline double shclosep(const RatingsByTerm& grouped, double threshold,
                       std::size_t n_trials, std::uint64_t seed) {
  ReliabilityConfig cfg;
  cfg.n_trials = n_trials;
  cfg.seed = seed;
  cfg.schemes.clear();
  cfg.thresholds = {threshold};
  cfg.with_correlations = false;
  return run_split_half(grouped, cfg).thresholds.front().shclosep;
}

inline nlohmann::ordered_json to_json(const ReliabilityReport& r) {
  nlohmann::ordered_json j = {
      {"n_trials", r.n_trials},
      {"n_terms", r.n_terms},
      {"n_terms_excluded", r.n_excluded},
      {"seed", r.seed},
      {"shr_spearman", r.shr_spearman},
      {"shr_pearson", r.shr_pearson},
  };
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"n_bins", row.n_bins},
                    {"bin_width", row.bin_width},
                    {"random_shcmp", row.random_shcmp},
                    {"shcmp", row.shcmp},
                    {"shclosep", row.shclosep}});
  j["rows"] = std::move(rows);
  auto th = nlohmann::ordered_json::array();
  for (const auto& t : r.thresholds)
    th.push_back({{"threshold", t.threshold}, {"shclosep", t.shclosep}});
  j["thresholds"] = std::move(th);
  return j;
}

}  // namespace worrywords::reliability
