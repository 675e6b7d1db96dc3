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

// Emotion arcs over ordered text streams. A predicted arc averages the
// lexicon scores of all in-lexicon tokens pooled over each bin; a gold arc
// averages the per-post labels of each bin.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "worrywords/csv.hpp"
#include "worrywords/errors.hpp"
#include "worrywords/lexicon.hpp"
#include "worrywords/parallel.hpp"
#include "worrywords/stats.hpp"
#include "worrywords/text.hpp"
#include "worrywords/timeutil.hpp"

namespace worrywords::arcs {

struct Post {
  std::string raw_text;
  std::vector<std::string> tokens;
  std::optional<double> gold_label;
  std::optional<std::int64_t> timestamp;  // seconds since the Unix epoch
};

inline Post make_post(std::string raw_text, std::optional<double> label = std::nullopt,
                      std::optional<std::int64_t> timestamp = std::nullopt) {
  Post p{std::move(raw_text), {}, label, timestamp};
  p.tokens = text::tokenize(p.raw_text);
  return p;
}

struct TextStream {
  std::string id;
  std::vector<Post> posts;
};

enum class BinMode { count, time };

struct BinSpec {
  BinMode mode = BinMode::count;
  std::size_t k = 1;          // posts per bin
  std::size_t s = 1;          // step between bin starts
  std::int64_t period = 0;    // seconds, time mode

  static BinSpec count(std::size_t k, std::size_t s) {
    BinSpec b{BinMode::count, k, s, 0};
    b.validate();
    return b;
  }
  static BinSpec rolling(std::size_t k) { return count(k, 1); }
  static BinSpec time(std::int64_t period_seconds) {
    BinSpec b{BinMode::time, 0, 0, period_seconds};
    b.validate();
    return b;
  }

  void validate() const {
    if (mode == BinMode::count) {
      if (k < 1) throw ValidationError("bin size k must be >= 1");
      if (s < 1) throw ValidationError("step size s must be >= 1");
    } else if (period <= 0) {
      throw ValidationError("bin period must be positive");
    }
  }
};

struct ArcPoint {
  std::int64_t start = 0;  // first post index (count) or period start (time)
  double score = 0.0;
  std::size_t coverage = 0;  // scored tokens (predicted) or labeled posts (gold)
};

struct Arc {
  BinMode mode = BinMode::count;
  std::vector<ArcPoint> points;        // ascending start
  std::vector<std::int64_t> empty_bins;  // bins with nothing to average
};

namespace detail {

inline std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

/// Bin starts [0, s, 2s, ...] with start + k <= n.
inline std::size_t count_bins(std::size_t n, const BinSpec& spec) {
  if (n < spec.k)
    throw ValidationError("stream shorter than bin: " + std::to_string(n) + " posts, k = " +
                          std::to_string(spec.k));
  return (n - spec.k) / spec.s + 1;
}

/// Per-post contributions: values[offsets[i], offsets[i+1]) belong to post i.
struct Contributions {
  std::vector<double> values;
  std::vector<std::size_t> offsets{0};
};

/// Values scaled by a common power of two and summed as integers, so a bin
/// mean depends only on the multiset of values in the bin.
class ExactSums {
 public:
  explicit ExactSums(const Contributions& c) {
    double max_abs = 0.0;
    for (double v : c.values) max_abs = std::max(max_abs, std::fabs(v));
    if (max_abs > 0.0) {
      int exp = 0;
      std::frexp(max_abs, &exp);
      shift_ = 62 - exp;
    }
    const std::size_t n = c.offsets.size() - 1;
    post_sum_.resize(n, 0);
    post_count_.resize(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = c.offsets[i]; j < c.offsets[i + 1]; ++j)
        post_sum_[i] += static_cast<__int128>(std::llround(std::ldexp(c.values[j], shift_)));
      post_count_[i] = c.offsets[i + 1] - c.offsets[i];
    }
  }

  __int128 sum(std::size_t i) const { return post_sum_[i]; }
  std::size_t count(std::size_t i) const { return post_count_[i]; }

  double mean(__int128 sum, std::size_t count) const {
    return static_cast<double>(std::ldexp(static_cast<long double>(sum), -shift_) /
                               static_cast<long double>(count));
  }

 private:
  int shift_ = 0;
  std::vector<__int128> post_sum_;
  std::vector<std::size_t> post_count_;
};

/// Pools per-post contributions into bins.
inline Arc bin_contributions(const TextStream& stream, const BinSpec& spec,
                             const Contributions& contrib) {
  spec.validate();
  Arc arc;
  arc.mode = spec.mode;
  const std::size_t n = stream.posts.size();
  const ExactSums sums(contrib);
  if (spec.mode == BinMode::count) {
    const std::size_t bins = count_bins(n, spec);
    std::vector<__int128> sum(n + 1, 0);
    std::vector<std::size_t> cnt(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) {
      sum[i + 1] = sum[i] + sums.sum(i);
      cnt[i + 1] = cnt[i] + sums.count(i);
    }
    arc.points.reserve(bins);
    for (std::size_t b = 0; b < bins; ++b) {
      const std::size_t lo = b * spec.s, hi = lo + spec.k;
      const std::size_t c = cnt[hi] - cnt[lo];
      const auto start = static_cast<std::int64_t>(lo);
      if (c == 0) {
        arc.empty_bins.push_back(start);
        continue;
      }
      arc.points.push_back({start, sums.mean(sum[hi] - sum[lo], c), c});
    }
    return arc;
  }
  std::map<std::int64_t, std::pair<__int128, std::size_t>> buckets;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& ts = stream.posts[i].timestamp;
    if (!ts) throw ValidationError("post " + std::to_string(i) + " has no timestamp");
    const std::int64_t start = floor_div(*ts, spec.period) * spec.period;
    auto& bucket = buckets[start];
    bucket.first += sums.sum(i);
    bucket.second += sums.count(i);
  }
  for (const auto& [start, acc] : buckets) {
    if (acc.second == 0) {
      arc.empty_bins.push_back(start);
      continue;
    }
    arc.points.push_back({start, sums.mean(acc.first, acc.second), acc.second});
  }
  return arc;
}

}  // namespace detail

/// Mean lexicon score of all in-lexicon tokens per bin. Out-of-lexicon
/// tokens are ignored; bins with no scored token emit no point.
template <ScoreLookup L>
Arc predicted_arc(const TextStream& stream, const L& lexicon, const BinSpec& spec) {
  if (lexicon.empty()) throw ValidationError("lexicon '" + std::string(lexicon.name()) + "' is empty");
  if (stream.posts.empty()) throw ValidationError("stream '" + stream.id + "' is empty");
  detail::Contributions c;
  c.offsets.reserve(stream.posts.size() + 1);
  for (const auto& post : stream.posts) {
    for (const auto& tok : post.tokens)
      if (auto v = lexicon.score(tok)) c.values.push_back(*v);
    c.offsets.push_back(c.values.size());
  }
  return detail::bin_contributions(stream, spec, c);
}

/// Mean post label per bin. Every post inside some bin must be labeled.
inline Arc gold_arc(const TextStream& stream, const BinSpec& spec) {
  if (stream.posts.empty()) throw ValidationError("stream '" + stream.id + "' is empty");
  spec.validate();
  if (spec.mode == BinMode::count) {
    const std::size_t bins = detail::count_bins(stream.posts.size(), spec);
    const std::size_t last = (bins - 1) * spec.s + spec.k;
    for (std::size_t i = 0; i < last; ++i) {
      if (spec.s > spec.k && i % spec.s >= spec.k) continue;  // between bins
      if (!stream.posts[i].gold_label)
        throw ValidationError("post " + std::to_string(i) + " has no gold label");
    }
  } else {
    for (std::size_t i = 0; i < stream.posts.size(); ++i)
      if (!stream.posts[i].gold_label)
        throw ValidationError("post " + std::to_string(i) + " has no gold label");
  }
  detail::Contributions c;
  c.offsets.reserve(stream.posts.size() + 1);
  for (const auto& post : stream.posts) {
    if (post.gold_label) {
      if (!std::isfinite(*post.gold_label)) throw ValidationError("non-finite gold label");
      c.values.push_back(*post.gold_label);
    }
    c.offsets.push_back(c.values.size());
  }
  return detail::bin_contributions(stream, spec, c);
}

struct EvaluationReport {
  double spearman = 0.0;
  double pearson = 0.0;
  double rmse = 0.0;      // both arcs min-max scaled to [0, 1]
  double rmse_raw = 0.0;  // native scales
  BinSpec spec;
  std::size_t n_bins_compared = 0;
  std::size_t n_bins_dropped = 0;
};

namespace detail {

inline std::vector<double> min_max(std::span<const double> v) {
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  const double range = *hi - *lo;
  if (!(range > 0.0)) throw DegenerateError("arc is constant; cannot min-max normalize");
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back((x - *lo) / range);
  return out;
}

}  // namespace detail

/// Compares arcs on the bins both have a point for.
inline EvaluationReport evaluate(const Arc& predicted, const Arc& gold, const BinSpec& spec = {}) {
  if (predicted.mode != gold.mode) throw ValidationError("arcs use different bin modes");
  std::vector<double> p, g;
  std::size_t i = 0, j = 0;
  while (i < predicted.points.size() && j < gold.points.size()) {
    const auto a = predicted.points[i].start, b = gold.points[j].start;
    if (a == b) {
      p.push_back(predicted.points[i++].score);
      g.push_back(gold.points[j++].score);
    } else if (a < b) {
      ++i;
    } else {
      ++j;
    }
  }
  std::set<std::int64_t> all;
  for (const auto* arc : {&predicted, &gold}) {
    for (const auto& pt : arc->points) all.insert(pt.start);
    all.insert(arc->empty_bins.begin(), arc->empty_bins.end());
  }
  if (p.size() < 2)
    throw ValidationError("fewer than 2 bins in common (" + std::to_string(p.size()) + ")");
  EvaluationReport rep;
  rep.spec = spec;
  rep.n_bins_compared = p.size();
  rep.n_bins_dropped = all.size() - p.size();
  rep.spearman = stats::spearman(p, g);
  rep.pearson = stats::pearson(p, g);
  rep.rmse_raw = stats::rmse(p, g);
  rep.rmse = stats::rmse(detail::min_max(p), detail::min_max(g));
  return rep;
}

struct LexiconArc {
  std::string lexicon;
  Arc arc;
  EvaluationReport report;
};

/// One predicted arc and report per lexicon, each against the same gold arc.
template <ScoreLookup L>
std::vector<LexiconArc> cross_lexicon_arcs(const TextStream& stream, std::span<const L> lexicons,
                                           const BinSpec& spec) {
  const Arc gold = gold_arc(stream, spec);
  std::vector<LexiconArc> out;
  out.reserve(lexicons.size());
  for (const auto& lex : lexicons) {
    Arc arc = predicted_arc(stream, lex, spec);
    EvaluationReport rep = evaluate(arc, gold, spec);
    out.push_back({std::string(lex.name()), std::move(arc), rep});
  }
  return out;
}

/// Mean evaluation over many streams.
struct SuiteEvaluation {
  BinSpec spec;
  std::size_t n_streams = 0;
  std::size_t n_failed = 0;  // streams whose evaluation was undefined
  double mean_spearman = 0.0;
  double mean_pearson = 0.0;
  double mean_rmse = 0.0;
  double mean_rmse_raw = 0.0;
};

inline SuiteEvaluation summarize(std::span<const std::optional<EvaluationReport>> reports,
                                 const BinSpec& spec) {
  SuiteEvaluation out;
  out.spec = spec;
  stats::CompensatedSum rho, r, e, er;
  for (const auto& rep : reports) {
    if (!rep) {
      ++out.n_failed;
      continue;
    }
    ++out.n_streams;
    rho.add(rep->spearman);
    r.add(rep->pearson);
    e.add(rep->rmse);
    er.add(rep->rmse_raw);
  }
  if (out.n_streams) {
    const auto n = static_cast<long double>(out.n_streams);
    out.mean_spearman = static_cast<double>(rho.value() / n);
    out.mean_pearson = static_cast<double>(r.value() / n);
    out.mean_rmse = static_cast<double>(e.value() / n);
    out.mean_rmse_raw = static_cast<double>(er.value() / n);
  }
  return out;
}

/// Evaluates predicted vs. gold for every stream; undefined evaluations
/// (constant arcs, too few bins) are counted as failures.
template <ScoreLookup L>
SuiteEvaluation evaluate_suite(std::span<const TextStream> streams, const L& lexicon,
                               const BinSpec& spec, std::size_t jobs = 1) {
  std::vector<std::optional<EvaluationReport>> reports(streams.size());
  parallel_for(streams.size(), jobs, [&](std::size_t i) {
    try {
      reports[i] = evaluate(predicted_arc(streams[i], lexicon, spec), gold_arc(streams[i], spec), spec);
    } catch (const DegenerateError&) {
    } catch (const ValidationError&) {
    }
  });
  return summarize(reports, spec);
}

// ---------------------------------------------------------------------------
// I/O

/// One JSON object per line: {"text": ..., "label": ..., "ts": ...}.
inline TextStream read_stream_jsonl(std::istream& in, std::string id) {
  TextStream stream{std::move(id), {}};
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(std::string("invalid JSON: ") + e.what(), row);
    }
    if (!j.is_object() || !j.contains("text") || !j["text"].is_string())
      throw ParseError("post needs a string 'text' field", row);
    std::optional<double> label;
    if (j.contains("label") && !j["label"].is_null()) {
      if (!j["label"].is_number()) throw ParseError("'label' must be a number", row);
      label = j["label"].get<double>();
    }
    std::optional<std::int64_t> ts;
    if (j.contains("ts") && !j["ts"].is_null()) {
      if (!j["ts"].is_string()) throw ParseError("'ts' must be an RFC 3339 string", row);
      try {
        ts = timeutil::parse_rfc3339(j["ts"].get<std::string>());
      } catch (const ParseError& e) {
        throw ParseError(e.what(), row);
      }
    }
    stream.posts.push_back(make_post(j["text"].get<std::string>(), label, ts));
  }
  return stream;
}

inline void write_stream_jsonl(std::ostream& out, const TextStream& stream) {
  for (const auto& p : stream.posts) {
    nlohmann::ordered_json j;
    j["text"] = p.raw_text;
    if (p.gold_label) {
      const double v = *p.gold_label;
      if (v == std::floor(v) && std::fabs(v) < 1e15)
        j["label"] = static_cast<std::int64_t>(v);
      else
        j["label"] = v;
    }
    if (p.timestamp) j["ts"] = timeutil::format_rfc3339(*p.timestamp);
    out << j.dump() << '\n';
  }
}

/// CSV `bin_start,score,coverage`; time-mode starts are RFC 3339.
inline void write_arc_csv(std::ostream& out, const Arc& arc) {
  out << "bin_start,score,coverage\n";
  for (const auto& p : arc.points) {
    if (arc.mode == BinMode::time)
      out << timeutil::format_rfc3339(p.start);
    else
      out << p.start;
    out << ',' << worrywords::detail::format_double(p.score) << ',' << p.coverage << '\n';
  }
}

inline Arc read_arc_csv(std::istream& in) {
  Arc arc;
  bool first = true;
  bool mode_known = false;
  csv::for_each_record(in, [&](const std::vector<std::string>& f, std::size_t row) {
    if (f.size() != 3) throw ParseError("expected bin_start,score,coverage", row);
    if (first && f[0] == "bin_start") {
      first = false;
      return;
    }
    first = false;
    const bool is_time = f[0].find('T') != std::string::npos || f[0].find('t') != std::string::npos;
    if (!mode_known) {
      arc.mode = is_time ? BinMode::time : BinMode::count;
      mode_known = true;
    } else if ((arc.mode == BinMode::time) != is_time) {
      throw ParseError("mixed count and time bin starts", row);
    }
    ArcPoint p;
    if (is_time) {
      p.start = timeutil::parse_rfc3339(f[0]);
    } else {
      const auto v = worrywords::detail::parse_double(f[0]);
      if (!v || *v != std::floor(*v)) throw ParseError("bad bin_start '" + f[0] + "'", row);
      p.start = static_cast<std::int64_t>(*v);
    }
    const auto score = worrywords::detail::parse_double(f[1]);
    const auto cov = worrywords::detail::parse_double(f[2]);
    if (!score || !cov || *cov < 1 || *cov != std::floor(*cov))
      throw ParseError("bad score or coverage", row);
    p.score = *score;
    p.coverage = static_cast<std::size_t>(*cov);
    if (!arc.points.empty() && p.start <= arc.points.back().start)
      throw ParseError("bin starts must be strictly increasing", row);
    arc.points.push_back(p);
  });
  return arc;
}

inline nlohmann::ordered_json to_json(const BinSpec& b) {
  if (b.mode == BinMode::time) return {{"mode", "time"}, {"period_seconds", b.period}};
  return {{"mode", "count"}, {"k", b.k}, {"s", b.s}};
}

inline nlohmann::ordered_json to_json(const EvaluationReport& r) {
  return {{"spearman", r.spearman},
          {"pearson", r.pearson},
          {"rmse", r.rmse},
          {"rmse_raw", r.rmse_raw},
          {"binspec", to_json(r.spec)},
          {"n_bins_compared", r.n_bins_compared},
          {"n_bins_dropped", r.n_bins_dropped}};
}

}  // namespace worrywords::arcs
