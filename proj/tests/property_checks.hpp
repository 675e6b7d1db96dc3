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

// Hand-rolled property checks over seeded random cases. Shared by the
// GoogleTest property suite and the acceptance runner.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "worrywords/worrywords.hpp"

namespace props {

using namespace worrywords;

struct Outcome {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::string first_failure;
  bool ok() const { return cases > 0 && failures == 0; }
};

using CaseFn = std::function<std::optional<std::string>(Rng&)>;

inline Outcome run(const std::string& name, std::size_t cases, std::uint64_t seed, const CaseFn& fn) {
  Outcome out{name, cases, 0, {}};
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(derive_seed(seed, i));
    std::optional<std::string> fail;
    try {
      fail = fn(rng);
    } catch (const std::exception& e) {
      fail = std::string("threw: ") + e.what();
    }
    if (fail) {
      if (out.failures++ == 0) out.first_failure = "case " + std::to_string(i) + ": " + *fail;
    }
  }
  return out;
}

template <typename... Args>
std::string msg(Args&&... args) {
  std::ostringstream os;
  os.precision(17);
  (os << ... << args);
  return os.str();
}

// ---------------------------------------------------------------------------
// generators

inline std::vector<double> random_vector(Rng& rng, std::size_t n, bool with_ties) {
  std::vector<double> v(n);
  for (auto& x : v) x = with_ties ? static_cast<double>(rng.between(-3, 3)) : rng.uniform(-10.0, 10.0);
  return v;
}

inline bool has_variance(const std::vector<double>& v) {
  return std::any_of(v.begin(), v.end(), [&](double x) { return x != v.front(); });
}

inline std::string random_word(Rng& rng) {
  static const char* kSyllables[] = {"an", "xi", "ous", "calm", "ly", "ser", "ene", "wor",
                                     "ry", "té", "#", "fear", "o", "na", "ki"};
  std::string w;
  const auto n = rng.between(1, 4);
  for (int i = 0; i < n; ++i) {
    const char* s = kSyllables[rng.below(std::size(kSyllables))];
    if (std::string_view(s) == "#" && !w.empty()) continue;
    w += s;
  }
  if (w == "#") w = "x";
  return w;
}

inline std::vector<ResponseRecord> random_responses(Rng& rng, std::size_t n_terms,
                                                    std::size_t n_annotators, std::size_t max_per_term) {
  std::vector<ResponseRecord> out;
  for (std::size_t t = 0; t < n_terms; ++t) {
    const auto per = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(max_per_term)));
    for (std::size_t k = 0; k < per; ++k)
      out.push_back({"t" + std::to_string(t), "a" + std::to_string(rng.below(n_annotators)),
                     static_cast<int>(rng.between(-3, 3))});
  }
  return out;
}

inline arcs::TextStream random_token_stream(Rng& rng, std::size_t n_posts, std::size_t vocab) {
  arcs::TextStream s{"s", {}};
  for (std::size_t i = 0; i < n_posts; ++i) {
    arcs::Post p;
    const auto len = rng.below(6);
    for (std::size_t t = 0; t < len; ++t) p.tokens.push_back("w" + std::to_string(rng.below(vocab)));
    p.gold_label = static_cast<double>(rng.below(2));
    s.posts.push_back(std::move(p));
  }
  return s;
}

inline Lexicon random_word_lexicon(Rng& rng, std::size_t vocab, double scale = 1.0) {
  Lexicon lex("random");
  for (std::size_t i = 0; i < vocab; ++i)
    if (rng.bernoulli(0.7)) lex.add("w" + std::to_string(i), scale * rng.uniform(-3.0, 3.0));
  if (lex.empty()) lex.add("w0", scale * 1.0);
  return lex;
}

// ---------------------------------------------------------------------------
// lexicon_core

inline Outcome lexicon_partition(std::size_t cases) {
  return run("lexicon: every score maps to exactly one bin and class", cases, 101, [](Rng& rng) -> std::optional<std::string> {
    const auto n = static_cast<std::size_t>(rng.between(1, 20));
    const ClassScheme scheme(n);
    for (int rep = 0; rep < 100; ++rep) {
      const double v = rng.uniform() < 0.05 ? (rng.bernoulli(0.5) ? 3.0 : -3.0) : rng.uniform(-3.0, 3.0);
      const auto b = scheme.bin_of(v);
      if (b >= n || b != oracle::bin(v, n)) return msg("score ", v, " n_bins ", n, " -> bin ", b);
      if (class_index(score_to_class7(v)) != oracle::class7(v)) return msg("class mismatch at ", v);
    }
    return std::nullopt;
  });
}

inline Outcome lexicon_monotone(std::size_t cases) {
  return run("lexicon: bin and class are monotone in score", cases, 102, [](Rng& rng) -> std::optional<std::string> {
    const ClassScheme scheme(static_cast<std::size_t>(rng.between(1, 20)));
    double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    if (a > b) std::swap(a, b);
    if (a < b && scheme.bin_of(a) > scheme.bin_of(b)) return msg("bin(", a, ") > bin(", b, ")");
    if (a < b && score_to_class7(a) > score_to_class7(b)) return msg("class(", a, ") > class(", b, ")");
    return std::nullopt;
  });
}

inline Outcome lexicon_roundtrip(std::size_t cases) {
  return run("lexicon: save then load is entry-identical", cases, 103, [](Rng& rng) -> std::optional<std::string> {
    Lexicon lex("x");
    const auto n = rng.below(8);
    for (std::size_t i = 0; i < n; ++i) {
      const std::string w = random_word(rng) + std::to_string(i);
      lex.add(w, rng.bernoulli(0.2) ? static_cast<double>(rng.between(-3, 3)) : rng.uniform(-3.0, 3.0));
    }
    std::stringstream ss;
    save_lexicon(ss, lex);
    const Lexicon back = load_lexicon(ss, "x");
    if (!(back == lex)) return msg("round trip changed entries:\n", ss.str());
    return std::nullopt;
  });
}

inline Outcome lexicon_distribution_sums(std::size_t cases) {
  return run("lexicon: class percentages sum to 100", cases, 104, [](Rng& rng) -> std::optional<std::string> {
    Lexicon lex("x");
    const auto n = 1 + rng.below(50);
    for (std::size_t i = 0; i < n; ++i) lex.add("t" + std::to_string(i), rng.uniform(-3.0, 3.0));
    const auto d = class_distribution(lex);
    double p = 0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < 7; ++i) {
      p += d.percentages[i];
      c += d.counts[i];
    }
    if (std::fabs(p - 100.0) > 1e-9 || c != n) return msg("sum ", p, " count ", c);
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// annotation_pipeline

inline GoldSet random_golds(Rng& rng, std::size_t n_terms) {
  GoldSet g;
  for (std::size_t t = 0; t < n_terms; ++t)
    if (rng.bernoulli(0.2))
      g.add({"t" + std::to_string(t), static_cast<int>(rng.between(-3, 3)), rng.bernoulli(0.5)});
  return g;
}

inline Outcome qc_idempotent(std::size_t cases) {
  return run("annotation: qc_filter is idempotent", cases, 201, [](Rng& rng) -> std::optional<std::string> {
    const auto rs = random_responses(rng, 12, 5, 6);
    const auto golds = random_golds(rng, 12);
    PipelineConfig cfg;
    cfg.gold_tolerance = static_cast<int>(rng.below(3));
    cfg.exclude_gold_from_aggregation = rng.bernoulli(0.5);
    const auto once = qc_filter(rs, golds, cfg);
    const auto twice = qc_filter(once.kept, golds, cfg);
    if (once.kept != twice.kept) return msg("second pass changed the kept set");
    return std::nullopt;
  });
}

inline Outcome aggregate_within_range(std::size_t cases) {
  return run("annotation: aggregate mean lies within rating range", cases, 202, [](Rng& rng) -> std::optional<std::string> {
    const auto rs = random_responses(rng, 10, 6, 8);
    const auto agg = aggregate(rs);
    std::map<std::string, std::pair<int, int>> range;
    for (const auto& r : rs) {
      auto [it, fresh] = range.try_emplace(r.term, r.rating, r.rating);
      it->second.first = std::min(it->second.first, r.rating);
      it->second.second = std::max(it->second.second, r.rating);
    }
    for (const auto& [term, mm] : range) {
      const auto s = agg.lexicon.score(term);
      if (!s || *s < mm.first || *s > mm.second) return msg(term, " score outside its ratings");
    }
    return std::nullopt;
  });
}

inline Outcome aggregate_permutation(std::size_t cases) {
  return run("annotation: response order does not change scores", cases, 203, [](Rng& rng) -> std::optional<std::string> {
    auto rs = random_responses(rng, 10, 6, 8);
    const auto a = aggregate(rs);
    rng.shuffle(std::span<ResponseRecord>(rs));
    const auto b = aggregate(rs);
    if (!(a.lexicon == b.lexicon)) return msg("scores differ after shuffling");
    return std::nullopt;
  });
}

inline Outcome discard_complete(std::size_t cases) {
  return run("annotation: no discarded annotator survives filtering", cases, 204, [](Rng& rng) -> std::optional<std::string> {
    const auto rs = random_responses(rng, 15, 5, 6);
    const auto golds = random_golds(rng, 15);
    const auto qc = qc_filter(rs, golds);
    for (const auto& a : qc.annotators) {
      if (!a.discarded) continue;
      for (const auto& r : qc.kept)
        if (r.annotator == a.annotator) return msg("response of discarded ", a.annotator, " kept");
    }
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// reliability

inline reliability::RatingsByTerm random_grouped(Rng& rng) {
  auto rs = random_responses(rng, 3 + rng.below(8), 10, 9);
  for (std::size_t t = 0; t < 3; ++t) rs.push_back({"t" + std::to_string(t), "z", static_cast<int>(rng.between(-3, 3))});
  return reliability::group_by_term(rs);
}

inline Outcome shclosep_monotone(std::size_t cases) {
  return run("reliability: SHCloseP non-decreasing in threshold", cases, 301, [](Rng& rng) -> std::optional<std::string> {
    const auto g = random_grouped(rng);
    reliability::ReliabilityConfig cfg;
    cfg.n_trials = 3;
    cfg.seed = rng.next();
    cfg.schemes.clear();
    cfg.with_correlations = false;
    for (int i = 0; i < 4; ++i) cfg.thresholds.push_back(rng.uniform(0.01, 6.5));
    std::sort(cfg.thresholds.begin(), cfg.thresholds.end());
    const auto rep = reliability::run_split_half(g, cfg);
    for (std::size_t i = 1; i < rep.thresholds.size(); ++i)
      if (rep.thresholds[i].shclosep < rep.thresholds[i - 1].shclosep) return msg("not monotone");
    return std::nullopt;
  });
}

inline Outcome shcmp_nested(std::size_t cases) {
  return run("reliability: coarser nested scheme has SHCMP >= finer", cases, 302, [](Rng& rng) -> std::optional<std::string> {
    const auto g = random_grouped(rng);
    const auto coarse = static_cast<std::size_t>(rng.between(1, 5));
    const auto fine = coarse * static_cast<std::size_t>(rng.between(2, 3));
    reliability::ReliabilityConfig cfg;
    cfg.n_trials = 3;
    cfg.seed = rng.next();
    cfg.schemes = {coarse, fine};
    cfg.with_correlations = false;
    const auto rep = reliability::run_split_half(g, cfg);
    if (rep.rows[0].shcmp < rep.rows[1].shcmp) return msg(coarse, " bins < ", fine, " bins");
    return std::nullopt;
  });
}

inline Outcome reliability_deterministic(std::size_t cases) {
  return run("reliability: report independent of job count", cases, 303, [](Rng& rng) -> std::optional<std::string> {
    auto g = random_grouped(rng);
    // make correlations defined
    g.terms.push_back("lo");
    g.ratings.push_back({-3, -3});
    g.terms.push_back("hi");
    g.ratings.push_back({3, 3});
    reliability::ReliabilityConfig cfg;
    cfg.n_trials = 4;
    cfg.seed = rng.next();
    cfg.thresholds = {0.5};
    cfg.jobs = 1;
    const auto a = reliability::run_split_half(g, cfg);
    cfg.jobs = 3;
    const auto b = reliability::run_split_half(g, cfg);
    if (reliability::to_json(a).dump() != reliability::to_json(b).dump()) return msg("reports differ");
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// stats

inline Outcome stats_oracle(std::size_t cases) {
  return run("stats: ranks/spearman/pearson/rmse match brute-force oracles", cases, 401, [](Rng& rng) -> std::optional<std::string> {
    const auto n = static_cast<std::size_t>(rng.between(2, 20));
    const bool ties = rng.bernoulli(0.5);
    const auto x = random_vector(rng, n, ties), y = random_vector(rng, n, ties);
    const auto r = stats::ranks(x);
    const auto ro = oracle::midranks(x);
    for (std::size_t i = 0; i < n; ++i)
      if (std::fabs(r[i] - ro[i]) > 1e-9) return msg("rank ", i);
    if (std::fabs(stats::rmse(x, y) - oracle::rmse(x, y)) > 1e-9) return msg("rmse");
    if (has_variance(x) && has_variance(y)) {
      if (std::fabs(stats::pearson(x, y) - oracle::pearson(x, y)) > 1e-9) return msg("pearson");
      if (std::fabs(stats::spearman(x, y) - oracle::spearman(x, y)) > 1e-9) return msg("spearman");
    }
    return std::nullopt;
  });
}

inline Outcome spearman_monotone_invariant(std::size_t cases) {
  return run("stats: spearman invariant under strictly monotone transforms", cases, 402, [](Rng& rng) -> std::optional<std::string> {
    const auto n = static_cast<std::size_t>(rng.between(2, 20));
    const auto x = random_vector(rng, n, rng.bernoulli(0.5)), y = random_vector(rng, n, false);
    if (!has_variance(x) || !has_variance(y)) return std::nullopt;
    auto tx = x;
    for (auto& v : tx) v = std::exp(v / 4.0) + v * v * v;
    if (std::fabs(stats::spearman(x, y) - stats::spearman(tx, y)) > 1e-12) return msg("changed");
    return std::nullopt;
  });
}

inline Outcome pearson_affine_invariant(std::size_t cases) {
  return run("stats: pearson invariant under positive affine transforms", cases, 403, [](Rng& rng) -> std::optional<std::string> {
    const auto n = static_cast<std::size_t>(rng.between(2, 20));
    const auto x = random_vector(rng, n, false), y = random_vector(rng, n, false);
    const double a = rng.uniform(0.01, 100.0), b = rng.uniform(-50.0, 50.0);
    auto tx = x;
    for (auto& v : tx) v = a * v + b;
    if (std::fabs(stats::pearson(x, y) - stats::pearson(tx, y)) > 1e-9) return msg("changed");
    return std::nullopt;
  });
}

inline Outcome correlation_bounded(std::size_t cases) {
  return run("stats: |rho|, |r| <= 1", cases, 404, [](Rng& rng) -> std::optional<std::string> {
    const auto n = static_cast<std::size_t>(rng.between(2, 20));
    auto x = random_vector(rng, n, rng.bernoulli(0.3));
    auto y = rng.bernoulli(0.3) ? x : random_vector(rng, n, false);
    if (rng.bernoulli(0.3))
      for (auto& v : y) v = -v * 1e6;
    if (!has_variance(x) || !has_variance(y)) return std::nullopt;
    const double r = stats::pearson(x, y), rho = stats::spearman(x, y);
    if (std::fabs(r) > 1 + 1e-12 || std::fabs(rho) > 1 + 1e-12) return msg("out of range");
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// arcs

inline Outcome arcs_bin_counts(std::size_t cases) {
  return run("arcs: s = k partitions the stream; s = 1 gives N - k + 1 bins", cases, 501, [](Rng& rng) -> std::optional<std::string> {
    const auto k = static_cast<std::size_t>(rng.between(1, 12));
    const auto n_blocks = static_cast<std::size_t>(rng.between(1, 8));
    auto s = random_token_stream(rng, k * n_blocks + rng.below(k), 5);
    for (auto& p : s.posts) p.gold_label = 1.0;
    const auto part = arcs::gold_arc(s, arcs::BinSpec::count(k, k));
    std::size_t covered = 0;
    for (const auto& p : part.points) covered += p.coverage;
    if (part.points.size() != s.posts.size() / k || covered != (s.posts.size() / k) * k)
      return msg("partition bins ", part.points.size());
    for (std::size_t i = 0; i < part.points.size(); ++i)
      if (part.points[i].start != static_cast<std::int64_t>(i * k)) return msg("bin start");
    const auto roll = arcs::gold_arc(s, arcs::BinSpec::rolling(k));
    if (roll.points.size() != s.posts.size() - k + 1) return msg("rolling bins ", roll.points.size());
    return std::nullopt;
  });
}

inline Outcome arcs_reorder_invariant(std::size_t cases) {
  return run("arcs: predicted arc invariant to within-bin reordering", cases, 502, [](Rng& rng) -> std::optional<std::string> {
    const auto k = static_cast<std::size_t>(rng.between(1, 8));
    auto s = random_token_stream(rng, k * static_cast<std::size_t>(rng.between(1, 6)), 12);
    const auto lex = random_word_lexicon(rng, 12);
    const auto spec = arcs::BinSpec::count(k, k);
    const auto a = arcs::predicted_arc(s, lex, spec);
    for (std::size_t b = 0; b + k <= s.posts.size(); b += k)
      rng.shuffle(std::span<arcs::Post>(s.posts.data() + b, k));
    const auto c = arcs::predicted_arc(s, lex, spec);
    if (a.points.size() != c.points.size()) return msg("point count changed");
    for (std::size_t i = 0; i < a.points.size(); ++i)
      if (a.points[i].start != c.points[i].start || std::fabs(a.points[i].score - c.points[i].score) > 1e-12 ||
          a.points[i].coverage != c.points[i].coverage)
        return msg("bin ", i, " changed");
    return std::nullopt;
  });
}

inline Outcome arcs_scale_invariant(std::size_t cases) {
  return run("arcs: scaling the lexicon scales the arc; rho and normalized RMSE unchanged", cases, 503,
             [](Rng& rng) -> std::optional<std::string> {
               auto s = random_token_stream(rng, static_cast<std::size_t>(rng.between(6, 40)), 10);
               Rng lex_rng(rng.next());
               Rng lex_rng2 = lex_rng;
               const double c = rng.uniform(0.05, 1.0);
               const auto lex = random_word_lexicon(lex_rng, 10);
               const auto scaled = random_word_lexicon(lex_rng2, 10, c);
               const auto spec = arcs::BinSpec::rolling(static_cast<std::size_t>(rng.between(1, 4)));
               const auto a = arcs::predicted_arc(s, lex, spec), b = arcs::predicted_arc(s, scaled, spec);
               if (a.points.size() != b.points.size()) return msg("point count");
               for (std::size_t i = 0; i < a.points.size(); ++i)
                 if (std::fabs(a.points[i].score * c - b.points[i].score) > 1e-12) return msg("point ", i);
               const auto gold = arcs::gold_arc(s, spec);
               std::optional<arcs::EvaluationReport> ra, rb;
               try {
                 ra = arcs::evaluate(a, gold, spec);
               } catch (const Error&) {
               }
               try {
                 rb = arcs::evaluate(b, gold, spec);
               } catch (const Error&) {
               }
               if (ra.has_value() != rb.has_value()) return msg("definedness differs");
               if (ra && (std::fabs(ra->spearman - rb->spearman) > 1e-9 || std::fabs(ra->rmse - rb->rmse) > 1e-9))
                 return msg("evaluation changed");
               return std::nullopt;
             });
}

inline Outcome arcs_zero_gold(std::size_t cases) {
  return run("arcs: gold arc of an all-zero stream is zero", cases, 504, [](Rng& rng) -> std::optional<std::string> {
    auto s = random_token_stream(rng, static_cast<std::size_t>(rng.between(1, 50)), 3);
    for (auto& p : s.posts) p.gold_label = 0.0;
    const auto k = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(s.posts.size())));
    const auto step = static_cast<std::size_t>(rng.between(1, 5));
    for (const auto& p : arcs::gold_arc(s, arcs::BinSpec::count(k, step)).points)
      if (p.score != 0.0) return msg("nonzero bin");
    return std::nullopt;
  });
}

// ---------------------------------------------------------------------------
// stream_sampler

inline sampler::LabeledCorpus tiny_corpus(Rng& rng) {
  sampler::LabeledCorpus c;
  const auto np = 1 + rng.below(4), nn = 1 + rng.below(4);
  for (std::size_t i = 0; i < np; ++i) c.positive.push_back({"p" + std::to_string(i), {"p"}, 1.0, {}});
  for (std::size_t i = 0; i < nn; ++i) c.negative.push_back({"n" + std::to_string(i), {"n"}, 0.0, {}});
  return c;
}

inline Outcome sampler_exact_length(std::size_t cases) {
  return run("sampler: every stream has exactly total_length posts (small corpus, with replacement)", cases, 601,
             [](Rng& rng) -> std::optional<std::string> {
               const auto corpus = tiny_corpus(rng);
               sampler::SamplerConfig cfg;
               cfg.burst_min = static_cast<std::size_t>(rng.between(1, 20));
               cfg.burst_max = cfg.burst_min + rng.below(30);
               cfg.total_length = cfg.burst_min + rng.below(300);
               const auto plan = sampler::plan_stream(corpus, cfg, rng);
               std::size_t sum = 0;
               for (const auto& b : plan.bursts) sum += b.length;
               if (plan.draws.size() != cfg.total_length || sum != cfg.total_length)
                 return msg("length ", plan.draws.size(), " vs ", cfg.total_length);
               for (std::size_t i = 0; i + 1 < plan.bursts.size(); ++i)
                 if (plan.bursts[i].length < cfg.burst_min || plan.bursts[i].length > cfg.burst_max)
                   return msg("burst length out of range");
               return std::nullopt;
             });
}

inline Outcome sampler_suite_deterministic(std::size_t cases) {
  return run("sampler: (master seed, index) determines the stream", cases, 602, [](Rng& rng) -> std::optional<std::string> {
    const auto corpus = tiny_corpus(rng);
    sampler::SamplerConfig cfg;
    cfg.total_length = 40;
    cfg.burst_min = 5;
    cfg.burst_max = 15;
    cfg.master_seed = rng.next();
    const auto index = rng.below(1000);
    const auto a = sampler::generate_suite_stream(corpus, cfg, index);
    Rng direct(derive_seed(cfg.master_seed, index));
    const auto b = sampler::plan_stream(corpus, cfg, direct);
    if (a.bursts != b.bursts) return msg("bursts differ");
    for (std::size_t i = 0; i < b.draws.size(); ++i)
      if (a.stream.posts[i].raw_text != sampler::materialize(corpus, b.draws[i]).raw_text) return msg("post ", i);
    return std::nullopt;
  });
}

/// Bursts of >= 200 posts: |fraction - p| < 0.1 in >= 99% of them.
inline Outcome sampler_burst_fraction(std::size_t cases) {
  Outcome out{"sampler: per-burst positive fraction within 0.1 of p for >= 99% of bursts >= 200", cases, 0, {}};
  std::size_t bad = 0;
  for (std::size_t i = 0; i < cases; ++i) {
    Rng rng(derive_seed(603, i));
    sampler::LabeledCorpus corpus;
    corpus.positive.push_back({"p", {}, 1.0, {}});
    corpus.negative.push_back({"n", {}, 0.0, {}});
    const sampler::BurstSpec spec{rng.uniform(-90.0, 90.0), static_cast<std::size_t>(rng.between(200, 600))};
    const auto draws = sampler::sample_burst_draws(corpus, spec, rng);
    std::size_t pos = 0;
    for (const auto& d : draws) pos += d.positive;
    const double frac = static_cast<double>(pos) / static_cast<double>(draws.size());
    if (std::fabs(frac - sampler::slope_to_proportion(spec.slope)) >= 0.1) ++bad;
  }
  if (static_cast<double>(bad) > 0.01 * static_cast<double>(cases)) {
    out.failures = bad;
    out.first_failure = msg(bad, " of ", cases, " bursts off by >= 0.1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// lexicon_analysis

inline std::vector<ScoreTable> random_tables(Rng& rng) {
  const auto n_res = static_cast<std::size_t>(rng.between(2, 4));
  std::vector<ScoreTable> out;
  for (std::size_t r = 0; r < n_res; ++r) {
    ScoreTable t("r" + std::to_string(r));
    for (int i = 0; i < 30; ++i)
      if (rng.bernoulli(0.8)) t.add("t" + std::to_string(i), rng.uniform(-1.0, 1.0));
    t.add("common-a", -5.0);
    t.add("common-b", 5.0);
    out.push_back(std::move(t));
  }
  return out;
}

inline Outcome matrix_symmetric(std::size_t cases) {
  return run("analysis: correlation matrix symmetric with unit diagonal, order-free", cases, 701,
             [](Rng& rng) -> std::optional<std::string> {
               const auto tables = random_tables(rng);
               auto join = analysis::join_lexicons(tables);
               for (auto method : {analysis::Method::spearman, analysis::Method::pearson}) {
                 const auto m = analysis::correlation_matrix(join, method);
                 for (std::size_t i = 0; i < m.values.size(); ++i) {
                   if (m.values[i][i] != 1.0) return msg("diagonal");
                   for (std::size_t j = 0; j < m.values.size(); ++j)
                     if (m.values[i][j] != m.values[j][i]) return msg("asymmetric");
                 }
                 auto shuffled = join;
                 rng.shuffle(std::span<analysis::TermJoin>(shuffled.rows));
                 const auto m2 = analysis::correlation_matrix(shuffled, method);
                 for (std::size_t i = 0; i < m.values.size(); ++i)
                   for (std::size_t j = 0; j < m.values.size(); ++j)
                     if (std::fabs(m.values[i][j] - m2.values[i][j]) > 1e-12) return msg("term order matters");
               }
               return std::nullopt;
             });
}

inline Outcome join_bounded(std::size_t cases) {
  return run("analysis: join size <= smallest resource", cases, 702, [](Rng& rng) -> std::optional<std::string> {
    const auto tables = random_tables(rng);
    const auto join = analysis::join_lexicons(tables);
    for (const auto& t : tables)
      if (join.rows.size() > t.size()) return msg("join larger than ", t.name());
    for (const auto& row : join.rows)
      for (std::size_t i = 0; i < tables.size(); ++i)
        if (tables[i].score(row.term) != row.values[i]) return msg("wrong value for ", row.term);
    return std::nullopt;
  });
}

inline Outcome aoa_totals(std::size_t cases) {
  return run("analysis: AoA distribution totals 100; per-year shares total 100", cases, 703,
             [](Rng& rng) -> std::optional<std::string> {
               Lexicon lex("x");
               std::vector<analysis::AoaRecord> aoa;
               const auto n = 1 + rng.below(40);
               for (std::size_t i = 0; i < n; ++i) {
                 lex.add("t" + std::to_string(i), rng.uniform(-3.0, 3.0));
                 if (rng.bernoulli(0.8) || i == 0) aoa.push_back({"t" + std::to_string(i), rng.uniform(0.5, 18.0)});
               }
               const auto d = analysis::aoa_distribution(lex, aoa);
               double total = 0;
               for (const auto& c : d.cells) total += c.percentage;
               if (std::fabs(total - 100.0) > 1e-9) return msg("distribution total ", total);
               for (const auto& row : analysis::aoa_class_shares(lex, aoa)) {
                 double s = 0;
                 for (double v : row.shares) s += v;
                 if (std::fabs(s - 100.0) > 1e-9) return msg("age ", row.age, " shares total ", s);
               }
               return std::nullopt;
             });
}

// ---------------------------------------------------------------------------

struct Entry {
  const char* id;
  Outcome (*fn)(std::size_t);
};

inline const std::vector<Entry>& registry() {
  static const std::vector<Entry> kAll = {
      {"lexicon_partition", lexicon_partition},
      {"lexicon_monotone", lexicon_monotone},
      {"lexicon_roundtrip", lexicon_roundtrip},
      {"lexicon_distribution_sums", lexicon_distribution_sums},
      {"qc_idempotent", qc_idempotent},
      {"aggregate_within_range", aggregate_within_range},
      {"aggregate_permutation", aggregate_permutation},
      {"discard_complete", discard_complete},
      {"shclosep_monotone", shclosep_monotone},
      {"shcmp_nested", shcmp_nested},
      {"reliability_deterministic", reliability_deterministic},
      {"stats_oracle", stats_oracle},
      {"spearman_monotone_invariant", spearman_monotone_invariant},
      {"pearson_affine_invariant", pearson_affine_invariant},
      {"correlation_bounded", correlation_bounded},
      {"arcs_bin_counts", arcs_bin_counts},
      {"arcs_reorder_invariant", arcs_reorder_invariant},
      {"arcs_scale_invariant", arcs_scale_invariant},
      {"arcs_zero_gold", arcs_zero_gold},
      {"sampler_exact_length", sampler_exact_length},
      {"sampler_suite_deterministic", sampler_suite_deterministic},
      {"sampler_burst_fraction", sampler_burst_fraction},
      {"matrix_symmetric", matrix_symmetric},
      {"join_bounded", join_bounded},
      {"aoa_totals", aoa_totals},
  };
  return kAll;
}

}  // namespace props
