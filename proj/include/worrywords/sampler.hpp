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

// Synthetic labeled streams: posts are drawn with replacement from a binary
// labeled corpus in bursts. Each burst has a random slope in [-90, 90]
// degrees that fixes the probability of drawing a positive post, so the
// gold arc rises and falls with bursts of random steepness and length.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "worrywords/arcs.hpp"
#include "worrywords/errors.hpp"
#include "worrywords/parallel.hpp"
#include "worrywords/random.hpp"

namespace worrywords::sampler {

using arcs::Post;
using arcs::TextStream;

struct LabeledCorpus {
  std::vector<Post> positive;  // label 1
  std::vector<Post> negative;  // label 0

  void validate() const {
    if (positive.empty() || negative.empty())
      throw ValidationError("labeled corpus needs both positive and negative posts");
  }

  /// Splits a stream of posts labeled 0 or 1.
  static LabeledCorpus from_stream(const TextStream& stream) {
    LabeledCorpus c;
    for (std::size_t i = 0; i < stream.posts.size(); ++i) {
      const auto& p = stream.posts[i];
      if (!p.gold_label || (*p.gold_label != 0.0 && *p.gold_label != 1.0))
        throw ValidationError("corpus post " + std::to_string(i) + " is not labeled 0 or 1");
      (*p.gold_label == 1.0 ? c.positive : c.negative).push_back(p);
    }
    c.validate();
    return c;
  }
};

struct BurstSpec {
  double slope = 0.0;  // degrees
  std::size_t length = 0;

  bool operator==(const BurstSpec&) const = default;
};

/// bernoulli: each post independently positive with probability p.
/// exact: round(p * length) positives at shuffled positions.
enum class Mixing { bernoulli, exact };

struct SamplerConfig {
  std::size_t total_length = 10000;
  std::size_t n_streams = 1000;
  std::size_t burst_min = 50;
  std::size_t burst_max = 500;
  double slope_min = -90.0;
  double slope_max = 90.0;
  Mixing mixing = Mixing::bernoulli;
  std::uint64_t master_seed = 0;

  void validate() const {
    if (total_length == 0) throw ValidationError("total_length must be positive");
    if (burst_min < 1 || burst_min > burst_max)
      throw ValidationError("burst length range must satisfy 1 <= min <= max");
    if (total_length < burst_min) throw ValidationError("total_length shorter than the minimum burst");
    if (!(slope_min >= -90.0 && slope_max <= 90.0 && slope_min <= slope_max))
      throw ValidationError("slope range must lie within [-90, 90]");
  }
};

/// p = (slope + 90) / 180.
inline double slope_to_proportion(double slope) {
  if (!(slope >= -90.0 && slope <= 90.0))
    throw RangeError("slope " + std::to_string(slope) + " outside [-90, 90]");
  return (slope + 90.0) / 180.0;
}

/// A sampled post: which pool, and which index in it.
struct Draw {
  bool positive = false;
  std::size_t index = 0;

  bool operator==(const Draw&) const = default;
};

inline std::vector<Draw> sample_burst_draws(const LabeledCorpus& corpus, const BurstSpec& spec,
                                            Rng& rng, Mixing mixing = Mixing::bernoulli) {
  const double p = slope_to_proportion(spec.slope);
  corpus.validate();
  std::vector<char> labels;
  if (mixing == Mixing::exact) {
    const auto n_pos = static_cast<std::size_t>(std::llround(p * static_cast<double>(spec.length)));
    labels.assign(spec.length, 0);
    std::fill_n(labels.begin(), n_pos, 1);
    rng.shuffle(std::span<char>(labels));
  }
  std::vector<Draw> out;
  out.reserve(spec.length);
  for (std::size_t i = 0; i < spec.length; ++i) {
    const bool pos = mixing == Mixing::exact ? labels[i] != 0 : rng.bernoulli(p);
    const auto& pool = pos ? corpus.positive : corpus.negative;
    out.push_back({pos, static_cast<std::size_t>(rng.below(pool.size()))});
  }
  return out;
}

inline Post materialize(const LabeledCorpus& corpus, const Draw& d) {
  Post p = d.positive ? corpus.positive[d.index] : corpus.negative[d.index];
  p.gold_label = d.positive ? 1.0 : 0.0;
  return p;
}

/// Each post is positive with probability slope_to_proportion(slope).
inline std::vector<Post> sample_burst(const LabeledCorpus& corpus, const BurstSpec& spec,
                                      Rng& rng, Mixing mixing = Mixing::bernoulli) {
  std::vector<Post> out;
  out.reserve(spec.length);
  for (const auto& d : sample_burst_draws(corpus, spec, rng, mixing))
    out.push_back(materialize(corpus, d));
  return out;
}

struct GeneratedStream {
  TextStream stream;
  std::vector<BurstSpec> bursts;  // lengths after truncation
  std::uint64_t seed = 0;
};

/// Draw-level stream plan; `generate_stream` materializes it.
struct StreamPlan {
  std::vector<Draw> draws;
  std::vector<BurstSpec> bursts;
};

inline StreamPlan plan_stream(const LabeledCorpus& corpus, const SamplerConfig& cfg, Rng& rng) {
  cfg.validate();
  corpus.validate();
  StreamPlan plan;
  plan.draws.reserve(cfg.total_length);
  while (plan.draws.size() < cfg.total_length) {
    auto length = static_cast<std::size_t>(rng.between(static_cast<std::int64_t>(cfg.burst_min),
                                                       static_cast<std::int64_t>(cfg.burst_max)));
    const double slope = rng.uniform(cfg.slope_min, cfg.slope_max);
    length = std::min(length, cfg.total_length - plan.draws.size());
    const BurstSpec spec{slope, length};
    auto draws = sample_burst_draws(corpus, spec, rng, cfg.mixing);
    plan.draws.insert(plan.draws.end(), draws.begin(), draws.end());
    plan.bursts.push_back(spec);
  }
  return plan;
}

/// Bursts with fresh random slope and length until total_length posts; the
/// final burst is truncated to fit.
inline GeneratedStream generate_stream(const LabeledCorpus& corpus, const SamplerConfig& cfg,
                                       Rng& rng, std::string id = "stream") {
  StreamPlan plan = plan_stream(corpus, cfg, rng);
  GeneratedStream out;
  out.stream.id = std::move(id);
  out.stream.posts.reserve(plan.draws.size());
  for (const auto& d : plan.draws) out.stream.posts.push_back(materialize(corpus, d));
  out.bursts = std::move(plan.bursts);
  return out;
}

inline std::string stream_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "stream-%05zu", index);
  return buf;
}

/// Stream `index` of the suite defined by cfg.master_seed.
inline GeneratedStream generate_suite_stream(const LabeledCorpus& corpus, const SamplerConfig& cfg,
                                             std::size_t index) {
  const std::uint64_t seed = derive_seed(cfg.master_seed, index);
  Rng rng(seed);
  auto g = generate_stream(corpus, cfg, rng, stream_id(index));
  g.seed = seed;
  return g;
}

inline std::vector<GeneratedStream> generate_suite(const LabeledCorpus& corpus,
                                                   const SamplerConfig& cfg, std::size_t jobs = 1) {
  cfg.validate();
  corpus.validate();
  std::vector<GeneratedStream> out(cfg.n_streams);
  parallel_for(cfg.n_streams, jobs,
               [&](std::size_t i) { out[i] = generate_suite_stream(corpus, cfg, i); });
  return out;
}

inline nlohmann::ordered_json to_json(const SamplerConfig& c) {
  return {{"total_length", c.total_length}, {"n_streams", c.n_streams},
          {"burst_min", c.burst_min},       {"burst_max", c.burst_max},
          {"slope_min", c.slope_min},       {"slope_max", c.slope_max},
          {"mixing", c.mixing == Mixing::exact ? "exact" : "bernoulli"},
          {"master_seed", c.master_seed}};
}

inline nlohmann::ordered_json manifest_entry(const GeneratedStream& g) {
  auto bursts = nlohmann::ordered_json::array();
  for (const auto& b : g.bursts) bursts.push_back({{"slope", b.slope}, {"length", b.length}});
  return {{"id", g.stream.id}, {"seed", g.seed}, {"n_posts", g.stream.posts.size()},
          {"bursts", std::move(bursts)}};
}

}  // namespace worrywords::sampler
